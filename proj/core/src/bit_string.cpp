#include "costlab/bit_string.hpp"

#include <stdexcept>

namespace costlab {

BitString::BitString(std::string_view bits) : bits_(bits) {
  for (char ch : bits_) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("BitString: invalid character in '" + bits_ + "'");
  }
}

BitString BitString::prefix(std::size_t n) const {
  if (n > bits_.size()) throw std::out_of_range("BitString::prefix beyond length");
  return BitString(bits_.substr(0, n), Trusted{});
}

BitString BitString::padded_prefix(std::size_t n) const {
  if (n <= bits_.size()) return prefix(n);
  std::string out = bits_;
  out.resize(n, '0');
  return BitString(std::move(out), Trusted{});
}

BitString BitString::child(bool bit) const {
  std::string out = bits_;
  out.push_back(bit ? '1' : '0');
  return BitString(std::move(out), Trusted{});
}

BitString BitString::with_bit(std::size_t i, bool bit) const {
  std::string out = bits_;
  if (i >= out.size()) out.resize(i + 1, '0');
  out[i] = bit ? '1' : '0';
  return BitString(std::move(out), Trusted{});
}

bool BitString::is_prefix_of(const BitString& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::optional<std::size_t> BitString::first_difference(const BitString& other) const {
  std::size_t n = std::min(bits_.size(), other.bits_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (bits_[i] != other.bits_[i]) return i;
  }
  return std::nullopt;
}

BitString hat(const BitString& sigma) {
  if (sigma.empty()) throw std::invalid_argument("hat: empty string");
  return sigma.with_bit(sigma.size() - 1, !sigma[sigma.size() - 1]);
}

bool lies_left(const BitString& t, const BitString& a) {
  auto i = t.first_difference(a);
  return i && !t[*i];
}

bool lies_left_of_padded(const BitString& t, const BitString& a) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool ai = a.padded(i);
    if (t[i] != ai) return ai;
  }
  return false;
}

bool agrees_with_padded(const BitString& t, const BitString& a) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != a.padded(i)) return false;
  }
  return true;
}

}  // namespace costlab
