#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace costlab {

// Finite binary string. Ordering is lexicographic with a prefix before its
// extensions.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string_view bits);

  static BitString zeros(std::size_t n) { return BitString(std::string(n, '0')); }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }
  // Bit i, or 0 past the end.
  bool padded(std::size_t i) const { return i < bits_.size() && bits_[i] == '1'; }

  BitString prefix(std::size_t n) const;
  // Prefix of length n, zero-padded when n exceeds the size.
  BitString padded_prefix(std::size_t n) const;
  BitString child(bool bit) const;
  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  BitString concat(const BitString& tail) const { return BitString(bits_ + tail.bits_, Trusted{}); }
  BitString with_bit(std::size_t i, bool bit) const;

  bool is_prefix_of(const BitString& other) const;
  bool comparable(const BitString& other) const { return is_prefix_of(other) || other.is_prefix_of(*this); }
  // First index where the two strings differ, within the shorter length.
  std::optional<std::size_t> first_difference(const BitString& other) const;

  const std::string& str() const { return bits_; }

  auto operator<=>(const BitString&) const = default;
  bool operator==(const BitString&) const = default;

 private:
  struct Trusted {};
  BitString(std::string bits, Trusted) : bits_(std::move(bits)) {}

  std::string bits_;
};

// The flip of the last bit; throws on the empty string.
BitString hat(const BitString& sigma);

// t lies strictly left of a: at their first difference t has 0 and a has 1.
// Comparable strings are never left of each other.
bool lies_left(const BitString& t, const BitString& a);

// As lies_left, but a is read as an infinite sequence with a zero tail.
bool lies_left_of_padded(const BitString& t, const BitString& a);
// t is a prefix of a read with a zero tail.
bool agrees_with_padded(const BitString& t, const BitString& a);

}  // namespace costlab
