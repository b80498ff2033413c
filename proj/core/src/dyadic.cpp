#include "costlab/dyadic.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

#include "costlab/bit_string.hpp"

namespace costlab {

namespace {

std::uint64_t low_zero_bits(const BigInt& m) {
  return static_cast<std::uint64_t>(boost::multiprecision::lsb(m));
}

std::int64_t msb(const BigInt& m) {
  return static_cast<std::int64_t>(boost::multiprecision::msb(m));
}

}  // namespace

DyadicRational::DyadicRational(BigInt numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0) throw std::domain_error("DyadicRational: negative numerator");
  normalize();
}

void DyadicRational::normalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  if (exponent_ == 0) return;
  std::uint64_t shift = std::min(low_zero_bits(numerator_), exponent_);
  numerator_ >>= shift;
  exponent_ -= shift;
}

DyadicRational DyadicRational::two_to(std::int64_t e) {
  if (e >= 0) return DyadicRational(BigInt(1) << e, 0);
  return DyadicRational(BigInt(1), static_cast<std::uint64_t>(-e));
}

DyadicRational DyadicRational::parse(std::string_view text) {
  auto parse_uint = [&](std::string_view digits) {
    if (digits.empty()) throw std::invalid_argument("dyadic: empty number in '" + std::string(text) + "'");
    for (char ch : digits) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("dyadic: bad digit in '" + std::string(text) + "'");
    }
    return BigInt(std::string(digits));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return DyadicRational(parse_uint(text), 0);
  std::string_view denom = text.substr(slash + 1);
  if (denom.substr(0, 2) != "2^") throw std::invalid_argument("dyadic: denominator must be 2^e in '" + std::string(text) + "'");
  denom.remove_prefix(2);
  std::uint64_t e = 0;
  auto [ptr, ec] = std::from_chars(denom.data(), denom.data() + denom.size(), e);
  if (ec != std::errc() || ptr != denom.data() + denom.size()) {
    throw std::invalid_argument("dyadic: bad exponent in '" + std::string(text) + "'");
  }
  return DyadicRational(parse_uint(text.substr(0, slash)), e);
}

bool DyadicRational::is_power_of_two() const {
  return numerator_ != 0 && (numerator_ & (numerator_ - 1)) == 0;
}

DyadicRational DyadicRational::operator+(const DyadicRational& other) const {
  if (exponent_ >= other.exponent_) {
    return DyadicRational(numerator_ + (other.numerator_ << (exponent_ - other.exponent_)), exponent_);
  }
  return DyadicRational((numerator_ << (other.exponent_ - exponent_)) + other.numerator_, other.exponent_);
}

DyadicRational DyadicRational::operator-(const DyadicRational& other) const {
  BigInt a = numerator_, b = other.numerator_;
  std::uint64_t e = std::max(exponent_, other.exponent_);
  a <<= (e - exponent_);
  b <<= (e - other.exponent_);
  if (a < b) throw std::domain_error("DyadicRational: negative difference " + to_string() + " - " + other.to_string());
  return DyadicRational(a - b, e);
}

DyadicRational DyadicRational::operator*(const DyadicRational& other) const {
  return DyadicRational(numerator_ * other.numerator_, exponent_ + other.exponent_);
}

DyadicRational& DyadicRational::operator+=(const DyadicRational& other) { return *this = *this + other; }
DyadicRational& DyadicRational::operator-=(const DyadicRational& other) { return *this = *this - other; }

DyadicRational DyadicRational::scaled(std::int64_t e) const {
  if (is_zero()) return {};
  if (e >= 0) {
    auto up = static_cast<std::uint64_t>(e);
    if (up <= exponent_) return DyadicRational(numerator_, exponent_ - up);
    return DyadicRational(numerator_ << (up - exponent_), 0);
  }
  return DyadicRational(numerator_, exponent_ + static_cast<std::uint64_t>(-e));
}

DyadicRational DyadicRational::pow(unsigned k) const {
  DyadicRational result(1);
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

std::strong_ordering DyadicRational::operator<=>(const DyadicRational& other) const {
  BigInt a = numerator_, b = other.numerator_;
  if (exponent_ < other.exponent_) {
    a <<= (other.exponent_ - exponent_);
  } else {
    b <<= (exponent_ - other.exponent_);
  }
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::int64_t DyadicRational::floor_neg_log2() const {
  if (is_zero()) throw std::domain_error("floor_neg_log2 of zero");
  // v in [2^(msb-e), 2^(msb-e+1)); -log2 v in (e-msb-1, e-msb].
  std::int64_t top = msb(numerator_);
  auto e = static_cast<std::int64_t>(exponent_);
  return numerator_ == (BigInt(1) << top) ? e - top : e - top - 1;
}

std::int64_t DyadicRational::ceil_log2() const { return -floor_neg_log2(); }

BigInt DyadicRational::ceil_reciprocal() const {
  if (is_zero()) throw std::domain_error("ceil_reciprocal of zero");
  BigInt num = BigInt(1) << exponent_;
  return (num + numerator_ - 1) / numerator_;
}

bool DyadicRational::binary_digit(std::uint64_t p) const {
  if (exponent_ == 0 && !is_zero()) throw std::domain_error("binary_digit: value not below 1");
  if (p + 1 > exponent_) return false;
  return bit_test(numerator_, static_cast<unsigned>(exponent_ - p - 1));
}

BitString DyadicRational::binary_prefix(std::uint64_t len) const {
  std::string bits(len, '0');
  for (std::uint64_t p = 0; p < len; ++p) {
    if (binary_digit(p)) bits[p] = '1';
  }
  return BitString(bits);
}

std::string DyadicRational::to_string() const {
  return numerator_.str() + "/2^" + std::to_string(exponent_);
}

std::int64_t ceil_log2_ratio(const DyadicRational& a, const DyadicRational& b) {
  if (a.is_zero() || b.is_zero()) throw std::domain_error("ceil_log2_ratio: zero argument");
  std::int64_t j = b.floor_neg_log2() - a.floor_neg_log2();
  // The estimate is within one of the answer; settle it exactly.
  while (a > b.scaled(j)) ++j;
  while (a <= b.scaled(j - 1)) --j;
  return j;
}

std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.to_string(); }

}  // namespace costlab
