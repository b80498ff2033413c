#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace costlab {

using BigInt = boost::multiprecision::cpp_int;

class BitString;

// Exact nonnegative rational m / 2^e. Canonical: m odd, or m = 0 and e = 0.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(BigInt numerator, std::uint64_t exponent);
  // NOLINTNEXTLINE(google-explicit-constructor)
  DyadicRational(std::uint64_t integer) : DyadicRational(BigInt(integer), 0) {}

  // 2^e for any integer e.
  static DyadicRational two_to(std::int64_t e);
  // "m/2^e" or a bare integer "m".
  static DyadicRational parse(std::string_view text);

  const BigInt& numerator() const { return numerator_; }
  std::uint64_t exponent() const { return exponent_; }
  bool is_zero() const { return numerator_ == 0; }
  bool is_power_of_two() const;

  DyadicRational operator+(const DyadicRational& other) const;
  // Throws std::domain_error when the result would be negative.
  DyadicRational operator-(const DyadicRational& other) const;
  DyadicRational operator*(const DyadicRational& other) const;
  DyadicRational& operator+=(const DyadicRational& other);
  DyadicRational& operator-=(const DyadicRational& other);

  // Multiply by 2^e.
  DyadicRational scaled(std::int64_t e) const;
  DyadicRational pow(unsigned k) const;

  std::strong_ordering operator<=>(const DyadicRational& other) const;
  bool operator==(const DyadicRational& other) const = default;

  // floor(-log2 v) for v > 0; negative when v > 1.
  std::int64_t floor_neg_log2() const;
  // Least j with v <= 2^j, for v > 0.
  std::int64_t ceil_log2() const;
  // ceil(1 / v) for v > 0.
  BigInt ceil_reciprocal() const;

  // Digit p of the terminating binary expansion of a value in [0, 1): the
  // coefficient of 2^-(p+1).
  bool binary_digit(std::uint64_t p) const;
  BitString binary_prefix(std::uint64_t len) const;

  std::string to_string() const;

 private:
  void normalize();

  BigInt numerator_ = 0;
  std::uint64_t exponent_ = 0;
};

inline DyadicRational min(const DyadicRational& a, const DyadicRational& b) {
  return b < a ? b : a;
}
inline DyadicRational max(const DyadicRational& a, const DyadicRational& b) {
  return a < b ? b : a;
}

// Least j with a <= 2^j * b; both positive.
std::int64_t ceil_log2_ratio(const DyadicRational& a, const DyadicRational& b);

std::ostream& operator<<(std::ostream& os, const DyadicRational& d);

}  // namespace costlab
