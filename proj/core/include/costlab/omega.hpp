#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "costlab/bit_string.hpp"
#include "costlab/computable_set.hpp"
#include "costlab/dyadic.hpp"

namespace costlab {

// floor(-log2 gap) of a stage gap, or infinity for a zero gap.
class KIndex {
 public:
  static KIndex infinity() { return KIndex(UINT64_MAX); }
  static KIndex finite(std::uint64_t k) { return KIndex(k); }

  bool is_infinite() const { return value_ == UINT64_MAX; }
  std::uint64_t value() const;

  auto operator<=>(const KIndex&) const = default;
  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(value_); }

 private:
  explicit KIndex(std::uint64_t v) : value_(v) {}
  std::uint64_t value_;
};

// Finite prefix of a nondecreasing approximation to a left-c.e. real.
// Stage 0 is 0; equal consecutive values are allowed and flagged as no-ops.
class LeftCEApprox {
 public:
  static LeftCEApprox from_values(std::vector<DyadicRational> values, DyadicRational bound = DyadicRational(1));

  // Last stage index.
  std::size_t horizon() const { return values_.size() - 1; }
  const DyadicRational& at(std::size_t s) const;
  const std::vector<DyadicRational>& values() const { return values_; }
  const DyadicRational& bound() const { return bound_; }
  const std::vector<std::size_t>& noop_stages() const { return noop_stages_; }
  // Largest denominator exponent among the values.
  std::uint64_t max_exponent() const { return max_exponent_; }
  // Stages s >= 1 at which the value increases.
  std::vector<std::size_t> change_stages() const;

  LeftCEApprox truncated(std::size_t horizon) const;

 private:
  LeftCEApprox() = default;
  std::vector<DyadicRational> values_;
  DyadicRational bound_;
  std::vector<std::size_t> noop_stages_;
  std::uint64_t max_exponent_ = 0;
};

// k_s(n) = floor(-log2(values[s] - values[n])). Throws when n > s or the gap
// exceeds 1.
KIndex k_index(const LeftCEApprox& omega, std::size_t n, std::size_t s);

// Bits of the stage-s value at the positions of R, in order.
BitString fragment(const LeftCEApprox& omega, const ComputableSet& r, std::size_t s, std::size_t len);

struct ToyProgram {
  const char* code;
  std::size_t halting_stage;
};
// The shipped prefix-free program table, sorted by halting stage.
const std::vector<ToyProgram>& toy_machine_table();
// Accumulates 2^-|p| at the stage each program halts.
LeftCEApprox toy_machine_stream(std::size_t horizon);

struct BurstProfile {
  // Per-stage chance (in 1/1024 units) of a burst, and its size in halvings.
  std::uint64_t rate_per_1024 = 0;
  std::uint64_t magnitude = 0;
};
// Seeded strictly increasing stream below 1 with increments near 2^-(2 + 2 log2 s).
LeftCEApprox synthetic_stream(std::uint64_t seed, std::size_t horizon, BurstProfile burst = {});

// JSON lines {"stage": s, "value": "m/2^e"}, stages 0..T in order.
LeftCEApprox read_replay(std::istream& in, DyadicRational bound = DyadicRational(1));
void write_replay(std::ostream& out, const LeftCEApprox& omega);

struct OmegaSourceSpec {
  std::string kind = "toy";  // toy | synthetic | replay
  std::uint64_t seed = 0;
  BurstProfile burst;
  std::string path;
};
LeftCEApprox omega_source(const OmegaSourceSpec& spec, std::size_t horizon);

}  // namespace costlab
