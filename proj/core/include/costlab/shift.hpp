#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "costlab/cost_function.hpp"
#include "costlab/trace.hpp"

namespace costlab {

// A scripted enumeration B^e_0, B^e_1, ... that may read the run's history of A.
struct EnumerationScript {
  enum class Kind { mirror, partial, fixed };
  Kind kind = Kind::mirror;
  // mirror: B_t = T(A_{t - delay}) for t >= delay, empty before.
  std::size_t delay = 1;
  // Stage t of B becomes visible at stage t + lag.
  std::size_t lag = 0;
  // partial: undefined from this stage on (0 = never defined).
  std::size_t defined_below = 0;
  // fixed: the same set at every stage.
  std::set<std::uint64_t> elements;

  static EnumerationScript mirror(std::size_t delay, std::size_t lag = 0);
  static EnumerationScript partial(std::size_t delay = 1, std::size_t defined_below = 0);
  static EnumerationScript fixed(std::set<std::uint64_t> elements);
  std::string describe() const;
};

struct ShiftConfig {
  std::size_t horizon = 1000;
};

struct StrategySummary {
  unsigned e = 0;
  DyadicRational alpha;
  int step = 1;            // 1..5, 6 once terminated
  std::size_t cycles = 0;  // Step-5 visits
  std::size_t enumerations = 0;
  DyadicRational enumeration_cost;  // final c(s, u) summed over enumerations
  DyadicRational ledger;            // c-cost of B^e up to the horizon
  bool terminated = false;
};

struct ShiftResult {
  std::set<std::uint64_t> a;
  Approximation approximation;  // snapshot u: A after stage u
  std::vector<DyadicRational> declarations;  // declarations[t]: c(t-1, t) >= value
  CostFunction c = c_zero();
  std::vector<StrategySummary> strategies;
  DyadicRational a_cost;
  StageTrace trace;
};

// alpha_0 = 1, alpha_{e+1} = 2^-e alpha_e
DyadicRational shift_alpha(unsigned e);

ShiftResult run_shift(const CostFunction& d, const std::vector<EnumerationScript>& family, const ShiftConfig& config);

}  // namespace costlab
