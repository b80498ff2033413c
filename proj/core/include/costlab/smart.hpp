#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "costlab/cost_function.hpp"
#include "costlab/functional.hpp"
#include "costlab/trace.hpp"

namespace costlab {

struct ProposedAxiom {
  BitString oracle;
  BitString output;
  // Bypasses the delay queue; an immediate axiom right of A is a contract violation.
  bool immediate = false;
};

// Axioms proposed for upsilon at a stage, given the current A as a characteristic string.
using UpsilonSchedule = std::function<std::vector<ProposedAxiom>(std::uint64_t stage, const BitString& a_now)>;

UpsilonSchedule empty_upsilon_schedule();
// Fixed per-stage lists.
UpsilonSchedule scripted_upsilon_schedule(std::map<std::uint64_t, std::vector<ProposedAxiom>> script);
// Seeded adversary over a random prefix-free pool of oracles of depth <= 6.
// Oracles mostly extend honest copies of A, sometimes guess, and sometimes
// guess to the right of A so that the delay queue has work. The seed mod 3
// picks the mix: guessing, cautious bit-by-bit growth, or honest bursts.
UpsilonSchedule seeded_upsilon_schedule(std::uint64_t seed, std::size_t max_output = 32);

struct SmartConfig {
  std::size_t horizon = 500;
  std::size_t max_output = 32;  // width of A; levels k satisfy 2^(k+1) <= max_output
  bool floor_cost = true;       // charge max(c(x,s), 2^-x)
};

struct SmartResult {
  std::set<std::uint64_t> a;
  // Snapshot s is A after the enumerations of stage s.
  Approximation approximation;
  std::vector<ClopenSet> tests;  // U_k at the horizon
  FiniteFunctional upsilon;
  std::vector<std::size_t> enumerations;  // per level
  DyadicRational service_cost;            // sum of c(x, s) over all services
  DyadicRational total_cost;              // Def-style total over the approximation
  DyadicRational final_error;
  StageTrace trace;
};

SmartResult run_smart(const CostFunction& c, const UpsilonSchedule& schedule, const SmartConfig& config);

}  // namespace costlab
