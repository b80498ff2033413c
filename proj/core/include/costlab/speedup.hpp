#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/approximation.hpp"
#include "costlab/cost_function.hpp"
#include "costlab/functional.hpp"

namespace costlab {

struct SpeedupLedgerEntry {
  std::size_t a_stage;    // i + 1: the change from A_i to A_{i+1}
  std::size_t position;   // least changed n
  std::size_t use;        // v = use at s(i) of the computation of bit n
  DyadicRational a_cost;  // c(n, i + 1)
  DyadicRational b_cost;  // B-cost over (s(i), s(i+1)]
  bool ok = true;         // a_cost <= 2^slack * b_cost
};

struct SpeedupResult {
  Approximation a;
  std::vector<std::size_t> stages;  // s(0) = 0, s(1), ...
  std::vector<SpeedupLedgerEntry> ledger;
  DyadicRational total_a;
  DyadicRational total_b;
  bool ledger_ok = true;
  // Set when no admissible s(i) exists within the horizon.
  std::optional<std::size_t> truncated_at;
  nlohmann::json to_json() const;
};

// Samples the stages s(i): the least s > s(i-1) at which the output on B_s
// is longer than i and k_{i+1}(n) >= slack + k_s(use_s(n)) for every n <= i,
// an infinite left side always passing. A_i is the output at s(i). The
// ledger compares each A-change cost against the c_{omega,R}-cost paid by B
// in the matching interval of stages.
SpeedupResult speedup_transfer(const Approximation& b, const FiniteFunctional& psi, const LeftCEApprox& omega,
                               const ComputableSet& r, unsigned slack = 3);

}  // namespace costlab
