#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "costlab/approximation.hpp"
#include "costlab/cost_function.hpp"
#include "costlab/trace.hpp"

namespace costlab {

// W_{e,s}: the finite part of the e-th c.e. set enumerated by stage s.
using CeScript = std::function<std::set<std::uint64_t>(std::uint64_t stage)>;

CeScript ce_from_stage(std::uint64_t start, std::uint64_t bound);  // [0, bound) once stage >= start
CeScript ce_fixed(std::map<std::uint64_t, std::set<std::uint64_t>> arrivals);

struct ObedientResult {
  std::set<std::uint64_t> a;
  Approximation approximation;
  std::vector<CostCharge> ledger;
  DyadicRational total;
  std::vector<bool> met;  // requirement e has put an element of W_e into A
  StageTrace trace;
};

// Simple-set requirements: at each stage the least unmet e with some
// x in W_{e,s}, x >= 2e, c(x, s) <= 2^-e enumerates the least such x.
ObedientResult run_obedient_ce(const CostFunction& c, const std::vector<CeScript>& family, std::uint64_t horizon);

}  // namespace costlab
