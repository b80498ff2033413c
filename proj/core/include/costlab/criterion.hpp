#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/computable_set.hpp"

namespace costlab {

// Finite-horizon estimate of whether |S∩m| - |R∩m| stays bounded.
struct CriterionReport {
  std::int64_t b = 0;         // max over m <= M of |S∩m| - |R∩m|
  std::uint64_t argmax = 0;
  std::vector<std::pair<std::uint64_t, std::int64_t>> checkpoints;  // m = 1, 2, 4, ..., M
  bool growing = false;
  std::string trend;  // "bounded" or "growing"; a horizon-M estimate only
  nlohmann::json to_json() const;
};

// Growing when the running maximum over the last half of the checkpoints
// still exceeds its value at the midpoint checkpoint by more than one.
CriterionReport criterion_check(const ComputableSet& r, const ComputableSet& s, std::uint64_t horizon);

// n disjoint parts covering [0, horizon): round-robin blocks where the block
// ending at e_i starts at e_{i-1} and e_i = 2^{j+1} e_{i-1} + 1, j the visit count of
// that part, so the part owns more than 1 - 2^-j of [0, e_i).
std::vector<ComputableSet> density_partition(unsigned n, std::uint64_t horizon);

struct BlockEnd {
  unsigned part;
  unsigned visit;  // j, from 1
  std::uint64_t end;
};
std::vector<BlockEnd> density_block_ends(unsigned n, std::uint64_t horizon);

}  // namespace costlab
