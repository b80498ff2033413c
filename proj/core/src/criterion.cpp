#include "costlab/criterion.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace costlab {

nlohmann::json CriterionReport::to_json() const {
  nlohmann::json cps = nlohmann::json::array();
  for (auto [m, d] : checkpoints) cps.push_back({m, d});
  return {{"b", b}, {"argmax", argmax}, {"trend", trend}, {"checkpoints", cps}};
}

CriterionReport criterion_check(const ComputableSet& r, const ComputableSet& s, std::uint64_t horizon) {
  CriterionReport report;
  std::int64_t diff = 0;
  std::uint64_t next_checkpoint = 1;
  for (std::uint64_t m = 0; m <= horizon; ++m) {
    if (m > 0) diff += (s.contains(m - 1) ? 1 : 0) - (r.contains(m - 1) ? 1 : 0);
    if (diff > report.b) {
      report.b = diff;
      report.argmax = m;
    }
    if (m == next_checkpoint || (m == horizon && m != next_checkpoint / 2)) {
      report.checkpoints.emplace_back(m, report.b);
      if (m == next_checkpoint) next_checkpoint *= 2;
    }
  }
  if (report.checkpoints.size() >= 2) {
    auto mid = report.checkpoints[report.checkpoints.size() / 2].second;
    report.growing = report.checkpoints.back().second > mid + 1;
  }
  report.trend = report.growing ? "growing" : "bounded";
  return report;
}

std::vector<BlockEnd> density_block_ends(unsigned n, std::uint64_t horizon) {
  if (n == 0) throw std::invalid_argument("density_partition: need at least one part");
  std::vector<BlockEnd> ends;
  std::vector<unsigned> visits(n, 0);
  std::uint64_t e = 1;  // part 0 owns 0 on its first visit
  unsigned part = 0;
  ends.push_back({0, ++visits[0], 1});
  while (e < horizon) {
    part = (part + 1) % n;
    unsigned j = ++visits[part];
    // Keep the shifts bounded; the horizon stops the loop long before this matters.
    if (j >= 62) break;
    std::uint64_t next = (e << (j + 1)) + 1;
    if (next <= e) break;
    ends.push_back({part, j, next});
    e = next;
  }
  return ends;
}

std::vector<ComputableSet> density_partition(unsigned n, std::uint64_t horizon) {
  auto ends = std::make_shared<const std::vector<BlockEnd>>(density_block_ends(n, horizon));
  std::vector<ComputableSet> parts;
  for (unsigned p = 0; p < n; ++p) {
    parts.emplace_back("density:" + std::to_string(p) + "/" + std::to_string(n), [ends, p](std::uint64_t x) {
      for (const auto& block : *ends) {
        if (x < block.end) return block.part == p;
      }
      // Past the listed blocks the last part keeps going.
      return ends->back().part == p;
    });
  }
  return parts;
}

}  // namespace costlab
