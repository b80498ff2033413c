#include "costlab/obedient.hpp"

namespace costlab {

CeScript ce_from_stage(std::uint64_t start, std::uint64_t bound) {
  return [start, bound](std::uint64_t stage) {
    std::set<std::uint64_t> out;
    if (stage < start) return out;
    for (std::uint64_t x = 0; x < bound; ++x) out.insert(x);
    return out;
  };
}

CeScript ce_fixed(std::map<std::uint64_t, std::set<std::uint64_t>> arrivals) {
  return [arrivals = std::move(arrivals)](std::uint64_t stage) {
    std::set<std::uint64_t> out;
    for (auto it = arrivals.begin(); it != arrivals.end() && it->first <= stage; ++it) {
      out.insert(it->second.begin(), it->second.end());
    }
    return out;
  };
}

ObedientResult run_obedient_ce(const CostFunction& c, const std::vector<CeScript>& family, std::uint64_t horizon) {
  ObedientResult result;
  StageTrace& trace = result.trace;
  trace.describe("obedient.ceiling", "requirement e enumerates only x >= 2e with c(x, s) <= 2^-e");
  trace.describe("obedient.total_cost", "total cost of A is at most the sum of 2^-e over acting requirements");
  trace.describe("obedient.ledger", "ledger agrees with a fresh summation over the approximation");

  result.met.assign(family.size(), false);
  std::set<std::uint64_t> a;
  std::vector<std::set<std::uint64_t>> snapshots{a};
  DyadicRational budget;
  for (std::uint64_t s = 1; s <= horizon; ++s) {
    for (std::size_t e = 0; e < family.size(); ++e) {
      if (result.met[e]) continue;
      DyadicRational ceiling = DyadicRational::two_to(-static_cast<std::int64_t>(e));
      std::optional<std::uint64_t> pick;
      for (auto x : family[e](s)) {
        if (x < 2 * e || a.count(x)) continue;
        if (c(x, s) <= ceiling) {
          pick = x;
          break;
        }
      }
      if (!pick) continue;
      DyadicRational cost = c(*pick, s);
      trace.event(s, "enumerate", {{"e", e}, {"x", *pick}, {"cost", cost.to_string()}});
      trace.check("obedient.ceiling", s, *pick >= 2 * e && cost <= ceiling, {{"e", e}, {"x", *pick}});
      a.insert(*pick);
      result.met[e] = true;
      budget += ceiling;
      break;
    }
    snapshots.push_back(a);
  }
  std::uint64_t width = a.empty() ? 1 : *a.rbegin() + 1;
  result.approximation = Approximation::from_sets(snapshots, width);
  result.ledger = cost_ledger(result.approximation, c);
  result.total = total_cost(result.approximation, c);
  DyadicRational resummed;
  for (const auto& charge : result.ledger) resummed += charge.cost;
  trace.check("obedient.ledger", horizon, resummed == result.total,
              {{"ledger", resummed.to_string()}, {"total", result.total.to_string()}});
  trace.check("obedient.total_cost", horizon, result.total <= budget,
              {{"total", result.total.to_string()}, {"budget", budget.to_string()}});
  result.a = std::move(a);
  return result;
}

}  // namespace costlab
