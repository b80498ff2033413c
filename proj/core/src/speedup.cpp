#include "costlab/speedup.hpp"

namespace costlab {

namespace {

bool admissible(const FiniteFunctional& psi, const Approximation& b, const LeftCEApprox& omega, std::size_t i,
                std::size_t s, unsigned slack) {
  const BitString& oracle = b.at(s);
  if (psi.eval(s, oracle).size() <= i) return false;
  for (std::size_t n = 0; n <= i; ++n) {
    KIndex lhs = k_index(omega, n, i + 1);
    if (lhs.is_infinite()) continue;
    auto v = psi.use(s, oracle, n);
    if (!v || *v > s) return false;
    KIndex rhs = k_index(omega, *v, s);
    if (rhs.is_infinite() || lhs.value() < slack + rhs.value()) return false;
  }
  return true;
}

}  // namespace

nlohmann::json SpeedupResult::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ledger) {
    entries.push_back({{"a_stage", e.a_stage},
                       {"n", e.position},
                       {"use", e.use},
                       {"a_cost", e.a_cost.to_string()},
                       {"b_cost", e.b_cost.to_string()},
                       {"ok", e.ok}});
  }
  nlohmann::json j = {{"stages", stages},
                      {"ledger", entries},
                      {"total_a", total_a.to_string()},
                      {"total_b", total_b.to_string()},
                      {"ledger_ok", ledger_ok}};
  if (truncated_at) j["truncated_at"] = *truncated_at;
  return j;
}

SpeedupResult speedup_transfer(const Approximation& b, const FiniteFunctional& psi, const LeftCEApprox& omega,
                               const ComputableSet& r, unsigned slack) {
  SpeedupResult result;
  if (b.stages() == 0) return result;
  std::size_t horizon = std::min(b.stages() - 1, omega.horizon());
  CostFunction c = c_fragment(omega, r);
  std::vector<BitString> outputs;
  result.stages.push_back(0);
  outputs.push_back(psi.eval(0, b.at(0)));
  for (std::size_t i = 1;; ++i) {
    std::size_t s = result.stages.back() + 1;
    // Requirements are stated for index i, and A_i lives at stage i; the
    // omega stage i + 1 used on the left side must exist too.
    if (i + 1 > omega.horizon()) {
      result.truncated_at = i;
      break;
    }
    while (s <= horizon && !admissible(psi, b, omega, i, s, slack)) ++s;
    if (s > horizon) {
      result.truncated_at = i;
      break;
    }
    result.stages.push_back(s);
    outputs.push_back(psi.eval(s, b.at(s)));
  }
  result.a = Approximation::from_snapshots(outputs);

  DyadicRational factor = DyadicRational::two_to(slack);
  for (std::size_t i = 0; i + 1 < result.stages.size(); ++i) {
    auto n = result.a.least_change(i + 1);
    if (!n) continue;
    SpeedupLedgerEntry e;
    e.a_stage = i + 1;
    e.position = *n;
    e.a_cost = c(*n, i + 1);
    auto v = psi.use(result.stages[i], b.at(result.stages[i]), *n);
    e.use = v.value_or(0);
    for (std::size_t t = result.stages[i] + 1; t <= result.stages[i + 1]; ++t) {
      if (auto x = b.least_change(t)) e.b_cost += c(*x, t);
    }
    e.ok = e.a_cost <= factor * e.b_cost;
    result.ledger_ok = result.ledger_ok && e.ok;
    result.total_a += e.a_cost;
    result.total_b += e.b_cost;
    result.ledger.push_back(std::move(e));
  }
  result.total_b = DyadicRational();
  for (std::size_t t = 1; t <= result.stages.back(); ++t) {
    if (auto x = b.least_change(t)) result.total_b += c(*x, t);
  }
  result.ledger_ok = result.ledger_ok && result.total_a <= factor * result.total_b;
  return result;
}

}  // namespace costlab
