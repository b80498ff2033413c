#include "costlab/benign_fragment.hpp"

#include <memory>
#include <set>
#include <stdexcept>

namespace costlab {

BenignBoundFn reciprocal_bound() {
  return [](const DyadicRational& eps) { return eps.ceil_reciprocal(); };
}

CoupledCost coupled_c_omega() {
  return [](const std::vector<DyadicRational>& omega, std::uint64_t n, std::uint64_t s) {
    return omega[s] - omega[n];
  };
}

CoupledCost uncoupled(const CostFunction& c) {
  return [c](const std::vector<DyadicRational>&, std::uint64_t n, std::uint64_t s) { return c(n, s); };
}

std::vector<std::uint64_t> choose_m_sequence(const BenignBoundFn& g, const DyadicRational& delta, std::uint64_t limit) {
  if (!delta.is_power_of_two()) throw std::invalid_argument("benign_to_fragment: delta must be a power of two");
  std::vector<std::uint64_t> m;
  for (std::uint64_t i = 0;; ++i) {
    DyadicRational need = DyadicRational(g(DyadicRational::two_to(-static_cast<std::int64_t>(i) - 1)), 0)
                              .scaled(static_cast<std::int64_t>(i) + 2 + delta.floor_neg_log2());
    std::uint64_t next = m.empty() ? 0 : m.back() + 1;
    if (!need.is_zero()) {
      std::int64_t lg = need.ceil_log2();
      if (lg > static_cast<std::int64_t>(next)) next = static_cast<std::uint64_t>(lg);
    }
    if (next > limit) break;
    m.push_back(next);
  }
  return m;
}

namespace {

// floor(-log2 v) for 0 < v <= 1; callers pass nonzero costs.
std::uint64_t index_of(const DyadicRational& v) {
  std::int64_t i = v.floor_neg_log2();
  return i < 0 ? 0 : static_cast<std::uint64_t>(i);
}

}  // namespace

BenignFragmentResult benign_to_fragment(const CoupledCost& c, const BenignBoundFn& g, const LeftCEApprox& base,
                                        const BenignFragmentConfig& config) {
  BenignFragmentResult result;
  StageTrace& trace = result.trace;
  trace.describe("benign.domination", "c(n, s) <= c_{Omega,R}(n, s) for all n < s <= T");
  trace.describe("benign.beta_below_one", "beta_T < 1");
  trace.describe("benign.per_i_count", "beta grows by 2^-m_i / delta at most g(2^-(i+1)) times");
  trace.describe("benign.coupling", "delta (beta_s - beta_n) < Omega_s - Omega_n whenever beta_s > beta_n");
  trace.describe("benign.omega_below_one", "the coupled stream stays below 1");
  trace.describe("benign.forced_gap", "a firing at stage s+1 gives c_{Omega,R}(s, s+1) >= 2^-i");

  const std::size_t horizon = std::min(config.horizon, base.horizon());
  const DyadicRational& delta = config.delta;
  result.m = choose_m_sequence(g, delta, config.m_limit);
  if (result.m.empty()) throw std::invalid_argument("benign_to_fragment: no m_i below the limit");
  std::set<std::uint64_t> members(result.m.begin(), result.m.end());
  result.r = ComputableSet::finite(members);
  std::vector<std::uint64_t> r_count(config.m_limit + 2, 0);
  for (std::uint64_t x = 0; x + 1 < r_count.size(); ++x) r_count[x + 1] = r_count[x] + (members.count(x) ? 1 : 0);
  auto count_below = [&](std::uint64_t k) { return r_count[std::min<std::uint64_t>(k, r_count.size() - 1)]; };

  std::vector<DyadicRational> omega{DyadicRational()};
  std::vector<DyadicRational> beta{DyadicRational()};
  result.fires_per_i.assign(result.m.size(), 0);
  const int delta_log = static_cast<int>(delta.floor_neg_log2());  // delta = 2^-delta_log

  // c_{Omega,R}(n, s) on the stages built so far.
  auto c_r = [&](std::uint64_t n, std::uint64_t s) {
    if (n >= s || omega[s] == omega[n]) return DyadicRational();
    std::int64_t k = (omega[s] - omega[n]).floor_neg_log2();
    return DyadicRational::two_to(-static_cast<std::int64_t>(count_below(static_cast<std::uint64_t>(std::max<std::int64_t>(k, 0)))));
  };

  for (std::size_t s = 0; s < horizon; ++s) {
    DyadicRational natural = omega[s] + (base.at(s + 1) - base.at(s)).scaled(-2);
    DyadicRational forced;
    std::optional<std::uint64_t> fired_i;
    std::optional<std::uint64_t> fired_n;
    // Raising the forced increment raises c(n, s+1) for the coupled cost, so
    // the answering index can only drop; iterate until it is stable.
    while (true) {
      omega.push_back(natural + forced);
      std::optional<std::uint64_t> hat_n;
      for (std::uint64_t n = 0; n <= s; ++n) {
        if (c(omega, n, s + 1) > c_r(n, s)) {
          hat_n = n;
          break;
        }
      }
      if (!hat_n) break;
      std::uint64_t i = index_of(c(omega, *hat_n, s + 1));
      if (i >= result.m.size()) {
        throw std::out_of_range("benign_to_fragment: index " + std::to_string(i) + " beyond the listed m_i");
      }
      DyadicRational want = DyadicRational::two_to(-static_cast<std::int64_t>(result.m[i])) * DyadicRational(5).scaled(-2);
      fired_i = i;
      fired_n = hat_n;
      if (want <= forced) break;
      forced = want;
      omega.pop_back();
    }
    if (fired_i) {
      std::uint64_t i = *fired_i;
      DyadicRational step = DyadicRational::two_to(-static_cast<std::int64_t>(result.m[i]) + delta_log);
      beta.push_back(beta[s] + step);
      ++result.fires_per_i[i];
      trace.event(s + 1, "fire", {{"n", *fired_n}, {"i", i}, {"m_i", result.m[i]}, {"beta", beta.back().to_string()}});
      DyadicRational gap = c_r(s, s + 1);
      trace.check("benign.forced_gap", s + 1, gap >= DyadicRational::two_to(-static_cast<std::int64_t>(i)),
                  {{"s", s}, {"i", i}, {"c_R", gap.to_string()}});
      trace.check("benign.coupling", s + 1, (beta[s + 1] - beta[s]) * delta < omega[s + 1] - omega[s],
                  {{"s", s}, {"beta_step", step.to_string()}, {"omega_step", (omega[s + 1] - omega[s]).to_string()}});
    } else {
      beta.push_back(beta[s]);
    }
  }

  for (std::size_t s = 1; s <= horizon; ++s) {
    std::optional<std::uint64_t> bad;
    for (std::uint64_t n = 0; n < s && !bad; ++n) {
      if (c(omega, n, s) > c_r(n, s)) bad = n;
    }
    trace.check("benign.domination", horizon, !bad,
                bad ? nlohmann::json{{"n", *bad}, {"s", s}} : nlohmann::json{{"s", s}});
  }
  for (std::size_t i = 0; i < result.fires_per_i.size(); ++i) {
    if (result.fires_per_i[i] == 0) continue;
    BigInt cap = g(DyadicRational::two_to(-static_cast<std::int64_t>(i) - 1));
    trace.check("benign.per_i_count", horizon, BigInt(result.fires_per_i[i]) <= cap,
                {{"i", i}, {"count", result.fires_per_i[i]}, {"bound", cap.str()}});
  }
  trace.check("benign.beta_below_one", horizon, beta.back() < DyadicRational(1), {{"beta", beta.back().to_string()}});
  trace.check("benign.omega_below_one", horizon, omega.back() < DyadicRational(1), {{"omega", omega.back().to_string()}});
  result.beta = LeftCEApprox::from_values(beta, DyadicRational(2));
  result.omega = LeftCEApprox::from_values(omega, DyadicRational(2));
  return result;
}

}  // namespace costlab
