#include "costlab/ravenous.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "costlab/cost_function.hpp"
#include "costlab/rng.hpp"

namespace costlab {

TestSchedule clipped_capture_schedule(const LeftCEApprox& omega, const ComputableSet& set) {
  struct State {
    LeftCEApprox omega;
    CostFunction c;
    ComputableSet set;
    std::map<std::uint64_t, std::vector<ClopenSet>> memo;  // memo[n][s - n]
  };
  auto state = std::make_shared<State>(State{omega, c_fragment(omega, set), set, {}});
  return [state](std::uint64_t n, std::uint64_t s) {
    if (s < n || s > state->omega.horizon()) return ClopenSet();
    auto& column = state->memo[n];
    while (column.size() <= s - n) {
      std::uint64_t t = n + column.size();
      ClopenSet prev = column.empty() ? ClopenSet() : column.back();
      BitString sigma = state->omega.at(t).binary_prefix(n);
      ClopenSet fresh = ClopenSet::cylinder(fragment_of(sigma, state->set)).subtract(prev);
      DyadicRational bound = n < t ? state->c(n, t) : DyadicRational();
      DyadicRational room = bound > prev.measure() ? bound - prev.measure() : DyadicRational();
      DyadicRational take = min(room, fresh.measure());
      column.push_back(take.is_zero() ? prev : prev.unite(carve(fresh, take)));
    }
    return column[s - n];
  };
}

Approximation seeded_ce_approximation(std::uint64_t seed, std::size_t horizon, std::size_t width,
                                      std::uint64_t rate_per_1024) {
  Rng rng(seed);
  std::vector<BitString> snapshots{BitString::zeros(width)};
  BitString a = BitString::zeros(width);
  for (std::size_t s = 1; s <= horizon; ++s) {
    if (rng.chance(rate_per_1024, 1024)) {
      std::size_t x = rng.below(width);
      if (!a[x]) a = a.with_bit(x, true);
    }
    snapshots.push_back(a);
  }
  return Approximation::from_snapshots(std::move(snapshots));
}

FiniteFunctional seeded_functional(std::uint64_t seed, const Approximation& a, std::size_t horizon) {
  Rng rng(seed);
  // Prefix-free pool: split random leaves of the full tree down to depth 8.
  std::vector<BitString> pool{BitString()};
  std::size_t target = 32 + rng.below(33);
  while (pool.size() < target) {
    std::size_t i = rng.below(pool.size());
    if (pool[i].size() >= 8) continue;
    BitString leaf = pool[i];
    pool[i] = leaf.child(false);
    pool.push_back(leaf.child(true));
  }
  FiniteFunctional phi;
  std::map<BitString, std::size_t> length;
  const std::size_t width = a.width();
  for (std::size_t s = 1; s <= horizon && s < a.stages(); ++s) {
    std::size_t tries = 1 + rng.below(4);
    for (std::size_t t = 0; t < tries; ++t) {
      const BitString& oracle = pool[rng.below(pool.size())];
      std::size_t len = std::min(width, length[oracle] + 1 + rng.below(4));
      if (len <= length[oracle]) continue;
      BitString out = a.at(s).padded_prefix(len);
      if (rng.chance(1, 16)) {
        std::size_t flip = rng.below(len);
        out = out.prefix(flip).child(!out[flip]);
      }
      if (phi.try_add(Axiom{s, oracle, out})) length[oracle] = out.size();
    }
  }
  return phi;
}

namespace {

DyadicRational restricted(const ProductClopenSet& v, const ProductClopenSet& outside_q) {
  return v.empty() ? DyadicRational() : v.subtract(outside_q).measure();
}

}  // namespace

RavenousResult run_ravenous(const ComputableSet& r, const TestSchedule& u, const FiniteFunctional& phi,
                            const Approximation& a, const LeftCEApprox& omega, const RavenousConfig& config) {
  if (!a.is_ce()) throw std::invalid_argument("run_ravenous: the approximation of A must be c.e.");
  RavenousResult result;
  StageTrace& trace = result.trace;
  trace.describe("ravenous.one_awake", "for each k exactly one V^k_n is awake at every stage");
  trace.describe("ravenous.goal", "mu(V^k_n ∩ Q_s) never exceeds 2^-k (omega_{n+1} - omega_n)");
  trace.describe("ravenous.disjoint", "V^k_n and V^k_m are disjoint for n != m");
  trace.describe("ravenous.inside", "each fed rectangle lies in U_{n,s} x Phi_s^-1[A_s | n+1]");
  trace.describe("ravenous.reawaken", "a re-awakened V^k_n saw Q lose more than 2^-(k+1) (omega_{n+1} - omega_n)");
  trace.describe("ravenous.fg", "f, g satisfy both conditions of the simultaneous recursion");
  trace.describe("ravenous.change_gain",
                 "mu(E_{f(s+1)} - E_{f(s)}) >= 2^-(k+3) c_{Omega,R}(n, s) at each change of A along f");
  trace.describe("ravenous.total", "c_{Omega,R} cost of A along f is at most 2^(k+3) mu(E)");

  const std::size_t horizon = std::min({config.horizon, omega.horizon(), a.stages() - 1});
  const std::size_t slots = horizon;  // n + 1 <= horizon
  for (std::size_t s = 0; s <= horizon; ++s) result.error.push_back(error_set(phi, s, a.at(s)));

  std::vector<DyadicRational> goal_base(slots);
  for (std::size_t n = 0; n < slots; ++n) goal_base[n] = omega.at(n + 1) - omega.at(n);
  CostFunction c_r = c_fragment(omega, r);

  struct LevelState {
    std::vector<ProductClopenSet> v;
    std::size_t awake = 0;
    std::vector<std::optional<std::size_t>> slept_at;
    std::vector<DyadicRational> q_at_sleep;  // mu(Q) when the set last went to sleep
    ProductClopenSet all;
    DyadicRational sum;
    // half_fed[s][n]: mu(V_{n,s} ∩ Q_s) >= half goal, recorded at the end of stage s
    std::vector<std::vector<bool>> half_fed;
  };
  std::vector<LevelState> levels(config.k_max + 1);
  for (unsigned k = 0; k <= config.k_max; ++k) {
    levels[k].v.assign(slots, ProductClopenSet());
    levels[k].slept_at.assign(slots, std::nullopt);
    levels[k].q_at_sleep.assign(slots, DyadicRational());
    result.levels.push_back(RavenousLevel{});
    result.levels[k].k = k;
    result.levels[k].sleeps.assign(slots, 0);
    result.levels[k].wakes.assign(slots, 0);
  }

  for (std::size_t s = 0; s <= horizon; ++s) {
    const ClopenSet& e_s = result.error[s];
    ProductClopenSet outside_q = ProductClopenSet::product(ClopenSet::whole(), e_s);
    DyadicRational q_measure = DyadicRational(1) - e_s.measure();
    for (unsigned k = 0; k <= config.k_max; ++k) {
      LevelState& st = levels[k];
      RavenousLevel& out = result.levels[k];
      auto goal = [&](std::size_t n) { return goal_base[n].scaled(-static_cast<std::int64_t>(k)); };
      auto half = [&](std::size_t n) { return goal_base[n].scaled(-static_cast<std::int64_t>(k) - 1); };
      std::size_t n = st.awake;
      if (n < slots) {
        DyadicRational have = restricted(st.v[n], outside_q);
        if (have < goal(n)) {
          // Candidates: U_{n,s} x (Phi_s^-1[A_s | n+1] - E_s), away from every V^k.
          ClopenSet tau = preimage(phi, s, a.at(s).padded_prefix(n + 1)).subtract(e_s);
          ClopenSet sigma = u(n, s);
          if (!tau.empty() && !sigma.empty()) {
            ProductClopenSet candidates = ProductClopenSet::product(sigma, tau).subtract(st.all);
            DyadicRational take = min(goal(n) - have, candidates.measure());
            if (!take.is_zero()) {
              ProductClopenSet piece = carve(candidates, take);
              bool inside = piece.project_first().subset_of(sigma) && piece.project_second().subset_of(tau);
              trace.check("ravenous.inside", s, inside, {{"k", k}, {"n", n}});
              st.v[n] = st.v[n].unite(piece);
              st.all = st.all.unite(piece);
              st.sum += piece.measure();
              have += take;
              trace.event(s, "feed", {{"k", k}, {"n", n}, {"amount", take.to_string()}});
            }
          }
        }
        trace.check("ravenous.goal", s, have <= goal(n),
                    {{"k", k}, {"n", n}, {"measure", have.to_string()}, {"goal", goal(n).to_string()}});
        if (have == goal(n)) {
          st.slept_at[n] = s;
          st.q_at_sleep[n] = q_measure;
          ++out.sleeps[n];
          std::optional<std::size_t> next;
          for (std::size_t m = 0; m < slots && !next; ++m) {
            if (restricted(st.v[m], outside_q) < half(m)) next = m;
          }
          trace.event(s, "sleep", {{"k", k}, {"n", n}});
          st.awake = next.value_or(slots);
          if (next && st.slept_at[*next]) {
            // The set was fed to its goal when it last slept, so Q lost more than half of it.
            DyadicRational drop = st.q_at_sleep[*next] - q_measure;
            trace.check("ravenous.reawaken", s, drop > half(*next),
                        {{"k", k}, {"n", *next}, {"drop", drop.to_string()}, {"half_goal", half(*next).to_string()}});
            ++out.wakes[*next];
          }
          if (next) trace.event(s, "wake", {{"k", k}, {"n", *next}});
        }
      }
      trace.check("ravenous.one_awake", s, st.awake < slots, {{"k", k}, {"awake", st.awake}});
      trace.check("ravenous.disjoint", s, st.all.measure() == st.sum,
                  {{"k", k}, {"union", st.all.measure().to_string()}, {"sum", st.sum.to_string()}});
      std::vector<bool> fed(slots, false);
      for (std::size_t m = 0; m < slots; ++m) {
        if (st.v[m].empty()) {
          fed[m] = half(m).is_zero();
          continue;
        }
        DyadicRational have = restricted(st.v[m], outside_q);
        fed[m] = have >= half(m);
        if (m != n) {
          trace.check("ravenous.goal", s, have <= goal(m),
                      {{"k", k}, {"n", m}, {"measure", have.to_string()}, {"goal", goal(m).to_string()}});
        }
      }
      st.half_fed.push_back(std::move(fed));
    }
  }

  // f and g by exhaustive search; f(-1) = -1.
  for (unsigned k = 0; k <= config.k_max; ++k) {
    LevelState& st = levels[k];
    RavenousLevel& out = result.levels[k];
    out.v = st.v;
    std::int64_t f_prev = -1;
    for (std::uint64_t s = 0;; ++s) {
      std::optional<std::pair<std::uint64_t, std::uint64_t>> found;
      for (std::uint64_t f = static_cast<std::uint64_t>(f_prev + 1); f <= horizon && !found; ++f) {
        std::uint64_t g2 = 0;  // all n < g2 are half fed at f
        while (g2 < slots && st.half_fed[f][g2]) ++g2;
        // Condition one only gets easier as g grows, so test the largest g allowed by condition two.
        std::uint64_t g = std::min<std::uint64_t>(g2, horizon);
        if (g < s) continue;
        bool ok = true;
        for (std::uint64_t n = 0; n < s && ok; ++n) {
          ok = omega.at(f) - omega.at(n) <= (omega.at(g) - omega.at(n)).scaled(1);
        }
        if (ok) found = std::make_pair(f, g);
      }
      if (!found) {
        out.truncated_at = s;
        break;
      }
      out.f.push_back(found->first);
      out.g.push_back(found->second);
      f_prev = static_cast<std::int64_t>(found->first);
      bool cond_one = true, cond_two = true;
      for (std::uint64_t n = 0; n < s; ++n) {
        cond_one = cond_one && omega.at(found->first) - omega.at(n) <= (omega.at(found->second) - omega.at(n)).scaled(1);
      }
      for (std::uint64_t n = 0; n < found->second && n < slots; ++n) cond_two = cond_two && st.half_fed[found->first][n];
      trace.check("ravenous.fg", horizon, cond_one && cond_two && found->second >= s,
                  {{"k", k}, {"s", s}, {"f", found->first}, {"g", found->second}});
    }
    if (out.truncated_at) {
      trace.event(horizon, "fg_truncated", {{"k", k}, {"s", *out.truncated_at}});
    }

    // B_s = A_{f(s+1)}; charges at stage s use c_{Omega,R}(n, s).
    std::vector<BitString> b;
    for (std::size_t i = 1; i < out.f.size(); ++i) b.push_back(a.at(out.f[i]));
    if (!b.empty()) {
      Approximation along = Approximation::from_snapshots(b);
      out.total_cost = total_cost(along, c_r);
      for (std::size_t s = 1; s < along.stages(); ++s) {
        auto x = along.least_change(s);
        if (!x || *x >= s) continue;
        const ClopenSet& before = result.error[out.f[s]];
        const ClopenSet& after = result.error[out.f[s + 1]];
        DyadicRational gain = after.subtract(before).measure();
        DyadicRational need = c_r(*x, s).scaled(-static_cast<std::int64_t>(k) - 3);
        trace.check("ravenous.change_gain", horizon, gain >= need,
                    {{"k", k}, {"s", s}, {"n", *x}, {"gain", gain.to_string()}, {"need", need.to_string()}});
      }
    }
    out.error_measure = result.error.back().measure();
    DyadicRational cap = out.error_measure.scaled(static_cast<std::int64_t>(k) + 3);
    trace.check("ravenous.total", horizon, out.total_cost <= cap,
                {{"k", k}, {"total", out.total_cost.to_string()}, {"cap", cap.to_string()}});
  }
  return result;
}

}  // namespace costlab
