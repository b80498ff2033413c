#include "costlab/functional_costs.hpp"

#include <algorithm>
#include <deque>

namespace costlab {

namespace {

// Length of the longest common prefix of s and target, target read with a zero tail.
std::size_t agreement_length(const BitString& s, const BitString& target) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != target.padded(i)) return i;
  }
  return s.size();
}

}  // namespace

CostFunction build_cA(const Approximation& c_enum, const Approximation& a, const FiniteFunctional& psi,
                      const FiniteFunctional& upsilon, std::size_t horizon) {
  if (horizon >= c_enum.stages() || horizon >= a.stages()) {
    throw std::invalid_argument("build_cA: horizon beyond the approximations");
  }
  for (std::size_t s = 0; s <= horizon; ++s) {
    BitString need = a.at(s).padded_prefix(s);
    BitString have = psi.eval(s, c_enum.at(s));
    if (!need.is_prefix_of(have)) {
      throw PreconditionViolation("build_cA: A_s↾s is not a prefix of psi on C_s at stage " + std::to_string(s));
    }
  }
  // qualify[t]: (oracle, j) where the oracle's output is a prefix of C_t and
  // psi's output on it agrees with A_t on exactly j bits.
  std::vector<std::vector<std::pair<BitString, std::size_t>>> qualify(horizon + 1);
  std::vector<ClopenSet> bad(horizon + 1);
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<BitString> bad_gens;
    for (const auto& [oracle, out] : upsilon.current_outputs(t)) {
      if (!agrees_with_padded(out, c_enum.at(t))) {
        bad_gens.push_back(oracle);
        continue;
      }
      std::size_t j = agreement_length(psi.eval(t, out), a.at(t));
      if (j > 0) qualify[t].emplace_back(oracle, j);
    }
    bad[t] = ClopenSet::from_generators(std::move(bad_gens));
  }
  std::vector<std::vector<DyadicRational>> table(horizon + 1);
  for (std::size_t s = 0; s <= horizon; ++s) table[s].resize(s);
  for (std::size_t x = 0; x < horizon; ++x) {
    ClopenSet running;
    for (std::size_t t = x + 1; t <= horizon; ++t) {
      std::vector<BitString> gens;
      for (const auto& [oracle, j] : qualify[t]) {
        if (j > x) gens.push_back(oracle);
      }
      if (!gens.empty()) running = running.unite(ClopenSet::from_generators(std::move(gens)).subtract(bad[t]));
      table[t][x] = running.measure();
    }
  }
  return c_table("c_A", std::move(table));
}

CostFunction build_cA(const Approximation& a, const FiniteFunctional& upsilon, std::size_t horizon) {
  if (!a.is_ce()) throw PreconditionViolation("build_cA: default C = A needs a c.e. approximation");
  return build_cA(a, a, FiniteFunctional::identity(), upsilon, horizon);
}

nlohmann::json ObedienceLedger::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries) {
    rows.push_back({{"stage", e.stage},
                    {"x", e.position},
                    {"cost", e.cost.to_string()},
                    {"bound", e.bound.to_string()},
                    {"ok", e.ok}});
  }
  return {{"entries", rows},
          {"total_cost", total_cost.to_string()},
          {"total_bound", total_bound.to_string()},
          {"final_error", final_error.to_string()},
          {"ok", ok}};
}

ObedienceLedger obedience_ledger(const CostFunction& c_a, const Approximation& c_enum, const Approximation& a,
                                 const FiniteFunctional& upsilon, std::size_t horizon) {
  ObedienceLedger ledger;
  std::vector<ClopenSet> errors(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) errors[t] = error_set(upsilon, t, c_enum.at(t));
  for (std::size_t s = 0; s + 1 <= horizon; ++s) {
    auto x = a.least_change(s + 1);
    if (!x) continue;
    ObedienceEntry e{s, *x, c_a(*x, s), DyadicRational(), true};
    if (*x + 1 <= s + 1) e.bound = errors[s + 1].subtract(errors[*x + 1]).measure();
    e.ok = e.cost <= e.bound;
    ledger.ok = ledger.ok && e.ok;
    ledger.total_cost += e.cost;
    ledger.total_bound += e.bound;
    ledger.entries.push_back(std::move(e));
  }
  ledger.final_error = errors[horizon].measure();
  ledger.ok = ledger.ok && ledger.total_cost <= ledger.total_bound;
  return ledger;
}

GammaResult gamma_allocate(const Approximation& a, const CostFunction& c, const std::vector<std::size_t>& speedup,
                           std::size_t horizon) {
  GammaResult result;
  auto f = [&](std::size_t t) { return speedup.empty() ? t : speedup.at(t); };
  auto abort = [&](std::size_t t, std::string message) {
    result.ok = false;
    result.aborted_at = t;
    result.message = std::move(message);
    return result;
  };
  if (!speedup.empty() && speedup.size() <= horizon) throw std::invalid_argument("gamma_allocate: speedup too short");
  if (f(horizon) >= a.stages()) throw std::invalid_argument("gamma_allocate: speedup beyond the approximation");

  struct Live {
    BitString oracle;
    std::size_t level;
  };
  std::vector<Live> live;
  ClopenSet used;
  DyadicRational error_mass;
  DyadicRational accumulated;
  const DyadicRational half = DyadicRational::two_to(-1);
  const std::size_t width = a.width();

  for (std::size_t t = 1; t <= horizon; ++t) {
    const BitString& previous = a.at(f(t - 1));
    const BitString& target = a.at(f(t));
    if (auto p = previous.first_difference(target)) {
      if (previous[*p]) return abort(t, "approximation is not c.e. at position " + std::to_string(*p));
      for (std::size_t q = *p; q < width; ++q) {
        if (previous[q] && !target[q]) return abort(t, "approximation is not c.e. at position " + std::to_string(q));
      }
      std::vector<Live> keep;
      for (auto& e : live) {
        if (e.level >= *p) {
          error_mass += DyadicRational::two_to(-static_cast<std::int64_t>(e.oracle.size()));
        } else {
          keep.push_back(std::move(e));
        }
      }
      live = std::move(keep);
      accumulated += c(*p, t);
    }
    if (!(c(0, t) < half)) return abort(t, "c(0,t) is not below 1/2");
    if (!(accumulated < half)) return abort(t, "accumulated cost is not below 1/2");

    std::vector<DyadicRational> mass(t + 1);
    for (std::size_t x = 0; x < t; ++x) mass[x] = c(x, t);
    for (std::size_t x = width; x < t; ++x) {
      if (!mass[x].is_zero()) return abort(t, "positive cost beyond the approximation width");
    }

    // Pool of live cylinders, highest level first.
    std::stable_sort(live.begin(), live.end(), [](const Live& l, const Live& r) {
      return l.level != r.level ? l.level > r.level : l.oracle < r.oracle;
    });
    std::deque<Live> pool(live.begin(), live.end());
    std::vector<Live> next;
    auto emit = [&](const BitString& oracle, std::size_t from_level, std::size_t level, bool fresh) {
      if (fresh || from_level < level) {
        result.gamma.add({t, oracle, target.prefix(level + 1)});
      }
      next.push_back({oracle, level});
    };
    for (std::size_t y = std::min(t, width); y-- > 0;) {
      if (mass[y] < mass[y + 1]) return abort(t, "c is not monotone in x at x=" + std::to_string(y));
      DyadicRational need = mass[y] - mass[y + 1];
      if (!pool.empty() && pool.front().level > y) {
        return abort(t, "live mass at level " + std::to_string(pool.front().level) + " exceeds c");
      }
      while (!need.is_zero() && !pool.empty()) {
        Live e = pool.front();
        pool.pop_front();
        DyadicRational weight = DyadicRational::two_to(-static_cast<std::int64_t>(e.oracle.size()));
        if (weight <= need) {
          emit(e.oracle, e.level, y, false);
          need -= weight;
          continue;
        }
        ClopenSet piece = carve(ClopenSet::cylinder(e.oracle), need);
        for (const auto& g : piece.generators()) emit(g, e.level, y, false);
        ClopenSet rest = ClopenSet::cylinder(e.oracle).subtract(piece);
        const auto& gens = rest.generators();
        for (auto it = gens.rbegin(); it != gens.rend(); ++it) pool.push_front({*it, e.level});
        need = DyadicRational();
      }
      if (!need.is_zero()) {
        ClopenSet free = used.complement();
        if (free.measure() < need) return abort(t, "allocation exceeds the available measure");
        ClopenSet fresh = carve(free, need);
        for (const auto& g : fresh.generators()) emit(g, 0, y, true);
        used = used.unite(fresh);
      }
    }
    if (!pool.empty()) return abort(t, "live mass exceeds c(0,t)");
    live = std::move(next);

    GammaStage stage{t, error_mass, accumulated, DyadicRational(), true};
    for (const auto& e : live) stage.live_mass += DyadicRational::two_to(-static_cast<std::int64_t>(e.oracle.size()));
    ClopenSet errors = error_set(result.gamma, t, target);
    if (errors.measure() != error_mass || !(error_mass <= accumulated)) stage.identity_ok = false;
    for (std::size_t x = 0; x < std::min(t, width) && stage.identity_ok; ++x) {
      if (preimage(result.gamma, t, target.prefix(x + 1)).subtract(errors).measure() != mass[x]) {
        stage.identity_ok = false;
      }
    }
    if (!(stage.live_mass + error_mass <= DyadicRational(1))) stage.identity_ok = false;
    result.ok = result.ok && stage.identity_ok;
    result.stages.push_back(std::move(stage));
  }
  return result;
}

FiniteFunctional tag_family(const FiniteFunctional& f, unsigned e) {
  BitString tag = BitString::zeros(e).child(true);
  FiniteFunctional out;
  for (const auto& a : f.axioms()) out.add({a.stage, tag.concat(a.oracle), a.output});
  return out;
}

}  // namespace costlab
