#include "costlab/shift.hpp"

#include <memory>
#include <stdexcept>

namespace costlab {

EnumerationScript EnumerationScript::mirror(std::size_t delay, std::size_t lag) {
  EnumerationScript s;
  s.kind = Kind::mirror;
  s.delay = delay;
  s.lag = lag;
  return s;
}

EnumerationScript EnumerationScript::partial(std::size_t delay, std::size_t defined_below) {
  EnumerationScript s;
  s.kind = Kind::partial;
  s.delay = delay;
  s.defined_below = defined_below;
  return s;
}

EnumerationScript EnumerationScript::fixed(std::set<std::uint64_t> elements) {
  EnumerationScript s;
  s.kind = Kind::fixed;
  s.elements = std::move(elements);
  return s;
}

std::string EnumerationScript::describe() const {
  switch (kind) {
    case Kind::mirror:
      return "mirror(delay=" + std::to_string(delay) + ",lag=" + std::to_string(lag) + ")";
    case Kind::partial:
      return "partial(delay=" + std::to_string(delay) + ",defined_below=" + std::to_string(defined_below) + ")";
    case Kind::fixed:
      return "fixed";
  }
  return "unknown";
}

DyadicRational shift_alpha(unsigned e) {
  DyadicRational alpha(1);
  for (unsigned i = 0; i < e; ++i) alpha = alpha.scaled(-static_cast<std::int64_t>(i));
  return alpha;
}

namespace {

// Range maximum over declarations, rebuilt lazily.
class DeclarationTable {
 public:
  explicit DeclarationTable(std::size_t horizon) : values_(horizon + 2) {}

  void declare(std::size_t t, const DyadicRational& alpha) {
    if (values_[t] < alpha) values_[t] = alpha;
  }
  // max over t in (x, s]
  DyadicRational max_between(std::size_t x, std::size_t s) const {
    DyadicRational best;
    for (std::size_t t = x + 1; t <= s && t < values_.size(); ++t) {
      if (best < values_[t]) best = values_[t];
    }
    return best;
  }
  const std::vector<DyadicRational>& values() const { return values_; }

 private:
  std::vector<DyadicRational> values_;
};

// Sparse table for the finished declarations.
class RangeMax {
 public:
  explicit RangeMax(const std::vector<DyadicRational>& v) {
    levels_.push_back(v);
    for (std::size_t w = 1; 2 * w <= v.size(); w *= 2) {
      const auto& prev = levels_.back();
      std::vector<DyadicRational> next(prev.size() - w);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = max(prev[i], prev[i + w]);
      levels_.push_back(std::move(next));
    }
  }
  // max over [lo, hi], lo <= hi
  DyadicRational query(std::size_t lo, std::size_t hi) const {
    std::size_t len = hi - lo + 1;
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= len) ++level;
    return max(levels_[level][lo], levels_[level][hi + 1 - (std::size_t{1} << level)]);
  }

 private:
  std::vector<std::vector<DyadicRational>> levels_;
};

struct Strategy {
  unsigned e;
  DyadicRational alpha;
  DyadicRational ceiling;  // 2^-e alpha
  int step = 1;
  std::size_t s = 0;
  std::size_t cycles = 0;
  std::size_t enumerations = 0;
  std::vector<std::pair<std::size_t, std::size_t>> enumerated;  // (s, u)
  std::vector<std::pair<std::size_t, std::size_t>> cycle_marks;  // (s, r)
  bool terminated = false;
};

}  // namespace

ShiftResult run_shift(const CostFunction& d, const std::vector<EnumerationScript>& family, const ShiftConfig& config) {
  const std::size_t horizon = config.horizon;
  const std::size_t width = horizon + 2;
  StageTrace trace;
  trace.describe("shift.c_ge_d", "c(x,s) >= d(x,s) for all x < s <= T");
  trace.describe("shift.c_monotone", "c is nonincreasing in x and nondecreasing in s");
  trace.describe("shift.enumeration_ceiling", "each enumeration by strategy e costs at most 2^-e alpha_e");
  trace.describe("shift.strategy_cost", "total enumeration cost of strategy e is at most 2^-e");
  trace.describe("shift.cycle_gain", "each completed cycle raises the ledger of B^e by at least alpha_e");
  trace.describe("shift.step5_visits", "strategy e completes at most 1/alpha_e cycles");
  trace.describe("shift.mirror_requirement",
                 "B^e equal to T(A) at the horizon has ledger >= 1 or its strategy waits for convergence");
  trace.describe("shift.a_cost", "total cost of A is at most the sum of 2^-e");

  DeclarationTable decl(horizon);
  std::vector<BitString> history;  // history[u] = A after stage u
  BitString a = BitString::zeros(width);

  auto c_now = [&](std::size_t x, std::size_t s) {
    if (x >= s) return DyadicRational();
    return max(d(x, s), decl.max_between(x, s));
  };
  // B^e_t as seen at stage `now`; nullopt if not converged.
  auto b_at = [&](const EnumerationScript& script, std::size_t t, std::size_t now) -> std::optional<BitString> {
    if (t + script.lag > now) return std::nullopt;
    switch (script.kind) {
      case EnumerationScript::Kind::fixed: {
        BitString out = BitString::zeros(width);
        for (auto x : script.elements) {
          if (x < width) out = out.with_bit(x, true);
        }
        return out;
      }
      case EnumerationScript::Kind::partial:
        if (t >= script.defined_below) return std::nullopt;
        [[fallthrough]];
      case EnumerationScript::Kind::mirror: {
        if (t < script.delay) return BitString::zeros(width);
        std::size_t src = t - script.delay;
        // A_{src} is the state after stage src, available once src < now or src == now and stage done.
        const BitString& as = src < history.size() ? history[src] : a;
        return shift(as).padded_prefix(width);
      }
    }
    return std::nullopt;
  };
  // c-cost of B^e over stages 1..r, with the given cost evaluator.
  auto ledger = [&](const EnumerationScript& script, std::size_t r, std::size_t now, auto&& cost) {
    DyadicRational total;
    std::optional<BitString> prev = b_at(script, 0, now);
    for (std::size_t t = 1; t <= r; ++t) {
      auto cur = b_at(script, t, now);
      if (!prev || !cur) return std::optional<DyadicRational>();
      if (auto x = prev->first_difference(*cur)) total += cost(*x, t);
      prev = std::move(cur);
    }
    return std::optional<DyadicRational>(total);
  };

  std::vector<Strategy> strategies;
  for (unsigned e = 0; e < family.size(); ++e) {
    Strategy st;
    st.e = e;
    st.alpha = shift_alpha(e);
    st.ceiling = st.alpha.scaled(-static_cast<std::int64_t>(e));
    strategies.push_back(std::move(st));
  }

  for (std::size_t u = 0; u <= horizon; ++u) {
    for (auto& st : strategies) {
      const EnumerationScript& script = family[st.e];
      // Steps may chain within a stage; each pass either advances or waits.
      for (int guard = 0; guard < 8 && !st.terminated; ++guard) {
        if (st.step == 1) {
          if (u == 0) break;
          st.s = u;
          decl.declare(u, st.alpha);
          trace.event(u, "declare", {{"e", st.e}, {"x", u - 1}, {"s", u}, {"value", st.alpha.to_string()}});
          st.step = 2;
          break;
        }
        if (st.step == 2) {
          if (u != st.s + 1) break;
          decl.declare(u, st.ceiling);
          trace.event(u, "declare", {{"e", st.e}, {"x", st.s}, {"s", u}, {"value", st.ceiling.to_string()}});
          st.step = 3;
          continue;
        }
        if (st.step == 3) {
          if (c_now(st.s, u) > st.ceiling) {
            trace.event(u, "restart", {{"e", st.e}, {"case", "cost"}, {"s", st.s}});
            st.step = 1;
            continue;
          }
          if (st.s < width && a[st.s]) {
            trace.event(u, "restart", {{"e", st.e}, {"case", "taken"}, {"s", st.s}});
            st.step = 1;
            continue;
          }
          auto b = b_at(script, st.s, u);
          if (b && !b->padded(st.s - 1)) {
            a = a.with_bit(st.s, true);
            st.enumerated.emplace_back(st.s, u);
            ++st.enumerations;
            trace.event(u, "enumerate", {{"e", st.e}, {"x", st.s}, {"cost", c_now(st.s, u).to_string()}});
            st.step = 4;
            continue;
          }
          break;
        }
        if (st.step == 4) {
          std::optional<std::size_t> r;
          for (std::size_t t = st.s + 1; t <= u; ++t) {
            auto b = b_at(script, t, u);
            if (b && b->padded(st.s - 1)) {
              r = t;
              break;
            }
          }
          if (!r) break;
          st.cycle_marks.emplace_back(st.s, *r);
          ++st.cycles;
          st.step = 5;
          auto l = ledger(script, *r, u, c_now);
          bool done = l && *l >= DyadicRational(1);
          trace.event(u, "cycle", {{"e", st.e}, {"s", st.s}, {"r", *r}, {"ledger", l ? l->to_string() : "undefined"}});
          if (done) {
            st.terminated = true;
            st.step = 6;
            trace.event(u, "terminate", {{"e", st.e}});
            break;
          }
          st.step = 1;
          continue;
        }
        break;
      }
    }
    history.push_back(a);
  }

  ShiftResult result;
  result.declarations = decl.values();
  auto table = std::make_shared<const RangeMax>(decl.values());
  CostFunction dd = d;
  result.c = CostFunction("shift[" + d.name() + "]", CostKind::custom, [table, dd, horizon](std::uint64_t x, std::uint64_t s) {
    DyadicRational base = dd(x, s);
    if (x + 1 > horizon + 1) return base;
    std::uint64_t hi = std::min<std::uint64_t>(s, horizon + 1);
    return max(base, table->query(x + 1, hi));
  });
  const CostFunction& c = result.c;

  // Pointwise audits over the finished cost function.
  for (std::size_t s = 1; s <= horizon; ++s) {
    std::optional<std::size_t> bad;
    for (std::size_t x = 0; x < s && !bad; ++x) {
      if (c(x, s) < d(x, s)) bad = x;
    }
    trace.check("shift.c_ge_d", horizon, !bad, bad ? nlohmann::json{{"x", *bad}, {"s", s}} : nlohmann::json{{"s", s}});
  }
  auto mono = check_monotone(c, horizon);
  trace.check("shift.c_monotone", horizon, mono.ok,
              mono.witness ? nlohmann::json{{"x", mono.witness->first}, {"s", mono.witness->second},
                                            {"condition", mono.failed_condition}}
                           : nlohmann::json{{"checks", mono.checks}});

  result.approximation = Approximation::from_snapshots(history);
  result.a_cost = total_cost(result.approximation, c);
  DyadicRational budget;
  for (auto& st : strategies) {
    StrategySummary sum;
    sum.e = st.e;
    sum.alpha = st.alpha;
    sum.step = st.step;
    sum.cycles = st.cycles;
    sum.enumerations = st.enumerations;
    sum.terminated = st.terminated;
    for (auto [s, u] : st.enumerated) {
      DyadicRational cost = c(s, u);
      sum.enumeration_cost += cost;
      trace.check("shift.enumeration_ceiling", horizon, cost <= st.ceiling,
                  {{"e", st.e}, {"s", s}, {"u", u}, {"cost", cost.to_string()}, {"ceiling", st.ceiling.to_string()}});
    }
    DyadicRational cap = DyadicRational::two_to(-static_cast<std::int64_t>(st.e));
    budget += cap;
    trace.check("shift.strategy_cost", horizon, sum.enumeration_cost <= cap,
                {{"e", st.e}, {"cost", sum.enumeration_cost.to_string()}});
    const EnumerationScript& script = family[st.e];
    auto final_cost = [&](std::uint64_t x, std::uint64_t t) { return c(x, t); };
    for (auto [s, r] : st.cycle_marks) {
      auto before = ledger(script, s, horizon, final_cost);
      auto after = ledger(script, r, horizon, final_cost);
      bool ok = before && after && *after >= *before + st.alpha;
      trace.check("shift.cycle_gain", horizon, ok,
                  {{"e", st.e}, {"s", s}, {"r", r}, {"gain", ok ? (*after - *before).to_string() : "n/a"}});
    }
    trace.check("shift.step5_visits", horizon, DyadicRational(st.cycles) * st.alpha <= DyadicRational(1),
                {{"e", st.e}, {"cycles", st.cycles}});
    auto total = ledger(script, horizon, horizon, final_cost);
    sum.ledger = total.value_or(DyadicRational());
    auto b_final = b_at(script, horizon, horizon);
    bool mirrors = b_final && *b_final == shift(a).padded_prefix(width);
    bool parked = st.step == 3 || st.step == 4;
    if (mirrors) {
      trace.check("shift.mirror_requirement", horizon, (total && *total >= DyadicRational(1)) || parked,
                  {{"e", st.e}, {"ledger", sum.ledger.to_string()}, {"step", st.step}});
    }
    result.strategies.push_back(std::move(sum));
  }
  trace.check("shift.a_cost", horizon, result.a_cost <= budget,
              {{"a_cost", result.a_cost.to_string()}, {"budget", budget.to_string()}});
  for (std::size_t x = 0; x < width; ++x) {
    if (a[x]) result.a.insert(x);
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace costlab
