#include "costlab/cost_function.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace costlab {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::additive:
      return "additive";
    case CostKind::fragment:
      return "fragment";
    case CostKind::custom:
      return "custom";
  }
  return "custom";
}

CostFunction::CostFunction(std::string name, CostKind kind, Eval eval)
    : name_(std::move(name)), kind_(kind), eval_(std::make_shared<const Eval>(std::move(eval))) {}

DyadicRational CostFunction::operator()(std::uint64_t x, std::uint64_t s) const {
  if (x >= s) return {};
  return (*eval_)(x, s);
}

CostFunction c_omega(const LeftCEApprox& omega) {
  auto w = std::make_shared<const LeftCEApprox>(omega);
  return CostFunction("c_omega", CostKind::additive,
                      [w](std::uint64_t x, std::uint64_t s) { return w->at(s) - w->at(x); });
}

CostFunction c_fragment(const LeftCEApprox& omega, const ComputableSet& r) {
  auto w = std::make_shared<const LeftCEApprox>(omega);
  // Finite k-indices never exceed the largest exponent among the values.
  auto counts = std::make_shared<const std::vector<std::uint64_t>>(r.prefix_counts(omega.max_exponent() + 1));
  return CostFunction("c_fragment[" + r.name() + "]", CostKind::fragment,
                      [w, counts](std::uint64_t n, std::uint64_t s) {
                        KIndex k = k_index(*w, n, s);
                        if (k.is_infinite()) return DyadicRational();
                        return DyadicRational::two_to(-static_cast<std::int64_t>((*counts)[k.value()]));
                      });
}

CostFunction c_power_profile(const LeftCEApprox& omega, unsigned k, unsigned n) {
  if (k < 1 || k > n) throw std::invalid_argument("c_power_profile: need 1 <= k <= n");
  std::set<unsigned> t;
  for (unsigned j = 1; j <= k; ++j) t.insert(j);
  return c_fragment(omega, column_union(t, n));
}

CostFunction c_zero() {
  return CostFunction("zero", CostKind::custom, [](std::uint64_t, std::uint64_t) { return DyadicRational(); });
}

CostFunction floored(const CostFunction& c) {
  return CostFunction("floored[" + c.name() + "]", c.kind(), [c](std::uint64_t x, std::uint64_t s) {
    return max(c(x, s), DyadicRational::two_to(-static_cast<std::int64_t>(x)));
  });
}

CostFunction c_table(std::string name, std::vector<std::vector<DyadicRational>> values) {
  auto table = std::make_shared<const std::vector<std::vector<DyadicRational>>>(std::move(values));
  return CostFunction(std::move(name), CostKind::custom, [table](std::uint64_t x, std::uint64_t s) {
    if (s >= table->size() || x >= (*table)[s].size()) return DyadicRational();
    return (*table)[s][x];
  });
}

MonotonicityReport check_monotone(const CostFunction& c, std::uint64_t horizon) {
  MonotonicityReport report;
  // Column s as a row vector; compare with column s + 1.
  std::vector<DyadicRational> prev;
  for (std::uint64_t s = 0; s <= horizon; ++s) {
    std::vector<DyadicRational> col(s + 1);
    for (std::uint64_t x = 0; x <= s; ++x) col[x] = c(x, s);
    for (std::uint64_t x = 0; x < s; ++x) {
      ++report.checks;
      if (col[x] < col[x + 1]) {
        report.ok = false;
        report.witness = {{x, s}};
        report.failed_condition = "c(x,s) >= c(x+1,s)";
        return report;
      }
    }
    for (std::uint64_t x = 0; x < prev.size(); ++x) {
      ++report.checks;
      if (prev[x] > col[x]) {
        report.ok = false;
        report.witness = {{x, s - 1}};
        report.failed_condition = "c(x,s) <= c(x,s+1)";
        return report;
      }
    }
    prev = std::move(col);
  }
  return report;
}

ProductIdentityReport product_identity_check(const CostFunction& c_r, const CostFunction& c_rc,
                                             const LeftCEApprox& omega, std::uint64_t horizon) {
  ProductIdentityReport report;
  for (std::uint64_t s = 1; s <= horizon; ++s) {
    for (std::uint64_t n = 0; n < s; ++n) {
      ++report.checks;
      KIndex k = k_index(omega, n, s);
      DyadicRational expected =
          k.is_infinite() ? DyadicRational() : DyadicRational::two_to(-static_cast<std::int64_t>(k.value()));
      if (c_r(n, s) * c_rc(n, s) != expected) {
        report.pass = false;
        report.witness = {{n, s}};
        return report;
      }
    }
  }
  return report;
}

ProductIdentityReport product_identity_check(const LeftCEApprox& omega, const ComputableSet& r, std::uint64_t horizon) {
  return product_identity_check(c_fragment(omega, r), c_fragment(omega, r.complement()), omega, horizon);
}

bool power_ratio_within(const LeftCEApprox& omega, unsigned k, unsigned n, std::uint64_t x, std::uint64_t s,
                        unsigned e) {
  if (x >= s) return true;
  DyadicRational gap = omega.at(s) - omega.at(x);
  DyadicRational value = c_power_profile(omega, k, n)(x, s);
  if (gap.is_zero()) return value.is_zero();
  DyadicRational lhs = value.pow(n);
  DyadicRational rhs = gap.pow(k);
  auto slack = static_cast<std::int64_t>(e) * n;
  return rhs.scaled(-slack) <= lhs && lhs <= rhs.scaled(slack);
}

std::vector<CostCharge> cost_ledger(const Approximation& a, const CostFunction& c) {
  std::vector<CostCharge> out;
  for (std::size_t s = 1; s < a.stages(); ++s) {
    auto x = a.least_change(s);
    if (!x) continue;
    out.push_back({s, *x, c(*x, s)});
  }
  return out;
}

DyadicRational total_cost(const Approximation& a, const CostFunction& c) {
  DyadicRational total;
  for (const auto& charge : cost_ledger(a, c)) total += charge.cost;
  return total;
}

nlohmann::json DominationReport::to_json() const {
  if (growing || counterexample) {
    nlohmann::json trend = nlohmann::json::array();
    for (const auto& [x, e] : profile) trend.push_back({x, e});
    nlohmann::json j = {{"trend", {{"growing", true}, {"profile", trend}}}};
    if (counterexample) j["trend"]["counterexample"] = *counterexample;
    return j;
  }
  if (!exponent) return {{"constant", "0/2^0"}};
  return {{"constant", DyadicRational::two_to(*exponent).to_string()}};
}

std::vector<std::uint64_t> probe_set(const CostFunction& c, const CostFunction& d, std::uint64_t horizon) {
  std::set<std::uint64_t> probes;
  probes.insert(0);
  for (std::uint64_t x = 1; x <= horizon; x *= 2) probes.insert(x);
  DyadicRational pc = c(0, horizon), pd = d(0, horizon);
  for (std::uint64_t x = 1; x <= horizon; ++x) {
    DyadicRational vc = c(x, horizon), vd = d(x, horizon);
    if (vc != pc || vd != pd) probes.insert(x);
    pc = std::move(vc);
    pd = std::move(vd);
  }
  return {probes.begin(), probes.end()};
}

DominationReport dominates(const CostFunction& c, const CostFunction& d, std::uint64_t horizon) {
  DominationReport report;
  for (auto x : probe_set(c, d, horizon)) {
    DyadicRational vd = d(x, horizon);
    if (vd.is_zero()) continue;
    DyadicRational vc = c(x, horizon);
    if (vc.is_zero()) {
      report.counterexample = x;
      report.growing = true;
      return report;
    }
    std::int64_t j = ceil_log2_ratio(vd, vc);
    report.profile.emplace_back(x, j);
    report.exponent = report.exponent ? std::max(*report.exponent, j) : j;
  }
  // Growing: the last third of the probes needs more than everything before.
  if (report.profile.size() >= 6) {
    std::size_t cut = report.profile.size() * 2 / 3;
    std::int64_t early = INT64_MIN, late = INT64_MIN, late_min = INT64_MAX;
    for (std::size_t i = 0; i < report.profile.size(); ++i) {
      auto e = report.profile[i].second;
      if (i < cut) {
        early = std::max(early, e);
      } else {
        late = std::max(late, e);
        late_min = std::min(late_min, e);
      }
    }
    report.growing = late_min > early && late > early + 1;
  }
  return report;
}

BigInt benign_bound(BenignKind kind, const DyadicRational& eps, const ComputableSet* r, std::uint64_t scan_limit) {
  if (eps.is_zero()) throw std::invalid_argument("benign_bound: eps must be positive");
  if (kind == BenignKind::omega) {
    if (eps >= DyadicRational(1)) return 1;
    return eps.ceil_reciprocal();
  }
  if (r == nullptr) throw std::invalid_argument("benign_bound: fragment kind needs a set R");
  std::uint64_t count = 0;
  for (std::uint64_t m = 0; m <= scan_limit; ++m) {
    if (DyadicRational::two_to(-static_cast<std::int64_t>(count)) < eps) return BigInt(1) << m;
    if (r->contains(m)) ++count;
  }
  throw std::domain_error("benign_bound: no m <= " + std::to_string(scan_limit) + " reaches eps for " + r->name());
}

BenignVerdict benign_witness_verify(const CostFunction& c, const DyadicRational& eps,
                                    const std::vector<BenignPair>& sequence, const BigInt& bound) {
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i].n >= sequence[i].s) throw std::invalid_argument("benign sequence: need n_i < s_i");
    if (i > 0 && sequence[i - 1].s > sequence[i].n) throw std::invalid_argument("benign sequence: need s_i <= n_{i+1}");
  }
  BenignVerdict verdict;
  verdict.length = sequence.size();
  for (const auto& p : sequence) {
    if (c(p.n, p.s) < eps) {
      verdict.vacuous = true;
      return verdict;
    }
  }
  verdict.pass = BigInt(sequence.size()) <= bound;
  return verdict;
}

std::vector<BenignPair> longest_benign_sequence(const CostFunction& c, const DyadicRational& eps,
                                                std::uint64_t horizon) {
  // best[t]: longest sequence with every s_i <= t; back[t] its last pair.
  std::vector<std::size_t> best(horizon + 1, 0);
  std::vector<std::optional<BenignPair>> back(horizon + 1);
  std::int64_t reach = -1;  // largest n with c(n, t) >= eps
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    best[t] = best[t - 1];
    back[t] = std::nullopt;
    while (reach + 1 < static_cast<std::int64_t>(t) && c(static_cast<std::uint64_t>(reach + 1), t) >= eps) ++reach;
    if (reach >= 0 && best[static_cast<std::size_t>(reach)] + 1 > best[t]) {
      best[t] = best[static_cast<std::size_t>(reach)] + 1;
      back[t] = BenignPair{static_cast<std::uint64_t>(reach), t};
    }
  }
  std::vector<BenignPair> seq;
  std::uint64_t t = horizon;
  while (t > 0 && best[t] > 0) {
    if (!back[t]) {
      --t;
      continue;
    }
    seq.push_back(*back[t]);
    t = back[t]->n;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

LimitProfile limit_profile(const CostFunction& c, std::uint64_t horizon) {
  LimitProfile p;
  for (std::uint64_t x = 0; x <= horizon; ++x) {
    p.values.push_back(c(x, horizon));
    if (x > 0 && p.nonincreasing && p.values[x] > p.values[x - 1]) {
      p.nonincreasing = false;
      p.first_violation = x;
    }
    if (2 * x >= horizon) p.tail_max = max(p.tail_max, p.values[x]);
  }
  return p;
}

void write_cost_csv(std::ostream& out, const CostFunction& c, std::uint64_t horizon) {
  out << "x,s,value\n";
  for (std::uint64_t s = 1; s <= horizon; ++s) {
    for (std::uint64_t x = 0; x < s; ++x) out << x << ',' << s << ',' << c(x, s).to_string() << '\n';
  }
}

}  // namespace costlab
