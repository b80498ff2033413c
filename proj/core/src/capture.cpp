#include "costlab/capture.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "costlab/cost_function.hpp"

namespace costlab {

BitString fragment_of(const BitString& sigma, const ComputableSet& r) {
  std::string bits;
  for (std::size_t p = 0; p < sigma.size(); ++p) {
    if (r.contains(p)) bits.push_back(sigma[p] ? '1' : '0');
  }
  return BitString(bits);
}

CaptureResult build_capture_test(const LeftCEApprox& omega, const ComputableSet& r, const CaptureOptions& options) {
  CaptureResult result;
  StageTrace& trace = result.trace;
  trace.describe("capture.measure_bound", "mu(U_n) <= 2 * 2^-|R ∩ k_T(n)|");
  trace.describe("capture.nested", "U_{n+1} is a subset of U_n");
  trace.describe("capture.member", "the R-fragment of omega_T lies in every U_n");

  const std::size_t horizon = omega.horizon();
  const std::size_t probe = std::min(options.probe, horizon);
  std::vector<BitString> prefixes(horizon + 1);
  for (std::size_t s = 0; s <= horizon; ++s) prefixes[s] = omega.at(s).binary_prefix(probe);

  for (std::size_t n = 0; n <= probe; ++n) {
    std::set<BitString> distinct;
    for (std::size_t s = n; s <= horizon; ++s) distinct.insert(prefixes[s].prefix(n));
    std::vector<BitString> gens;
    for (const auto& sigma : distinct) gens.push_back(fragment_of(sigma, r));
    ClopenSet u = ClopenSet::from_generators(std::move(gens));

    // The covering argument reads omega_s | k_T(n), which refines omega_s | n only when k_T(n) <= n.
    KIndex k = k_index(omega, n, horizon);
    std::uint64_t kk = k.is_infinite() ? n : std::min<std::uint64_t>(k.value(), n);
    std::int64_t effective = std::max<std::int64_t>(0, static_cast<std::int64_t>(kk) + options.k_corruption);
    auto exponent = static_cast<std::int64_t>(r.count_below(static_cast<std::uint64_t>(effective)));
    DyadicRational bound = DyadicRational::two_to(1 - exponent);
    DyadicRational mu = u.measure();
    trace.check("capture.measure_bound", n, mu <= bound,
                {{"n", n}, {"k", k.to_string()}, {"measure", mu.to_string()}, {"bound", bound.to_string()},
                 {"prefixes", distinct.size()}});
    if (n > 0) {
      bool nested = u.subset_of(result.u.back());
      trace.check("capture.nested", n, nested, {{"n", n}});
    }
    BitString member = fragment_of(prefixes[horizon].prefix(n), r);
    trace.check("capture.member", n, u.covers(member), {{"n", n}, {"fragment", member.str()}});
    result.u.push_back(std::move(u));
    result.distinct_prefixes.push_back(distinct.size());
  }
  return result;
}

BitString join_fragments(const BitString& sigma, const ComputableSet& r) {
  BitString x = fragment_of(sigma, r);
  BitString y = fragment_of(sigma, r.complement());
  std::string bits;
  std::size_t common = std::min(x.size(), y.size());
  for (std::size_t m = 0; m < common; ++m) {
    bits.push_back(x[m] ? '1' : '0');
    bits.push_back(y[m] ? '1' : '0');
  }
  if (x.size() > common) bits.push_back(x[common] ? '1' : '0');
  return BitString(bits);
}

TestSchedule empty_test_schedule() {
  return [](std::uint64_t, std::uint64_t) { return ClopenSet(); };
}

TestSchedule clipped_join_schedule(const LeftCEApprox& omega, const ComputableSet& s_set, const ComputableSet& r) {
  struct State {
    LeftCEApprox omega;
    CostFunction c_s;
    CostFunction c_rc;
    ComputableSet r;
    std::map<std::uint64_t, std::vector<ClopenSet>> memo;  // memo[n][s - n]
  };
  auto state = std::make_shared<State>(
      State{omega, c_fragment(omega, s_set), c_fragment(omega, r.complement()), r, {}});
  return [state](std::uint64_t n, std::uint64_t s) {
    if (s < n || s > state->omega.horizon()) return ClopenSet();
    auto& column = state->memo[n];
    while (column.size() <= s - n) {
      std::uint64_t t = n + column.size();
      ClopenSet prev = column.empty() ? ClopenSet() : column.back();
      BitString sigma = state->omega.at(t).binary_prefix(n);
      ClopenSet fresh = ClopenSet::cylinder(join_fragments(sigma, state->r)).subtract(prev);
      // x >= s gives cost 0; read the bound at the stage, with n < t enforced.
      DyadicRational bound = n < t ? state->c_s(n, t) * state->c_rc(n, t) : DyadicRational();
      DyadicRational room = bound > prev.measure() ? bound - prev.measure() : DyadicRational();
      DyadicRational take = min(room, fresh.measure());
      column.push_back(take.is_zero() ? prev : prev.unite(carve(fresh, take)));
    }
    return column[s - n];
  };
}

NoncaptureResult build_noncapture_open(const TestSchedule& u, const ComputableSet& s_set, const ComputableSet& r,
                                       const LeftCEApprox& omega, const DyadicRational& eps) {
  NoncaptureResult result;
  StageTrace& trace = result.trace;
  trace.describe("noncapture.relocations", "n_s changes at most 2^{k+1} times");
  trace.describe("noncapture.location", "k_s(n_s) >= k at every stage s >= k");
  trace.describe("noncapture.schedule_bound", "mu(U_{n,s}) <= c_{Omega,S}(n, s) * c_{Omega,co-R}(n, s)");
  trace.describe("noncapture.summand", "mu(U_{n_s, s}) <= 2^{-k-1} eps");
  trace.describe("noncapture.measure", "mu(V) <= eps");

  if (eps.is_zero()) throw std::invalid_argument("noncapture: eps must be positive");
  const std::size_t horizon = omega.horizon();
  // Least k with 2^-(|S∩k| - |R∩k|) < eps / 2.
  for (std::uint64_t m = 0; m <= horizon; ++m) {
    std::uint64_t sk = s_set.count_below(m), rk = r.count_below(m);
    if (sk <= rk) continue;
    if (DyadicRational::two_to(-static_cast<std::int64_t>(sk - rk)) < eps.scaled(-1)) {
      result.k = m;
      break;
    }
  }
  if (!result.k) {
    result.report = "no k <= " + std::to_string(horizon) + " with |S∩k| - |R∩k| > 1 - log2 eps";
    return result;
  }
  const std::uint64_t k = *result.k;
  trace.event(k, "threshold", {{"k", k}, {"eps", eps.to_string()}});
  CostFunction c_s = c_fragment(omega, s_set);
  CostFunction c_rc = c_fragment(omega, r.complement());
  const DyadicRational summand_cap = eps.scaled(-static_cast<std::int64_t>(k) - 1);

  auto least_location = [&](std::uint64_t stage) {
    for (std::uint64_t n = k; n <= stage; ++n) {
      KIndex kn = k_index(omega, n, stage);
      if (kn > KIndex::finite(k)) return n;
    }
    return stage;
  };
  // n_k is chosen at stage k itself; later relocations follow k_s(n_{s-1}) < k.
  std::uint64_t n_cur = least_location(k);
  result.locations.push_back(n_cur);
  for (std::uint64_t s = k + 1; s <= horizon; ++s) {
    if (k_index(omega, n_cur, s) < KIndex::finite(k)) {
      n_cur = least_location(s);
      ++result.relocations;
      trace.event(s, "relocate", {{"n", n_cur}});
    }
    result.locations.push_back(n_cur);
    KIndex kn = k_index(omega, n_cur, s);
    trace.check("noncapture.location", s, kn >= KIndex::finite(k), {{"n", n_cur}, {"k_s", kn.to_string()}});
    ClopenSet piece = u(n_cur, s);
    DyadicRational mu = piece.measure();
    DyadicRational schedule_bound = c_s(n_cur, s) * c_rc(n_cur, s);
    trace.check("noncapture.schedule_bound", s, mu <= schedule_bound,
                {{"n", n_cur}, {"measure", mu.to_string()}, {"bound", schedule_bound.to_string()}});
    trace.check("noncapture.summand", s, mu <= summand_cap,
                {{"n", n_cur}, {"measure", mu.to_string()}, {"cap", summand_cap.to_string()}});
    result.v = result.v.unite(piece);
  }
  DyadicRational limit = DyadicRational::two_to(static_cast<std::int64_t>(k) + 1);
  trace.check("noncapture.relocations", horizon, DyadicRational(result.relocations) <= limit,
              {{"relocations", result.relocations}, {"k", k}});
  DyadicRational mu_v = result.v.measure();
  trace.check("noncapture.measure", horizon, mu_v <= eps, {{"measure", mu_v.to_string()}, {"eps", eps.to_string()}});
  result.report = "k=" + std::to_string(k) + " relocations=" + std::to_string(result.relocations) +
                  " mu(V)=" + mu_v.to_string();
  return result;
}

}  // namespace costlab
