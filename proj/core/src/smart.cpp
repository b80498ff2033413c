#include "costlab/smart.hpp"

#include <memory>

#include "costlab/rng.hpp"

namespace costlab {

UpsilonSchedule empty_upsilon_schedule() {
  return [](std::uint64_t, const BitString&) { return std::vector<ProposedAxiom>{}; };
}

UpsilonSchedule scripted_upsilon_schedule(std::map<std::uint64_t, std::vector<ProposedAxiom>> script) {
  auto shared = std::make_shared<const std::map<std::uint64_t, std::vector<ProposedAxiom>>>(std::move(script));
  return [shared](std::uint64_t stage, const BitString&) {
    auto it = shared->find(stage);
    return it == shared->end() ? std::vector<ProposedAxiom>{} : it->second;
  };
}

namespace {

struct SeededAdversary {
  Rng rng;
  std::size_t max_output;
  std::vector<BitString> pool;
  std::map<BitString, BitString> model;  // last proposed output per oracle

  // 0: mixed guesses, 1: cautious one-or-two-bit growth, 2: honest bursts.
  int style;
  std::size_t honest_percent;
  std::size_t right_percent;
  std::size_t max_extra;

  SeededAdversary(std::uint64_t seed, std::size_t max_out)
      : rng(seed), max_output(max_out), style(static_cast<int>(seed % 3)) {
    static constexpr std::size_t kHonest[] = {80, 95, 100};
    static constexpr std::size_t kRight[] = {10, 5, 0};
    static constexpr std::size_t kExtra[] = {8, 2, 8};
    honest_percent = kHonest[style];
    right_percent = kRight[style];
    max_extra = kExtra[style];
    std::vector<BitString> leaves{BitString("0"), BitString("1")};
    std::size_t target = 8 + rng.below(17);
    while (leaves.size() < target) {
      std::size_t i = rng.below(leaves.size());
      if (leaves[i].size() >= 6) continue;
      BitString parent = leaves[i];
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(i));
      leaves.push_back(parent.child(false));
      leaves.push_back(parent.child(true));
    }
    std::sort(leaves.begin(), leaves.end());
    pool = std::move(leaves);
  }

  BitString random_extension(const BitString& base, std::size_t extra) {
    BitString out = base;
    for (std::size_t i = 0; i < extra && out.size() < max_output; ++i) out.push_back(rng.below(2) == 1);
    return out;
  }

  std::vector<ProposedAxiom> propose(const BitString& a_now) {
    std::vector<ProposedAxiom> out;
    std::size_t count = rng.below(4);
    for (std::size_t i = 0; i < count; ++i) {
      const BitString& oracle = pool[rng.below(pool.size())];
      BitString current = model[oracle];
      if (current.size() >= max_output) continue;
      std::uint64_t mode = rng.below(100);
      std::size_t extra = 1 + rng.below(max_extra);
      std::size_t len = std::min(max_output, current.size() + extra);
      BitString next;
      if (mode < honest_percent && agrees_with_padded(current, a_now)) {
        next = a_now.padded_prefix(len);
      } else if (mode >= 100 - right_percent && agrees_with_padded(current, a_now)) {
        // Flip a 0 of A to 1 past the current output: lies right of A.
        next = a_now.padded_prefix(len);
        std::size_t pos = current.size() + rng.below(len - current.size());
        if (!next[pos]) next = next.with_bit(pos, true);
      } else {
        next = random_extension(current, extra);
      }
      if (next == current) continue;
      model[oracle] = next;
      out.push_back({oracle, next, false});
    }
    return out;
  }
};

}  // namespace

UpsilonSchedule seeded_upsilon_schedule(std::uint64_t seed, std::size_t max_output) {
  auto adversary = std::make_shared<SeededAdversary>(seed, max_output);
  return [adversary](std::uint64_t, const BitString& a_now) { return adversary->propose(a_now); };
}

SmartResult run_smart(const CostFunction& c_in, const UpsilonSchedule& schedule, const SmartConfig& config) {
  SmartResult result;
  StageTrace& trace = result.trace;
  trace.describe("smart.diamond", "mu(U_k,s) <= c(k,s) + mu(E_s+1 - E_k) after servicing stage s");
  trace.describe("smart.enumeration_bound", "at most 2^k enumerations into the interval I_k");
  trace.describe("smart.x_exists", "I_k - A is nonempty whenever level k must act");
  trace.describe("smart.service_cost", "c(x,s) < growth of the error set caused by the enumeration");
  trace.describe("smart.delay_contract", "no upsilon output lies right of A");
  trace.describe("smart.total_cost", "total cost of the enumeration <= mu(E_final) <= 1");

  const CostFunction c = config.floor_cost ? floored(c_in) : c_in;
  const std::size_t width = config.max_output;
  std::size_t levels = 0;
  while ((std::size_t{1} << (levels + 1)) <= width) ++levels;  // k < levels

  BitString a = BitString::zeros(width);
  DelayQueue queue;
  FiniteFunctional& upsilon = result.upsilon;
  std::vector<ClopenSet> u(levels);
  std::vector<ClopenSet> e_at_level(levels);  // E_k
  result.enumerations.assign(levels, 0);
  std::vector<BitString> snapshots;

  for (std::uint64_t s = 0; s <= config.horizon; ++s) {
    for (auto& ax : queue.release(a)) {
      ax.stage = s;
      if (!upsilon.try_add(ax)) {
        trace.event(s, "axiom_rejected", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}});
        continue;
      }
      trace.event(s, "axiom", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}, {"delayed", true}});
    }
    for (auto& proposal : schedule(s, a)) {
      Axiom ax{s, proposal.oracle, proposal.output};
      if (proposal.immediate) {
        DelayQueue::check_immediate(ax, a);
        if (!upsilon.try_add(ax)) {
          trace.event(s, "axiom_rejected", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}});
          continue;
        }
        trace.event(s, "axiom", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}, {"delayed", false}});
      } else {
        queue.submit(std::move(ax));
      }
    }
    for (auto& ax : queue.release(a)) {
      ax.stage = s;
      if (!upsilon.try_add(ax)) {
        trace.event(s, "axiom_rejected", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}});
        continue;
      }
      trace.event(s, "axiom", {{"oracle", ax.oracle.str()}, {"output", ax.output.str()}, {"delayed", true}});
    }

    ClopenSet e_start = error_set(upsilon, s, a);
    if (s < levels) e_at_level[s] = e_start;
    ClopenSet e_now = e_start;

    for (std::size_t k = 0; k < levels && k <= s; ++k) {
      std::size_t min_len = std::size_t{1} << (k + 1);
      u[k] = u[k].unite(prefix_set(upsilon, s, a, min_len));
      if (s <= k) continue;
      DyadicRational mu_u = u[k].measure();
      DyadicRational allowance = c(k, s) + e_start.subtract(e_at_level[k]).measure();
      if (mu_u > allowance) {
        std::optional<std::size_t> x;
        for (std::size_t y = std::size_t{1} << k; y < min_len; ++y) {
          if (!a[y]) {
            x = y;
            break;
          }
        }
        if (!trace.check("smart.x_exists", s, x.has_value(), {{"k", k}})) break;
        a = a.with_bit(*x, true);
        ++result.enumerations[k];
        ClopenSet e_next = error_set(upsilon, s, a);
        DyadicRational gain = e_next.subtract(e_now).measure();
        DyadicRational cost = c(*x, s);
        result.service_cost += cost;
        trace.event(s, "enumerate",
                    {{"k", k}, {"x", *x}, {"cost", cost.to_string()}, {"mu_U", mu_u.to_string()},
                     {"error_gain", gain.to_string()}});
        trace.check("smart.enumeration_bound", s, result.enumerations[k] <= (std::size_t{1} << k),
                    {{"k", k}, {"count", result.enumerations[k]}});
        trace.check("smart.service_cost", s, cost < gain,
                    {{"k", k}, {"x", *x}, {"cost", cost.to_string()}, {"gain", gain.to_string()}});
        e_now = std::move(e_next);
      }
    }
    // E_{s+1} is read with the stage-s functional, a subset of the one at s+1.
    for (std::size_t k = 0; k < levels && k < s; ++k) {
      DyadicRational lhs = u[k].measure();
      DyadicRational rhs = c(k, s) + e_now.subtract(e_at_level[k]).measure();
      trace.check("smart.diamond", s, lhs <= rhs, {{"k", k}, {"mu_U", lhs.to_string()}, {"bound", rhs.to_string()}});
    }
    bool none_right = true;
    for (const auto& [oracle, out] : upsilon.current_outputs(s)) {
      if (lies_left_of_padded(a.padded_prefix(std::max(a.size(), out.size())), out)) none_right = false;
    }
    trace.check("smart.delay_contract", s, none_right, {{"pending", queue.pending()}});
    snapshots.push_back(a);
  }

  result.approximation = Approximation::from_snapshots(std::move(snapshots));
  for (std::size_t x = 0; x < width; ++x) {
    if (a[x]) result.a.insert(x);
  }
  result.tests = u;
  result.final_error = error_set(upsilon, config.horizon, a).measure();
  result.total_cost = total_cost(result.approximation, c);
  bool ok = result.total_cost <= result.service_cost && result.service_cost <= result.final_error &&
            result.final_error <= DyadicRational(1);
  trace.check("smart.total_cost", config.horizon, ok,
              {{"total_cost", result.total_cost.to_string()},
               {"service_cost", result.service_cost.to_string()},
               {"final_error", result.final_error.to_string()}});
  return result;
}

}  // namespace costlab
