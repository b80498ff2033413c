#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/approximation.hpp"
#include "costlab/computable_set.hpp"
#include "costlab/dyadic.hpp"
#include "costlab/omega.hpp"

namespace costlab {

enum class CostKind { additive, fragment, custom };
std::string to_string(CostKind kind);

// c(x, s); the wrapper returns 0 whenever x >= s.
class CostFunction {
 public:
  using Eval = std::function<DyadicRational(std::uint64_t, std::uint64_t)>;

  CostFunction(std::string name, CostKind kind, Eval eval);

  DyadicRational operator()(std::uint64_t x, std::uint64_t s) const;
  const std::string& name() const { return name_; }
  CostKind kind() const { return kind_; }

 private:
  std::string name_;
  CostKind kind_;
  std::shared_ptr<const Eval> eval_;
};

// c(x, s) = omega_s - omega_x
CostFunction c_omega(const LeftCEApprox& omega);
// c(n, s) = 2^-|R ∩ k_s(n)|, and 0 when k_s(n) is infinite.
CostFunction c_fragment(const LeftCEApprox& omega, const ComputableSet& r);
// c_fragment over the first k of n columns.
CostFunction c_power_profile(const LeftCEApprox& omega, unsigned k, unsigned n);
// Zero everywhere.
CostFunction c_zero();
// max(c(x, s), 2^-x) for x < s.
CostFunction floored(const CostFunction& c);
// Table lookup, values[s][x] for x < s; zero beyond the table.
CostFunction c_table(std::string name, std::vector<std::vector<DyadicRational>> values);

struct MonotonicityReport {
  bool ok = true;
  std::uint64_t checks = 0;
  // (x, s) where c(x, s) > c(x, s + 1) or c(x, s) < c(x + 1, s)
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
  std::string failed_condition;
};
MonotonicityReport check_monotone(const CostFunction& c, std::uint64_t horizon);

struct ProductIdentityReport {
  bool pass = true;
  std::uint64_t checks = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
};
// c_R(n, s) * c_Rc(n, s) == 2^-k_s(n), with 0 on both sides for an infinite index.
ProductIdentityReport product_identity_check(const CostFunction& c_r, const CostFunction& c_rc,
                                             const LeftCEApprox& omega, std::uint64_t horizon);
ProductIdentityReport product_identity_check(const LeftCEApprox& omega, const ComputableSet& r, std::uint64_t horizon);

// Bracket check for the discrete power profile: 2^-e <= ratio <= 2^e with
// ratio = c(n, s) / (omega_s - omega_n)^(k/n), compared through n-th powers.
bool power_ratio_within(const LeftCEApprox& omega, unsigned k, unsigned n, std::uint64_t x, std::uint64_t s,
                        unsigned e);

// Sum over stages s >= 1 of c(x, s), x the least change from A_{s-1} to A_s.
DyadicRational total_cost(const Approximation& a, const CostFunction& c);
// Same sum with an explicit list of (x, s) charges.
struct CostCharge {
  std::uint64_t stage;
  std::uint64_t position;
  DyadicRational cost;
};
std::vector<CostCharge> cost_ledger(const Approximation& a, const CostFunction& c);

struct DominationReport {
  // log2 of the least power-of-two constant; nullopt when d vanishes on all probes.
  std::optional<std::int64_t> exponent;
  bool growing = false;
  // Probe where d > 0 but c = 0, forcing an unbounded constant.
  std::optional<std::uint64_t> counterexample;
  std::vector<std::pair<std::uint64_t, std::int64_t>> profile;  // (x, required exponent)
  nlohmann::json to_json() const;
};
// Least kappa = 2^j with d(x, T) <= kappa c(x, T) on a geometric grid plus
// the change points of either limit column; flags a growing requirement.
DominationReport dominates(const CostFunction& c, const CostFunction& d, std::uint64_t horizon);
std::vector<std::uint64_t> probe_set(const CostFunction& c, const CostFunction& d, std::uint64_t horizon);

enum class BenignKind { omega, fragment };
// ceil(1/eps) for c_omega; 2^m for the least m with 2^-|R∩m| < eps.
BigInt benign_bound(BenignKind kind, const DyadicRational& eps, const ComputableSet* r = nullptr,
                    std::uint64_t scan_limit = 4096);

struct BenignPair {
  std::uint64_t n;
  std::uint64_t s;
};
struct BenignVerdict {
  bool pass = true;
  bool vacuous = false;
  std::size_t length = 0;
};
// Throws on malformed interleaving n1 < s1 <= n2 < s2 <= ...
BenignVerdict benign_witness_verify(const CostFunction& c, const DyadicRational& eps,
                                    const std::vector<BenignPair>& sequence, const BigInt& bound);
// A longest interleaved sequence with every cost >= eps and s <= horizon.
// Uses that c(n, s) is nonincreasing in n and nondecreasing in s.
std::vector<BenignPair> longest_benign_sequence(const CostFunction& c, const DyadicRational& eps,
                                                std::uint64_t horizon);

struct LimitProfile {
  std::vector<DyadicRational> values;  // c(x, T) for x <= T
  bool nonincreasing = true;
  std::optional<std::uint64_t> first_violation;
  DyadicRational tail_max;  // max over x >= T/2
};
LimitProfile limit_profile(const CostFunction& c, std::uint64_t horizon);

// Rows x,s,value for x < s <= horizon.
void write_cost_csv(std::ostream& out, const CostFunction& c, std::uint64_t horizon);

}  // namespace costlab
