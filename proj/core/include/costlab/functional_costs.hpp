#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/cost_function.hpp"
#include "costlab/functional.hpp"

namespace costlab {

class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// c_A(x, s) = measure of the union over x < t <= s of V_{x,t}, where V_{x,t}
// holds the oracles Y whose output on upsilon at t is a prefix of C_t with
// A_t↾(x+1) a prefix of psi's output on it. Requires A_s↾s to be a prefix of
// psi's output on C_s for every s <= horizon.
CostFunction build_cA(const Approximation& c_enum, const Approximation& a, const FiniteFunctional& psi,
                      const FiniteFunctional& upsilon, std::size_t horizon);
// A c.e.: C = A and psi is the identity.
CostFunction build_cA(const Approximation& a, const FiniteFunctional& upsilon, std::size_t horizon);

struct ObedienceEntry {
  std::size_t stage;     // s, the change from A_s to A_{s+1}
  std::size_t position;  // least changed x
  DyadicRational cost;   // c_A(x, s)
  DyadicRational bound;  // measure of E_{s+1} - E_{x+1}
  bool ok = true;
};
struct ObedienceLedger {
  std::vector<ObedienceEntry> entries;
  DyadicRational total_cost;
  DyadicRational total_bound;
  DyadicRational final_error;  // measure of E at the horizon
  bool ok = true;
  nlohmann::json to_json() const;
};
// Per change: c_A(x, s) <= mu(E_{s+1} - E_{x+1}), E_t the oracles whose
// upsilon output lies left of C_t.
ObedienceLedger obedience_ledger(const CostFunction& c_a, const Approximation& c_enum, const Approximation& a,
                                 const FiniteFunctional& upsilon, std::size_t horizon);

struct GammaStage {
  std::size_t stage;
  DyadicRational error_mass;
  DyadicRational accumulated_cost;
  DyadicRational live_mass;
  bool identity_ok = true;
};
struct GammaResult {
  FiniteFunctional gamma;
  std::vector<GammaStage> stages;
  bool ok = true;
  std::optional<std::size_t> aborted_at;
  std::string message;
};
// Builds Gamma so that at every stage t the oracles computing A_{f(t)}↾(x+1)
// outside the Gamma error set have measure exactly c(x, t). A must be c.e.;
// f maps stage t to a stage of a (identity when empty).
GammaResult gamma_allocate(const Approximation& a, const CostFunction& c, const std::vector<std::size_t>& speedup,
                           std::size_t horizon);

// Prefixes every oracle with 0^e 1.
FiniteFunctional tag_family(const FiniteFunctional& f, unsigned e);

}  // namespace costlab
