#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/approximation.hpp"
#include "costlab/clopen.hpp"

namespace costlab {

struct Axiom {
  std::uint64_t stage = 0;
  BitString oracle;
  BitString output;
  bool operator==(const Axiom&) const = default;
};

class InconsistentAxiom : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DelayContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A finite, c.e. family of oracle computations. On a path the computed value
// is the longest output among axioms whose oracle is a prefix of it; outputs
// of comparable oracles must be comparable, and an extension never computes
// less than its prefix.
class FiniteFunctional {
 public:
  FiniteFunctional() = default;
  // X -> X with use n + 1 on output bit n.
  static FiniteFunctional identity();
  bool is_identity() const { return identity_; }

  // Throws InconsistentAxiom; stages must be nondecreasing.
  void add(Axiom axiom);
  bool try_add(const Axiom& axiom);
  bool consistent_with(const Axiom& axiom) const;

  const std::vector<Axiom>& axioms() const { return log_; }
  std::uint64_t last_stage() const { return log_.empty() ? 0 : log_.back().stage; }

  // Longest output at stage s among axioms with oracle a prefix of sigma.
  BitString eval(std::uint64_t s, const BitString& sigma) const;
  // Least l such that the output on sigma↾l has length > n, if any.
  std::optional<std::size_t> use(std::uint64_t s, const BitString& sigma, std::size_t n) const;

  // Oracles with their current (longest) output at stage s.
  std::vector<std::pair<BitString, BitString>> current_outputs(std::uint64_t s) const;

  nlohmann::json to_json() const;
  static FiniteFunctional from_json(const nlohmann::json& j);

 private:
  bool identity_ = false;
  // oracle -> (stage, output) in stage order
  std::map<BitString, std::vector<std::pair<std::uint64_t, BitString>>> by_oracle_;
  std::vector<Axiom> log_;
};

// {X : output at stage s extends sigma}
ClopenSet preimage(const FiniteFunctional& f, std::uint64_t s, const BitString& sigma);
// {X : output at stage s lies left of target}, the target read with a zero tail.
ClopenSet error_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target);
// {X : output at stage s is not a prefix of target}, the target read with a zero tail.
ClopenSet disagreement_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target);
// {X : output is a prefix of target of length >= min_length, and no output on
// X disagrees with target}
ClopenSet prefix_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target, std::size_t min_length);

// preimage of hat(sigma); empty for the empty string.
ClopenSet u_set(const FiniteFunctional& f, std::uint64_t s, const BitString& sigma);

struct SolovayAssembly {
  // b[s] for each stage s with A_s != A_{s+1}; empty otherwise.
  std::vector<ClopenSet> b;
  DyadicRational total;
};
// B_s = U at A_s↾(n_s + 1), where n_s is the least change from A_s to A_{s+1}.
SolovayAssembly solovay_assembly(const FiniteFunctional& f, const Approximation& a);

// Holds axioms whose output lies right of the current target until it no
// longer does. Release order is submission order.
class DelayQueue {
 public:
  void submit(Axiom axiom) { held_.push_back(std::move(axiom)); }
  std::vector<Axiom> release(const BitString& target);
  // Admits an axiom that bypasses the queue; throws DelayContractViolation
  // when its output lies right of the target.
  static void check_immediate(const Axiom& axiom, const BitString& target);
  std::size_t pending() const { return held_.size(); }

 private:
  std::deque<Axiom> held_;
};

}  // namespace costlab
