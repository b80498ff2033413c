#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "costlab/approximation.hpp"
#include "costlab/capture.hpp"
#include "costlab/computable_set.hpp"
#include "costlab/functional.hpp"
#include "costlab/omega.hpp"
#include "costlab/product_clopen.hpp"
#include "costlab/trace.hpp"

namespace costlab {

// U_{n,s}: cylinders G_{omega_t | n} for the fragment on `set`, t in [n, s],
// carved to measure at most c_{Omega,set}(n, s).
TestSchedule clipped_capture_schedule(const LeftCEApprox& omega, const ComputableSet& set);

// Seeded c.e. approximation: each stage enumerates a fresh element below
// `width` with probability rate/1024.
Approximation seeded_ce_approximation(std::uint64_t seed, std::size_t horizon, std::size_t width,
                                      std::uint64_t rate_per_1024 = 96);

// Seeded functional whose axioms mostly copy A_s, with occasional wrong
// outputs; oracles come from a fixed prefix-free pool.
FiniteFunctional seeded_functional(std::uint64_t seed, const Approximation& a, std::size_t horizon);

struct RavenousConfig {
  unsigned k_max = 3;
  std::size_t horizon = 300;
};

struct RavenousLevel {
  unsigned k = 0;
  std::vector<ProductClopenSet> v;  // v[n] at the horizon
  std::vector<std::size_t> sleeps;  // per n
  std::vector<std::size_t> wakes;   // per n
  std::vector<std::uint64_t> f;     // f(0), f(1), ... up to the first truncation
  std::vector<std::uint64_t> g;
  std::optional<std::uint64_t> truncated_at;  // first s with no (f, g) pair below the horizon
  DyadicRational total_cost;  // c_{Omega,R} cost of s -> A_{f(s+1)}
  DyadicRational error_measure;
};

struct RavenousResult {
  std::vector<RavenousLevel> levels;
  std::vector<ClopenSet> error;  // E_s, s = 0..T
  StageTrace trace;
};

// The test schedule supplies U_{n,s}; the functional Phi and the c.e.
// approximation A define E_s = {Z : Phi_s(Z) lies left of A_s}.
RavenousResult run_ravenous(const ComputableSet& r, const TestSchedule& u, const FiniteFunctional& phi,
                            const Approximation& a, const LeftCEApprox& omega, const RavenousConfig& config);

}  // namespace costlab
