#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "costlab/clopen.hpp"
#include "costlab/computable_set.hpp"
#include "costlab/omega.hpp"
#include "costlab/trace.hpp"

namespace costlab {

// G_sigma as a single cylinder: the R-positions of sigma, in order.
BitString fragment_of(const BitString& sigma, const ComputableSet& r);

struct CaptureOptions {
  std::size_t probe = 50;  // n = 0..probe
  // Added to k_T(n) in the bound audit only; a positive value is a negative control.
  std::int64_t k_corruption = 0;
};

struct CaptureResult {
  std::vector<ClopenSet> u;  // u[n] = union over s in [n, T] of G_{omega_s | n}
  std::vector<std::size_t> distinct_prefixes;
  StageTrace trace;
};

CaptureResult build_capture_test(const LeftCEApprox& omega, const ComputableSet& r, const CaptureOptions& options = {});

// Z = X ⊕ Y with X the R-fragment and Y the co-R-fragment of sigma, as one
// cylinder of length 2 min(|X|, |Y|) plus one when X is longer.
BitString join_fragments(const BitString& sigma, const ComputableSet& r);

// U_{n, s}; must be nondecreasing in s.
using TestSchedule = std::function<ClopenSet(std::uint64_t n, std::uint64_t s)>;

TestSchedule empty_test_schedule();
// Cylinders of the joined fragments of omega_t | n for t in [n, s], carved so
// that mu(U_{n,s}) <= c_{Omega,S}(n, s) * c_{Omega,co-R}(n, s). Memoized per n.
TestSchedule clipped_join_schedule(const LeftCEApprox& omega, const ComputableSet& s_set, const ComputableSet& r);

struct NoncaptureResult {
  std::optional<std::uint64_t> k;  // nullopt: horizon too short
  ClopenSet v;
  std::vector<std::uint64_t> locations;  // locations[s - k] = n_s
  std::size_t relocations = 0;
  StageTrace trace;
  std::string report;
};

NoncaptureResult build_noncapture_open(const TestSchedule& u, const ComputableSet& s_set, const ComputableSet& r,
                                       const LeftCEApprox& omega, const DyadicRational& eps);

}  // namespace costlab
