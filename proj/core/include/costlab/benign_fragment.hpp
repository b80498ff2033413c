#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "costlab/computable_set.hpp"
#include "costlab/cost_function.hpp"
#include "costlab/omega.hpp"
#include "costlab/trace.hpp"

namespace costlab {

// Bound on the length of eps-expensive interleaved sequences.
using BenignBoundFn = std::function<BigInt(const DyadicRational& eps)>;
BenignBoundFn reciprocal_bound();  // ceil(1/eps)

// c(n, s) read off the coupled stream, whose stages 0..s are known.
using CoupledCost = std::function<DyadicRational(const std::vector<DyadicRational>& omega, std::uint64_t n,
                                                 std::uint64_t s)>;
CoupledCost coupled_c_omega();
CoupledCost uncoupled(const CostFunction& c);

struct BenignFragmentConfig {
  std::size_t horizon = 2000;
  DyadicRational delta = DyadicRational::two_to(-1);  // a power of two
  // m_i are listed up to this value; R is that finite part.
  std::uint64_t m_limit = 4096;
};

struct BenignFragmentResult {
  std::vector<std::uint64_t> m;  // m_0 < m_1 < ...
  ComputableSet r = ComputableSet::empty();
  std::optional<LeftCEApprox> beta;
  std::optional<LeftCEApprox> omega;  // the coupled stream
  std::vector<std::size_t> fires_per_i;
  StageTrace trace;
};

// m_i least above m_{i-1} with 2^{m_i} >= g(2^-(i+1)) 2^{i+2} / delta, so the
// weighted sum stays at most 1/2.
std::vector<std::uint64_t> choose_m_sequence(const BenignBoundFn& g, const DyadicRational& delta, std::uint64_t limit);

// The coupled stream adds a quarter of each base increment, plus
// (5/4) 2^-m_i whenever beta grows by 2^-m_i / delta.
BenignFragmentResult benign_to_fragment(const CoupledCost& c, const BenignBoundFn& g, const LeftCEApprox& base,
                                        const BenignFragmentConfig& config);

}  // namespace costlab
