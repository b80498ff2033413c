#include <gtest/gtest.h>

#include "costlab/functional.hpp"
#include "costlab/functional_costs.hpp"
#include "costlab/rng.hpp"

using namespace costlab;

namespace {

BitString b(const char* s) { return BitString(s); }

}  // namespace

TEST(Functional, ConsistencyRules) {
  FiniteFunctional f;
  f.add({0, b("0"), b("01")});
  EXPECT_FALSE(f.try_add({1, b("00"), b("1")}));   // incomparable output below
  EXPECT_FALSE(f.try_add({1, b("00"), b("0")}));   // extension computes less
  EXPECT_TRUE(f.try_add({1, b("00"), b("011")}));
  EXPECT_FALSE(f.try_add({0, b("1"), b("1")}));    // stage went backwards
  EXPECT_THROW(f.add({2, b(""), b("1")}), InconsistentAxiom);
}

// Regression: an oracle may later grow its own output even though a longer
// oracle below it already has a longer output.
TEST(Functional, SameOracleMayExtendItsOutput) {
  FiniteFunctional f;
  f.add({0, b("0"), b("1")});
  f.add({1, b("01"), b("101")});
  EXPECT_TRUE(f.try_add({2, b("0"), b("10")}));
  EXPECT_EQ(f.eval(2, b("0")).str(), "10");
  EXPECT_EQ(f.eval(1, b("0")).str(), "1");
  EXPECT_EQ(f.eval(2, b("011")).str(), "101");
}

TEST(Functional, IdentityUse) {
  auto id = FiniteFunctional::identity();
  EXPECT_EQ(id.eval(9, b("0110")).str(), "0110");
  EXPECT_EQ(id.use(0, b("0110"), 2), std::optional<std::size_t>(3));
  EXPECT_FALSE(id.try_add({0, b("0"), b("0")}));
}

TEST(Functional, PreimageExamples) {
  FiniteFunctional none;
  EXPECT_TRUE(preimage(none, 5, b("0")).empty());
  FiniteFunctional f;
  f.add({0, b("0"), b("01")});
  EXPECT_EQ(preimage(f, 0, b("0")), ClopenSet::cylinder(b("0")));
  EXPECT_EQ(preimage(f, 0, b("0")).measure(), DyadicRational::parse("1/2^1"));
  f.add({0, b("11"), b("")});
  EXPECT_EQ(preimage(f, 0, BitString()), ClopenSet::from_generators({b("0"), b("11")}));
}

TEST(Functional, ErrorSetExamples) {
  FiniteFunctional f;
  f.add({0, b("0"), b("10")});
  EXPECT_EQ(error_set(f, 0, b("11")), ClopenSet::cylinder(b("0")));
  FiniteFunctional g;
  g.add({0, b("1"), b("01")});
  EXPECT_TRUE(error_set(g, 0, b("00")).empty());
}

TEST(FunctionalProperty, ErrorSetGrowsAsTargetMovesRight) {
  Rng rng(21);
  for (int round = 0; round < 40; ++round) {
    FiniteFunctional f;
    for (int i = 0; i < 30; ++i) {
      std::string o, out;
      for (std::size_t j = 0, n = 1 + rng.below(6); j < n; ++j) o.push_back(rng.chance(1, 2) ? '1' : '0');
      for (std::size_t j = 0, n = rng.below(8); j < n; ++j) out.push_back(rng.chance(1, 2) ? '1' : '0');
      f.try_add({0, BitString(o), BitString(out)});
    }
    BitString target = BitString::zeros(8);
    DyadicRational last;
    for (int step = 0; step < 8; ++step) {
      target = target.with_bit(rng.below(8), true);
      DyadicRational mu = error_set(f, 0, target).measure();
      EXPECT_GE(mu, last);
      last = mu;
    }
  }
}

TEST(Functional, HatChainDisjointness) {
  FiniteFunctional f;
  // Oracles of depth 6 computing every output of length 4.
  Rng rng(2);
  for (std::uint64_t w = 0; w < 64; ++w) {
    std::string o, out;
    for (int i = 5; i >= 0; --i) o.push_back((w >> i) & 1 ? '1' : '0');
    for (int i = 0; i < 4; ++i) out.push_back(rng.chance(1, 2) ? '1' : '0');
    f.add({0, BitString(o), BitString(out)});
  }
  std::vector<BitString> chain{b("1"), b("10"), b("101"), b("1011")};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      EXPECT_TRUE(u_set(f, 0, chain[i]).disjoint(u_set(f, 0, chain[j])));
    }
  }
  EXPECT_TRUE(u_set(f, 0, BitString()).empty());
}

TEST(Functional, SolovayAssembly) {
  FiniteFunctional f;
  auto constant = Approximation::constant(b("000"), 4);
  EXPECT_TRUE(solovay_assembly(f, constant).total.is_zero());
  f.add({0, b("01"), b("01")});
  // A changes at position 1 between stages 0 and 1; hat(00) = 01.
  auto a = Approximation::from_snapshots({b("000"), b("010")});
  auto sa = solovay_assembly(f, a);
  EXPECT_EQ(sa.total, DyadicRational::parse("1/2^2"));
  EXPECT_EQ(sa.b[0], ClopenSet::cylinder(b("01")));
}

TEST(FunctionalProperty, SolovayMatchesResummation) {
  Rng rng(8);
  for (int round = 0; round < 30; ++round) {
    FiniteFunctional f;
    std::vector<BitString> snaps{BitString::zeros(6)};
    for (std::uint64_t s = 0; s < 12; ++s) {
      std::string o, out;
      for (std::size_t j = 0, n = 1 + rng.below(5); j < n; ++j) o.push_back(rng.chance(1, 2) ? '1' : '0');
      for (std::size_t j = 0, n = 1 + rng.below(6); j < n; ++j) out.push_back(rng.chance(1, 2) ? '1' : '0');
      f.try_add({s, BitString(o), BitString(out)});
      BitString next = snaps.back();
      if (rng.chance(1, 2)) next = next.with_bit(rng.below(6), rng.chance(1, 2));
      snaps.push_back(next);
    }
    auto a = Approximation::from_snapshots(snaps);
    DyadicRational oracle;
    for (std::size_t s = 0; s + 1 < snaps.size(); ++s) {
      std::optional<std::size_t> n;
      for (std::size_t x = 0; x < 6; ++x) {
        if (snaps[s][x] != snaps[s + 1][x]) {
          n = x;
          break;
        }
      }
      if (!n) continue;
      BitString hatted = snaps[s].prefix(*n + 1).with_bit(*n, !snaps[s][*n]);
      std::vector<BitString> gens;
      for (const auto& ax : f.axioms()) {
        if (ax.stage <= s && hatted.is_prefix_of(f.eval(s, ax.oracle))) gens.push_back(ax.oracle);
      }
      oracle += ClopenSet::from_generators(gens).measure();
    }
    EXPECT_EQ(solovay_assembly(f, a).total, oracle);
  }
}

TEST(FunctionalCosts, CaWithoutAxiomsIsZero) {
  auto a = Approximation::from_snapshots({b("000"), b("100"), b("110")});
  auto c = build_cA(a, FiniteFunctional(), 2);
  for (std::uint64_t s = 0; s <= 2; ++s)
    for (std::uint64_t x = 0; x < 3; ++x) EXPECT_TRUE(c(x, s).is_zero());
}

TEST(FunctionalCosts, CaSingleOracle) {
  auto a = Approximation::from_snapshots({b("000"), b("000"), b("100"), b("100")});
  FiniteFunctional upsilon;
  upsilon.add({2, b("11"), b("1")});
  auto c = build_cA(a, upsilon, 3);
  EXPECT_TRUE(c(0, 1).is_zero());
  EXPECT_EQ(c(0, 2), DyadicRational::parse("1/2^2"));
  EXPECT_EQ(c(0, 3), DyadicRational::parse("1/2^2"));
  EXPECT_TRUE(check_monotone(c, 3).ok);
}

TEST(FunctionalCosts, GammaExamples) {
  auto quiet = Approximation::constant(b("00"), 4);
  auto none = gamma_allocate(quiet, c_zero(), {}, 3);
  EXPECT_TRUE(none.ok);
  EXPECT_TRUE(none.gamma.axioms().empty());

  auto quarter = c_table("quarter", {{}, {DyadicRational::parse("1/2^2")}, {DyadicRational::parse("1/2^2")},
                                     {DyadicRational::parse("1/2^2")}});
  auto steady = gamma_allocate(quiet, quarter, {}, 3);
  ASSERT_TRUE(steady.ok) << steady.message;
  EXPECT_EQ(steady.stages.back().live_mass, DyadicRational::parse("1/2^2"));
  EXPECT_TRUE(steady.stages.back().error_mass.is_zero());

  auto flip = Approximation::from_snapshots({b("00"), b("00"), b("10"), b("10")});
  auto moved = gamma_allocate(flip, quarter, {}, 3);
  ASSERT_TRUE(moved.ok) << moved.message;
  EXPECT_EQ(moved.stages.back().error_mass, DyadicRational::parse("1/2^2"));
  for (const auto& st : moved.stages) EXPECT_TRUE(st.identity_ok);
}
