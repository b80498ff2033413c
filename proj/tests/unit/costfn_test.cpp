#include <gtest/gtest.h>

#include <functional>

#include "costlab/cost_function.hpp"
#include "costlab/rng.hpp"
#include "costlab/speedup.hpp"

using namespace costlab;

namespace {

DyadicRational q(const char* s) { return DyadicRational::parse(s); }

LeftCEApprox stream(std::initializer_list<const char*> values) {
  std::vector<DyadicRational> v;
  for (auto s : values) v.push_back(q(s));
  return LeftCEApprox::from_values(v);
}

// Longest interleaved n1 < s1 <= n2 < s2 <= ... with every c(n, s) >= eps,
// by plain recursion over all choices.
std::size_t brute_longest(const CostFunction& c, const DyadicRational& eps, std::uint64_t from, std::uint64_t horizon) {
  std::size_t best = 0;
  for (std::uint64_t n = from; n < horizon; ++n) {
    for (std::uint64_t s = n + 1; s <= horizon; ++s) {
      if (c(n, s) >= eps) best = std::max(best, 1 + brute_longest(c, eps, s, horizon));
    }
  }
  return best;
}

}  // namespace

TEST(CostFunction, OmegaExamples) {
  auto a = stream({"0", "1/2^2", "1/2^1"});
  auto c = c_omega(a);
  EXPECT_TRUE(c(2, 2).is_zero());
  EXPECT_EQ(c(1, 2), q("1/2^2"));
  EXPECT_TRUE(c(5, 2).is_zero());
}

TEST(CostFunction, FragmentExamples) {
  auto a = stream({"0", "1/2^3"});  // k_1(0) = 3
  EXPECT_EQ(c_fragment(a, ComputableSet::naturals())(0, 1), q("1/2^3"));
  EXPECT_EQ(c_fragment(a, ComputableSet::evens())(0, 1), q("1/2^2"));
  auto big = stream({"0", "3/2^2"});  // k_1(0) = 0
  EXPECT_EQ(c_fragment(big, ComputableSet::evens())(0, 1), DyadicRational(1));
  auto flat = stream({"0", "0"});
  EXPECT_TRUE(c_fragment(flat, ComputableSet::naturals())(0, 1).is_zero());
}

TEST(CostFunction, PowerProfileMatchesFragment) {
  auto toy = toy_machine_stream(300);
  auto full = c_power_profile(toy, 3, 3);
  auto nat = c_fragment(toy, ComputableSet::naturals());
  auto half = c_power_profile(toy, 1, 2);
  for (std::uint64_t s = 1; s <= 300; s += 13) {
    for (std::uint64_t n = 0; n < s; n += 3) {
      EXPECT_EQ(full(n, s), nat(n, s));
      KIndex k = k_index(toy, n, s);
      if (k.is_infinite()) continue;
      auto expected = DyadicRational::two_to(-static_cast<std::int64_t>((k.value() + 1) / 2));
      EXPECT_EQ(half(n, s), expected);
      EXPECT_TRUE(power_ratio_within(toy, 1, 2, n, s, 1));
    }
  }
}

TEST(CostFunction, ShippedConstructorsAreMonotone) {
  auto toy = toy_machine_stream(200);
  auto syn = synthetic_stream(5, 200, {32, 2});
  for (const auto* omega : {&toy, &syn}) {
    for (auto c : {c_omega(*omega), c_fragment(*omega, ComputableSet::evens()),
                   c_fragment(*omega, parse_set_spec("cols:2/3")), c_power_profile(*omega, 2, 3),
                   floored(c_omega(*omega)), c_zero()}) {
      auto rep = check_monotone(c, 200);
      EXPECT_TRUE(rep.ok) << c.name() << " " << rep.failed_condition;
      EXPECT_GT(rep.checks, 0u);
    }
  }
}

TEST(CostFunction, CorruptedEvalIsFlagged) {
  auto toy = toy_machine_stream(100);
  auto base = c_omega(toy);
  CostFunction bad("bad", CostKind::custom, [base](std::uint64_t x, std::uint64_t s) {
    return s == 50 && x == 3 ? DyadicRational() : base(x, s);
  });
  auto rep = check_monotone(bad, 100);
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.witness.has_value());
  auto profile = limit_profile(
      CostFunction("bump", CostKind::custom, [](std::uint64_t x, std::uint64_t) { return x == 4 ? q("1/2^1") : q("1/2^3"); }),
      10);
  EXPECT_FALSE(profile.nonincreasing);
}

TEST(CostFunction, NestedFragmentsOrder) {
  auto toy = toy_machine_stream(300);
  auto small = c_fragment(toy, parse_set_spec("cols:1/4"));
  auto large = c_fragment(toy, ComputableSet::evens());
  for (std::uint64_t s = 1; s <= 300; s += 7)
    for (std::uint64_t n = 0; n < s; ++n) EXPECT_GE(small(n, s), large(n, s));
}

TEST(CostFunction, ProductIdentity) {
  auto toy = toy_machine_stream(300);
  EXPECT_TRUE(product_identity_check(toy, ComputableSet::evens(), 300).pass);
  EXPECT_TRUE(product_identity_check(toy, parse_set_spec("or:finite:0|odds"), 300).pass);
  auto r = c_fragment(toy, ComputableSet::evens());
  CostFunction corrupted("corrupt", CostKind::custom, [r](std::uint64_t n, std::uint64_t s) {
    return n == 2 && s == 40 ? r(n, s).scaled(1) : r(n, s);
  });
  auto rep = product_identity_check(corrupted, c_fragment(toy, ComputableSet::odds()), toy, 300);
  EXPECT_FALSE(rep.pass);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(*rep.witness, std::make_pair(std::uint64_t{2}, std::uint64_t{40}));
}

TEST(CostFunction, LimitProfileOfOmega) {
  auto toy = toy_machine_stream(100);
  auto p = limit_profile(c_omega(toy), 100);
  EXPECT_TRUE(p.nonincreasing);
  for (std::uint64_t x = 0; x <= 100; ++x) EXPECT_EQ(p.values[x], toy.at(100) - toy.at(x));
}

TEST(TotalCost, Examples) {
  auto toy = toy_machine_stream(20);
  auto c = c_omega(toy);
  EXPECT_TRUE(total_cost(Approximation::constant(BitString("0101"), 10), c).is_zero());
  std::vector<BitString> snaps(6, BitString("0000"));
  snaps[5] = BitString("0010");
  EXPECT_EQ(total_cost(Approximation::from_snapshots(snaps), c), c(2, 5));
}

TEST(TotalCostProperty, ResummationAndNoopInvariance) {
  auto syn = synthetic_stream(4, 60);
  auto c = c_fragment(syn, ComputableSet::odds());
  Rng rng(6);
  for (int round = 0; round < 50; ++round) {
    std::vector<BitString> snaps{BitString::zeros(10)};
    for (int s = 1; s <= 40; ++s) {
      BitString next = snaps.back();
      // Positions below s, so the zero convention for x >= s never applies.
      if (rng.chance(1, 3)) next = next.with_bit(rng.below(std::min(10, s)), rng.chance(1, 2));
      snaps.push_back(next);
    }
    auto a = Approximation::from_snapshots(snaps);
    DyadicRational oracle;
    for (std::size_t s = 1; s < snaps.size(); ++s) {
      for (std::size_t x = 0; x < 10; ++x) {
        if (snaps[s][x] != snaps[s - 1][x]) {
          oracle += c(x, s);
          break;
        }
      }
    }
    EXPECT_EQ(total_cost(a, c), oracle);
    DyadicRational ledger;
    for (const auto& charge : cost_ledger(a, c)) ledger += charge.cost;
    EXPECT_EQ(ledger, oracle);
    // A repeated stage shifts later stage indices, so compare against a
    // stage-independent cost.
    auto flat = CostFunction("flat", CostKind::custom, [](std::uint64_t x, std::uint64_t) {
      return DyadicRational::two_to(-static_cast<std::int64_t>(x));
    });
    EXPECT_EQ(total_cost(a.with_repeated_stage(rng.below(a.stages())), flat), total_cost(a, flat));
  }
}

TEST(Dominates, SelfAndHalfStream) {
  auto toy = toy_machine_stream(500);
  auto c = c_omega(toy);
  auto self = dominates(c, c, 500);
  ASSERT_TRUE(self.exponent.has_value());
  EXPECT_EQ(*self.exponent, 0);
  std::vector<DyadicRational> halves;
  for (const auto& v : toy.values()) halves.push_back(v.scaled(-1));
  auto alpha = c_omega(LeftCEApprox::from_values(halves));
  auto rep = dominates(c, alpha, 500);
  ASSERT_TRUE(rep.exponent.has_value());
  EXPECT_LE(*rep.exponent, 1);
  EXPECT_FALSE(rep.counterexample.has_value());
}

TEST(Dominates, FragmentsWithBoundedDifference) {
  // |S ∩ m| <= |R ∩ m| + 1 for S = odds, R = evens.
  auto toy = toy_machine_stream(500);
  auto rep = dominates(c_fragment(toy, ComputableSet::odds()), c_fragment(toy, ComputableSet::evens()), 500);
  ASSERT_TRUE(rep.exponent.has_value());
  EXPECT_LE(*rep.exponent, 1);
}

TEST(Dominates, ConstantsCompose) {
  auto toy = toy_machine_stream(400);
  auto a = c_fragment(toy, ComputableSet::naturals());
  auto b = c_fragment(toy, parse_set_spec("cols:1,2/3"));
  auto c = c_fragment(toy, ComputableSet::evens());
  auto ab = dominates(a, b, 400), bc = dominates(b, c, 400), ac = dominates(a, c, 400);
  if (ab.exponent && bc.exponent && ac.exponent) {
    EXPECT_LE(*ac.exponent, *ab.exponent + *bc.exponent);
  } else {
    EXPECT_TRUE(ac.growing || ab.growing || bc.growing);
  }
}

TEST(Benign, BoundExamples) {
  EXPECT_EQ(benign_bound(BenignKind::omega, q("1/2^3")), BigInt(8));
  auto evens = ComputableSet::evens();
  EXPECT_EQ(benign_bound(BenignKind::fragment, q("1/2^3"), &evens), BigInt(128));
  EXPECT_EQ(benign_bound(BenignKind::omega, DyadicRational(1)), BigInt(1));
  EXPECT_EQ(benign_bound(BenignKind::omega, q("3/2^4")), BigInt(6));
}

TEST(Benign, WitnessVerify) {
  auto toy = toy_machine_stream(100);
  auto c = c_omega(toy);
  EXPECT_TRUE(benign_witness_verify(c, q("1/2^2"), {}, BigInt(4)).pass);
  auto vac = benign_witness_verify(c, q("1/2^2"), {{50, 60}}, BigInt(0));
  EXPECT_TRUE(vac.pass);
  EXPECT_TRUE(vac.vacuous);
  EXPECT_THROW(benign_witness_verify(c, q("1/2^2"), {{3, 5}, {4, 9}}, BigInt(4)), std::invalid_argument);
  EXPECT_THROW(benign_witness_verify(c, q("1/2^2"), {{5, 5}}, BigInt(4)), std::invalid_argument);
}

TEST(Benign, ToySearchWithinBound) {
  auto toy = toy_machine_stream(2000);
  auto c = c_omega(toy);
  auto eps = q("1/2^2");
  auto seq = longest_benign_sequence(c, eps, 2000);
  EXPECT_LE(seq.size(), 4u);
  EXPECT_TRUE(benign_witness_verify(c, eps, seq, benign_bound(BenignKind::omega, eps)).pass);
}

TEST(BenignProperty, LongestSequenceMatchesBruteForce) {
  Rng rng(13);
  for (int round = 0; round < 25; ++round) {
    auto omega = synthetic_stream(rng.next(), 9, {256, 1});
    for (auto c : {c_omega(omega), c_fragment(omega, ComputableSet::evens())}) {
      for (const char* e : {"1/2^2", "1/2^4", "1/2^6"}) {
        auto eps = q(e);
        auto seq = longest_benign_sequence(c, eps, 9);
        EXPECT_EQ(seq.size(), brute_longest(c, eps, 0, 9)) << c.name() << " eps " << e;
        EXPECT_FALSE(benign_witness_verify(c, eps, seq, BigInt(seq.size())).vacuous);
      }
    }
  }
}

TEST(Speedup, IdentityAndConstantFunctionals) {
  auto toy = toy_machine_stream(200);
  std::vector<BitString> snaps{BitString::zeros(12)};
  for (std::size_t s = 1; s <= 200; ++s) {
    BitString next = snaps.back();
    if (s % 17 == 0) next = next.with_bit((s / 17) % 12, true);
    snaps.push_back(next);
  }
  auto b = Approximation::from_snapshots(snaps);
  auto run = speedup_transfer(b, FiniteFunctional::identity(), toy, ComputableSet::evens(), 3);
  EXPECT_TRUE(run.ledger_ok);
  for (std::size_t i = 0; i < run.a.stages(); ++i) {
    EXPECT_TRUE(run.a.at(i).prefix(i).is_prefix_of(b.at(run.stages[i]).padded_prefix(std::max<std::size_t>(i, 12))));
  }
  FiniteFunctional constant;
  constant.add({0, BitString(), BitString::zeros(40)});
  auto flat = speedup_transfer(b, constant, toy, ComputableSet::evens(), 3);
  EXPECT_TRUE(flat.total_a.is_zero());
}
