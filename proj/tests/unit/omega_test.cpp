#include <gtest/gtest.h>

#include <sstream>

#include "costlab/bit_string.hpp"
#include "costlab/computable_set.hpp"
#include "costlab/omega.hpp"

using namespace costlab;

namespace {

DyadicRational q(const char* s) { return DyadicRational::parse(s); }

LeftCEApprox stream(std::initializer_list<const char*> values) {
  std::vector<DyadicRational> v;
  for (auto s : values) v.push_back(q(s));
  return LeftCEApprox::from_values(v);
}

}  // namespace

TEST(ComputableSet, ColumnUnionExamples) {
  auto evens = column_union({1}, 2);
  for (std::uint64_t x = 0; x < 50; ++x) EXPECT_EQ(evens.contains(x), x % 2 == 0);
  auto all = column_union({1, 2}, 2);
  for (std::uint64_t x = 0; x < 50; ++x) EXPECT_TRUE(all.contains(x));
  EXPECT_EQ(column_union({1, 3}, 4).count_below(12), 6u);
  EXPECT_EQ(column_union({2, 4}, 4).count_below(12), 6u);
}

TEST(ComputableSet, SpecParsingAndEnumeration) {
  auto s = parse_set_spec("or:finite:1|cols:3/4");
  std::vector<std::uint64_t> expected{1, 2, 6, 10, 14};
  EXPECT_EQ(s.elements_below(15), expected);
  EXPECT_EQ(s.nth(2), std::optional<std::uint64_t>(6));
  auto n = parse_set_spec("not:evens");
  EXPECT_TRUE(n.contains(7));
  EXPECT_FALSE(n.contains(8));
  EXPECT_THROW(parse_set_spec("primes"), std::invalid_argument);
  auto counts = parse_set_spec("odds").prefix_counts(6);
  std::vector<std::uint64_t> c{0, 0, 1, 1, 2, 2, 3};
  EXPECT_EQ(counts, c);
}

TEST(Omega, ToyMachineOpensWithHalf) {
  auto toy = toy_machine_stream(50);
  EXPECT_TRUE(toy.at(0).is_zero());
  EXPECT_EQ(toy.at(1), q("1/2^1"));
  EXPECT_EQ(toy_machine_table().front().code, std::string("1"));
  EXPECT_LE(toy_machine_table().size(), 64u);
}

TEST(Omega, ToyTableIsPrefixFreeWithSumOfWeights) {
  const auto& table = toy_machine_table();
  DyadicRational weight;
  for (std::size_t i = 0; i < table.size(); ++i) {
    BitString p(table[i].code);
    weight += DyadicRational::two_to(-static_cast<std::int64_t>(p.size()));
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (i != j) EXPECT_FALSE(p.is_prefix_of(BitString(table[j].code))) << table[i].code;
    }
  }
  auto toy = toy_machine_stream(table.back().halting_stage);
  EXPECT_EQ(toy.at(toy.horizon()), weight);
  EXPECT_LT(weight, DyadicRational(1));
}

TEST(Omega, SyntheticStartsAtZeroAndIncreases) {
  auto syn = synthetic_stream(0, 200);
  EXPECT_TRUE(syn.at(0).is_zero());
  for (std::size_t s = 1; s <= syn.horizon(); ++s) EXPECT_LT(syn.at(s - 1), syn.at(s));
  EXPECT_LT(syn.at(syn.horizon()), DyadicRational(1));
}

TEST(Omega, DecreasingReplayIsRejected) {
  std::istringstream in(
      "{\"stage\": 0, \"value\": \"0/2^0\"}\n"
      "{\"stage\": 1, \"value\": \"1/2^1\"}\n"
      "{\"stage\": 2, \"value\": \"1/2^2\"}\n");
  EXPECT_THROW(read_replay(in), std::invalid_argument);
}

TEST(Omega, ReplayRoundTripKeepsNoops) {
  auto a = stream({"0", "1/2^2", "1/2^2", "3/2^3"});
  EXPECT_EQ(a.noop_stages(), std::vector<std::size_t>{2});
  std::stringstream buf;
  write_replay(buf, a);
  auto b = read_replay(buf);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(b.noop_stages(), std::vector<std::size_t>{2});
}

TEST(Omega, KIndexExamples) {
  auto a = stream({"0", "1/2^2", "1/2^2", "7/2^4"});
  EXPECT_EQ(k_index(a, 0, 1), KIndex::finite(2));  // gap 1/4
  EXPECT_TRUE(k_index(a, 1, 2).is_infinite());    // equal values
  EXPECT_EQ(k_index(a, 1, 3), KIndex::finite(2));  // gap 3/16
  EXPECT_THROW(k_index(a, 3, 1), std::invalid_argument);
}

TEST(Omega, FragmentExamples) {
  auto a = stream({"0", "11/2^4"});  // expansion 1011
  EXPECT_EQ(fragment(a, ComputableSet::evens(), 1, 2).str(), "11");
  EXPECT_EQ(fragment(a, ComputableSet::odds(), 1, 2).str(), "01");
  EXPECT_EQ(fragment(a, ComputableSet::naturals(), 1, 6).str(), "101100");
}

TEST(OmegaProperty, KIndexBracketsAndMonotonicity) {
  for (auto omega : {toy_machine_stream(400), synthetic_stream(7, 400), synthetic_stream(9, 400, {64, 3})}) {
    for (std::size_t n = 0; n < 60; ++n) {
      for (std::size_t s = n + 1; s <= omega.horizon(); s += 7) {
        KIndex k = k_index(omega, n, s);
        DyadicRational gap = omega.at(s) - omega.at(n);
        if (gap.is_zero()) {
          EXPECT_TRUE(k.is_infinite());
          continue;
        }
        auto kv = static_cast<std::int64_t>(k.value());
        EXPECT_LT(DyadicRational::two_to(-kv - 1), gap);
        EXPECT_LE(gap, DyadicRational::two_to(-kv));
        if (s + 1 <= omega.horizon()) EXPECT_LE(k_index(omega, n, s + 1), k);
        if (n + 1 < s) EXPECT_GE(k_index(omega, n + 1, s), k);
      }
    }
  }
}

TEST(OmegaProperty, FragmentsOfAPartitionInterleave) {
  auto omega = synthetic_stream(3, 100);
  auto r = parse_set_spec("cols:1,3/5");
  auto rc = r.complement();
  for (std::size_t s : {10u, 50u, 100u}) {
    BitString full = fragment(omega, ComputableSet::naturals(), s, 40);
    BitString a = fragment(omega, r, s, 16), b = fragment(omega, rc, s, 24);
    std::size_t i = 0, j = 0;
    for (std::size_t p = 0; p < 40; ++p) {
      bool bit = r.contains(p) ? a[i++] : b[j++];
      EXPECT_EQ(bit, full[p]) << "position " << p;
    }
    EXPECT_EQ(full, omega.at(s).binary_prefix(40));
  }
}
