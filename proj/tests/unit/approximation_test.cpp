#include <gtest/gtest.h>

#include "costlab/approximation.hpp"
#include "costlab/rng.hpp"

using namespace costlab;

namespace {

Approximation snaps(std::initializer_list<const char*> list) {
  std::vector<BitString> v;
  for (auto s : list) v.emplace_back(s);
  return Approximation::from_snapshots(v);
}

// (n, k) is in the change set iff position n changed at least k + 1 times.
std::set<std::pair<std::size_t, std::size_t>> flips_oracle(const Approximation& a) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t n = 0; n < a.width(); ++n) {
    std::size_t flips = 0;
    for (std::size_t s = 1; s < a.stages(); ++s) flips += a.value(s, n) != a.value(s - 1, n);
    for (std::size_t k = 0; k < flips; ++k) out.insert({n, k});
  }
  return out;
}

}  // namespace

TEST(ChangeSet, Examples) {
  EXPECT_TRUE(change_set(Approximation::constant(BitString("0110"), 5)).empty());
  auto a = snaps({"0000", "0001", "0000"});
  auto d = change_set(a);
  EXPECT_TRUE(d.contains(3, 0));
  EXPECT_TRUE(d.contains(3, 1));
  EXPECT_FALSE(d.contains(3, 2));
  auto two = change_set(snaps({"000", "100", "101"}));
  std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 0}, {2, 0}};
  EXPECT_EQ(two.entries(), expected);
  EXPECT_EQ(two.to_json().dump(), "[[0,0],[2,0]]");
}

TEST(ChangeSet, DecodeExamples) {
  ChangeSet none;
  EXPECT_FALSE(decode(none, BitString("0"), 0));
  ChangeSet twice;
  twice.add(0, 0);
  twice.add(0, 1);
  EXPECT_FALSE(decode(twice, BitString("0"), 0));
  ChangeSet once;
  once.add(0, 0);
  EXPECT_FALSE(decode(once, BitString("1"), 0));
}

TEST(ChangeSetProperty, MatchesFlipCountingOracleAndDecodes) {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    std::size_t width = 1 + rng.below(16);
    std::size_t stages = 1 + rng.below(30);
    std::vector<BitString> v;
    BitString cur = BitString::zeros(width);
    for (std::size_t i = 0; i < width; ++i) cur = cur.with_bit(i, rng.chance(1, 2));
    v.push_back(cur);
    for (std::size_t s = 1; s < stages; ++s) {
      std::size_t p = rng.below(width);
      if (rng.chance(2, 3)) cur = cur.with_bit(p, !cur[p]);
      v.push_back(cur);
    }
    auto a = Approximation::from_snapshots(v);
    auto d = change_set(a);
    std::set<std::pair<std::size_t, std::size_t>> got(d.entries().begin(), d.entries().end());
    EXPECT_EQ(got, flips_oracle(a));
    for (std::size_t n = 0; n < width; ++n) EXPECT_EQ(decode(d, a.at(0), n), a.final()[n]);
    // A prefix of the stages yields a subset of the entries.
    std::vector<std::size_t> prefix;
    for (std::size_t s = 0; s < (stages + 1) / 2; ++s) prefix.push_back(s);
    auto early = change_set(a.subsample(prefix));
    for (const auto& e : early.entries()) EXPECT_TRUE(d.contains(e.first, e.second));
  }
}

TEST(Shift, Examples) {
  EXPECT_EQ(shift(BitString("1011")).str(), "011");
  EXPECT_THROW(shift(BitString()), std::invalid_argument);
  auto a = snaps({"100", "110", "111"});
  auto b = shift(a);
  for (std::size_t s = 0; s < a.stages(); ++s) EXPECT_EQ(b.at(s), shift(a.at(s)));
  auto c = shift(Approximation::constant(BitString("0101"), 4));
  for (std::size_t s = 1; s < c.stages(); ++s) EXPECT_EQ(c.at(s), c.at(0));
}

TEST(Approximation, LeastChangeAndCe) {
  auto a = snaps({"000", "010", "011"});
  EXPECT_EQ(a.least_change(1), std::optional<std::size_t>(1));
  EXPECT_EQ(a.least_change(2), std::optional<std::size_t>(2));
  EXPECT_TRUE(a.is_ce());
  EXPECT_FALSE(snaps({"1", "0"}).is_ce());
  auto padded = snaps({"1", "101"});
  EXPECT_EQ(padded.width(), 3u);
  EXPECT_EQ(padded.at(0).str(), "100");
}
