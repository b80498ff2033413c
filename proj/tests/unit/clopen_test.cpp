#include <gtest/gtest.h>

#include <functional>

#include "costlab/clopen.hpp"
#include "costlab/product_clopen.hpp"
#include "costlab/rng.hpp"

using namespace costlab;

namespace {

BitString b(const char* s) { return BitString(s); }

ClopenSet gens(std::initializer_list<const char*> list) {
  std::vector<BitString> out;
  for (auto s : list) out.emplace_back(s);
  return ClopenSet::from_generators(out);
}

std::vector<BitString> all_strings(std::size_t depth) {
  std::vector<BitString> out;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << depth); ++w) {
    std::string bits(depth, '0');
    for (std::size_t i = 0; i < depth; ++i) bits[i] = (w >> (depth - 1 - i)) & 1 ? '1' : '0';
    out.emplace_back(bits);
  }
  return out;
}

bool raw_member(const std::vector<BitString>& generators, const BitString& x) {
  for (const auto& g : generators) {
    if (g.is_prefix_of(x)) return true;
  }
  return false;
}

std::vector<BitString> random_generators(Rng& rng, std::size_t depth, std::size_t max_count) {
  std::vector<BitString> out;
  std::size_t count = rng.below(max_count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    std::string bits;
    std::size_t len = rng.below(depth + 1);
    for (std::size_t j = 0; j < len; ++j) bits.push_back(rng.chance(1, 2) ? '1' : '0');
    out.emplace_back(bits);
  }
  return out;
}

}  // namespace

TEST(BitString, LiesLeft) {
  EXPECT_TRUE(lies_left(b("010"), b("011")));
  EXPECT_FALSE(lies_left(b("01"), b("011")));
  EXPECT_FALSE(lies_left(b("11"), b("10")));
  EXPECT_TRUE(lies_left_of_padded(b("000"), b("01")));
  EXPECT_FALSE(lies_left_of_padded(b("010"), b("01")));
  EXPECT_TRUE(agrees_with_padded(b("0100"), b("01")));
}

TEST(BitString, Hat) {
  EXPECT_EQ(hat(b("001011")).str(), "001010");
  EXPECT_EQ(hat(b("1")).str(), "0");
  EXPECT_THROW(hat(BitString()), std::invalid_argument);
}

TEST(Clopen, MeasureExamples) {
  EXPECT_EQ(gens({""}).measure(), DyadicRational(1));
  EXPECT_EQ(gens({"00", "01", "1"}).measure(), DyadicRational(1));
  EXPECT_EQ(gens({"010", "1"}).measure(), DyadicRational::parse("5/2^3"));
  EXPECT_EQ(ClopenSet().measure(), DyadicRational());
}

TEST(Clopen, AlgebraExamples) {
  ClopenSet u = set_algebra(gens({"00"}), gens({"01"}), SetOp::union_);
  EXPECT_EQ(u, gens({"0"}));
  EXPECT_EQ(u.measure(), DyadicRational::parse("1/2^1"));
  ClopenSet diff = set_algebra(gens({"0"}), gens({"01"}), SetOp::difference);
  EXPECT_EQ(diff, gens({"00"}));
  ClopenSet meet = set_algebra(gens({"010", "1"}), gens({"01"}), SetOp::intersection);
  EXPECT_EQ(meet, gens({"010"}));
  EXPECT_EQ(meet.measure(), DyadicRational::parse("1/2^3"));
}

TEST(Clopen, CanonicalGeneratorsAreAnAntichain) {
  ClopenSet s = gens({"0", "01", "10", "11"});
  EXPECT_EQ(s, ClopenSet::whole());
  ClopenSet t = gens({"0110", "011"});
  EXPECT_EQ(t.generators().size(), 1u);
}

TEST(ClopenProperty, OperationsMatchPointwiseBruteForce) {
  constexpr std::size_t kDepth = 7;
  Rng rng(3);
  auto points = all_strings(kDepth);
  for (int round = 0; round < 300; ++round) {
    auto ga = random_generators(rng, kDepth, 6);
    auto gb = random_generators(rng, kDepth, 6);
    ClopenSet a = ClopenSet::from_generators(ga), bb = ClopenSet::from_generators(gb);
    ClopenSet u = a.unite(bb), i = a.intersect(bb), d = a.subtract(bb), c = a.complement();
    std::uint64_t in_a = 0;
    for (const auto& x : points) {
      bool xa = raw_member(ga, x), xb = raw_member(gb, x);
      in_a += xa;
      ASSERT_EQ(a.covers(x), xa);
      ASSERT_EQ(u.covers(x), xa || xb);
      ASSERT_EQ(i.covers(x), xa && xb);
      ASSERT_EQ(d.covers(x), xa && !xb);
      ASSERT_EQ(c.covers(x), !xa);
    }
    EXPECT_EQ(a.measure(), DyadicRational(BigInt(in_a), kDepth));
    EXPECT_EQ(a.subset_of(u), true);
    EXPECT_EQ(d.disjoint(bb), true);
    EXPECT_EQ(ClopenSet::from_json(a.to_json()), a);
    for (std::size_t k = 0; k + 1 < a.generators().size(); ++k) {
      EXPECT_FALSE(a.generators()[k].is_prefix_of(a.generators()[k + 1]));
    }
  }
}

TEST(ClopenProperty, CarveTakesExactMeasureFromInside) {
  Rng rng(4);
  for (int round = 0; round < 300; ++round) {
    ClopenSet from = ClopenSet::from_generators(random_generators(rng, 8, 5));
    DyadicRational mu = from.measure();
    if (mu.is_zero()) continue;
    // A random dyadic amount at most mu with denominator 2^10.
    BigInt scaled = (mu.numerator() << (10 - mu.exponent()));
    DyadicRational amount(BigInt(rng.below(scaled.convert_to<std::uint64_t>() + 1)), 10);
    ClopenSet part = carve(from, amount);
    EXPECT_EQ(part.measure(), amount);
    EXPECT_TRUE(part.subset_of(from));
  }
  EXPECT_THROW(carve(gens({"0"}), DyadicRational(1)), std::domain_error);
}

TEST(Product, MeasureAndProjectionExamples) {
  auto r = ProductClopenSet::rectangle(b("0"), b("1"));
  EXPECT_EQ(r.measure(), DyadicRational::parse("1/2^2"));
  EXPECT_EQ(r.project_first(), gens({"0"}));
  EXPECT_EQ(r.project_second(), gens({"1"}));
  auto diag = ProductClopenSet::from_rectangles({{b("0"), b("0")}, {b("1"), b("1")}});
  EXPECT_EQ(diag.measure(), DyadicRational::parse("1/2^1"));
  EXPECT_EQ(diag.project_first(), ClopenSet::whole());
  EXPECT_EQ(diag.project_second(), ClopenSet::whole());
}

// The rectangles ([00],[1]) and ([0],[11]) cover 3 of the 16 pairs of
// length-2 strings, since [00]x[11] lies in both.
TEST(Product, OverlappingRectanglesAreDisjointified) {
  auto p = ProductClopenSet::from_rectangles({{b("00"), b("1")}, {b("0"), b("11")}});
  EXPECT_EQ(p.measure(), DyadicRational::parse("3/2^4"));
  int covered = 0;
  for (const auto& x : all_strings(2)) {
    for (const auto& y : all_strings(2)) {
      bool in = (b("00").is_prefix_of(x) && b("1").is_prefix_of(y)) || (b("0").is_prefix_of(x) && b("11").is_prefix_of(y));
      covered += in;
    }
  }
  EXPECT_EQ(DyadicRational(BigInt(covered), 4), p.measure());
}

TEST(ProductProperty, AlgebraMatchesBruteForce) {
  constexpr std::size_t kDepth = 4;
  Rng rng(5);
  auto points = all_strings(kDepth);
  auto random_rects = [&] {
    std::vector<std::pair<BitString, BitString>> rects;
    std::size_t n = rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
      auto one = random_generators(rng, kDepth, 1);
      auto two = random_generators(rng, kDepth, 1);
      if (one.empty() || two.empty()) continue;
      rects.emplace_back(one[0], two[0]);
    }
    return rects;
  };
  auto member = [](const std::vector<std::pair<BitString, BitString>>& rects, const BitString& x, const BitString& y) {
    for (const auto& [s, t] : rects) {
      if (s.is_prefix_of(x) && t.is_prefix_of(y)) return true;
    }
    return false;
  };
  auto count = [&](const std::function<bool(const BitString&, const BitString&)>& pred) {
    std::uint64_t n = 0;
    for (const auto& x : points)
      for (const auto& y : points) n += pred(x, y);
    return DyadicRational(BigInt(n), 2 * kDepth);
  };
  for (int round = 0; round < 150; ++round) {
    auto ra = random_rects(), rb = random_rects();
    auto a = ProductClopenSet::from_rectangles(ra), bb = ProductClopenSet::from_rectangles(rb);
    EXPECT_EQ(a.measure(), count([&](auto& x, auto& y) { return member(ra, x, y); }));
    EXPECT_EQ(a.unite(bb).measure(), count([&](auto& x, auto& y) { return member(ra, x, y) || member(rb, x, y); }));
    EXPECT_EQ(a.intersect(bb).measure(), count([&](auto& x, auto& y) { return member(ra, x, y) && member(rb, x, y); }));
    EXPECT_EQ(a.subtract(bb).measure(), count([&](auto& x, auto& y) { return member(ra, x, y) && !member(rb, x, y); }));
    DyadicRational half = a.measure().scaled(-1);
    auto part = carve(a, half);
    EXPECT_EQ(part.measure(), half);
    EXPECT_TRUE(part.subtract(a).empty());
  }
}
