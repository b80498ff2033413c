#include <gtest/gtest.h>

#include <sstream>

#include "costlab/benign_fragment.hpp"
#include "costlab/capture.hpp"
#include "costlab/criterion.hpp"
#include "costlab/obedient.hpp"
#include "costlab/ravenous.hpp"
#include "costlab/shift.hpp"
#include "costlab/smart.hpp"

using namespace costlab;

namespace {

DyadicRational q(const char* s) { return DyadicRational::parse(s); }

std::size_t failures(const StageTrace& t) { return t.failure_count(); }

}  // namespace

TEST(Trace, StagesAndFreezing) {
  StageTrace t;
  t.describe("inv", "what it says");
  t.event(1, "start");
  EXPECT_TRUE(t.check("inv", 2, true));
  EXPECT_FALSE(t.check("inv", 3, false, {{"x", 4}}));
  EXPECT_TRUE(t.check("inv", 4, true));
  EXPECT_TRUE(t.violated());
  EXPECT_EQ(t.first_failure()->stage, 3u);
  EXPECT_THROW(t.event(2, "late"), std::logic_error);
  std::istringstream lines(t.to_jsonl());
  std::string line;
  std::getline(lines, line);
  auto ev = nlohmann::json::parse(line);
  EXPECT_EQ(ev.at("kind"), "start");
  EXPECT_TRUE(ev.at("payload").is_object());
  std::getline(lines, line);
  auto verdict = nlohmann::json::parse(line);
  EXPECT_EQ(verdict.at("invariant"), "inv");
  EXPECT_TRUE(verdict.at("pass").get<bool>());
  std::ostringstream csv;
  t.write_summary_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "invariant,anchor,checks,failures,witness");
  EXPECT_NE(csv.str().find("inv,what it says,3,1,"), std::string::npos);
}

TEST(Smart, EmptySchedule) {
  auto toy = toy_machine_stream(100);
  auto run = run_smart(c_omega(toy), empty_upsilon_schedule(), {100, 32, true});
  EXPECT_TRUE(run.a.empty());
  for (const auto& u : run.tests) EXPECT_TRUE(u.empty());
  EXPECT_TRUE(run.total_cost.is_zero());
  EXPECT_FALSE(run.trace.violated());
}

// One oracle [0] keeps copying A to length 2, so U_0 = [0] exceeds the zero
// allowance, x = 1 enters A, and [0] moves into the error set.
TEST(Smart, SingleOracleHandReplay) {
  UpsilonSchedule copy = [](std::uint64_t, const BitString& a_now) {
    return std::vector<ProposedAxiom>{{BitString("0"), a_now.padded_prefix(2), false}};
  };
  auto run = run_smart(c_zero(), copy, {20, 2, false});
  EXPECT_EQ(run.a, (std::set<std::uint64_t>{1}));
  ASSERT_EQ(run.enumerations.size(), 1u);
  EXPECT_EQ(run.enumerations[0], 1u);
  EXPECT_EQ(run.final_error, q("1/2^1"));
  EXPECT_EQ(run.tests[0], ClopenSet::cylinder(BitString("0")));
  EXPECT_FALSE(run.trace.violated()) << run.trace.first_failure()->invariant;
  EXPECT_EQ(run.approximation.least_change(1), std::optional<std::size_t>(1));
}

TEST(Smart, ImmediateAxiomRightOfAIsRejected) {
  UpsilonSchedule bad = [](std::uint64_t s, const BitString&) {
    if (s != 3) return std::vector<ProposedAxiom>{};
    return std::vector<ProposedAxiom>{{BitString("1"), BitString("0100"), true}};
  };
  auto toy = toy_machine_stream(10);
  EXPECT_THROW(run_smart(c_omega(toy), bad, {10, 8, true}), DelayContractViolation);
}

TEST(Smart, SeededRunsHoldInvariants) {
  auto toy = toy_machine_stream(200);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto run = run_smart(c_omega(toy), seeded_upsilon_schedule(seed), {200, 32, true});
    EXPECT_EQ(failures(run.trace), 0u) << "seed " << seed;
    for (std::size_t k = 0; k < run.enumerations.size(); ++k) EXPECT_LE(run.enumerations[k], std::size_t{1} << k);
    EXPECT_TRUE(run.approximation.is_ce());
  }
}

TEST(Shift, AlphaRecursion) {
  EXPECT_EQ(shift_alpha(0), DyadicRational(1));
  EXPECT_EQ(shift_alpha(1), DyadicRational(1));
  EXPECT_EQ(shift_alpha(2), q("1/2^1"));
  EXPECT_EQ(shift_alpha(3), q("1/2^3"));
}

TEST(Shift, PartialFamiliesPark) {
  auto toy = toy_machine_stream(300);
  auto d = c_fragment(toy, ComputableSet::odds());
  auto run = run_shift(d, {EnumerationScript::partial(), EnumerationScript::partial(2)}, {300});
  EXPECT_FALSE(run.trace.violated());
  EXPECT_TRUE(run.a.empty());
  EXPECT_TRUE(run.a_cost.is_zero());
  for (const auto& st : run.strategies) {
    EXPECT_EQ(st.step, 3);
    EXPECT_EQ(st.enumerations, 0u);
  }
  for (std::uint64_t s = 1; s <= 300; s += 11)
    for (std::uint64_t x = 0; x < s; x += 5) EXPECT_GE(run.c(x, s), d(x, s));
}

TEST(Shift, SingleMirrorTerminatesAfterOneCycle) {
  auto toy = toy_machine_stream(1000);
  auto run = run_shift(c_fragment(toy, ComputableSet::odds()), {EnumerationScript::mirror(1)}, {1000});
  EXPECT_FALSE(run.trace.violated());
  ASSERT_EQ(run.strategies.size(), 1u);
  const auto& st = run.strategies[0];
  EXPECT_TRUE(st.terminated);
  EXPECT_EQ(st.cycles, 1u);
  EXPECT_GE(st.ledger, DyadicRational(1));
  EXPECT_LE(st.enumeration_cost, DyadicRational(1));
}

TEST(Shift, TwoStrategiesStayWithinTheirBudgets) {
  auto toy = toy_machine_stream(1000);
  auto run = run_shift(c_fragment(toy, ComputableSet::odds()),
                       {EnumerationScript::mirror(2), EnumerationScript::mirror(1, 1)}, {1000});
  EXPECT_FALSE(run.trace.violated());
  for (const auto& st : run.strategies) {
    EXPECT_LE(st.enumeration_cost, DyadicRational::two_to(-static_cast<std::int64_t>(st.e)));
  }
  EXPECT_TRUE(check_monotone(run.c, 200).ok);
}

TEST(Shift, FixedEnumerationIsNotAShift) {
  auto toy = toy_machine_stream(200);
  auto run = run_shift(c_zero(), {EnumerationScript::fixed({0, 1, 2})}, {200});
  EXPECT_FALSE(run.trace.violated());
}

TEST(Obedient, EmptyFamily) {
  auto toy = toy_machine_stream(100);
  auto run = run_obedient_ce(c_omega(toy), {}, 100);
  EXPECT_TRUE(run.a.empty());
  EXPECT_TRUE(run.total.is_zero());
}

TEST(Obedient, NaturalsFromStageOne) {
  auto toy = toy_machine_stream(300);
  auto c = c_omega(toy);
  auto run = run_obedient_ce(c, {ce_from_stage(1, 300)}, 300);
  ASSERT_EQ(run.a.size(), 1u);
  EXPECT_TRUE(run.met[0]);
  ASSERT_EQ(run.ledger.size(), 1u);
  EXPECT_LE(run.ledger[0].cost, DyadicRational(1));
  EXPECT_FALSE(run.trace.violated());
}

TEST(Obedient, LedgerMatchesResummation) {
  auto toy = toy_machine_stream(600);
  auto c = c_omega(toy);
  std::vector<CeScript> family;
  for (std::uint64_t e = 0; e < 6; ++e) family.push_back(ce_from_stage(10 * e + 1, 200));
  family.push_back(ce_fixed({{5, {3}}, {40, {90}}}));
  auto run = run_obedient_ce(c, family, 600);
  EXPECT_FALSE(run.trace.violated());
  DyadicRational sum;
  for (std::size_t s = 1; s < run.approximation.stages(); ++s) {
    if (auto x = run.approximation.least_change(s)) sum += c(*x, s);
  }
  EXPECT_EQ(run.total, sum);
  EXPECT_LE(run.total, DyadicRational(2));
}

TEST(Capture, FragmentOfSelectsPositions) {
  EXPECT_EQ(fragment_of(BitString("1011"), ComputableSet::evens()).str(), "11");
  // For evens the join is the string itself; for odds X = 01 and Y = 110.
  EXPECT_EQ(join_fragments(BitString("10110"), ComputableSet::evens()).str(), "10110");
  EXPECT_EQ(join_fragments(BitString("10110"), ComputableSet::odds()).str(), "0111");
}

TEST(Capture, StableStreamGivesOneString) {
  auto a = LeftCEApprox::from_values({DyadicRational(), q("5/2^3"), q("5/2^3"), q("5/2^3")});
  auto res = build_capture_test(a, ComputableSet::evens(), {2, 0});
  EXPECT_FALSE(res.trace.violated());
  EXPECT_EQ(res.distinct_prefixes[2], 1u);
  EXPECT_EQ(res.u[2], ClopenSet::cylinder(BitString("1")));
}

TEST(Capture, ToyEvensAndNegativeControl) {
  auto toy = toy_machine_stream(2000);
  auto good = build_capture_test(toy, ComputableSet::evens(), {20, 0});
  EXPECT_EQ(failures(good.trace), 0u);
  for (std::size_t n = 0; n + 1 < good.u.size(); ++n) EXPECT_TRUE(good.u[n + 1].subset_of(good.u[n]));
  auto bad = build_capture_test(toy, ComputableSet::evens(), {20, 4});
  EXPECT_TRUE(bad.trace.violated());
  EXPECT_EQ(bad.trace.first_failure()->invariant, "capture.measure_bound");
}

TEST(Noncapture, EmptyScheduleAndShortHorizon) {
  auto syn = synthetic_stream(1, 2000);
  auto run = build_noncapture_open(empty_test_schedule(), ComputableSet::naturals(), ComputableSet::evens(), syn,
                                   q("1/2^6"));
  ASSERT_TRUE(run.k.has_value());
  EXPECT_TRUE(run.v.empty());
  EXPECT_FALSE(run.trace.violated());
  auto shortrun = build_noncapture_open(empty_test_schedule(), ComputableSet::naturals(), ComputableSet::evens(),
                                        synthetic_stream(1, 8), q("1/2^10"));
  EXPECT_FALSE(shortrun.k.has_value());
  EXPECT_FALSE(shortrun.report.empty());
}

TEST(Noncapture, EndToEnd) {
  auto syn = synthetic_stream(2, 2000);
  auto eps = q("1/2^10");
  auto sched = clipped_join_schedule(syn, ComputableSet::naturals(), ComputableSet::evens());
  auto run = build_noncapture_open(sched, ComputableSet::naturals(), ComputableSet::evens(), syn, eps);
  ASSERT_TRUE(run.k.has_value());
  EXPECT_EQ(failures(run.trace), 0u);
  EXPECT_LE(run.v.measure(), eps);
  EXPECT_LE(run.relocations, std::size_t{1} << (*run.k + 1));
}

TEST(Benign, MSequence) {
  auto m = choose_m_sequence(reciprocal_bound(), q("1/2^1"), 12);
  std::vector<std::uint64_t> expected{4, 6, 8, 10, 12};
  EXPECT_EQ(m, expected);
  // Weighted sum stays at most 1/2.
  DyadicRational sum;
  for (std::size_t i = 0; i < m.size(); ++i) {
    BigInt g = reciprocal_bound()(DyadicRational::two_to(-static_cast<std::int64_t>(i + 1)));
    sum += DyadicRational(g, m[i]).scaled(1);
  }
  EXPECT_LE(sum, q("1/2^1"));
  EXPECT_THROW(choose_m_sequence(reciprocal_bound(), q("3/2^2"), 12), std::invalid_argument);
}

TEST(Benign, ZeroCostKeepsBetaAtZero) {
  auto toy = toy_machine_stream(300);
  auto res = benign_to_fragment(uncoupled(c_zero()), reciprocal_bound(), toy, {300, q("1/2^1"), 64});
  EXPECT_FALSE(res.trace.violated());
  ASSERT_TRUE(res.beta.has_value());
  EXPECT_TRUE(res.beta->at(res.beta->horizon()).is_zero());
}

TEST(Benign, CoupledOmegaRun) {
  auto toy = toy_machine_stream(800);
  auto res = benign_to_fragment(coupled_c_omega(), reciprocal_bound(), toy, {800, q("1/2^1"), 4096});
  EXPECT_EQ(failures(res.trace), 0u);
  ASSERT_TRUE(res.beta.has_value());
  EXPECT_LT(res.beta->at(res.beta->horizon()), DyadicRational(1));
  for (std::size_t i = 0; i < res.fires_per_i.size(); ++i) {
    BigInt g = reciprocal_bound()(DyadicRational::two_to(-static_cast<std::int64_t>(i + 1)));
    EXPECT_LE(BigInt(res.fires_per_i[i]), g);
  }
  // Independent domination audit on a sample of pairs.
  auto c = c_omega(*res.omega);
  auto cr = c_fragment(*res.omega, res.r);
  for (std::uint64_t s = 1; s <= 800; s += 9)
    for (std::uint64_t n = 0; n < s; n += 4) EXPECT_LE(c(n, s), cr(n, s)) << n << "," << s;
}

TEST(Ravenous, EmptyScheduleStaysHungry) {
  auto syn = synthetic_stream(3, 120);
  auto a = seeded_ce_approximation(5, 120, 16, 48);
  auto res = run_ravenous(ComputableSet::evens(), empty_test_schedule(), FiniteFunctional::identity(), a, syn,
                          {2, 120});
  EXPECT_FALSE(res.trace.violated());
  for (const auto& level : res.levels) {
    for (const auto& v : level.v) EXPECT_TRUE(v.empty());
    EXPECT_TRUE(level.total_cost.is_zero());
  }
}

TEST(Ravenous, SeededRunsPassAnIndependentDisjointnessAudit) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto syn = synthetic_stream(seed, 200);
    auto a = seeded_ce_approximation(seed * 7919, 200, 24, 48);
    auto phi = seeded_functional(seed, a, 200);
    auto sched = clipped_capture_schedule(syn, ComputableSet::odds());
    auto res = run_ravenous(ComputableSet::evens(), sched, phi, a, syn, {2, 200});
    EXPECT_EQ(failures(res.trace), 0u) << "seed " << seed;
    for (const auto& level : res.levels) {
      for (std::size_t i = 0; i < level.v.size(); ++i) {
        for (std::size_t j = i + 1; j < level.v.size(); ++j) {
          EXPECT_TRUE(level.v[i].intersect(level.v[j]).empty()) << "k " << level.k << " n " << i << "," << j;
        }
      }
      EXPECT_LE(level.total_cost, level.error_measure.scaled(static_cast<std::int64_t>(level.k) + 3));
      for (std::size_t i = 0; i + 1 < level.f.size(); ++i) EXPECT_LE(level.f[i], level.f[i + 1]);
    }
  }
}

TEST(Criterion, Examples) {
  auto evens = ComputableSet::evens();
  EXPECT_EQ(criterion_check(evens, evens, 1024).b, 0);
  auto rep = criterion_check(column_union({1, 2}, 4), column_union({3, 4}, 4), 4096);
  EXPECT_LE(rep.b, 2);
  EXPECT_FALSE(rep.growing);
  auto grow = criterion_check(evens, ComputableSet::naturals(), 4096);
  EXPECT_TRUE(grow.growing);
  EXPECT_EQ(grow.b, 2048);
}

TEST(Density, PartitionCoversAndConcentrates) {
  auto one = density_partition(1, 500);
  for (std::uint64_t x = 0; x < 500; ++x) EXPECT_TRUE(one[0].contains(x));
  const std::uint64_t horizon = 1u << 20;
  auto parts = density_partition(2, horizon);
  for (std::uint64_t x = 0; x < horizon; x += 97) {
    EXPECT_NE(parts[0].contains(x), parts[1].contains(x)) << x;
  }
  for (const auto& be : density_block_ends(2, horizon)) {
    if (be.part != 0) continue;
    auto owned = parts[0].count_below(be.end);
    // owned / end > 1 - 2^-visit
    EXPECT_GT(BigInt(owned) << be.visit, BigInt(be.end) * ((BigInt(1) << be.visit) - 1)) << be.end;
  }
}
