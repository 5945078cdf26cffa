#include "hlmax/verify.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hlmax;

namespace {

OperatorParams params(Rational alpha, Rounding r = Rounding::Ceil) {
  OperatorParams p;
  p.alpha = alpha;
  p.rounding = r;
  return p;
}

DiscreteFunction delta0() { return DiscreteFunction(0, {Rational(1)}); }
DiscreteFunction two_points() { return DiscreteFunction::indicator({0, 4}); }

Rational num(const json& j) { return Rational::parse(j.get<std::string>()); }

}  // namespace

TEST(Claims, NamesRoundTrip) {
  for (auto c : {Claim::TheoremDiscrete, Claim::TheoremContinuousGrid, Claim::LemmaDominate, Claim::LemmaPlateau, Claim::PropExtremos,
                 Claim::PeakTransfer}) {
    EXPECT_EQ(parse_claim(to_string(c)), c);
  }
  EXPECT_THROW(parse_claim("lemma"), InputError);
}

// Interior jumps add up to 16/5; the range cuts off the two tails, whose
// values at the ends come from the naive oracle.
TEST(TheoremDiscrete, TwoPointIndicator) {
  const auto p = params(Rational(1, 3));
  const auto rep = check_theorem_discrete(two_points(), p, IntRange{-50, 54});
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_TRUE(rep.range_relative);
  EXPECT_EQ(num(rep.numbers["var_f"]), Rational(4));
  const Rational left_end = oracle::maximal(two_points(), -50, p).value;
  const Rational right_end = oracle::maximal(two_points(), 54, p).value;
  EXPECT_EQ(left_end, Rational(2, 81));
  EXPECT_EQ(right_end, Rational(2, 81));
  const Rational v = num(rep.numbers["var_maximal"]);
  EXPECT_EQ(v, Rational(16, 5) - left_end - right_end);
  std::vector<Rational> naive;
  for (std::int64_t x = -50; x <= 54; ++x) naive.push_back(oracle::maximal(two_points(), x, p).value);
  EXPECT_EQ(v, oracle::variation(naive));
}

TEST(TheoremDiscrete, CentredDelta) {
  const auto rep = check_theorem_discrete(delta0(), params(Rational(0)), IntRange{-50, 50});
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(num(rep.numbers["var_maximal"]), Rational(2) * (Rational(1) - Rational(1, 101)));
  EXPECT_EQ(num(rep.numbers["var_f"]), Rational(2));
}

TEST(TheoremDiscrete, ZeroFunction) {
  const auto rep = check_theorem_discrete(DiscreteFunction(), params(Rational(1, 3)), IntRange{-5, 5});
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(num(rep.numbers["var_maximal"]), Rational(0));
  EXPECT_EQ(num(rep.numbers["var_f"]), Rational(0));
}

TEST(TheoremDiscrete, ViolationFromForgedProfile) {
  // a profile that oscillates more than f can: the checker must flag it
  DiscreteProfile profile{IntRange{0, 2}, {}};
  for (const Rational& v : {Rational(0), Rational(5), Rational(0)}) {
    DiscreteEvaluation e;
    e.value = v;
    e.enclosure_upper = v;
    profile.evaluations.push_back(e);
  }
  const auto rep = check_theorem_discrete(delta0(), params(Rational(1, 3)), profile);
  EXPECT_EQ(rep.verdict, Verdict::Violated);
  EXPECT_FALSE(rep.range_relative);
  EXPECT_FALSE(rep.witnesses.empty());
}

TEST(TheoremDiscrete, NonzeroTailsUseEnclosures) {
  const DiscreteFunction f(0, {Rational(2), Rational(0)}, Rational(0), Rational(1));
  const auto rep = check_theorem_discrete(f, params(Rational(1, 2)), IntRange{-20, 20});
  EXPECT_NE(rep.verdict, Verdict::Violated);
  EXPECT_EQ(num(rep.numbers["var_f"]), Rational(5));
}

TEST(LemmaDominate, Examples) {
  EXPECT_EQ(check_lemma_dominate(two_points(), params(Rational(1, 3)), IntRange{-10, 14}).verdict, Verdict::Holds);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> v;
    for (int k = 0; k < 5; ++k) v.emplace_back(static_cast<std::int64_t>(rng() % 4));
    const auto rep = check_lemma_dominate(DiscreteFunction(0, v), params(Rational(static_cast<std::int64_t>(rng() % 3), 2)), IntRange{-6, 10});
    EXPECT_EQ(rep.verdict, Verdict::Holds);
  }
}

// Mutant evaluator that drops the R = 0 window: the spike beats every wider
// window, so the checker has to catch it at the spike.
TEST(LemmaDominate, MutantWithoutRadiusZeroIsCaught) {
  const auto f = delta0();
  const auto p = params(Rational(1, 3));
  DiscreteProfile mutant{IntRange{-3, 3}, {}};
  for (std::int64_t x = -3; x <= 3; ++x) {
    Rational best(0);
    for (std::int64_t R = 1; R <= 20; ++R) {
      for (std::int64_t y = x - R; y <= x + R; ++y) {
        if (oracle::admissible(x, y, R, p)) best = max(best, oracle::window_average(f, y, R));
      }
    }
    DiscreteEvaluation e;
    e.value = best;
    e.enclosure_upper = best;
    mutant.evaluations.push_back(e);
  }
  const auto rep = check_lemma_dominate(f, p, mutant);
  EXPECT_EQ(rep.verdict, Verdict::Violated);
  ASSERT_EQ(rep.witnesses.size(), 1u);
  EXPECT_EQ(rep.witnesses[0]["x"], 0);
}

TEST(LemmaPlateau, CeilHoldsOnTwoPoints) {
  const auto rep = check_lemma_plateau(two_points(), params(Rational(1, 3)), IntRange{-10, 14});
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(rep.numbers["plateaus"], 2);
  ASSERT_EQ(rep.witnesses.size(), 2u);
  EXPECT_EQ(rep.witnesses[0]["m_prime"], 0);
  EXPECT_EQ(rep.witnesses[1]["m_prime"], 4);
}

TEST(LemmaPlateau, FloorFailsAtTheMidpoint) {
  const auto rep = check_lemma_plateau(two_points(), params(Rational(1, 3), Rounding::Floor), IntRange{-10, 14});
  EXPECT_EQ(rep.verdict, Verdict::Violated);
  bool found = false;
  for (const auto& w : rep.witnesses) {
    if (w["m_prime"].is_null()) {
      found = true;
      EXPECT_EQ(w["r"], 2);
      EXPECT_EQ(num(w["K"]), Rational(2, 5));
      EXPECT_EQ(w["plateau_range"], json::array({2, 2}));
    }
  }
  EXPECT_TRUE(found);
}

TEST(LemmaPlateau, DeltaHoldsForEveryAperture) {
  for (const auto& a : {Rational(0), Rational(1, 3), Rational(1), Rational(5, 2)}) {
    const auto rep = check_lemma_plateau(delta0(), params(a), IntRange{-8, 8});
    EXPECT_EQ(rep.verdict, Verdict::Holds) << a;
    EXPECT_EQ(rep.numbers["plateaus"], 1);
  }
}

TEST(LemmaPlateau, BoundaryRunsAreInconclusive) {
  // range cut at the spike: the run {0} touches the boundary
  const auto rep = check_lemma_plateau(delta0(), params(Rational(1, 3)), IntRange{0, 5});
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
  EXPECT_EQ(rep.numbers["boundary_runs"], 1);
}

TEST(ScanPlateaus, FindsStrictRunsOnly) {
  DiscreteProfile profile{IntRange{0, 7}, {}};
  for (int v : {0, 2, 2, 1, 3, 3, 3, 0}) {
    DiscreteEvaluation e;
    e.value = Rational(v);
    e.enclosure_upper = e.value;
    profile.evaluations.push_back(e);
  }
  const auto scan = scan_plateaus(profile);
  ASSERT_EQ(scan.plateaus.size(), 2u);
  EXPECT_EQ(scan.plateaus[0], (IntRange{1, 2}));
  EXPECT_EQ(scan.plateaus[1], (IntRange{4, 6}));
  EXPECT_TRUE(scan.boundary_runs.empty());
}

TEST(PropExtremos, Examples) {
  const auto a = check_prop_extremos(two_points(), params(Rational(1, 3)), 2, 4);
  EXPECT_EQ(a.verdict, Verdict::Holds);
  EXPECT_EQ(a.witnesses[0]["z"], 2);
  EXPECT_EQ(a.witnesses[0]["w"], 4);
  EXPECT_EQ(num(a.numbers["difference"]), Rational(3, 5));

  const auto b = check_prop_extremos(delta0(), params(Rational(0)), 3, 0);
  EXPECT_EQ(b.verdict, Verdict::Holds);
  EXPECT_EQ(b.witnesses[0]["z"], 3);
  EXPECT_EQ(b.witnesses[0]["w"], 0);
  EXPECT_EQ(num(b.numbers["difference"]), Rational(6, 7));

  const auto c = check_prop_extremos(delta0(), params(Rational(1, 3)), 2, 2);
  EXPECT_EQ(c.verdict, Verdict::Holds);
  EXPECT_EQ(num(c.numbers["difference"]), Rational(0));
}

TEST(PropExtremos, SwapsWhenNeeded) {
  const auto rep = check_prop_extremos(delta0(), params(Rational(0)), 0, 3);
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(rep.numbers["swapped"], true);
  EXPECT_EQ(rep.witnesses[0]["x"], 3);
}

// The batch checker agrees with the pair-by-pair one.
TEST(PropExtremos, AllPairsMatchesSingleChecks) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> v;
    for (int k = 0; k < 4; ++k) v.emplace_back(static_cast<std::int64_t>(rng() % 3));
    const DiscreteFunction f(0, v);
    const auto p = params(std::vector<Rational>{Rational(1, 3), Rational(1, 2), Rational(1)}[rng() % 3]);
    const IntRange range{-4, 7};
    const auto all = check_prop_extremos_all_pairs(f, p, range);
    bool single_ok = true;
    for (std::int64_t x = range.first; x <= range.last; ++x) {
      for (std::int64_t y = range.first; y <= range.last; ++y) {
        if (x != y && !check_prop_extremos(f, p, x, y).holds()) single_ok = false;
      }
    }
    EXPECT_EQ(all.holds(), single_ok);
    EXPECT_EQ(all.verdict, Verdict::Holds);
    EXPECT_GT(all.numbers["pairs"].get<std::uint64_t>(), 0u);
  }
}

TEST(PeakTransfer, SpecSystem) {
  const auto p = params(Rational(1, 3));
  const DiscreteMaximalOperator op(two_points(), p);
  PeakSystem<std::int64_t> system;
  system.peaks.push_back(Peak<std::int64_t>{2, 4, 6, Rational(2, 5), Rational(1), Rational(1, 3)});
  const auto rep = check_peak_transfer(op, system);
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(rep.witnesses[0]["a"], json::array({2, 6}));
  EXPECT_EQ(rep.witnesses[0]["b"], json::array({4}));
  EXPECT_EQ(num(rep.numbers["var_system_maximal"]), Rational(2) - Rational(2, 5) - Rational(1, 3));
  EXPECT_EQ(num(rep.numbers["var_system_f"]), Rational(2));
}

TEST(PeakTransfer, ConstantFunctionIsVacuous) {
  const DiscreteFunction c(0, {}, Rational(0), Rational(0));
  const auto rep = check_peak_transfer(c, params(Rational(1, 3)), IntRange{-5, 5});
  EXPECT_EQ(rep.verdict, Verdict::Holds);
  EXPECT_EQ(num(rep.numbers["var_system_maximal"]), Rational(0));
}

TEST(PeakTransfer, ProfileSystemsHoldAboveOneThird) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Rational> v;
    for (int k = 0; k < 5; ++k) v.emplace_back(static_cast<std::int64_t>(rng() % 4));
    const auto rep = check_peak_transfer(DiscreteFunction(0, v), params(Rational(1, 3)), IntRange{-25, 30});
    EXPECT_EQ(rep.verdict, Verdict::Holds) << rep.to_json().dump();
  }
}

TEST(PeakTransfer, RejectsMalformedSystem) {
  const DiscreteMaximalOperator op(two_points(), params(Rational(1, 3)));
  PeakSystem<std::int64_t> bad;
  bad.peaks.push_back(Peak<std::int64_t>{4, 2, 6, Rational(0), Rational(1), Rational(0)});
  EXPECT_THROW(check_peak_transfer(op, bad), std::invalid_argument);
}

TEST(PeakTransferContinuous, TwoBoxesOnAGrid) {
  const StepFunction f({Rational(0), Rational(1), Rational(4), Rational(5)}, {Rational(3), Rational(0), Rational(1)});
  const ContinuousMaximalOperator op(f, Rational(1, 2));
  const auto rep = check_peak_transfer_continuous(op, uniform_grid(Rational(-2), Rational(7), 91));
  EXPECT_EQ(rep.verdict, Verdict::Holds) << rep.to_json().dump();
  EXPECT_FALSE(rep.witnesses.empty());
}

TEST(TheoremContinuousGrid, HoldsAndRefinementOnlyGrows) {
  const StepFunction f({Rational(0), Rational(1), Rational(4), Rational(5)}, {Rational(3), Rational(0), Rational(1)});
  const ContinuousMaximalOperator op(f, Rational(1, 2));
  const auto coarse = check_theorem_continuous_grid(op, uniform_grid(Rational(-2), Rational(7), 19));
  const auto fine = check_theorem_continuous_grid(op, uniform_grid(Rational(-2), Rational(7), 73));
  EXPECT_EQ(coarse.verdict, Verdict::Holds);
  EXPECT_EQ(fine.verdict, Verdict::Holds);
  EXPECT_LE(num(coarse.numbers["var_sampled"]), num(fine.numbers["var_sampled"]));
  EXPECT_EQ(num(fine.numbers["var_f"]), Rational(8));
}

TEST(InductionInequality, HoldsUpToAMillion) { EXPECT_FALSE(check_induction_inequality(1'000'000)); }

TEST(Reports, DigestIsStableAndSensitive) {
  const auto a = check_theorem_discrete(two_points(), params(Rational(1, 3)), IntRange{-5, 9});
  const auto b = check_theorem_discrete(two_points(), params(Rational(1, 3)), IntRange{-5, 9});
  const auto c = check_theorem_discrete(two_points(), params(Rational(1, 2)), IntRange{-5, 9});
  EXPECT_EQ(a.input_digest, b.input_digest);
  EXPECT_NE(a.input_digest, c.input_digest);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.to_json()["claim"], "theorem");
}
