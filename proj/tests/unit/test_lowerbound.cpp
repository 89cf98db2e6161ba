#include <cmath>

#include <gtest/gtest.h>

#include "priorplug/detector.hpp"
#include "priorplug/divergences.hpp"
#include "priorplug/error.hpp"
#include "priorplug/lowerbound.hpp"
#include "priorplug/margin.hpp"

using namespace priorplug;

TEST(Construct, KappaTwoHundred) {
  const auto inst = construct_two_hypotheses(2, 0.01, 100);
  EXPECT_NEAR(inst.t, 0.1, 1e-15);
  EXPECT_NEAR(inst.q1, 0.6, 1e-15);
  EXPECT_EQ(inst.q0, 0.5);
  EXPECT_EQ(inst.alpha, 1.0);
}

TEST(Construct, KappaThreeTenThousand) {
  const auto inst = construct_two_hypotheses(3, 0.01, 10000);
  EXPECT_NEAR(inst.t, 0.1, 1e-15);
  EXPECT_NEAR(inst.q1, 0.51, 1e-15);
  EXPECT_NEAR(inst.q1 - inst.q0, std::pow(inst.t, 2), 1e-15);
  EXPECT_EQ(inst.alpha, 0.5);
}

TEST(Construct, RejectsSmallN) {
  EXPECT_THROW(construct_two_hypotheses(2, 0.01, 3), ConstructionError);
  EXPECT_THROW(construct_two_hypotheses(2, 0.01, 100, 0.45), ConstructionError);
}

TEST(EtaClosedForm, MatchesDensities) {
  for (double kappa : {2.0, 3.0}) {
    const auto inst = construct_two_hypotheses(kappa, 0.01, 1000);
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2000; ++i) {
        const double x = (i + 0.5) / 2000;
        EXPECT_NEAR(eta_closed_form(inst, j, x), eta(inst.pair, inst.prior(j), x), 1e-10);
      }
    }
  }
}

TEST(EtaClosedForm, EtaOneIsHalfAtZeroAndAtLeastHalf) {
  const auto inst = construct_two_hypotheses(2, 0.01, 100);
  EXPECT_DOUBLE_EQ(eta_closed_form(inst, 1, 0.0), 0.5);
  for (int i = 0; i <= 1000; ++i) EXPECT_GE(eta_closed_form(inst, 1, i / 1000.0), 0.5 - 1e-10);
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_EQ(eta_closed_form(inst, 0, x) >= 0.5, x >= inst.t) << x;
  }
}

TEST(Regions, G0StartsAtTAndG1IsEverything) {
  const auto inst = construct_two_hypotheses(2, 0.01, 100);
  const auto g0 = decision_boundaries(inst.pair, inst.q0);
  ASSERT_EQ(g0.points.size(), 1u);
  EXPECT_NEAR(g0.points[0], inst.t, 1e-10);
  const auto g1 = decision_boundaries(inst.pair, inst.q1);
  EXPECT_TRUE(g1.points.empty());
  EXPECT_EQ(g1.labels[0], Hypothesis::h1);
}

TEST(SymmetricDifference, EqualsT) {
  for (double kappa : {2.0, 3.0}) {
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto inst = construct_two_hypotheses(kappa, 0.01, n);
      EXPECT_NEAR(symmetric_difference(inst), inst.t, 1e-9);
    }
  }
  const auto inst = construct_two_hypotheses(2, 0.01, 100);
  const auto g = decision_boundaries(inst.pair, inst.q0);
  EXPECT_EQ(symmetric_difference(g, g), 0.0);
}

TEST(SymmetricDifference, GridOracle) {
  const auto inst = construct_two_hypotheses(2, 0.01, 300);
  const int m = 1'000'000;
  int differ = 0;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) / m;
    differ += classify(inst.pair, inst.q0, x) != classify(inst.pair, inst.q1, x);
  }
  EXPECT_NEAR(symmetric_difference(inst), static_cast<double>(differ) / m, 2e-6);
}

TEST(KlBudgetCheck, Values) {
  const auto inst = construct_two_hypotheses(2, 0.01, 100);
  const auto b = kl_budget_check(inst);
  EXPECT_NEAR(b.kl, 100 * bernoulli_kl(0.6, 0.5), 1e-12);
  EXPECT_LE(b.kl, b.budget);
  for (double kappa : {2.0, 3.0}) {
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto k = kl_budget_check(construct_two_hypotheses(kappa, 0.01, n));
      EXPECT_NEAR(k.budget, 8.0, 1e-12);
      EXPECT_LE(k.kl, k.budget);
    }
  }
}

TEST(KlBudgetCheck, DegenerateEqualPriors) {
  auto inst = construct_two_hypotheses(2, 0.01, 100);
  inst.q1 = inst.q0;
  EXPECT_EQ(kl_budget_check(inst).kl, 0.0);
}

TEST(Constants, ArithmeticExamples) {
  const auto k = lower_bound_constants(1.0, 2.0, 0.1);
  EXPECT_NEAR(k.c_alpha, 0.25, 1e-15);
  EXPECT_NEAR(k.c_prime, 0.25 * std::exp(-8.0) * 0.25 * 0.25, 1e-20);
  EXPECT_NEAR(k.c_prime, 5.24e-6, 1e-8);
  EXPECT_NEAR(k.epsilon0, 2.0 * 2.0 * 0.1, 1e-15);
  EXPECT_THROW(lower_bound_constants(0.0, 2.0, 0.1), ArgumentError);
  EXPECT_THROW(lower_bound_constants(1.0, 2.0, 0.7), ArgumentError);
}

TEST(Constants, EpsilonZeroAtLeastHalfT) {
  for (double kappa : {2.0, 3.0}) {
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto r = lower_bound_report(kappa, 0.01, n);
      EXPECT_GE(r.constants.epsilon0, r.instance.t / 2) << kappa << " " << n;
      EXPECT_GT(r.constants.c_prime, 0.0);
      EXPECT_NEAR(r.constants.tau_star, tau_star(r.instance), 1e-15);
    }
  }
}

TEST(Floor, Formula) {
  EXPECT_NEAR(minimax_floor(100, 1.0, 5.24e-6), 5.24e-8, 1e-20);
  double prev = INFINITY;
  for (double n = 1; n < 1e6; n *= 3) {
    const double f = minimax_floor(n, 0.5, 1e-3);
    EXPECT_LE(f, prev);
    prev = f;
  }
  EXPECT_NEAR(minimax_floor(400, 0.0, 1.0), 1.0 / 20, 1e-15);
}

TEST(Margin, FittedExponentOnBothHypotheses) {
  for (double kappa : {2.0, 3.0}) {
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto inst = construct_two_hypotheses(kappa, 0.01, n);
      for (int j = 0; j < 2; ++j) {
        const auto prof = fit_margin_exponent(hypothesis_scenario(inst, j), hypothesis_margin_grid(inst, j));
        EXPECT_NEAR(prof.alpha_hat, 1 / (kappa - 1), 0.15) << kappa << " " << n << " " << j;
      }
    }
  }
}

TEST(Report, JsonFields) {
  const auto j = to_json(lower_bound_report(2, 0.01, 100));
  EXPECT_TRUE(j.contains("kl"));
  EXPECT_TRUE(j.contains("d_delta"));
  EXPECT_TRUE(j.contains("floor"));
  EXPECT_TRUE(j.contains("constants"));
}
