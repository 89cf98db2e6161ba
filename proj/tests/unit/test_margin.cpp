#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "priorplug/density.hpp"
#include "priorplug/detector.hpp"
#include "priorplug/error.hpp"
#include "priorplug/margin.hpp"
#include "priorplug/numerics.hpp"

using namespace priorplug;

namespace {

double gauss(double x, double m) { return std::exp(-0.5 * (x - m) * (x - m)) / std::sqrt(2 * M_PI); }

// Boundary of q p1 = (1 - q) p0 for N(0,1) vs N(2,1).
double gaussian_boundary(double q) { return 1 + 0.5 * std::log((1 - q) / q); }

// eta'(x0) = q(1 - q)(p1' p0 - p0' p1) / f^2, with p' = -(x - m) p for unit variance.
double eta_slope(double q, double x) {
  const double p0 = gauss(x, 0);
  const double p1 = gauss(x, 2);
  const double f = q * p1 + (1 - q) * p0;
  return q * (1 - q) * (-(x - 2) * p1 * p0 + x * p0 * p1) / (f * f);
}

double marginal(double q, double x) { return q * gauss(x, 2) + (1 - q) * gauss(x, 0); }

}  // namespace

TEST(MarginProbability, VanishesAtSmallT) {
  const Scenario s(fixtures::gaussian02(), 0.5, 0.1);
  EXPECT_LT(margin_probability(s, 1e-6), 1e-3);
  EXPECT_THROW(margin_probability(s, 0.0), ArgumentError);
}

TEST(MarginProbability, GaussianMonteCarloOracle) {
  const Scenario s(fixtures::gaussian02(), 0.5, 0.1);
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> z;
  std::bernoulli_distribution y(0.5);
  const std::size_t n = 1'000'000;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (y(gen) ? 2.0 : 0.0) + z(gen);
    const double e = 0.5 * gauss(x, 2) / marginal(0.5, x);
    const double d = std::abs(e - 0.5);
    if (d > 0 && d <= 0.1) ++hit;
  }
  const double p = static_cast<double>(hit) / n;
  EXPECT_NEAR(margin_probability(s, 0.1), p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(MarginProbability, PiecewiseClosedForm) {
  for (double kappa : {2.0, 3.0}) {
    const double c = 0.01;
    const double t = kappa == 2.0 ? 0.1 : 0.3;
    const auto pair = build_appendix_a(kappa, c, t);
    const double c1 = std::get<AppendixAPairParams>(pair.params()).c1;
    const Scenario s(pair, 0.5, 0.1);
    const double tau_star = (1 - c) * std::pow(t, kappa - 1);
    for (double f : {0.01, 0.1, 0.5, 0.9}) {
      const double tau = std::min(f * tau_star, 0.9 * c1 * std::pow(1 - t, kappa - 1));
      EXPECT_NEAR(margin_probability(s, tau), std::pow(tau / c1, 1 / (kappa - 1)), 1e-6);
    }
  }
}

TEST(MarginProbability, MonotoneInT) {
  std::vector<Scenario> scenarios{Scenario(fixtures::gaussian02(), 0.3, 0.1),
                                  Scenario(build_appendix_a(2, 0.01, 0.1), 0.5, 0.1),
                                  Scenario(default_discrete_pair(), 0.5, 0.1)};
  for (const auto& pp : fixtures::mixture_corpus_priors()) scenarios.emplace_back(*pp.pair, pp.q, 0.1);
  for (const auto& s : scenarios) {
    double prev = 0.0;
    for (double t : numerics::log_spaced(1e-4, 0.5, 40)) {
      const double p = margin_probability(s, t);
      EXPECT_GE(p, prev - 1e-12);
      EXPECT_LE(p, 1.0 + 1e-12);
      prev = p;
    }
  }
}

TEST(MarginProbability, DiscreteExcludesExactTies) {
  const auto d = DensityPair::discrete({0, 1, 2}, {0.5, 0.3, 0.2}, {0.5, 0.1, 0.4});
  const Scenario s(d, 0.5, 0.1);
  // eta = (1/2, 1/4, 2/3): atom 0 sits at 1/2 and never counts.
  EXPECT_EQ(margin_probability(s, 0.1), 0.0);
  EXPECT_NEAR(margin_probability(s, 0.2), 0.5 * 0.2 + 0.5 * 0.4, 1e-15);
  EXPECT_NEAR(margin_probability(s, 0.3), 0.5 * 0.2 + 0.5 * 0.4 + 0.5 * 0.3 + 0.5 * 0.1, 1e-15);
}

TEST(Fit, ExactPowerLaw) {
  const auto grid = default_margin_grid();
  std::vector<double> p;
  for (double t : grid) p.push_back(2 * std::pow(t, 1.5));
  // 2 t^1.5 exceeds 1 nowhere on [1e-3, 0.3].
  const auto prof = fit_margin_exponent(grid, p);
  EXPECT_NEAR(prof.alpha_hat, 1.5, 1e-12);
  EXPECT_NEAR(prof.c0_hat, 2.0, 1e-11);
  EXPECT_NEAR(prof.r_squared, 1.0, 1e-12);
  EXPECT_FALSE(prof.infinite);
}

TEST(Fit, GridPreconditions) {
  const std::vector<double> few{0.01, 0.1, 0.2};
  const std::vector<double> pf{0.1, 0.2, 0.3};
  EXPECT_THROW(fit_margin_exponent(few, pf), ArgumentError);
  const auto narrow = numerics::log_spaced(0.1, 0.3, 8);
  EXPECT_THROW(fit_margin_exponent(narrow, std::vector<double>(8, 0.5)), ArgumentError);
}

TEST(Fit, InterleavedZerosRejected) {
  const auto grid = default_margin_grid();
  std::vector<double> p;
  for (double t : grid) p.push_back(t);
  p[5] = 0.0;
  EXPECT_THROW(fit_margin_exponent(grid, p), FitError);
}

TEST(Fit, DiscreteIsInfinite) {
  const Scenario s(default_discrete_pair(), 0.3, 0.1);
  const auto prof = fit_margin_exponent(s, default_margin_grid());
  EXPECT_TRUE(prof.infinite);
  EXPECT_TRUE(std::isinf(prof.alpha_hat));
  EXPECT_GT(prof.gap_c, 0.0);
  EXPECT_NEAR(margin_gap(s), 0.1, 1e-15);
  EXPECT_EQ(to_json(prof).at("alpha_hat"), "inf");
}

TEST(Fit, PiecewiseKappaTwo) {
  const Scenario s(build_appendix_a(2, 0.01, 0.1), 0.5, 0.1);
  const auto pair = s.pair();
  const double c1 = std::get<AppendixAPairParams>(pair.params()).c1;
  const double tau_max = std::min(0.99 * 0.1, c1 * 0.9);
  const auto prof = fit_margin_exponent(s, numerics::log_spaced(tau_max / 100, 0.9 * tau_max, 12));
  EXPECT_NEAR(prof.alpha_hat, 1.0, 0.15);
}

TEST(Fit, GaussianAlphaIsOne) {
  for (double q : {0.3, 0.4, 0.5, 0.6, 0.7}) {
    const Scenario s(fixtures::gaussian02(), q, 0.1);
    EXPECT_NEAR(fit_margin_exponent(s, default_margin_grid()).alpha_hat, 1.0, 0.15) << q;
  }
}

TEST(Fit, ContinuousGapIsZeroForGaussian) {
  EXPECT_LT(margin_gap(Scenario(fixtures::gaussian02(), 0.5, 0.1)), 1e-9);
}

TEST(PriorDependence, BoundaryDerivativeIdentity) {
  // The analytic eta'(x0) agrees with a central difference of the library eta.
  const auto g = fixtures::gaussian02();
  for (double q : {0.05, 0.3, 0.5}) {
    const double x0 = gaussian_boundary(q);
    const double h = 1e-6;
    const double fd = (eta(g, q, x0 + h) - eta(g, q, x0 - h)) / (2 * h);
    EXPECT_NEAR(eta_slope(q, x0), fd, 1e-6 * std::abs(fd));
  }
}

TEST(PriorDependence, SmallTConstantMatchesFirstOrderPrediction) {
  // P(|eta - 1/2| <= t) ~ 2 f_X(x0) / eta'(x0) * t as t -> 0.
  const auto g = fixtures::gaussian02();
  std::vector<double> predicted;
  std::vector<double> fitted;
  for (double q : {0.05, 0.3, 0.5}) {
    const Scenario s(g, q, 0.05);
    const double x0 = gaussian_boundary(q);
    const double c0 = 2 * marginal(q, x0) / eta_slope(q, x0);
    const double t = 1e-4;
    EXPECT_NEAR(margin_probability(s, t) / t, c0, 0.01 * c0) << q;
    predicted.push_back(c0);
    fitted.push_back(fit_margin_exponent(s, default_margin_grid()).c0_hat);
  }
  // The fitted C0 follows the predicted ordering in q.
  for (std::size_t i = 1; i < predicted.size(); ++i) {
    EXPECT_EQ(predicted[i] > predicted[i - 1], fitted[i] > fitted[i - 1]);
  }
}

TEST(Serialization, ProfileJson) {
  const auto prof = fit_margin_exponent(Scenario(fixtures::gaussian02(), 0.5, 0.1), default_margin_grid());
  const auto j = to_json(prof);
  for (const char* k : {"alpha_hat", "c0_hat", "r2", "infinite", "gap_c"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_GE(prof.r_squared, 0.0);
  EXPECT_LE(prof.r_squared, 1.0);
}
