#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "priorplug/density.hpp"
#include "priorplug/divergences.hpp"
#include "priorplug/error.hpp"
#include "priorplug/lowerbound.hpp"

using namespace priorplug;

namespace {

std::vector<double> domain(const DensityPair& p) {
  auto s = p.segments();
  return {s.begin(), s.end()};
}

double simpson_tv(const DensityPair& p) {
  auto pts = domain(p);
  return 1 - oracle::simpson_pieces([&](double x) { return std::min(p.p0(x), p.p1(x)); }, pts, 20000);
}

}  // namespace

TEST(TotalVariation, Cases) {
  EXPECT_NEAR(total_variation(DensityPair::gaussian(1, 1, 1, true)).value, 0.0, 1e-12);
  EXPECT_NEAR(total_variation(DensityPair::uniform(0, 1, 2, 3)).value, 1.0, 1e-12);
  EXPECT_NEAR(total_variation(fixtures::gaussian02()).value, 2 * oracle::phi(1) - 1, 1e-8);
  const auto d = total_variation(default_discrete_pair());
  EXPECT_NEAR(d.value, 0.5, 1e-15);
  EXPECT_EQ(d.method, DivergenceMethod::exact_sum);
}

TEST(TotalVariation, MatchesSimpsonOnCorpus) {
  for (const auto& p : fixtures::mixture_corpus()) {
    EXPECT_NEAR(total_variation(p).value, simpson_tv(p), 1e-6);
  }
}

TEST(Hellinger, Cases) {
  EXPECT_NEAR(hellinger_sq(DensityPair::gaussian(1, 1, 1, true)).value, 0.0, 1e-12);
  EXPECT_NEAR(hellinger_sq(DensityPair::uniform(0, 1, 2, 3)).value, 2.0, 1e-12);
  EXPECT_NEAR(hellinger_sq(fixtures::gaussian02()).value, 2 * (1 - std::exp(-0.5)), 1e-8);
}

TEST(ChiSq, Cases) {
  EXPECT_NEAR(chi_sq(DensityPair::gaussian(1, 1, 1, true)).value, 0.0, 1e-12);
  EXPECT_NEAR(chi_sq(fixtures::gaussian02()).value, std::exp(4.0) - 1, 1e-6);
  const auto u = DensityPair::uniform(0, 1, 0.5, 2);
  EXPECT_TRUE(std::isinf(chi_sq(u).value));
  EXPECT_TRUE(std::isinf(chi_sq(u, ChiSqOrder::p0_over_p1).value));
  // p0 on [0,1] inside p1 on [0,2]: chi2(p0 || p1) = integral 1 / 0.5 - 1 = 1.
  const auto nested = DensityPair::uniform(0, 1, 0, 2);
  EXPECT_NEAR(chi_sq(nested, ChiSqOrder::p0_over_p1).value, 1.0, 1e-10);
  EXPECT_TRUE(std::isinf(chi_sq(nested).value));
}

TEST(Chain, TvHellingerChiOnCorpus) {
  for (const auto& p : fixtures::mixture_corpus()) {
    const double v = total_variation(p).value;
    const double h = hellinger_sq(p).value;
    const double c = chi_sq(p).value;
    EXPECT_LE(v * v, h + 1e-6);
    EXPECT_LE(h, c + 1e-6);
    EXPECT_LE(v, 1.0);
    EXPECT_LE(h, 2.0);
  }
}

TEST(Symmetry, TvAndHellingerSymmetricKlChiNot) {
  const auto ab = DensityPair::gaussian(0, 1.5, 1);
  const auto ba = DensityPair::gaussian(1.5, 0, 1);
  EXPECT_NEAR(total_variation(ab).value, total_variation(ba).value, 1e-12);
  EXPECT_NEAR(hellinger_sq(ab).value, hellinger_sq(ba).value, 1e-12);
  const auto m = fixtures::mixture_corpus()[0];
  EXPECT_GT(std::abs(chi_sq(m).value - chi_sq(m, ChiSqOrder::p0_over_p1).value), 1e-6);
  EXPECT_GT(std::abs(bernoulli_kl(0.2, 0.5) - bernoulli_kl(0.5, 0.2)), 1e-3);
}

TEST(BernoulliKl, Values) {
  EXPECT_EQ(bernoulli_kl(0.5, 0.5), 0.0);
  EXPECT_NEAR(bernoulli_kl(0.25, 0.5), 0.25 * std::log(0.5) + 0.75 * std::log(1.5), 1e-15);
  EXPECT_NEAR(bernoulli_kl(0.25, 0.5), 0.130812, 1e-6);
  EXPECT_NEAR(bernoulli_kl(0.0, 0.3), -std::log(0.7), 1e-15);
  EXPECT_TRUE(std::isinf(bernoulli_kl(0.3, 0.0)));
  EXPECT_TRUE(std::isinf(bernoulli_kl(0.3, 1.0)));
  EXPECT_THROW(bernoulli_kl(1.2, 0.5), ArgumentError);
}

TEST(BernoulliKl, QuadraticBoundNearHalf) {
  int violations = 0;
  for (int i = -25; i <= 25; ++i) {
    for (int j = -25; j <= 25; ++j) {
      const double p = i / 100.0;
      const double q = j / 100.0;
      if (bernoulli_kl(0.5 - p, 0.5 - q) > 8 * (p - q) * (p - q)) ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(LabeledJointKl, MatchesJointIntegration) {
  const auto g = fixtures::gaussian02();
  for (auto [qa, qb] : {std::pair{0.3, 0.5}, {0.6, 0.5}, {0.12, 0.8}}) {
    auto integrand = [&](double x) {
      const double a1 = qa * g.p1(x);
      const double b1 = qb * g.p1(x);
      const double a0 = (1 - qa) * g.p0(x);
      const double b0 = (1 - qb) * g.p0(x);
      double s = 0;
      if (a1 > 0) s += a1 * std::log(a1 / b1);
      if (a0 > 0) s += a0 * std::log(a0 / b0);
      return s;
    };
    const double joint = oracle::simpson(integrand, -10, 12, 40000);
    EXPECT_NEAR(labeled_joint_kl(g, qa, qb), joint, 1e-8);
  }
  EXPECT_EQ(labeled_joint_kl(g, 0.4, 0.4), 0.0);
}

TEST(LabeledJointKl, TwoHypothesisBudget) {
  for (double kappa : {2.0, 3.0}) {
    const auto inst = construct_two_hypotheses(kappa, 0.01, 10000);
    const double kl = inst.n * labeled_joint_kl(inst.pair, inst.q1, inst.q0);
    EXPECT_LE(kl, 8.0 * inst.n * std::pow(inst.t, 2 * kappa - 2));
    EXPECT_LE(labeled_joint_kl(inst.pair, inst.q1, inst.q0), 8 * std::pow(inst.q1 - inst.q0, 2));
  }
}

TEST(Fisher, Cases) {
  EXPECT_NEAR(fisher_information_unlabeled(DensityPair::gaussian(0, 0, 1, true), 0.3), 0.0, 1e-14);
  EXPECT_NEAR(fisher_information_unlabeled(DensityPair::uniform(0, 1, 2, 3), 0.3), 1 / (0.3 * 0.7), 1e-9);
}

TEST(Fisher, CramerRaoOrderingOnCorpus) {
  for (const auto& pp : fixtures::mixture_corpus_priors()) {
    const double i = fisher_information_unlabeled(*pp.pair, pp.q);
    EXPECT_GE(1 / i, pp.q * (1 - pp.q) / total_variation(*pp.pair).value - 1e-9);
  }
}

TEST(Fisher, MatchesSimpson) {
  const auto& p = fixtures::mixture_corpus()[3];
  auto pts = domain(p);
  const double ref = oracle::simpson_pieces(
      [&](double x) {
        const double d = p.p1(x) - p.p0(x);
        return d * d / (0.4 * p.p1(x) + 0.6 * p.p0(x));
      },
      pts, 40000);
  EXPECT_NEAR(fisher_information_unlabeled(p, 0.4), ref, 1e-7);
}

TEST(HellingerShift, ZeroShift) { EXPECT_EQ(hellinger_shift_sq(fixtures::gaussian02(), 0.3, 0.0), 0.0); }

TEST(HellingerShift, BoundsOnGrid) {
  const double theta = 0.1;
  for (const auto* p : {&fixtures::mixture_corpus()[0], &fixtures::mixture_corpus()[7]}) {
    const double v = total_variation(*p).value;
    for (int i = 0; i < 10; ++i) {
      for (int k = 0; k < 10; ++k) {
        const double q = theta + (0.5 - theta) * i / 9;
        const double h = 0.001 + 0.039 * k;
        const double r = hellinger_shift_sq(*p, q, h);
        EXPECT_GE(r, v * v * h * h / (1 + h * h) - 1e-12);
        EXPECT_LE(r, h * h / (theta * (1 - theta)) + 1e-12);
      }
    }
  }
}

TEST(MixtureShift, TvScalesWithShift) {
  for (const auto& p : fixtures::mixture_corpus()) {
    const double v = total_variation(p).value;
    for (double h : {0.01, -0.05, 0.2}) EXPECT_NEAR(mixture_shift_tv(p, 0.4, h), std::abs(h) * v, 1e-8);
  }
}

TEST(Serialization, DivergenceJson) {
  const auto j = to_json(chi_sq(DensityPair::uniform(0, 1, 0.5, 2)));
  EXPECT_EQ(j.at("kind"), "chi_sq");
  EXPECT_EQ(j.at("value"), "inf");
  EXPECT_TRUE(j.contains("method"));
  EXPECT_TRUE(j.contains("tol"));
  EXPECT_EQ(divergence_kind_from_string("hellinger_sq"), DivergenceKind::hellinger_sq);
}
