#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "priorplug/density.hpp"
#include "priorplug/density_json.hpp"
#include "priorplug/error.hpp"
#include "priorplug/random.hpp"

using namespace priorplug;

namespace {

double mean_of(const std::vector<std::uint8_t>& y) {
  double s = 0;
  for (auto v : y) s += v;
  return s / y.size();
}

// Independent normalization oracle for the piecewise family: Simpson + bisection.
double oracle_c1(double kappa, double c, double t) {
  auto mass = [&](double c1) {
    auto left = [&](double x) {
      return (1 + 2 * c * std::pow(x, kappa - 1)) * (1 - 2 * std::pow(t, kappa - 1)) /
             (1 - 4 * c * std::pow(t * x, kappa - 1));
    };
    auto right = [&](double x) { return 1 + 2 * c1 * std::pow(x - t, kappa - 1); };
    return oracle::simpson(left, 0, t, 4000) + oracle::simpson(right, t, 1, 4000) - 1.0;
  };
  return oracle::bisect(mass, 0.0, 1.0, 80);
}

}  // namespace

TEST(Evaluate, GaussianPdfAtMean) {
  EXPECT_NEAR(evaluate(fixtures::gaussian02(), Hypothesis::h0, 0.0), 1 / std::sqrt(2 * std::numbers::pi),
              1e-15);
}

TEST(Evaluate, PiecewiseOutsideSupportIsZero) {
  const auto pair = build_appendix_a(2, 0.01, 0.1);
  EXPECT_EQ(pair.p0(-0.5), 0.0);
  EXPECT_EQ(pair.p1(-0.5), 0.0);
  EXPECT_EQ(pair.p1(1.5), 0.0);
}

TEST(Evaluate, PiecewiseP0IsTwoMinusP1) {
  for (double kappa : {2.0, 3.0}) {
    const auto pair = build_appendix_a(kappa, 0.01, 0.1);
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      EXPECT_NEAR(pair.p0(x) + pair.p1(x), 2.0, 1e-12);
    }
  }
}

TEST(Evaluate, DiscreteOffAlphabetIsZero) {
  const auto pair = default_discrete_pair();
  EXPECT_EQ(pair.p0(0.5), 0.0);
  EXPECT_DOUBLE_EQ(pair.p1(1.0), 0.7);
}

TEST(Evaluate, NonnegativeOnSupportGrid) {
  std::vector<DensityPair> pairs{fixtures::gaussian02(), build_appendix_a(2, 0.01, 0.1),
                                 build_appendix_a(3, 0.01, 0.3), DensityPair::uniform(0, 1, 0.5, 2)};
  for (const auto& p : fixtures::mixture_corpus()) pairs.push_back(p);
  for (const auto& p : pairs) {
    const double lo = p.support_lo();
    const double hi = p.support_hi();
    for (int i = 0; i < 10000; ++i) {
      const double x = lo + (hi - lo) * i / 9999.0;
      ASSERT_GE(p.p0(x), 0.0);
      ASSERT_GE(p.p1(x), 0.0);
    }
  }
}

TEST(LikelihoodRatio, Cases) {
  const auto same = DensityPair::gaussian(1, 1, 1, true);
  EXPECT_EQ(likelihood_ratio(same, 0.3), 1.0);
  EXPECT_NEAR(likelihood_ratio(fixtures::gaussian02(), 1.0), 1.0, 1e-15);
  const auto u = DensityPair::uniform(0, 1, 0.5, 2);
  EXPECT_TRUE(std::isinf(likelihood_ratio(u, 1.5)));
  EXPECT_THROW(likelihood_ratio(u, 3.0), UndefinedPointError);
}

TEST(Construction, Rejections) {
  EXPECT_THROW(DensityPair::gaussian(0, 0, 1), ArgumentError);
  EXPECT_THROW(DensityPair::gaussian(0, 1, 0), ArgumentError);
  EXPECT_THROW(DensityPair::discrete({0, 1}, {0.5, 0.6}, {0.5, 0.5}), ArgumentError);
  EXPECT_THROW(DensityPair::discrete({0, 0}, {0.5, 0.5}, {0.5, 0.5}), ArgumentError);
  EXPECT_THROW(Scenario(fixtures::gaussian02(), 0.05, 0.1), ArgumentError);
  EXPECT_THROW(Scenario(fixtures::gaussian02(), 0.3, 0.5), ArgumentError);
  EXPECT_THROW(build_appendix_a(0.5, 0.01, 0.1), ConstructionError);
}

TEST(SampleLabeled, Deterministic) {
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  RandomStream a(7);
  RandomStream b(7);
  const auto da = sample_labeled(s, 500, a);
  const auto db = sample_labeled(s, 500, b);
  EXPECT_EQ(da.x, db.x);
  EXPECT_EQ(da.y, db.y);
}

TEST(SampleLabeled, LabelMeanInBinomialBand) {
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  RandomStream rng(11);
  const auto d = sample_labeled(s, 10000, rng);
  EXPECT_NEAR(mean_of(d.y), 0.3, 3 * std::sqrt(0.3 * 0.7 / 10000));
}

TEST(SampleLabeled, PriorAtTrimEdge) {
  const Scenario s(fixtures::gaussian02(), 0.1, 0.1);
  RandomStream rng(3);
  const auto d = sample_labeled(s, 20000, rng);
  EXPECT_NEAR(mean_of(d.y), 0.1, 4 * std::sqrt(0.09 / 20000));
}

TEST(SampleLabeled, LabelFrequencyAcrossSeeds) {
  // 4 sigma band at n = 1e5 should essentially never be exceeded; allow 1 of 100.
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(seed);
    const auto y = sample_labels(0.3, 100000, rng);
    if (std::abs(mean_of(y) - 0.3) > 4 * std::sqrt(0.21 / 1e5)) ++outside;
  }
  EXPECT_LE(outside, 1);
}

TEST(SampleLabeled, LabelsMatchLabelOnlyDraw) {
  const Scenario s(fixtures::gaussian02(), 0.4, 0.1);
  RandomStream a(5);
  RandomStream b(5);
  EXPECT_EQ(sample_labeled(s, 300, a).y, sample_labels(0.4, 300, b));
}

TEST(SampleUnlabeled, DegeneratePairIgnoresPrior) {
  const auto same = DensityPair::gaussian(0, 0, 1, true);
  RandomStream a(9);
  RandomStream b(9);
  const auto x1 = sample_unlabeled(Scenario(same, 0.2, 0.1), 5000, a).x;
  const auto x2 = sample_unlabeled(Scenario(same, 0.8, 0.1), 5000, b).x;
  EXPECT_LT(oracle::ks_two_sample(x1, x2), 1.63 * std::sqrt(2.0 / 5000));
}

TEST(SampleUnlabeled, DeterministicAndEqualsDroppedLabels) {
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  RandomStream a(21);
  RandomStream b(21);
  RandomStream c(21);
  const auto u = sample_unlabeled(s, 400, a);
  EXPECT_EQ(u.x, sample_unlabeled(s, 400, b).x);
  EXPECT_EQ(u.x, drop_labels(sample_labeled(s, 400, c)).x);
}

TEST(SampleUnlabeled, KsBandAgainstMixtureCdf) {
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  RandomStream rng(1234);
  const auto x = sample_unlabeled(s, 10000, rng).x;
  auto cdf = [](double v) { return 0.7 * oracle::phi(v) + 0.3 * oracle::phi(v - 2); };
  EXPECT_LT(oracle::ks_statistic(x, cdf), 1.628 / std::sqrt(10000.0));
}

TEST(SampleUnlabeled, PiecewiseSamplesMatchCdf) {
  const auto pair = build_appendix_a(2, 0.01, 0.1);
  const Scenario s(pair, 0.5, 0.1);
  RandomStream rng(99);
  const auto x = sample_unlabeled(s, 10000, rng).x;
  auto cdf = [&](double v) {
    if (v <= 0) return 0.0;
    return oracle::simpson([&](double u) { return 0.5 * pair.p0(u) + 0.5 * pair.p1(u); }, 0, std::min(v, 1.0), 400);
  };
  EXPECT_LT(oracle::ks_statistic(x, cdf), 1.628 / std::sqrt(10000.0));
}

TEST(SampleUnlabeled, TwoSampleKsAgainstLabeledDraws) {
  const Scenario s(fixtures::gaussian02(), 0.3, 0.1);
  RandomStream a(100);
  RandomStream b(200);
  const auto u = sample_unlabeled(s, 10000, a).x;
  const auto l = drop_labels(sample_labeled(s, 10000, b)).x;
  EXPECT_LT(oracle::ks_two_sample(u, l), 1.628 * std::sqrt(2.0 / 10000));
}

TEST(Piecewise, C1MatchesIndependentOracle) {
  const auto pair = build_appendix_a(2, 0.01, 0.1);
  const auto& p = std::get<AppendixAPairParams>(pair.params());
  EXPECT_NEAR(p.c1, oracle_c1(2, 0.01, 0.1), 1e-8);
}

TEST(Piecewise, NormalizationResidual) {
  for (double kappa : {2.0, 3.0}) {
    const auto r = normalization_residual(build_appendix_a(kappa, 0.01, 0.1));
    EXPECT_LT(r.h0, 1e-8);
    EXPECT_LT(r.h1, 1e-8);
  }
}

TEST(Piecewise, C1IsOrderTPowKappa) {
  std::vector<double> ratios;
  for (double t = 0.2; t > 0.005; t /= 2) {
    const auto pair = build_appendix_a(2, 0.01, t);
    ratios.push_back(std::get<AppendixAPairParams>(pair.params()).c1 / (t * t));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LT(*hi / *lo, 4.0);
}

TEST(NormalizationResidual, GaussianAndDiscrete) {
  const auto g = normalization_residual(fixtures::gaussian02());
  EXPECT_LT(g.h0, 1e-10);
  EXPECT_LT(g.h1, 1e-10);
  const auto d = normalization_residual(default_discrete_pair());
  EXPECT_LE(d.h0, 1e-15);
  EXPECT_LE(d.h1, 1e-15);
}

TEST(NormalizationResidual, ScaledDensityFixture) {
  CustomPairParams c;
  c.p0 = [](double x) { return 1.01 * std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); };
  c.p1 = [](double x) { return std::exp(-(x - 1) * (x - 1) / 2) / std::sqrt(2 * std::numbers::pi); };
  c.lo = -12;
  c.hi = 13;
  const auto r = normalization_residual(DensityPair::custom(c));
  EXPECT_NEAR(r.h0, 0.01, 1e-9);
  EXPECT_LT(r.h1, 1e-10);
}

TEST(Json, RoundTrip) {
  const Scenario s(build_appendix_a(3, 0.01, 0.3), 0.5, 0.1);
  const auto j = scenario_to_json(s);
  const auto back = scenario_from_json(j);
  EXPECT_EQ(scenario_to_json(back), j);
  EXPECT_EQ(j.at("family"), "appendix_a");
  EXPECT_EQ(j.at("params").at("kappa"), 3.0);
}

TEST(Json, ErrorsListAllFields) {
  const nlohmann::json j = {{"family", "gaussian"}, {"params", {{"mean0", 0}}}, {"q", 2.0}, {"theta", 0.1}};
  try {
    scenario_from_json(j);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("mean1"), std::string::npos);
    EXPECT_NE(what.find("sigma"), std::string::npos);
    EXPECT_NE(what.find("q"), std::string::npos);
  }
}
