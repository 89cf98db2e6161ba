#include "priorplug/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "priorplug/error.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::discrete:
      return "discrete";
    case Family::appendix_a:
      return "appendix_a";
    case Family::mixture:
      return "mixture";
    case Family::uniform:
      return "uniform";
    case Family::custom:
      return "custom";
  }
  return "unknown";
}

namespace {

constexpr double kTailSigmas = 10.0;
constexpr std::size_t kCdfKnots = 4096;

double gaussian_pdf(double x, double mean, double sigma) {
  return numerics::normal_pdf((x - mean) / sigma) / sigma;
}

double mixture_pdf(const std::vector<MixtureComponent>& comps, double x) {
  double sum = 0.0;
  for (const auto& c : comps) sum += c.weight * gaussian_pdf(x, c.mean, c.sigma);
  return sum;
}

double uniform_pdf(double x, double lo, double hi) {
  return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
}

double appendix_p1(const AppendixAPairParams& p, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  const double e = p.kappa - 1.0;
  if (x < p.t) {
    return (1.0 + 2.0 * p.c * std::pow(x, e)) * (1.0 - 2.0 * std::pow(p.t, e)) /
           (1.0 - 4.0 * p.c * std::pow(p.t * x, e));
  }
  return 1.0 + 2.0 * p.c1 * std::pow(x - p.t, e);
}

double appendix_p0(const AppendixAPairParams& p, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  return 2.0 - appendix_p1(p, x);
}

double discrete_mass(const DiscretePairParams& p, const std::vector<double>& w, double x) {
  for (std::size_t j = 0; j < p.alphabet.size(); ++j) {
    if (p.alphabet[j] == x) return w[j];
  }
  return 0.0;
}

void check_weights(const std::vector<double>& w, std::string_view which) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ArgumentError(fmt::format("discrete pair: {} has a negative or non-finite entry", which));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ArgumentError(fmt::format("discrete pair: {} sums to {:.17g}, not 1", which, sum));
  }
}

void check_mixture(const std::vector<MixtureComponent>& comps, std::string_view which) {
  if (comps.empty()) throw ArgumentError(fmt::format("mixture pair: {} is empty", which));
  double sum = 0.0;
  for (const auto& c : comps) {
    if (!(c.weight >= 0.0) || !(c.sigma > 0.0) || !std::isfinite(c.mean)) {
      throw ArgumentError(fmt::format("mixture pair: invalid component in {}", which));
    }
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ArgumentError(fmt::format("mixture pair: {} weights sum to {:.17g}", which, sum));
  }
}

bool same_components(const std::vector<MixtureComponent>& a,
                     const std::vector<MixtureComponent>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& l, const auto& r) {
    return l.weight == r.weight && l.mean == r.mean && l.sigma == r.sigma;
  });
}

}  // namespace

/// Tabulated CDF on a monotone knot grid; quantiles by bisection inside a cell.
class InverseCdfTable {
 public:
  InverseCdfTable(std::function<double(double)> pdf, std::span<const double> segments)
      : pdf_(std::move(pdf)) {
    const double lo = segments.front();
    const double hi = segments.back();
    knots_.reserve(kCdfKnots + segments.size());
    for (std::size_t i = 0; i < kCdfKnots; ++i) {
      knots_.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kCdfKnots - 1));
    }
    knots_.back() = hi;
    knots_.insert(knots_.end(), segments.begin(), segments.end());
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
      cumulative_[k + 1] = cumulative_[k] + cell_mass(knots_[k], knots_[k + 1]);
    }
  }

  double quantile(double u) const {
    const double total = cumulative_.back();
    const double target = u * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    std::size_t k = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    k = std::min(k, knots_.size() - 2);
    const double residual = target - cumulative_[k];
    double a = knots_[k];
    double b = knots_[k + 1];
    const double left = a;
    while (b - a > 1e-10) {
      const double mid = 0.5 * (a + b);
      if (cell_mass(left, mid) < residual) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  }

 private:
  double cell_mass(double a, double b) const {
    return boost::math::quadrature::gauss<double, 10>::integrate(pdf_, a, b);
  }

  std::function<double(double)> pdf_;
  std::vector<double> knots_;
  std::vector<double> cumulative_;
};

DensityPair::DensityPair(Family family, Params params)
    : family_(family), params_(std::move(params)) {
  finish_construction();
}

void DensityPair::finish_construction() {
  switch (family_) {
    case Family::gaussian: {
      const auto& p = std::get<GaussianPairParams>(params_);
      segments_ = {std::min(p.mean0, p.mean1) - kTailSigmas * p.sigma,
                   std::max(p.mean0, p.mean1) + kTailSigmas * p.sigma};
      degenerate_ = p.mean0 == p.mean1;
      common_support_ = true;
      break;
    }
    case Family::mixture: {
      const auto& p = std::get<MixturePairParams>(params_);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto* comps : {&p.components0, &p.components1}) {
        for (const auto& c : *comps) {
          lo = std::min(lo, c.mean - kTailSigmas * c.sigma);
          hi = std::max(hi, c.mean + kTailSigmas * c.sigma);
        }
      }
      segments_ = {lo, hi};
      degenerate_ = same_components(p.components0, p.components1);
      common_support_ = true;
      break;
    }
    case Family::uniform: {
      const auto& p = std::get<UniformPairParams>(params_);
      segments_ = {p.lo0, p.hi0, p.lo1, p.hi1};
      std::sort(segments_.begin(), segments_.end());
      segments_.erase(std::unique(segments_.begin(), segments_.end()), segments_.end());
      degenerate_ = p.lo0 == p.lo1 && p.hi0 == p.hi1;
      common_support_ = degenerate_;
      break;
    }
    case Family::appendix_a: {
      const auto& p = std::get<AppendixAPairParams>(params_);
      segments_ = {0.0, p.t, 1.0};
      degenerate_ = false;
      common_support_ = true;
      inverse0_ = std::make_shared<InverseCdfTable>([p](double x) { return appendix_p0(p, x); },
                                                    segments_);
      inverse1_ = std::make_shared<InverseCdfTable>([p](double x) { return appendix_p1(p, x); },
                                                    segments_);
      break;
    }
    case Family::custom: {
      const auto& p = std::get<CustomPairParams>(params_);
      segments_.push_back(p.lo);
      for (double b : p.breakpoints) {
        if (b > p.lo && b < p.hi) segments_.push_back(b);
      }
      segments_.push_back(p.hi);
      std::sort(segments_.begin(), segments_.end());
      segments_.erase(std::unique(segments_.begin(), segments_.end()), segments_.end());
      degenerate_ = p.identical;
      common_support_ = false;
      inverse0_ = std::make_shared<InverseCdfTable>(p.p0, segments_);
      inverse1_ = std::make_shared<InverseCdfTable>(p.p1, segments_);
      break;
    }
    case Family::discrete: {
      const auto& p = std::get<DiscretePairParams>(params_);
      const auto [mn, mx] = std::minmax_element(p.alphabet.begin(), p.alphabet.end());
      segments_ = {*mn, *mx};
      degenerate_ = p.weights0 == p.weights1;
      common_support_ = true;
      for (std::size_t j = 0; j < p.alphabet.size(); ++j) {
        if ((p.weights0[j] == 0.0) != (p.weights1[j] == 0.0)) common_support_ = false;
      }
      break;
    }
  }
}

DensityPair DensityPair::gaussian(double mean0, double mean1, double sigma,
                                  bool degenerate_equal) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError(fmt::format("gaussian pair: sigma must be > 0, got {}", sigma));
  }
  if (!std::isfinite(mean0) || !std::isfinite(mean1)) {
    throw ArgumentError("gaussian pair: means must be finite");
  }
  if (mean0 == mean1 && !degenerate_equal) {
    throw ArgumentError("gaussian pair: mean0 == mean1 requires the degenerate_equal flag");
  }
  return DensityPair(Family::gaussian, GaussianPairParams{mean0, mean1, sigma, degenerate_equal});
}

DensityPair DensityPair::discrete(std::vector<double> alphabet, std::vector<double> weights0,
                                  std::vector<double> weights1) {
  if (alphabet.empty() || alphabet.size() != weights0.size() ||
      alphabet.size() != weights1.size()) {
    throw ArgumentError("discrete pair: alphabet and weight vectors must be nonempty and equal length");
  }
  auto sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("discrete pair: alphabet points must be distinct");
  }
  check_weights(weights0, "weights0");
  check_weights(weights1, "weights1");
  return DensityPair(Family::discrete, DiscretePairParams{std::move(alphabet), std::move(weights0),
                                                          std::move(weights1)});
}

DensityPair DensityPair::mixture(std::vector<MixtureComponent> components0,
                                 std::vector<MixtureComponent> components1) {
  check_mixture(components0, "components0");
  check_mixture(components1, "components1");
  return DensityPair(Family::mixture,
                     MixturePairParams{std::move(components0), std::move(components1)});
}

DensityPair DensityPair::uniform(double lo0, double hi0, double lo1, double hi1) {
  if (!(lo0 < hi0) || !(lo1 < hi1)) {
    throw ArgumentError("uniform pair: need lo < hi for both densities");
  }
  return DensityPair(Family::uniform, UniformPairParams{lo0, hi0, lo1, hi1});
}

DensityPair DensityPair::custom(CustomPairParams params) {
  if (!params.p0 || !params.p1 || !(params.lo < params.hi)) {
    throw ArgumentError("custom pair: need both callables and lo < hi");
  }
  return DensityPair(Family::custom, std::move(params));
}

DensityPair DensityPair::appendix_a(const AppendixAPairParams& solved) {
  if (!(solved.kappa > 1.0) || !(solved.c > 0.0 && solved.c < 1.0) ||
      !(solved.t > 0.0 && solved.t < 1.0) || !(solved.c1 >= 0.0)) {
    throw ConstructionError(fmt::format(
        "appendix_a pair: need kappa > 1, c in (0,1), t in (0,1), c1 >= 0 (got {}, {}, {}, {})",
        solved.kappa, solved.c, solved.t, solved.c1));
  }
  return DensityPair(Family::appendix_a, solved);
}

double DensityPair::p0(double x) const {
  switch (family_) {
    case Family::gaussian: {
      const auto& p = std::get<GaussianPairParams>(params_);
      return gaussian_pdf(x, p.mean0, p.sigma);
    }
    case Family::discrete: {
      const auto& p = std::get<DiscretePairParams>(params_);
      return discrete_mass(p, p.weights0, x);
    }
    case Family::appendix_a:
      return appendix_p0(std::get<AppendixAPairParams>(params_), x);
    case Family::mixture:
      return mixture_pdf(std::get<MixturePairParams>(params_).components0, x);
    case Family::uniform: {
      const auto& p = std::get<UniformPairParams>(params_);
      return uniform_pdf(x, p.lo0, p.hi0);
    }
    case Family::custom: {
      const auto& p = std::get<CustomPairParams>(params_);
      return (x < p.lo || x > p.hi) ? 0.0 : p.p0(x);
    }
  }
  return 0.0;
}

double DensityPair::p1(double x) const {
  switch (family_) {
    case Family::gaussian: {
      const auto& p = std::get<GaussianPairParams>(params_);
      return gaussian_pdf(x, p.mean1, p.sigma);
    }
    case Family::discrete: {
      const auto& p = std::get<DiscretePairParams>(params_);
      return discrete_mass(p, p.weights1, x);
    }
    case Family::appendix_a:
      return appendix_p1(std::get<AppendixAPairParams>(params_), x);
    case Family::mixture:
      return mixture_pdf(std::get<MixturePairParams>(params_).components1, x);
    case Family::uniform: {
      const auto& p = std::get<UniformPairParams>(params_);
      return uniform_pdf(x, p.lo1, p.hi1);
    }
    case Family::custom: {
      const auto& p = std::get<CustomPairParams>(params_);
      return (x < p.lo || x > p.hi) ? 0.0 : p.p1(x);
    }
  }
  return 0.0;
}

std::span<const double> DensityPair::atoms() const noexcept {
  if (const auto* p = std::get_if<DiscretePairParams>(&params_)) return p->alphabet;
  return {};
}

std::span<const double> DensityPair::weights(Hypothesis h) const noexcept {
  if (const auto* p = std::get_if<DiscretePairParams>(&params_)) {
    return h == Hypothesis::h0 ? std::span<const double>(p->weights0)
                               : std::span<const double>(p->weights1);
  }
  return {};
}

double DensityPair::sample(Hypothesis h, RandomStream& rng) const {
  switch (family_) {
    case Family::gaussian: {
      const auto& p = std::get<GaussianPairParams>(params_);
      return (h == Hypothesis::h0 ? p.mean0 : p.mean1) + p.sigma * rng.normal();
    }
    case Family::mixture: {
      const auto& p = std::get<MixturePairParams>(params_);
      const auto& comps = h == Hypothesis::h0 ? p.components0 : p.components1;
      const double u = rng.uniform();
      double acc = 0.0;
      const MixtureComponent* chosen = &comps.back();
      for (const auto& c : comps) {
        acc += c.weight;
        if (u < acc) {
          chosen = &c;
          break;
        }
      }
      return chosen->mean + chosen->sigma * rng.normal();
    }
    case Family::uniform: {
      const auto& p = std::get<UniformPairParams>(params_);
      const double lo = h == Hypothesis::h0 ? p.lo0 : p.lo1;
      const double hi = h == Hypothesis::h0 ? p.hi0 : p.hi1;
      return lo + (hi - lo) * rng.uniform();
    }
    case Family::discrete: {
      const auto& p = std::get<DiscretePairParams>(params_);
      const auto& w = h == Hypothesis::h0 ? p.weights0 : p.weights1;
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t last_positive = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] <= 0.0) continue;
        last_positive = j;
        acc += w[j];
        if (u < acc) return p.alphabet[j];
      }
      return p.alphabet[last_positive];
    }
    case Family::appendix_a:
    case Family::custom:
      return (h == Hypothesis::h0 ? inverse0_ : inverse1_)->quantile(rng.uniform());
  }
  return 0.0;
}

Scenario::Scenario(DensityPair pair, double q, double theta)
    : pair_(std::move(pair)), q_(q), theta_(theta) {
  if (!(theta > 0.0 && theta < 0.5)) {
    throw ArgumentError(fmt::format("scenario: theta must lie in (0, 1/2), got {}", theta));
  }
  if (!(q >= theta && q <= 1.0 - theta)) {
    throw ArgumentError(
        fmt::format("scenario: q = {} outside the trim interval [{}, {}]", q, theta, 1.0 - theta));
  }
}

double evaluate(const DensityPair& pair, Hypothesis h, double x) { return pair.density(h, x); }

double likelihood_ratio(const DensityPair& pair, double x) {
  const double a0 = pair.p0(x);
  const double a1 = pair.p1(x);
  if (a0 == 0.0) {
    if (a1 == 0.0) throw UndefinedPointError(x);
    return std::numeric_limits<double>::infinity();
  }
  return a1 / a0;
}

std::vector<std::uint8_t> sample_labels(double q, std::size_t n, RandomStream& rng) {
  std::vector<std::uint8_t> y(n);
  for (auto& v : y) v = rng.bernoulli(q) ? 1 : 0;
  return y;
}

LabeledDataset sample_labeled(const Scenario& scenario, std::size_t n, RandomStream& rng) {
  if (n == 0) throw ArgumentError("sample_labeled: n must be >= 1");
  LabeledDataset data;
  data.seed = rng.seed();
  data.y = sample_labels(scenario.q(), n, rng);
  data.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.x[i] = scenario.pair().sample(data.y[i] ? Hypothesis::h1 : Hypothesis::h0, rng);
  }
  return data;
}

UnlabeledDataset sample_unlabeled(const Scenario& scenario, std::size_t n, RandomStream& rng) {
  if (n == 0) throw ArgumentError("sample_unlabeled: n must be >= 1");
  return drop_labels(sample_labeled(scenario, n, rng));
}

UnlabeledDataset drop_labels(LabeledDataset data) { return {std::move(data.x), data.seed}; }

DensityPair default_discrete_pair() {
  return DensityPair::discrete({0.0, 1.0}, {0.8, 0.2}, {0.3, 0.7});
}

DensityPair build_appendix_a(double kappa, double c, double t) {
  if (!(kappa > 1.0) || !(c > 0.0 && c < 1.0) || !(t > 0.0 && t < 1.0)) {
    throw ConstructionError(fmt::format(
        "build_appendix_a: need kappa > 1, 0 < c < 1, 0 < t < 1 (got kappa={}, c={}, t={})", kappa,
        c, t));
  }
  AppendixAPairParams params{kappa, c, t, 0.0};
  if (!(4.0 * c * std::pow(t, 2.0 * kappa - 2.0) < 1.0)) {
    throw ConstructionError("build_appendix_a: 1 - 4c t^(2kappa-2) must be positive");
  }
  const std::vector<double> pieces{0.0, t, 1.0};
  auto mass_minus_one = [&](double c1) {
    AppendixAPairParams trial = params;
    trial.c1 = c1;
    return numerics::integrate_pieces([&](double x) { return appendix_p1(trial, x); }, pieces,
                                      1e-10, 1e-13)
               .value -
           1.0;
  };
  const double f_lo = mass_minus_one(0.0);
  const double f_hi = mass_minus_one(1.0);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw ConstructionError(fmt::format(
        "build_appendix_a: normalization has no sign change on c1 in [0, 1] "
        "(residual {:.3g} at c1=0, {:.3g} at c1=1; kappa={}, c={}, t={})",
        f_lo, f_hi, kappa, c, t));
  }
  params.c1 = numerics::bisect_root(mass_minus_one, 0.0, 1.0, 1e-12);

  // p1 is monotone on each piece, so positivity of both densities is decided
  // at the piece ends.
  for (double x : {0.0, std::nextafter(t, 0.0), t, 1.0}) {
    const double v = appendix_p1(params, x);
    if (!(v > 0.0 && v < 2.0)) {
      throw ConstructionError(fmt::format(
          "build_appendix_a: p1({}) = {} leaves [0, 2]; p0 = 2 - p1 would not be positive", x, v));
    }
  }
  return DensityPair::appendix_a(params);
}

NormalizationResidual normalization_residual(const DensityPair& pair) {
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    return {std::abs(std::accumulate(w0.begin(), w0.end(), 0.0) - 1.0),
            std::abs(std::accumulate(w1.begin(), w1.end(), 0.0) - 1.0)};
  }
  const auto seg = pair.segments();
  const double m0 =
      numerics::integrate_pieces([&](double x) { return pair.p0(x); }, seg, 1e-12, 1e-13).value;
  const double m1 =
      numerics::integrate_pieces([&](double x) { return pair.p1(x); }, seg, 1e-12, 1e-13).value;
  return {std::abs(m0 - 1.0), std::abs(m1 - 1.0)};
}

}  // namespace priorplug
