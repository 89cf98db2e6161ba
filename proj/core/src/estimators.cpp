#include "priorplug/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "priorplug/error.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 0.5)) {
    throw ArgumentError(fmt::format("trim bound theta must lie in (0, 1/2), got {}", theta));
  }
}

}  // namespace

std::string_view to_string(EstimatorMode mode) noexcept {
  return mode == EstimatorMode::labeled ? "labeled" : "unlabeled";
}

EstimatorMode estimator_mode_from_string(std::string_view s) {
  if (s == "labeled") return EstimatorMode::labeled;
  if (s == "unlabeled") return EstimatorMode::unlabeled;
  throw ArgumentError(fmt::format("unknown estimator mode '{}'", s));
}

EstimateResult mle_labeled(std::span<const std::uint8_t> labels, double theta) {
  check_theta(theta);
  if (labels.empty()) throw ArgumentError("mle_labeled: labels must be nonempty");
  std::size_t ones = 0;
  for (auto y : labels) {
    if (y > 1) throw ArgumentError("mle_labeled: labels must be 0 or 1");
    ones += y;
  }
  const double mean = static_cast<double>(ones) / static_cast<double>(labels.size());
  EstimateResult r;
  r.mode = EstimatorMode::labeled;
  r.q_hat = std::clamp(mean, theta, 1.0 - theta);
  r.trimmed = r.q_hat != mean;
  return r;
}

MixtureLikelihood::MixtureLikelihood(const DensityPair& pair, std::span<const double> samples) {
  p0_.reserve(samples.size());
  p1_.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a0 = pair.p0(samples[i]);
    const double a1 = pair.p1(samples[i]);
    if (a0 == 0.0 && a1 == 0.0) throw DegenerateSampleError(i, samples[i]);
    if (a0 != a1) flat_ = false;
    p0_.push_back(a0);
    p1_.push_back(a1);
  }
}

LogLikProfile MixtureLikelihood::profile(double q) const {
  LogLikProfile out;
  for (std::size_t i = 0; i < p0_.size(); ++i) {
    const double f = q * p1_[i] + (1.0 - q) * p0_[i];
    if (!(f > 0.0)) throw DegenerateSampleError(i, std::nan(""));
    const double d = p1_[i] - p0_[i];
    const double s = d / f;
    out.value += std::log(f);
    out.first_derivative += s;
    out.second_derivative -= s * s;
  }
  return out;
}

double MixtureLikelihood::value(double q) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < p0_.size(); ++i) sum += std::log(q * p1_[i] + (1.0 - q) * p0_[i]);
  return sum;
}

double MixtureLikelihood::first_derivative(double q) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < p0_.size(); ++i) {
    sum += (p1_[i] - p0_[i]) / (q * p1_[i] + (1.0 - q) * p0_[i]);
  }
  return sum;
}

LogLikProfile unlabeled_loglik(const DensityPair& pair, std::span<const double> samples,
                               double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ArgumentError(fmt::format("unlabeled_loglik: q must lie in (0, 1), got {}", q));
  }
  return MixtureLikelihood(pair, samples).profile(q);
}

EstimateResult mle_unlabeled(const MixtureLikelihood& lik, double theta, double tol) {
  check_theta(theta);
  if (!(tol > 0.0)) throw ArgumentError("mle_unlabeled: tol must be > 0");
  if (lik.size() == 0) throw ArgumentError("mle_unlabeled: samples must be nonempty");

  EstimateResult r;
  r.mode = EstimatorMode::unlabeled;
  r.tol = tol;
  const double lo = theta;
  const double hi = 1.0 - theta;

  if (lik.is_flat()) {
    r.q_hat = 0.5 * (lo + hi);
    r.degenerate = true;
    return r;
  }

  const double d_lo = lik.first_derivative(lo);
  const double d_hi = lik.first_derivative(hi);
  if (std::isfinite(d_lo) && std::isfinite(d_hi)) {
    if (d_lo <= 0.0) {
      r.q_hat = lo;
      r.trimmed = true;
      return r;
    }
    if (d_hi >= 0.0) {
      r.q_hat = hi;
      r.trimmed = true;
      return r;
    }
    double a = lo;
    double b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const double d = lik.first_derivative(mid);
      ++r.iterations;
      if (!std::isfinite(d)) break;
      if (d == 0.0) {
        a = b = mid;
        break;
      }
      if (d > 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    if (b - a <= tol) {
      r.q_hat = 0.5 * (a + b);
      return r;
    }
  }

  // Derivative unusable somewhere: maximize the value directly.
  const auto opt = numerics::golden_section_max([&](double q) { return lik.value(q); }, lo, hi, tol);
  r.q_hat = std::clamp(opt.x, lo, hi);
  r.iterations += opt.iterations;
  return r;
}

EstimateResult mle_unlabeled(const DensityPair& pair, std::span<const double> samples,
                             double theta, double tol) {
  return mle_unlabeled(MixtureLikelihood(pair, samples), theta, tol);
}

nlohmann::json to_json(const EstimateResult& r) {
  return {{"q_hat", r.q_hat},
          {"mode", std::string(to_string(r.mode))},
          {"trimmed", r.trimmed},
          {"degenerate", r.degenerate},
          {"iterations", r.iterations},
          {"tol", r.tol}};
}

}  // namespace priorplug
