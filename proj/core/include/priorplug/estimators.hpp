#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"

namespace priorplug {

enum class EstimatorMode { labeled, unlabeled };

std::string_view to_string(EstimatorMode mode) noexcept;
EstimatorMode estimator_mode_from_string(std::string_view s);

struct EstimateResult {
  double q_hat = 0.5;
  EstimatorMode mode = EstimatorMode::labeled;
  bool trimmed = false;     // the clamp to [theta, 1 - theta] was active
  bool degenerate = false;  // flat likelihood; q_hat is the interval midpoint
  int iterations = 0;
  double tol = 0.0;
};

/// Trimmed MLE from labels: clamp(mean(labels), theta, 1 - theta).
/// The binomial likelihood is unimodal, so the clamp is the constrained argmax.
EstimateResult mle_labeled(std::span<const std::uint8_t> labels, double theta);

struct LogLikProfile {
  double value = 0.0;
  double first_derivative = 0.0;
  double second_derivative = 0.0;
};

/// Log-likelihood of the two-component mixture q p1 + (1 - q) p0 for a fixed
/// sample. The densities are evaluated once at construction; samples with
/// p0 = p1 = 0 are rejected there (DegenerateSampleError).
class MixtureLikelihood {
 public:
  MixtureLikelihood(const DensityPair& pair, std::span<const double> samples);

  std::size_t size() const noexcept { return p0_.size(); }
  /// Every sample has p0 == p1, so the likelihood does not depend on q.
  bool is_flat() const noexcept { return flat_; }

  LogLikProfile profile(double q) const;
  double value(double q) const;
  double first_derivative(double q) const;

 private:
  std::vector<double> p0_;
  std::vector<double> p1_;
  bool flat_ = true;
};

/// value = sum log f(x_i, q), f = q p1 + (1 - q) p0, with its first two derivatives in q.
LogLikProfile unlabeled_loglik(const DensityPair& pair, std::span<const double> samples, double q);

/// Trimmed MLE over [theta, 1 - theta] from unlabeled samples. The
/// log-likelihood is concave, so the endpoints' derivative signs decide
/// trimming and bisection on the derivative finds an interior maximizer.
EstimateResult mle_unlabeled(const DensityPair& pair, std::span<const double> samples,
                             double theta, double tol = 1e-9);
EstimateResult mle_unlabeled(const MixtureLikelihood& likelihood, double theta, double tol = 1e-9);

nlohmann::json to_json(const EstimateResult& result);

}  // namespace priorplug
