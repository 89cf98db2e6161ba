#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"

namespace priorplug {

/// Regression function eta(x; q) = q p1 / ((1 - q) p0 + q p1).
/// Throws UndefinedPointError where p0(x) = p1(x) = 0.
double eta(const DensityPair& pair, double q, double x);

/// Plug-in / Bayes decision 1{eta(x; q) >= 1/2}, i.e. the likelihood ratio
/// test Lambda(x) >= (1 - q)/q. Ties go to H1.
Hypothesis classify(const DensityPair& pair, double q, double x);

/// Decision regions of a continuous pair on its integration domain.
///
/// labels[i] is the decision on (edges[i], edges[i+1]) where
/// edges = {lo, points..., hi}; adjacent labels always differ.
struct BoundarySet {
  std::vector<double> points;
  std::vector<Hypothesis> labels;
  double lo = 0.0;
  double hi = 0.0;

  /// Lebesgue measure of {x in [lo, hi] : decision = H1}.
  double measure_h1() const;
};

/// Switch points of the decision on [lo, hi], located by a 4096-interval grid
/// scan per smooth segment plus bisection to 1e-12 width. A decision change
/// across a density jump is reported at the jump.
BoundarySet decision_boundaries(const DensityPair& pair, double q);

enum class RiskMethod { closed_form, quadrature, monte_carlo };

std::string_view to_string(RiskMethod method) noexcept;

/// How risk_report evaluates P0(q') and P1(q').
enum class RiskRoute {
  automatic,   // closed form for Gaussian and discrete pairs, quadrature otherwise
  quadrature,  // force quadrature split at decision boundaries (continuous pairs)
  monte_carlo  // empirical error rates from fresh samples
};

struct RiskOptions {
  RiskRoute route = RiskRoute::automatic;
  std::size_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 42;
};

/// Type-I / type-II error probabilities of the detector built with q_used.
struct ErrorRates {
  double p0_error = 0.0;  // P(decide H1 | H0)
  double p1_error = 0.0;  // P(decide H0 | H1)
  RiskMethod method = RiskMethod::closed_form;
  double tol = 0.0;
};

ErrorRates error_rates(const DensityPair& pair, double q_used, const RiskOptions& options = {});

struct RiskReport {
  double q_used = 0.0;
  double p0_error = 0.0;
  double p1_error = 0.0;
  double risk = 0.0;        // R(q_used)
  double bayes_risk = 0.0;  // R(q)
  double excess = 0.0;      // R(q_used) - R(q)
  RiskMethod method = RiskMethod::closed_form;
  double tol = 0.0;
  bool degenerate = false;  // p0 == p1
};

RiskReport risk_report(const Scenario& scenario, double q_used, const RiskOptions& options = {});

/// R(q1; q2) = q2 P1(q1) + (1 - q2) P0(q1): risk of the detector built
/// with q1 when the data follow prior q2.
double parametrized_risk(const DensityPair& pair, double q1, double q2,
                         const RiskOptions& options = {});

nlohmann::json to_json(const RiskReport& report);

/// q_used,p0_error,p1_error,risk,bayes_risk,excess,method,tol
std::string_view risk_csv_header() noexcept;
std::string to_csv_row(const RiskReport& report);

}  // namespace priorplug
