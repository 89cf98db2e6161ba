#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"

namespace priorplug {

/// Result of fitting P(0 < |eta - 1/2| <= t) ~ c0 t^alpha on a grid of t.
struct MarginProfile {
  std::vector<double> t_grid;
  std::vector<double> probabilities;
  double alpha_hat = 0.0;  // +infinity when the margin set is empty near zero
  double c0_hat = 0.0;     // NaN when infinite
  double r_squared = 0.0;
  bool infinite = false;
  double gap_c = 0.0;          // only meaningful when infinite
  std::size_t fit_points = 0;  // grid points that entered the regression
};

/// P_X(0 < |eta(X) - 1/2| <= t) under the marginal q p1 + (1 - q) p0.
/// Points with eta exactly 1/2 are excluded. Continuous pairs: the sub-level
/// sets are located by a grid clustered at decision boundaries and segment
/// ends plus bisection, then integrated by quadrature.
double margin_probability(const Scenario& scenario, double t);

/// 12 log-spaced points on [1e-3, 0.3].
std::vector<double> default_margin_grid();

/// Least squares of log P on log t. Requires at least 5 points spanning 1.5
/// decades. If every probability up to the largest zero one vanishes and
/// there are at least 3 of them, the exponent is reported as infinite.
MarginProfile fit_margin_exponent(const Scenario& scenario, std::span<const double> t_grid);

/// Same fit for precomputed probabilities; gap_c is then the largest t with P = 0.
MarginProfile fit_margin_exponent(std::span<const double> t_grid,
                                  std::span<const double> probabilities);

/// Discrete pairs: min |eta - 1/2| over atoms with positive marginal mass and
/// eta != 1/2 (+infinity if there is none). Continuous pairs: the infimum of t
/// with positive margin probability, located by bisection on (0, 1/2].
double margin_gap(const Scenario& scenario);

nlohmann::json to_json(const MarginProfile& profile);

}  // namespace priorplug
