#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace priorplug::numerics {

using ScalarFn = std::function<double(double)>;

struct Integral {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
///
/// Throws NumericError when the estimated absolute error exceeds
/// max(abs_tol, rel_tol * L1) after refinement.
Integral integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-10,
                   double rel_tol = 1e-12);

/// Sum of integrals over consecutive pieces [points[i], points[i+1]].
/// Use this to keep kinks and jumps of the integrand on piece endpoints.
Integral integrate_pieces(const ScalarFn& f, std::span<const double> points,
                          double abs_tol = 1e-10, double rel_tol = 1e-12);

/// Bisection for a root of a continuous f with f(lo) and f(hi) of opposite sign.
/// Stops at bracket width <= width_tol.
double bisect_root(const ScalarFn& f, double lo, double hi, double width_tol = 1e-12,
                   int max_iter = 200);

/// Locates the switch point of a two-valued predicate with pred(lo) != pred(hi).
/// Returns the midpoint of the final bracket.
double bisect_switch(const std::function<bool(double)>& pred, double lo, double hi,
                     double width_tol = 1e-12, int max_iter = 200);

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};
ScalarOptimum golden_section_max(const ScalarFn& f, double lo, double hi, double tol);

/// Points in [a, b] where an integer-valued label changes, found by a
/// uniform grid scan of `grid` intervals followed by bisection.
/// The grid's last point is evaluated just inside b so that a jump located
/// exactly at b belongs to the next piece.
std::vector<double> label_switches(const std::function<int(double)>& label, double a,
                                   double b, std::size_t grid = 4096,
                                   double width_tol = 1e-12);

double normal_pdf(double z);
double normal_cdf(double z);

/// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace priorplug::numerics
