#include "priorplug/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "priorplug/error.hpp"

namespace priorplug::numerics {

Integral integrate(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol) {
  if (!(a <= b)) {
    throw ArgumentError(fmt::format("integrate: need a <= b, got [{}, {}]", a, b));
  }
  if (a == b) return {};

  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  // Integrate on [0, 1] and rescale: Boost's own affine map loses precision on
  // short intervals and then reports an error that does not shrink with b - a.
  const double width = b - a;
  auto unit = [&](double s) { return f(s < 1.0 ? a + width * s : b); };
  try {
    value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(unit, 0.0, 1.0, 18,
                                                                          rel_tol, &error, &l1);
    value *= width;
    error *= width;
    l1 *= width;
  } catch (const std::exception& e) {
    throw NumericError(fmt::format("quadrature on [{}, {}] failed: {}", a, b, e.what()),
                       std::numeric_limits<double>::infinity());
  }
  if (!std::isfinite(value)) {
    throw NumericError(fmt::format("quadrature on [{}, {}] produced {}", a, b, value),
                       std::numeric_limits<double>::infinity());
  }
  const double allowed = std::max(abs_tol, rel_tol * l1);
  if (error > allowed) {
    throw NumericError(fmt::format("quadrature on [{}, {}] reached error {:.3g} > {:.3g}", a, b,
                                   error, allowed),
                       error);
  }
  return {value, error};
}

Integral integrate_pieces(const ScalarFn& f, std::span<const double> points, double abs_tol,
                          double rel_tol) {
  Integral total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto piece = integrate(f, points[i], points[i + 1], abs_tol, rel_tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

double bisect_root(const ScalarFn& f, double lo, double hi, double width_tol, int max_iter) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError(
        fmt::format("bisection bracket [{}, {}] has no sign change (f = {}, {})", lo, hi, flo,
                    fhi),
        hi - lo);
  }
  for (int it = 0; it < max_iter && hi - lo > width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_switch(const std::function<bool(double)>& pred, double lo, double hi,
                     double width_tol, int max_iter) {
  const bool at_lo = pred(lo);
  for (int it = 0; it < max_iter && hi - lo > width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarOptimum golden_section_max(const ScalarFn& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  while (hi - lo > tol && it < 500) {
    ++it;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x), it};
}

std::vector<double> label_switches(const std::function<int(double)>& label, double a, double b,
                                   std::size_t grid, double width_tol) {
  std::vector<double> out;
  if (!(a < b) || grid == 0) return out;
  const double h = (b - a) / static_cast<double>(grid);
  const double b_inside = std::nextafter(b, a);
  auto at = [&](std::size_t i) {
    return i == grid ? b_inside : a + h * static_cast<double>(i);
  };
  double x_prev = a;
  int l_prev = label(a);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double x = at(i);
    const int l = label(x);
    if (l != l_prev) {
      const int from = l_prev;
      out.push_back(bisect_switch([&](double z) { return label(z) == from; }, x_prev, x,
                                  width_tol));
    }
    x_prev = x;
    l_prev = l;
  }
  return out;
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw FitError(fmt::format("least squares needs >= 2 paired points, got {} and {}",
                               x.size(), y.size()));
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("least squares: all abscissae are equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw ArgumentError(fmt::format("log_spaced: need 0 < lo < hi and count >= 2"));
  }
  std::vector<double> out(count);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(llo + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace priorplug::numerics
