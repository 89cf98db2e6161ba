#include "priorplug/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "priorplug/error.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAbsTol = 1e-10;
constexpr double kRelTol = 1e-12;

void check_open_unit(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ArgumentError(fmt::format("{}: prior must lie in (0, 1), got {}", what, q));
  }
}

int sign_of_difference(const DensityPair& pair, double x) {
  const double d = pair.p1(x) - pair.p0(x);
  return (d > 0.0) - (d < 0.0);
}

// Segment endpoints refined by the sign changes of p1 - p0. min(), |.| and
// every mixture difference f(q) - f(q + h) have their kinks there.
std::vector<double> crossing_pieces(const DensityPair& pair) {
  const auto seg = pair.segments();
  std::vector<double> pts{seg.front()};
  for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
    if (!pair.is_degenerate()) {
      const auto cuts = numerics::label_switches(
          [&](double x) { return sign_of_difference(pair, x); }, seg[k], seg[k + 1]);
      for (double c : cuts) {
        if (c > pts.back()) pts.push_back(c);
      }
    }
    if (seg[k + 1] > pts.back()) pts.push_back(seg[k + 1]);
  }
  return pts;
}

numerics::Integral integrate_pair(const DensityPair& pair, const numerics::ScalarFn& f) {
  const auto pts = crossing_pieces(pair);
  return numerics::integrate_pieces(f, pts, kAbsTol, kRelTol);
}

DivergenceValue exact(DivergenceKind kind, double value) {
  return {kind, value, DivergenceMethod::exact_sum, 0.0};
}

}  // namespace

std::string_view to_string(DivergenceKind kind) noexcept {
  switch (kind) {
    case DivergenceKind::tv:
      return "tv";
    case DivergenceKind::hellinger_sq:
      return "hellinger_sq";
    case DivergenceKind::chi_sq:
      return "chi_sq";
    case DivergenceKind::kl:
      return "kl";
  }
  return "unknown";
}

std::string_view to_string(DivergenceMethod method) noexcept {
  switch (method) {
    case DivergenceMethod::exact_sum:
      return "exact-sum";
    case DivergenceMethod::quadrature:
      return "quadrature";
    case DivergenceMethod::closed_form:
      return "closed-form";
  }
  return "unknown";
}

DivergenceKind divergence_kind_from_string(std::string_view s) {
  if (s == "tv") return DivergenceKind::tv;
  if (s == "hellinger_sq") return DivergenceKind::hellinger_sq;
  if (s == "chi_sq") return DivergenceKind::chi_sq;
  if (s == "kl") return DivergenceKind::kl;
  throw ArgumentError(fmt::format("unknown divergence kind '{}'", s));
}

DivergenceValue total_variation(const DensityPair& pair) {
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    double overlap = 0.0;
    for (std::size_t j = 0; j < w0.size(); ++j) overlap += std::min(w0[j], w1[j]);
    return exact(DivergenceKind::tv, std::clamp(1.0 - overlap, 0.0, 1.0));
  }
  if (pair.is_degenerate()) return {DivergenceKind::tv, 0.0, DivergenceMethod::closed_form, 0.0};
  const auto in = integrate_pair(pair, [&](double x) { return std::min(pair.p0(x), pair.p1(x)); });
  return {DivergenceKind::tv, std::clamp(1.0 - in.value, 0.0, 1.0), DivergenceMethod::quadrature,
          in.error};
}

DivergenceValue hellinger_sq(const DensityPair& pair) {
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    double sum = 0.0;
    for (std::size_t j = 0; j < w0.size(); ++j) {
      const double d = std::sqrt(w1[j]) - std::sqrt(w0[j]);
      sum += d * d;
    }
    return exact(DivergenceKind::hellinger_sq, std::clamp(sum, 0.0, 2.0));
  }
  if (pair.is_degenerate()) {
    return {DivergenceKind::hellinger_sq, 0.0, DivergenceMethod::closed_form, 0.0};
  }
  const auto in = integrate_pair(pair, [&](double x) {
    const double d = std::sqrt(pair.p1(x)) - std::sqrt(pair.p0(x));
    return d * d;
  });
  return {DivergenceKind::hellinger_sq, std::clamp(in.value, 0.0, 2.0),
          DivergenceMethod::quadrature, in.error};
}

DivergenceValue chi_sq(const DensityPair& pair, ChiSqOrder order) {
  const bool flip = order == ChiSqOrder::p0_over_p1;
  auto num = [&](double x) { return flip ? pair.p0(x) : pair.p1(x); };
  auto den = [&](double x) { return flip ? pair.p1(x) : pair.p0(x); };

  if (pair.is_discrete()) {
    const auto wn = pair.weights(flip ? Hypothesis::h0 : Hypothesis::h1);
    const auto wd = pair.weights(flip ? Hypothesis::h1 : Hypothesis::h0);
    double sum = 0.0;
    for (std::size_t j = 0; j < wn.size(); ++j) {
      if (wn[j] > 0.0 && wd[j] == 0.0) return exact(DivergenceKind::chi_sq, kInf);
      if (wn[j] > 0.0) sum += wn[j] * wn[j] / wd[j];
    }
    return exact(DivergenceKind::chi_sq, std::max(sum - 1.0, 0.0));
  }
  if (pair.is_degenerate()) {
    return {DivergenceKind::chi_sq, 0.0, DivergenceMethod::closed_form, 0.0};
  }

  // Any interval where the numerator has mass but the denominator vanishes.
  const auto pts = crossing_pieces(pair);
  const auto seg = pair.segments();
  for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
    const auto cuts = numerics::label_switches(
        [&](double x) { return num(x) > 0.0 && den(x) == 0.0 ? 1 : 0; }, seg[k], seg[k + 1]);
    std::vector<double> edges{seg[k]};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(seg[k + 1]);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double mid = 0.5 * (edges[i] + edges[i + 1]);
      if (num(mid) > 0.0 && den(mid) == 0.0) return {DivergenceKind::chi_sq, kInf, DivergenceMethod::quadrature, 0.0};
    }
  }

  const auto in = numerics::integrate_pieces(
      [&](double x) {
        const double p = num(x);
        const double q = den(x);
        return p > 0.0 && q > 0.0 ? p * p / q : 0.0;
      },
      pts, kAbsTol, kRelTol);
  return {DivergenceKind::chi_sq, std::max(in.value - 1.0, 0.0), DivergenceMethod::quadrature,
          in.error};
}

double bernoulli_kl(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw ArgumentError(fmt::format("bernoulli_kl: parameters must lie in [0, 1], got ({}, {})", a, b));
  }
  if (a == b) return 0.0;
  if (b == 0.0 || b == 1.0) return kInf;
  double kl = 0.0;
  if (a > 0.0) kl += a * std::log(a / b);
  if (a < 1.0) kl += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  return std::max(kl, 0.0);
}

double labeled_joint_kl(const DensityPair& /*pair*/, double qa, double qb) {
  check_open_unit(qa, "labeled_joint_kl");
  check_open_unit(qb, "labeled_joint_kl");
  return bernoulli_kl(qa, qb);
}

double fisher_information_unlabeled(const DensityPair& pair, double q) {
  check_open_unit(q, "fisher_information_unlabeled");
  auto term = [q](double a0, double a1) {
    const double f = q * a1 + (1.0 - q) * a0;
    if (!(f > 0.0)) return 0.0;
    const double d = a1 - a0;
    return d * d / f;
  };
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    double sum = 0.0;
    for (std::size_t j = 0; j < w0.size(); ++j) sum += term(w0[j], w1[j]);
    return sum;
  }
  if (pair.is_degenerate()) return 0.0;
  return integrate_pair(pair, [&](double x) { return term(pair.p0(x), pair.p1(x)); }).value;
}

double hellinger_shift_sq(const DensityPair& pair, double q, double h) {
  check_open_unit(q, "hellinger_shift_sq");
  check_open_unit(q + h, "hellinger_shift_sq");
  if (h == 0.0 || pair.is_degenerate()) return 0.0;
  // (sqrt a - sqrt b)^2 = (a - b)^2 / (sqrt a + sqrt b)^2 avoids cancellation for small h.
  auto term = [q, h](double a0, double a1) {
    const double fa = q * a1 + (1.0 - q) * a0;
    const double fb = (q + h) * a1 + (1.0 - q - h) * a0;
    const double s = std::sqrt(fa) + std::sqrt(fb);
    if (!(s > 0.0)) return 0.0;
    const double d = h * (a1 - a0);
    return d * d / (s * s);
  };
  double value = 0.0;
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    for (std::size_t j = 0; j < w0.size(); ++j) value += term(w0[j], w1[j]);
  } else {
    value = integrate_pair(pair, [&](double x) { return term(pair.p0(x), pair.p1(x)); }).value;
  }
  return std::clamp(value, 0.0, 2.0);
}

double mixture_shift_tv(const DensityPair& pair, double q, double h) {
  check_open_unit(q, "mixture_shift_tv");
  check_open_unit(q + h, "mixture_shift_tv");
  if (h == 0.0 || pair.is_degenerate()) return 0.0;
  auto overlap = [q, h](double a0, double a1) {
    return std::min(q * a1 + (1.0 - q) * a0, (q + h) * a1 + (1.0 - q - h) * a0);
  };
  double common = 0.0;
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    for (std::size_t j = 0; j < w0.size(); ++j) common += overlap(w0[j], w1[j]);
  } else {
    common = integrate_pair(pair, [&](double x) { return overlap(pair.p0(x), pair.p1(x)); }).value;
  }
  return std::clamp(1.0 - common, 0.0, 1.0);
}

nlohmann::json to_json(const DivergenceValue& v) {
  nlohmann::json value = v.value;
  if (std::isinf(v.value)) value = "inf";
  return {{"kind", std::string(to_string(v.kind))},
          {"value", value},
          {"method", std::string(to_string(v.method))},
          {"tol", v.tol}};
}

}  // namespace priorplug
