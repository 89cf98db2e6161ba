#include "priorplug/detector.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "priorplug/error.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

namespace {

constexpr std::size_t kBoundaryGrid = 4096;
constexpr double kBoundaryWidth = 1e-12;
constexpr double kClosedFormTol = 1e-15;
constexpr int kUndefined = 2;

void check_prior(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ArgumentError(fmt::format("{}: prior must lie in (0, 1), got {}", what, q));
  }
}

int decision_label(const DensityPair& pair, double q, double x) {
  const double a0 = pair.p0(x);
  const double a1 = pair.p1(x);
  if (a0 == 0.0 && a1 == 0.0) return kUndefined;
  return q * a1 >= (1.0 - q) * a0 ? 1 : 0;
}

ErrorRates discrete_rates(const DensityPair& pair, double q) {
  const auto atoms = pair.atoms();
  const auto w0 = pair.weights(Hypothesis::h0);
  const auto w1 = pair.weights(Hypothesis::h1);
  ErrorRates r;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (w0[j] == 0.0 && w1[j] == 0.0) continue;
    if (q * w1[j] >= (1.0 - q) * w0[j]) {
      r.p0_error += w0[j];
    } else {
      r.p1_error += w1[j];
    }
  }
  r.method = RiskMethod::closed_form;
  r.tol = 0.0;
  return r;
}

ErrorRates gaussian_rates(const GaussianPairParams& p, double q) {
  ErrorRates r;
  r.method = RiskMethod::closed_form;
  r.tol = kClosedFormTol;
  if (p.mean0 == p.mean1) {
    // Lambda == 1: decide H1 everywhere iff q >= 1/2.
    if (q >= 0.5) {
      r.p0_error = 1.0;
    } else {
      r.p1_error = 1.0;
    }
    return r;
  }
  const double delta = p.mean1 - p.mean0;
  const double cut = 0.5 * (p.mean0 + p.mean1) + p.sigma * p.sigma * std::log((1.0 - q) / q) / delta;
  if (delta > 0.0) {
    r.p0_error = numerics::normal_cdf((p.mean0 - cut) / p.sigma);
    r.p1_error = numerics::normal_cdf((cut - p.mean1) / p.sigma);
  } else {
    r.p0_error = numerics::normal_cdf((cut - p.mean0) / p.sigma);
    r.p1_error = numerics::normal_cdf((p.mean1 - cut) / p.sigma);
  }
  return r;
}

ErrorRates quadrature_rates(const DensityPair& pair, double q) {
  const auto regions = decision_boundaries(pair, q);
  std::vector<double> edges;
  edges.reserve(regions.points.size() + 2);
  edges.push_back(regions.lo);
  edges.insert(edges.end(), regions.points.begin(), regions.points.end());
  edges.push_back(regions.hi);

  const auto seg = pair.segments();
  ErrorRates r;
  r.method = RiskMethod::quadrature;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    std::vector<double> pieces{edges[i]};
    for (double s : seg) {
      if (s > edges[i] && s < edges[i + 1]) pieces.push_back(s);
    }
    pieces.push_back(edges[i + 1]);
    if (regions.labels[i] == Hypothesis::h1) {
      const auto in = numerics::integrate_pieces([&](double x) { return pair.p0(x); }, pieces);
      r.p0_error += in.value;
      r.tol += in.error;
    } else {
      const auto in = numerics::integrate_pieces([&](double x) { return pair.p1(x); }, pieces);
      r.p1_error += in.value;
      r.tol += in.error;
    }
  }
  r.p0_error = std::clamp(r.p0_error, 0.0, 1.0);
  r.p1_error = std::clamp(r.p1_error, 0.0, 1.0);
  return r;
}

ErrorRates monte_carlo_rates(const DensityPair& pair, double q, const RiskOptions& options) {
  if (options.mc_samples == 0) throw ArgumentError("monte carlo risk needs mc_samples >= 1");
  RandomStream rng(options.mc_seed);
  std::size_t false_alarm = 0;
  std::size_t miss = 0;
  for (std::size_t i = 0; i < options.mc_samples; ++i) {
    if (classify(pair, q, pair.sample(Hypothesis::h0, rng)) == Hypothesis::h1) ++false_alarm;
  }
  for (std::size_t i = 0; i < options.mc_samples; ++i) {
    if (classify(pair, q, pair.sample(Hypothesis::h1, rng)) == Hypothesis::h0) ++miss;
  }
  const auto n = static_cast<double>(options.mc_samples);
  ErrorRates r;
  r.method = RiskMethod::monte_carlo;
  r.p0_error = static_cast<double>(false_alarm) / n;
  r.p1_error = static_cast<double>(miss) / n;
  r.tol = std::max(std::sqrt(r.p0_error * (1.0 - r.p0_error) / n),
                   std::sqrt(r.p1_error * (1.0 - r.p1_error) / n));
  return r;
}

}  // namespace

double eta(const DensityPair& pair, double q, double x) {
  check_prior(q, "eta");
  const double a0 = pair.p0(x);
  const double a1 = pair.p1(x);
  if (a0 == 0.0 && a1 == 0.0) throw UndefinedPointError(x);
  if (a0 == a1) return q;
  return q * a1 / ((1.0 - q) * a0 + q * a1);
}

Hypothesis classify(const DensityPair& pair, double q, double x) {
  check_prior(q, "classify");
  const int label = decision_label(pair, q, x);
  if (label == kUndefined) throw UndefinedPointError(x);
  return label == 1 ? Hypothesis::h1 : Hypothesis::h0;
}

double BoundarySet::measure_h1() const {
  double total = 0.0;
  double left = lo;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double right = i < points.size() ? points[i] : hi;
    if (labels[i] == Hypothesis::h1) total += right - left;
    left = right;
  }
  return total;
}

BoundarySet decision_boundaries(const DensityPair& pair, double q) {
  check_prior(q, "decision_boundaries");
  if (pair.is_discrete()) {
    throw ArgumentError("decision_boundaries: needs a continuous pair");
  }
  const auto seg = pair.segments();
  auto label = [&](double x) { return decision_label(pair, q, x); };

  // Raw pieces (edge, label) over all segments, before merging.
  std::vector<double> edges;
  std::vector<int> raw;
  if (!pair.is_degenerate()) {
    for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
      const double a = seg[k];
      const double b = seg[k + 1];
      auto cuts = numerics::label_switches(label, a, b, kBoundaryGrid, kBoundaryWidth);
      cuts.insert(cuts.begin(), a);
      cuts.push_back(b);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        edges.push_back(cuts[i]);
        raw.push_back(label(0.5 * (cuts[i] + cuts[i + 1])));
      }
    }
  } else {
    edges.push_back(seg.front());
    raw.push_back(q >= 0.5 ? 1 : 0);
  }

  // Zero-mass gaps take the label of their left neighbour (right one if leading).
  int fill = kUndefined;
  for (int v : raw) {
    if (v != kUndefined) {
      fill = v;
      break;
    }
  }
  if (fill == kUndefined) fill = q >= 0.5 ? 1 : 0;
  for (auto& v : raw) {
    if (v == kUndefined) {
      v = fill;
    } else {
      fill = v;
    }
  }

  BoundarySet out;
  out.lo = seg.front();
  out.hi = seg.back();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto h = raw[i] == 1 ? Hypothesis::h1 : Hypothesis::h0;
    if (out.labels.empty()) {
      out.labels.push_back(h);
    } else if (out.labels.back() != h) {
      out.points.push_back(edges[i]);
      out.labels.push_back(h);
    }
  }
  return out;
}

std::string_view to_string(RiskMethod method) noexcept {
  switch (method) {
    case RiskMethod::closed_form:
      return "closed-form";
    case RiskMethod::quadrature:
      return "quadrature";
    case RiskMethod::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

ErrorRates error_rates(const DensityPair& pair, double q_used, const RiskOptions& options) {
  check_prior(q_used, "error_rates");
  if (options.route == RiskRoute::monte_carlo) return monte_carlo_rates(pair, q_used, options);
  if (pair.is_discrete()) return discrete_rates(pair, q_used);
  if (options.route == RiskRoute::automatic) {
    if (const auto* g = std::get_if<GaussianPairParams>(&pair.params())) {
      return gaussian_rates(*g, q_used);
    }
  }
  return quadrature_rates(pair, q_used);
}

RiskReport risk_report(const Scenario& scenario, double q_used, const RiskOptions& options) {
  const double q = scenario.q();
  const auto used = error_rates(scenario.pair(), q_used, options);
  RiskReport r;
  r.q_used = q_used;
  r.p0_error = used.p0_error;
  r.p1_error = used.p1_error;
  r.risk = q * used.p1_error + (1.0 - q) * used.p0_error;
  r.method = used.method;
  r.tol = used.tol;
  r.degenerate = scenario.pair().is_degenerate();
  if (q_used == q) {
    r.bayes_risk = r.risk;
  } else {
    const auto bayes = error_rates(scenario.pair(), q, options);
    r.bayes_risk = q * bayes.p1_error + (1.0 - q) * bayes.p0_error;
    r.tol = std::max(r.tol, bayes.tol);
  }
  r.excess = r.risk - r.bayes_risk;
  return r;
}

double parametrized_risk(const DensityPair& pair, double q1, double q2,
                         const RiskOptions& options) {
  check_prior(q2, "parametrized_risk");
  const auto rates = error_rates(pair, q1, options);
  return q2 * rates.p1_error + (1.0 - q2) * rates.p0_error;
}

nlohmann::json to_json(const RiskReport& r) {
  return {{"q_used", r.q_used},     {"p0_error", r.p0_error},
          {"p1_error", r.p1_error}, {"risk", r.risk},
          {"bayes_risk", r.bayes_risk}, {"excess", r.excess},
          {"method", std::string(to_string(r.method))}, {"tol", r.tol},
          {"degenerate", r.degenerate}};
}

std::string_view risk_csv_header() noexcept {
  return "q_used,p0_error,p1_error,risk,bayes_risk,excess,method,tol";
}

std::string to_csv_row(const RiskReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{}", r.q_used, r.p0_error, r.p1_error, r.risk,
                     r.bayes_risk, r.excess, to_string(r.method), r.tol);
}

}  // namespace priorplug
