#include "priorplug/lowerbound.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "priorplug/divergences.hpp"
#include "priorplug/error.hpp"
#include "priorplug/margin.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

namespace {

const AppendixAPairParams& params_of(const TwoHypothesisInstance& inst) {
  return std::get<AppendixAPairParams>(inst.pair.params());
}

bool label_at(const BoundarySet& s, double x) {
  const auto it = std::upper_bound(s.points.begin(), s.points.end(), x);
  return s.labels[static_cast<std::size_t>(it - s.points.begin())] == Hypothesis::h1;
}

}  // namespace

TwoHypothesisInstance construct_two_hypotheses(double kappa, double c, std::size_t n,
                                               double theta) {
  if (!(kappa > 1.0)) throw ConstructionError(fmt::format("kappa must be > 1, got {}", kappa));
  if (n == 0) throw ConstructionError("n must be >= 1");
  const double t = std::pow(static_cast<double>(n), -1.0 / (2.0 * kappa - 2.0));
  if (!(t < 0.5)) {
    throw ConstructionError(fmt::format(
        "n = {} is too small for kappa = {}: t = n^(-1/(2kappa-2)) = {} must be < 0.5", n, kappa, t));
  }
  const double shift = std::pow(t, kappa - 1.0);
  const double q1 = 0.5 + shift;
  if (!(q1 < 1.0 - theta)) {
    throw ConstructionError(
        fmt::format("q1 = 1/2 + t^(kappa-1) = {} must be < 1 - theta = {}", q1, 1.0 - theta));
  }
  TwoHypothesisInstance inst{build_appendix_a(kappa, c, t), kappa, c, n, t, 0.5, q1,
                             1.0 / (kappa - 1.0)};
  return inst;
}

double eta_closed_form(const TwoHypothesisInstance& inst, int j, double x) {
  if (j != 0 && j != 1) throw ArgumentError(fmt::format("hypothesis index must be 0 or 1, got {}", j));
  if (x < 0.0 || x > 1.0) return 0.0;
  const auto& p = params_of(inst);
  const double e = p.kappa - 1.0;
  const double s = std::pow(p.t, e);
  if (j == 0) {
    if (x < p.t) {
      return (0.5 + p.c * std::pow(x, e)) * (1.0 - 2.0 * s) / (1.0 - 4.0 * p.c * std::pow(p.t * x, e));
    }
    return 0.5 + p.c1 * std::pow(x - p.t, e);
  }
  if (x < p.t) return 0.5 + p.c * std::pow(x, e);
  const double u = p.c1 * std::pow(x - p.t, e);
  return (1.0 + 2.0 * s) * (0.5 + u) / (1.0 + 4.0 * s * u);
}

double symmetric_difference(const BoundarySet& a, const BoundarySet& b) {
  if (a.lo != b.lo || a.hi != b.hi) {
    throw ArgumentError("symmetric_difference: boundary sets cover different domains");
  }
  std::vector<double> edges{a.lo};
  std::merge(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
             std::back_inserter(edges));
  edges.push_back(a.hi);
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    if (label_at(a, mid) != label_at(b, mid)) measure += edges[i + 1] - edges[i];
  }
  return measure;
}

double symmetric_difference(const TwoHypothesisInstance& inst) {
  return symmetric_difference(decision_boundaries(inst.pair, inst.q0),
                              decision_boundaries(inst.pair, inst.q1));
}

KlBudget kl_budget_check(const TwoHypothesisInstance& inst) {
  const double n = static_cast<double>(inst.n);
  return {n * labeled_joint_kl(inst.pair, inst.q1, inst.q0),
          8.0 * n * std::pow(inst.t, 2.0 * inst.kappa - 2.0)};
}

LowerBoundConstants lower_bound_constants(double alpha, double c_eta, double tau_star) {
  if (!(alpha > 0.0)) throw ArgumentError(fmt::format("alpha must be > 0, got {}", alpha));
  if (!(c_eta > 0.0)) throw ArgumentError(fmt::format("C_eta must be > 0, got {}", c_eta));
  if (!(tau_star > 0.0 && tau_star <= 0.5)) {
    throw ArgumentError(fmt::format("tau* must lie in (0, 1/2], got {}", tau_star));
  }
  LowerBoundConstants k;
  k.alpha = alpha;
  k.c_eta = c_eta;
  k.tau_star = tau_star;
  k.c_alpha = 2.0 * std::pow(c_eta, -1.0 / alpha) * alpha * std::pow(alpha + 1.0, -1.0 - 1.0 / alpha);
  k.epsilon0 = c_eta * (alpha + 1.0) * std::pow(tau_star, alpha);
  k.c_prime = 0.25 * std::exp(-8.0) * k.c_alpha * std::pow(0.5, (alpha + 1.0) / alpha);
  return k;
}

double minimax_floor(double n, double alpha, double c_prime) {
  if (!(n >= 1.0)) throw ArgumentError(fmt::format("minimax_floor: n must be >= 1, got {}", n));
  if (!(alpha >= 0.0)) throw ArgumentError(fmt::format("minimax_floor: alpha must be >= 0, got {}", alpha));
  return c_prime * std::pow(n, -(1.0 + alpha) / 2.0);
}

double tau_star(const TwoHypothesisInstance& inst) {
  return (1.0 - inst.c) * std::pow(inst.t, inst.kappa - 1.0);
}

Scenario hypothesis_scenario(const TwoHypothesisInstance& inst, int j, double theta) {
  return Scenario(inst.pair, inst.prior(j), theta);
}

std::vector<double> hypothesis_margin_grid(const TwoHypothesisInstance& inst, int j) {
  const auto& p = params_of(inst);
  const double e = p.kappa - 1.0;
  const double tau_max = j == 0
                             ? std::min((1.0 - p.c) * std::pow(p.t, e), p.c1 * std::pow(1.0 - p.t, e))
                             : p.c * std::pow(p.t, e);
  return numerics::log_spaced(tau_max / 100.0, 0.9 * tau_max, 12);
}

LowerBoundReport lower_bound_report(double kappa, double c, std::size_t n, double theta) {
  LowerBoundReport r{construct_two_hypotheses(kappa, c, n, theta), {}, 0.0, 0.0, 0.0, {}, 0.0};
  const auto& inst = r.instance;
  r.kl = kl_budget_check(inst);
  r.d_delta = symmetric_difference(inst);
  const auto fit0 = fit_margin_exponent(hypothesis_scenario(inst, 0, theta),
                                        hypothesis_margin_grid(inst, 0));
  const auto fit1 = fit_margin_exponent(hypothesis_scenario(inst, 1, theta),
                                        hypothesis_margin_grid(inst, 1));
  r.alpha_hat0 = fit0.alpha_hat;
  r.alpha_hat1 = fit1.alpha_hat;
  r.constants = lower_bound_constants(inst.alpha, fit0.c0_hat, tau_star(inst));
  r.floor = minimax_floor(static_cast<double>(n), inst.alpha, r.constants.c_prime);
  return r;
}

nlohmann::json to_json(const LowerBoundReport& r) {
  const auto& i = r.instance;
  const auto& k = r.constants;
  return {{"kappa", i.kappa},
          {"c", i.c},
          {"c1", params_of(i).c1},
          {"n", i.n},
          {"t", i.t},
          {"q0", i.q0},
          {"q1", i.q1},
          {"alpha", i.alpha},
          {"kl", r.kl.kl},
          {"kl_budget", r.kl.budget},
          {"d_delta", r.d_delta},
          {"alpha_hat0", r.alpha_hat0},
          {"alpha_hat1", r.alpha_hat1},
          {"constants",
           {{"c_eta", k.c_eta},
            {"c_alpha", k.c_alpha},
            {"c_prime", k.c_prime},
            {"epsilon0", k.epsilon0},
            {"tau_star", k.tau_star}}},
          {"floor", r.floor}};
}

}  // namespace priorplug
