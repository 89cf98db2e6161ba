#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"
#include "priorplug/detector.hpp"

namespace priorplug {

/// Two priors q0 = 1/2 and q1 = 1/2 + t^(kappa-1) sharing one piecewise pair
/// on [0, 1], with t = n^(-1/(2 kappa - 2)).
struct TwoHypothesisInstance {
  DensityPair pair;
  double kappa = 2.0;
  double c = 0.01;
  std::size_t n = 0;
  double t = 0.0;
  double q0 = 0.5;
  double q1 = 0.5;
  double alpha = 1.0;  // 1/(kappa - 1)

  double prior(int j) const { return j == 0 ? q0 : q1; }
};

/// Throws ConstructionError when t >= 1/2, when q1 >= 1 - theta, or when the
/// piecewise pair cannot be normalized with positive densities.
TwoHypothesisInstance construct_two_hypotheses(double kappa, double c, std::size_t n,
                                               double theta = 0.1);

/// eta_j(x) from the explicit piecewise formulas (0 outside [0, 1]).
double eta_closed_form(const TwoHypothesisInstance& instance, int j, double x);

/// Lebesgue measure of the symmetric difference of two decision-region sets.
double symmetric_difference(const BoundarySet& a, const BoundarySet& b);

/// d(G0*, G1*) for the Bayes regions of the two priors.
double symmetric_difference(const TwoHypothesisInstance& instance);

struct KlBudget {
  double kl = 0.0;      // n * KL(Bern(q1) || Bern(q0))
  double budget = 0.0;  // 8 n t^(2 kappa - 2)
};

KlBudget kl_budget_check(const TwoHypothesisInstance& instance);

struct LowerBoundConstants {
  double alpha = 0.0;
  double c_eta = 0.0;
  double c_alpha = 0.0;
  double c_prime = 0.0;
  double epsilon0 = 0.0;
  double tau_star = 0.0;
};

/// c_alpha = 2 C^(-1/alpha) alpha (alpha + 1)^(-1 - 1/alpha), eps0 = C (alpha + 1) tau*^alpha,
/// c' = e^-8 c_alpha 2^(-(alpha + 1)/alpha) / 4.
LowerBoundConstants lower_bound_constants(double alpha, double c_eta, double tau_star);

/// c' n^(-(1 + alpha)/2).
double minimax_floor(double n, double alpha, double c_prime);

/// (1 - c) t^(kappa - 1).
double tau_star(const TwoHypothesisInstance& instance);

/// Scenario with the pair of the instance and prior q_j.
Scenario hypothesis_scenario(const TwoHypothesisInstance& instance, int j, double theta = 0.1);

/// Margin-probability grid that stays inside the power-law regime of
/// hypothesis j: 12 log-spaced points on [tau_max / 100, 0.9 tau_max].
/// j = 0: tau_max = min((1 - c) t^(kappa-1), c1 (1 - t)^(kappa-1));
/// j = 1: tau_max = c t^(kappa-1).
std::vector<double> hypothesis_margin_grid(const TwoHypothesisInstance& instance, int j);

/// Everything computable about an instance: the margin fit on hypothesis 0
/// supplies C_eta for the constants.
struct LowerBoundReport {
  TwoHypothesisInstance instance;
  KlBudget kl;
  double d_delta = 0.0;
  double alpha_hat0 = 0.0;
  double alpha_hat1 = 0.0;
  LowerBoundConstants constants;
  double floor = 0.0;
};

LowerBoundReport lower_bound_report(double kappa, double c, std::size_t n, double theta = 0.1);

nlohmann::json to_json(const LowerBoundReport& report);

}  // namespace priorplug
