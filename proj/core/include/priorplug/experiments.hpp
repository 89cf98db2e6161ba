#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"
#include "priorplug/detector.hpp"
#include "priorplug/estimators.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

std::vector<std::size_t> default_n_grid();

struct ExperimentConfig {
  Scenario scenario;
  EstimatorMode mode = EstimatorMode::labeled;
  std::vector<std::size_t> n_grid = default_n_grid();
  std::size_t trials = 2000;
  std::uint64_t master_seed = 42;
  RiskOptions risk{};
  unsigned threads = 0;  // 0: hardware concurrency
  double unlabeled_tol = 1e-9;
};

struct ExcessRiskPoint {
  std::size_t n = 0;
  double mean_excess = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct ExcessRiskCurve {
  std::vector<ExcessRiskPoint> points;
  EstimatorMode mode = EstimatorMode::labeled;
  Family family = Family::gaussian;
  double q = 0.0;
  double theta = 0.0;
  std::uint64_t master_seed = 0;
};

/// Seed of trial `trial` at sample size n.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) noexcept;

/// q_hat of every trial at sample size n, in trial order. Labeled mode draws
/// only the labels, which are the labels a full labeled sample would have.
std::vector<double> trial_estimates(const ExperimentConfig& config, std::size_t n);

/// Mean and standard error of the exact excess risk R(q_hat) - R(q) over
/// trials, for every n. Bit-identical for any thread count.
ExcessRiskCurve run_excess_risk_curve(const ExperimentConfig& config);

/// Excess risk R(q_hat) - R(q) for each estimate (one risk evaluation per
/// distinct value).
std::vector<double> excess_for_estimates(const Scenario& scenario, std::span<const double> q_hats,
                                         const RiskOptions& risk = {}, unsigned threads = 0);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double theoretical_exponent = 0.0;  // -(1 + alpha)/2; -infinity for alpha = infinity
  bool within_tolerance = false;
  bool exponential = false;  // fitted log(mean) against n
  std::vector<std::size_t> fitted_n;
};

/// Finite alpha: log(mean) on log(n), within_tolerance = |slope + (1 + alpha)/2| <= tolerance.
/// alpha = +infinity: log(mean) on n, within_tolerance = slope < 0.
/// Points whose mean is at most 10 standard errors are left out as noise.
/// Throws FitError when fewer than 4 (3 for infinite alpha) points remain;
/// the message lists the n with nonpositive mean.
RateFit fit_rate(const ExcessRiskCurve& curve, double alpha, double tolerance = 0.2);

/// 1 / (4 theta (1 - theta)).
double lipschitz_bound(double theta);

/// sup |eta(x; q1) - eta(x; q2)| / |q1 - q2| over the grid.
double lipschitz_probe(const DensityPair& pair, double theta, std::span<const double> x_grid,
                       std::span<const double> q_grid);

struct ProbeGrids {
  std::vector<double> x_grid;
  std::vector<double> q_grid;
};

/// Grids concentrated where the Lipschitz bound is nearly attained: the
/// decision boundaries of prior theta and priors within 1.5e-5 above theta.
ProbeGrids boundary_probe_grids(const DensityPair& pair, double theta);

struct TailRow {
  double eps = 0.0;
  double tail = 0.0;       // empirical P(|q_hat - q| > eps)
  double std_error = 0.0;  // binomial standard error
  double hoeffding = 0.0;  // 2 exp(-2 n eps^2)
};

struct ConcentrationTable {
  EstimatorMode mode = EstimatorMode::labeled;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::vector<TailRow> rows;
};

ConcentrationTable concentration_probe(const Scenario& scenario, EstimatorMode mode,
                                       std::size_t n, std::span<const double> eps_grid,
                                       std::size_t trials, std::uint64_t master_seed,
                                       unsigned threads = 0);

/// Least squares of log(tail) on eps^2 over rows with a positive tail.
numerics::LinearFit fit_log_tail(const ConcentrationTable& table);

/// Labeled and unlabeled estimates computed from the same labeled samples.
struct PairedEstimates {
  std::vector<double> labeled;
  std::vector<double> unlabeled;
};

PairedEstimates paired_estimates(const Scenario& scenario, std::size_t n, std::size_t trials,
                                 std::uint64_t master_seed, unsigned threads = 0,
                                 double tol = 1e-9);

struct SignTest {
  std::size_t greater = 0;  // a_i > b_i
  std::size_t less = 0;     // a_i < b_i
  double p_value = 1.0;     // one-sided, alternative P(a > b) > 1/2
};

SignTest sign_test_greater(std::span<const double> a, std::span<const double> b);

/// n,mean_excess,stderr,trials,mode,family,q,theta,seed
std::string curve_csv(const ExcessRiskCurve& curve);
nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const ConcentrationTable& table);

}  // namespace priorplug
