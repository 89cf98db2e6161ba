#include "priorplug/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "priorplug/error.hpp"

namespace priorplug {

namespace {

unsigned resolve_threads(unsigned threads, std::size_t work) {
  const unsigned t = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

// Runs body(i) for i in [0, count). Each index writes only its own slot, so
// results never depend on scheduling. The lowest failing index wins.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = resolve_threads(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

template <class Fn>
double guarded_trial(std::size_t n, std::size_t trial, std::uint64_t seed, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw TrialError(e.what(), n, trial, seed);
  }
}

void check_config(const ExperimentConfig& c) {
  if (c.trials == 0) throw ArgumentError("experiment needs trials >= 1");
  if (c.n_grid.empty()) throw ArgumentError("experiment needs a nonempty n_grid");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] == 0 || (i > 0 && c.n_grid[i] <= c.n_grid[i - 1])) {
      throw ArgumentError("n_grid must be positive and strictly increasing");
    }
  }
}

double estimate_one(const Scenario& s, EstimatorMode mode, std::size_t n, RandomStream& rng,
                    double tol) {
  if (mode == EstimatorMode::labeled) {
    const auto y = sample_labels(s.q(), n, rng);
    return mle_labeled(y, s.theta()).q_hat;
  }
  const auto data = sample_unlabeled(s, n, rng);
  return mle_unlabeled(s.pair(), data.x, s.theta(), tol).q_hat;
}

}  // namespace

std::vector<std::size_t> default_n_grid() { return {16, 32, 64, 128, 256, 512, 1024, 2048, 4096}; }

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial) noexcept {
  return derive_seed(master_seed, n, trial);
}

std::vector<double> trial_estimates(const ExperimentConfig& config, std::size_t n) {
  std::vector<double> q_hat(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t k) {
    const auto seed = trial_seed(config.master_seed, n, k);
    q_hat[k] = guarded_trial(n, k, seed, [&] {
      RandomStream rng(seed);
      return estimate_one(config.scenario, config.mode, n, rng, config.unlabeled_tol);
    });
  });
  return q_hat;
}

std::vector<double> excess_for_estimates(const Scenario& scenario, std::span<const double> q_hats,
                                         const RiskOptions& risk, unsigned threads) {
  const double q = scenario.q();
  const auto bayes = error_rates(scenario.pair(), q, risk);
  const double bayes_risk = q * bayes.p1_error + (1.0 - q) * bayes.p0_error;

  std::vector<double> distinct(q_hats.begin(), q_hats.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> excess(distinct.size());
  parallel_for(distinct.size(), threads, [&](std::size_t i) {
    if (distinct[i] == q) {
      excess[i] = 0.0;
      return;
    }
    const auto r = error_rates(scenario.pair(), distinct[i], risk);
    excess[i] = q * r.p1_error + (1.0 - q) * r.p0_error - bayes_risk;
  });

  std::vector<double> out(q_hats.size());
  for (std::size_t k = 0; k < q_hats.size(); ++k) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), q_hats[k]);
    out[k] = excess[static_cast<std::size_t>(it - distinct.begin())];
  }
  return out;
}

ExcessRiskCurve run_excess_risk_curve(const ExperimentConfig& config) {
  check_config(config);
  ExcessRiskCurve curve;
  curve.mode = config.mode;
  curve.family = config.scenario.pair().family();
  curve.q = config.scenario.q();
  curve.theta = config.scenario.theta();
  curve.master_seed = config.master_seed;

  for (std::size_t n : config.n_grid) {
    const auto q_hat = trial_estimates(config, n);
    const auto excess = excess_for_estimates(config.scenario, q_hat, config.risk, config.threads);
    const double m = static_cast<double>(excess.size());
    double sum = 0.0;
    for (double e : excess) sum += e;
    const double mean = sum / m;
    double ss = 0.0;
    for (double e : excess) ss += (e - mean) * (e - mean);
    const double se = excess.size() > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
    curve.points.push_back({n, mean, se, excess.size()});
  }
  return curve;
}

RateFit fit_rate(const ExcessRiskCurve& curve, double alpha, double tolerance) {
  if (!(alpha >= 0.0)) throw ArgumentError(fmt::format("fit_rate: alpha must be >= 0, got {}", alpha));
  RateFit fit;
  fit.exponential = std::isinf(alpha);
  fit.theoretical_exponent =
      fit.exponential ? -std::numeric_limits<double>::infinity() : -(1.0 + alpha) / 2.0;

  std::vector<std::size_t> nonpositive;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : curve.points) {
    if (p.mean_excess <= 0.0) nonpositive.push_back(p.n);
    if (!(p.mean_excess > 10.0 * p.std_error)) continue;
    const double n = static_cast<double>(p.n);
    xs.push_back(fit.exponential ? n : std::log(n));
    ys.push_back(std::log(p.mean_excess));
    fit.fitted_n.push_back(p.n);
  }
  const std::size_t needed = fit.exponential ? 3 : 4;
  if (xs.size() < needed) {
    throw FitError(fmt::format(
        "fit_rate: {} points above the noise floor, need {} (kept n = [{}], nonpositive mean at n = [{}])",
        xs.size(), needed, fmt::join(fit.fitted_n, ", "), fmt::join(nonpositive, ", ")));
  }
  const auto ls = numerics::least_squares(xs, ys);
  fit.slope = ls.slope;
  fit.intercept = ls.intercept;
  fit.r_squared = ls.r_squared;
  fit.within_tolerance = fit.exponential
                             ? fit.slope < 0.0
                             : std::abs(fit.slope - fit.theoretical_exponent) <= tolerance;
  return fit;
}

double lipschitz_bound(double theta) {
  if (!(theta > 0.0 && theta < 0.5)) {
    throw ArgumentError(fmt::format("theta must lie in (0, 1/2), got {}", theta));
  }
  return 1.0 / (4.0 * theta * (1.0 - theta));
}

double lipschitz_probe(const DensityPair& pair, double theta, std::span<const double> x_grid,
                       std::span<const double> q_grid) {
  lipschitz_bound(theta);
  for (double q : q_grid) {
    if (q < theta || q > 1.0 - theta) {
      throw ArgumentError(
          fmt::format("lipschitz_probe: prior {} outside [{}, {}]", q, theta, 1.0 - theta));
    }
  }
  const std::size_t m = q_grid.size();
  if (m < 2 || m * (m - 1) / 2 < 100) {
    throw ArgumentError("lipschitz_probe: need at least 100 prior pairs (15 grid points)");
  }
  double sup = 0.0;
  std::vector<double> e(m);
  for (double x : x_grid) {
    if (pair.p0(x) == 0.0 && pair.p1(x) == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) e[i] = eta(pair, q_grid[i], x);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double dq = std::abs(q_grid[i] - q_grid[j]);
        if (dq == 0.0) continue;
        sup = std::max(sup, std::abs(e[i] - e[j]) / dq);
      }
    }
  }
  return sup;
}

ProbeGrids boundary_probe_grids(const DensityPair& pair, double theta) {
  lipschitz_bound(theta);
  ProbeGrids g;
  for (int k = 0; k < 16; ++k) g.q_grid.push_back(theta + 1e-6 * k);
  if (pair.is_discrete()) {
    g.x_grid.assign(pair.atoms().begin(), pair.atoms().end());
    return g;
  }
  for (double x : decision_boundaries(pair, theta).points) {
    for (int k = -2; k <= 2; ++k) g.x_grid.push_back(x + 1e-9 * k);
  }
  return g;
}

ConcentrationTable concentration_probe(const Scenario& scenario, EstimatorMode mode,
                                       std::size_t n, std::span<const double> eps_grid,
                                       std::size_t trials, std::uint64_t master_seed,
                                       unsigned threads) {
  if (trials < 1000) throw ArgumentError("concentration_probe needs trials >= 1000");
  ExperimentConfig config{scenario};
  config.mode = mode;
  config.n_grid = {n};
  config.trials = trials;
  config.master_seed = master_seed;
  config.threads = threads;
  check_config(config);
  const auto q_hat = trial_estimates(config, n);

  ConcentrationTable table;
  table.mode = mode;
  table.n = n;
  table.trials = trials;
  const double m = static_cast<double>(trials);
  for (double eps : eps_grid) {
    if (!(eps >= 0.0)) throw ArgumentError("eps must be >= 0");
    std::size_t hits = 0;
    for (double v : q_hat) hits += std::abs(v - scenario.q()) > eps ? 1 : 0;
    const double p = static_cast<double>(hits) / m;
    table.rows.push_back({eps, p, std::sqrt(p * (1.0 - p) / m),
                          2.0 * std::exp(-2.0 * static_cast<double>(n) * eps * eps)});
  }
  return table;
}

numerics::LinearFit fit_log_tail(const ConcentrationTable& table) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : table.rows) {
    if (r.tail > 0.0) {
      xs.push_back(r.eps * r.eps);
      ys.push_back(std::log(r.tail));
    }
  }
  return numerics::least_squares(xs, ys);
}

PairedEstimates paired_estimates(const Scenario& scenario, std::size_t n, std::size_t trials,
                                 std::uint64_t master_seed, unsigned threads, double tol) {
  if (n == 0 || trials == 0) throw ArgumentError("paired_estimates needs n >= 1 and trials >= 1");
  PairedEstimates out;
  out.labeled.resize(trials);
  out.unlabeled.resize(trials);
  parallel_for(trials, threads, [&](std::size_t k) {
    const auto seed = trial_seed(master_seed, n, k);
    guarded_trial(n, k, seed, [&] {
      RandomStream rng(seed);
      const auto data = sample_labeled(scenario, n, rng);
      out.labeled[k] = mle_labeled(data.y, scenario.theta()).q_hat;
      out.unlabeled[k] = mle_unlabeled(scenario.pair(), data.x, scenario.theta(), tol).q_hat;
      return 0.0;
    });
  });
  return out;
}

SignTest sign_test_greater(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("sign test: samples differ in length");
  SignTest s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) ++s.greater;
    if (a[i] < b[i]) ++s.less;
  }
  const std::size_t m = s.greater + s.less;
  if (m == 0 || s.greater == 0) return s;
  // P(X >= greater) for X ~ Bin(m, 1/2).
  const boost::math::binomial_distribution<double> bin(static_cast<double>(m), 0.5);
  s.p_value = boost::math::cdf(boost::math::complement(bin, static_cast<double>(s.greater - 1)));
  return s;
}

std::string curve_csv(const ExcessRiskCurve& curve) {
  std::string out = "n,mean_excess,stderr,trials,mode,family,q,theta,seed\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", p.n, p.mean_excess, p.std_error, p.trials,
                       to_string(curve.mode), to_string(curve.family), curve.q, curve.theta,
                       curve.master_seed);
  }
  return out;
}

nlohmann::json to_json(const RateFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"theoretical_exponent",
           f.exponential ? nlohmann::json("-inf") : nlohmann::json(f.theoretical_exponent)},
          {"within_tolerance", f.within_tolerance},
          {"fitted_n", f.fitted_n}};
}

nlohmann::json to_json(const ConcentrationTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back(
        {{"eps", r.eps}, {"tail", r.tail}, {"std_error", r.std_error}, {"hoeffding", r.hoeffding}});
  }
  return {{"mode", std::string(to_string(t.mode))}, {"n", t.n}, {"trials", t.trials}, {"rows", rows}};
}

}  // namespace priorplug
