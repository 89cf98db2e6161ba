#include "commands.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "plot_data.hpp"
#include "priorplug/density_json.hpp"
#include "priorplug/divergences.hpp"
#include "priorplug/error.hpp"
#include "priorplug/estimators.hpp"
#include "priorplug/experiments.hpp"
#include "priorplug/lowerbound.hpp"
#include "priorplug/margin.hpp"

namespace priorplug::cli {

namespace {

using nlohmann::json;

// Optional keys with defaults; every wrongly typed key is reported at once.
class Reader {
 public:
  explicit Reader(const json& config) : c_(config) {}

  double number(const char* key, double fallback) {
    if (!c_.contains(key)) return fallback;
    if (!c_.at(key).is_number()) {
      bad_.push_back(fmt::format("{} (number)", key));
      return fallback;
    }
    return c_.at(key).get<double>();
  }

  std::size_t count(const char* key, std::size_t fallback) {
    if (!c_.contains(key)) return fallback;
    if (!c_.at(key).is_number_unsigned()) {
      bad_.push_back(fmt::format("{} (nonnegative integer)", key));
      return fallback;
    }
    return c_.at(key).get<std::size_t>();
  }

  std::string text(const char* key, std::string fallback) {
    if (!c_.contains(key)) return fallback;
    if (!c_.at(key).is_string()) {
      bad_.push_back(fmt::format("{} (string)", key));
      return fallback;
    }
    return c_.at(key).get<std::string>();
  }

  template <class T>
  std::vector<T> list(const char* key, std::vector<T> fallback) {
    if (!c_.contains(key)) return fallback;
    try {
      return c_.at(key).get<std::vector<T>>();
    } catch (const json::exception&) {
      bad_.push_back(fmt::format("{} (array)", key));
      return fallback;
    }
  }

  // A number or the string "inf"; nullopt when absent.
  std::optional<double> exponent(const char* key) {
    if (!c_.contains(key)) return std::nullopt;
    const auto& v = c_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    bad_.push_back(fmt::format("{} (number or \"inf\")", key));
    return std::nullopt;
  }

  void done() const {
    if (!bad_.empty()) {
      throw ConfigError(fmt::format("config: invalid field(s): {}", fmt::join(bad_, ", ")));
    }
  }

 private:
  const json& c_;
  std::vector<std::string> bad_;
};

EstimatorMode parse_mode(const std::string& s) {
  try {
    return estimator_mode_from_string(s);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

RiskOptions parse_risk(Reader& r, std::uint64_t seed) {
  RiskOptions o;
  const auto method = r.text("risk_method", "automatic");
  if (method == "automatic") {
    o.route = RiskRoute::automatic;
  } else if (method == "quadrature") {
    o.route = RiskRoute::quadrature;
  } else if (method == "monte_carlo" || method == "monte-carlo") {
    o.route = RiskRoute::monte_carlo;
  } else {
    throw ConfigError(fmt::format("config: risk_method '{}' is not automatic, quadrature or monte_carlo", method));
  }
  o.mc_samples = r.count("mc_samples", o.mc_samples);
  o.mc_seed = seed;
  return o;
}

std::string number_list_csv_row(std::initializer_list<double> values) {
  return fmt::format("{}\n", fmt::join(values, ","));
}

}  // namespace

json run_risk(Context& ctx) {
  const auto scenario = scenario_from_json(ctx.config);
  Reader r(ctx.config);
  const double q_used = r.number("q_used", scenario.q());
  const auto options = parse_risk(r, ctx.seed);
  r.done();
  const auto report = risk_report(scenario, q_used, options);
  auto j = to_json(report);
  ctx.out->write("risk.json", j.dump(2) + "\n");
  ctx.out->write("risk.csv", std::string(risk_csv_header()) + "\n" + to_csv_row(report) + "\n");
  return j;
}

json run_estimate(Context& ctx) {
  const auto scenario = scenario_from_json(ctx.config);
  Reader r(ctx.config);
  const auto mode = parse_mode(r.text("mode", "labeled"));
  const std::size_t n = r.count("n", 1000);
  const double tol = r.number("tol", 1e-9);
  r.done();
  if (n == 0) throw ConfigError("config: n must be >= 1");
  RandomStream rng(ctx.seed);
  const auto data = sample_labeled(scenario, n, rng);
  const auto result = mode == EstimatorMode::labeled
                          ? mle_labeled(data.y, scenario.theta())
                          : mle_unlabeled(scenario.pair(), data.x, scenario.theta(), tol);
  auto j = to_json(result);
  j["n"] = n;
  j["seed"] = ctx.seed;
  ctx.out->write("estimate.json", j.dump(2) + "\n");
  return j;
}

json run_divergence(Context& ctx) {
  const auto pair = pair_from_json(ctx.config);
  Reader r(ctx.config);
  const auto kinds = r.list<std::string>("kinds", {"tv", "hellinger_sq", "chi_sq"});
  const auto q = r.exponent("q");
  const auto q_alt = r.exponent("q_alt");
  r.done();
  json arr = json::array();
  for (const auto& name : kinds) {
    DivergenceKind kind;
    try {
      kind = divergence_kind_from_string(name);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    switch (kind) {
      case DivergenceKind::tv:
        arr.push_back(to_json(total_variation(pair)));
        break;
      case DivergenceKind::hellinger_sq:
        arr.push_back(to_json(hellinger_sq(pair)));
        break;
      case DivergenceKind::chi_sq:
        arr.push_back(to_json(chi_sq(pair)));
        break;
      case DivergenceKind::kl: {
        if (!q || !q_alt) throw ConfigError("config: kind 'kl' needs fields q, q_alt");
        const DivergenceValue v{DivergenceKind::kl, labeled_joint_kl(pair, *q, *q_alt),
                                DivergenceMethod::closed_form, 0.0};
        arr.push_back(to_json(v));
        break;
      }
    }
  }
  ctx.out->write("divergence.json", arr.dump(2) + "\n");
  return arr;
}

json run_margin(Context& ctx) {
  const auto scenario = scenario_from_json(ctx.config);
  Reader r(ctx.config);
  const auto grid = r.list<double>("t_grid", default_margin_grid());
  r.done();
  const auto profile = fit_margin_exponent(scenario, grid);
  emit_plot_data(profile, *ctx.out, "margin");
  auto j = to_json(profile);
  ctx.out->write("margin.json", j.dump(2) + "\n");
  return j;
}

json run_lowerbound(Context& ctx) {
  Reader r(ctx.config);
  const double kappa = r.number("kappa", 2.0);
  const double c = r.number("c", 0.01);
  const double theta = r.number("theta", 0.1);
  const auto n_values = r.list<std::size_t>("n_values", {100, 1000, 10000});
  r.done();
  json reports = json::array();
  for (std::size_t n : n_values) reports.push_back(to_json(lower_bound_report(kappa, c, n, theta)));
  json j = {{"reports", reports}};
  ctx.out->write("lowerbound.json", j.dump(2) + "\n");
  return j;
}

json run_rates(Context& ctx) {
  ExperimentConfig config{scenario_from_json(ctx.config)};
  Reader r(ctx.config);
  config.mode = parse_mode(r.text("mode", "labeled"));
  config.n_grid = r.list<std::size_t>("n_grid", default_n_grid());
  config.trials = r.count("trials", config.trials);
  config.master_seed = ctx.seed;
  config.threads = ctx.threads;
  config.risk = parse_risk(r, ctx.seed);
  const auto alpha = r.exponent("alpha");
  const auto c_prime = r.exponent("c_prime");
  const double c_eta = r.number("c_eta", 2.0);
  r.done();

  const auto curve = run_excess_risk_curve(config);
  ctx.out->write("rates.csv", curve_csv(curve));

  json j = {{"points", json::array()}};
  for (const auto& p : curve.points) {
    j["points"].push_back({{"n", p.n}, {"mean_excess", p.mean_excess}, {"stderr", p.std_error}, {"trials", p.trials}});
  }
  std::optional<FloorOverlay> floor;
  if (alpha) {
    const auto fit = fit_rate(curve, *alpha);
    j["rate_fit"] = to_json(fit);
    ctx.out->write("rate_fit.json", j["rate_fit"].dump(2) + "\n");
    if (std::isfinite(*alpha) && *alpha > 0.0) {
      const double cp = c_prime ? *c_prime : lower_bound_constants(*alpha, c_eta, 0.5).c_prime;
      floor = FloorOverlay{*alpha, cp};
    }
  }
  emit_plot_data(curve, floor, *ctx.out, "rates_plot");
  return j;
}

json run_lipschitz(Context& ctx) {
  const auto pair = pair_from_json(ctx.config);
  Reader r(ctx.config);
  const double theta0 = r.number("theta", 0.1);
  const auto thetas = r.list<double>("thetas", {theta0});
  const std::size_t nx = r.count("x_points", 2001);
  const std::size_t nq = r.count("q_points", 41);
  r.done();
  if (nx < 2 || nq < 15) throw ConfigError("config: need x_points >= 2 and q_points >= 15");

  std::vector<double> xs;
  if (pair.is_discrete()) {
    xs.assign(pair.atoms().begin(), pair.atoms().end());
  } else {
    for (std::size_t i = 0; i < nx; ++i) {
      xs.push_back(pair.support_lo() +
                   (pair.support_hi() - pair.support_lo()) * static_cast<double>(i) / static_cast<double>(nx - 1));
    }
  }
  json rows = json::array();
  for (double theta : thetas) {
    std::vector<double> qs;
    for (std::size_t i = 0; i < nq; ++i) {
      qs.push_back(theta + (1.0 - 2.0 * theta) * static_cast<double>(i) / static_cast<double>(nq - 1));
    }
    const double bound = lipschitz_bound(theta);
    const double probe = lipschitz_probe(pair, theta, xs, qs);
    const auto adapted = boundary_probe_grids(pair, theta);
    const double tight =
        adapted.x_grid.empty() ? 0.0 : lipschitz_probe(pair, theta, adapted.x_grid, adapted.q_grid);
    rows.push_back({{"theta", theta}, {"bound", bound}, {"probe", probe}, {"boundary_probe", tight},
                    {"within_bound", probe <= bound + 1e-9 && tight <= bound + 1e-9}});
  }
  json j = {{"rows", rows}};
  ctx.out->write("lipschitz.json", j.dump(2) + "\n");
  return j;
}

json run_concentration(Context& ctx) {
  const auto scenario = scenario_from_json(ctx.config);
  Reader r(ctx.config);
  const auto mode = parse_mode(r.text("mode", "labeled"));
  const std::size_t n = r.count("n", 400);
  const std::size_t trials = r.count("trials", 2000);
  const auto eps = r.list<double>("eps_grid", {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1});
  r.done();
  const auto table = concentration_probe(scenario, mode, n, eps, trials, ctx.seed, ctx.threads);
  std::string csv = "eps,tail,std_error,hoeffding\n";
  for (const auto& row : table.rows) {
    csv += number_list_csv_row({row.eps, row.tail, row.std_error, row.hoeffding});
  }
  ctx.out->write("concentration.csv", csv);
  auto j = to_json(table);
  if (mode == EstimatorMode::unlabeled) {
    try {
      const auto fit = fit_log_tail(table);
      j["log_tail_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    } catch (const FitError&) {
      j["log_tail_fit"] = nullptr;
    }
  }
  ctx.out->write("concentration.json", j.dump(2) + "\n");
  return j;
}

}  // namespace priorplug::cli
