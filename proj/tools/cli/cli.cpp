#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "priorplug/error.hpp"
#include "priorplug/version.hpp"

namespace priorplug::cli {

namespace {

using nlohmann::json;

struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  std::optional<std::string> family;
  std::optional<std::string> mode;
  std::optional<std::string> risk_method;
  std::optional<std::string> alpha;
  std::map<std::string, std::optional<double>> scalars;        // top-level numbers
  std::map<std::string, std::optional<double>> pair_params;    // params.*
  std::optional<std::size_t> n;
  std::optional<std::size_t> trials;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> n_values;
  std::vector<double> eps_grid;
  std::vector<double> t_grid;
  std::vector<double> thetas;
  std::vector<std::string> kinds;
};

json load_config(const std::optional<std::string>& path) {
  if (!path) return json::object();
  if (!std::filesystem::exists(*path)) {
    throw ConfigError(fmt::format("config file not found: {}", *path));
  }
  std::ifstream f(*path);
  if (!f) throw ConfigError(fmt::format("cannot open config file: {}", *path));
  try {
    auto j = json::parse(f);
    if (!j.is_object()) throw ConfigError(fmt::format("config {} must hold a JSON object", *path));
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config {} is not valid JSON: {}", *path, e.what()));
  }
}

void apply_overrides(const Flags& f, json& c) {
  if (f.family) c["family"] = *f.family;
  if (f.mode) c["mode"] = *f.mode;
  if (f.risk_method) c["risk_method"] = *f.risk_method;
  if (f.alpha) {
    try {
      c["alpha"] = std::stod(*f.alpha);
    } catch (const std::exception&) {
      c["alpha"] = *f.alpha;
    }
  }
  for (const auto& [key, v] : f.scalars) {
    if (v) c[key] = *v;
  }
  for (const auto& [key, v] : f.pair_params) {
    if (!v) continue;
    if (!c.contains("params") || !c["params"].is_object()) c["params"] = json::object();
    c["params"][key] = *v;
    // kappa and c also drive the lowerbound subcommand.
    if (key == "kappa" || key == "c") c[key] = *v;
  }
  if (f.n) c["n"] = *f.n;
  if (f.trials) c["trials"] = *f.trials;
  if (!f.n_grid.empty()) c["n_grid"] = f.n_grid;
  if (!f.n_values.empty()) c["n_values"] = f.n_values;
  if (!f.eps_grid.empty()) c["eps_grid"] = f.eps_grid;
  if (!f.t_grid.empty()) c["t_grid"] = f.t_grid;
  if (!f.thetas.empty()) c["thetas"] = f.thetas;
  if (!f.kinds.empty()) c["kinds"] = f.kinds;
}

std::uint64_t resolve_seed(const Flags& f, const json& c) {
  if (f.seed) return *f.seed;
  if (c.contains("seed")) {
    if (!c["seed"].is_number_unsigned()) throw ConfigError("config: invalid field(s): seed (nonnegative integer)");
    return c["seed"].get<std::uint64_t>();
  }
  return 42;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plug-in Bayes detector toolkit: risk, prior estimation, divergences, margin and rate experiments",
               "priorplug"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Flags f;
  app.add_option("--config", f.config_path, "JSON configuration file");
  app.add_option("--out", f.out_dir, "Output directory (CSV/JSON files and manifest.json)");
  app.add_option("--seed", f.seed, "Master seed (default 42)");
  app.add_option("--threads", f.threads, "Worker threads, 0 = hardware concurrency");
  app.add_option("--family", f.family, "gaussian, discrete, appendix_a, mixture or uniform");
  for (const char* key : {"q", "theta", "q_used", "q_alt", "c_eta", "c_prime", "tol"}) {
    std::string flag = std::string("--") + key;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    app.add_option(flag, f.scalars[key]);
  }
  for (const char* key : {"mean0", "mean1", "sigma", "kappa", "c", "t"}) {
    app.add_option(std::string("--") + key, f.pair_params[key]);
  }
  app.add_option("--mode", f.mode, "labeled or unlabeled");
  app.add_option("--risk-method", f.risk_method, "automatic, quadrature or monte_carlo");
  app.add_option("--alpha", f.alpha, "Margin exponent for the rate fit (number or inf)");
  app.add_option("--n", f.n, "Sample size");
  app.add_option("--trials", f.trials, "Monte Carlo trials");
  app.add_option("--n-grid", f.n_grid, "Sample sizes of the excess-risk curve");
  app.add_option("--n-values", f.n_values, "Sample sizes for the lower-bound report");
  app.add_option("--eps", f.eps_grid, "Deviation grid for the concentration probe");
  app.add_option("--t-grid", f.t_grid, "Margin grid");
  app.add_option("--thetas", f.thetas, "Trim bounds for the Lipschitz probe");
  app.add_option("--kinds", f.kinds, "Divergences: tv, hellinger_sq, chi_sq, kl");

  const std::vector<std::pair<std::string, std::function<json(Context&)>>> commands = {
      {"risk", run_risk},
      {"estimate", run_estimate},
      {"divergence", run_divergence},
      {"margin", run_margin},
      {"lowerbound", run_lowerbound},
      {"rates", run_rates},
      {"lipschitz", run_lipschitz},
      {"concentration", run_concentration},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::string subcommand;
  std::function<json(Context&)> fn;
  for (const auto& [name, cmd] : commands) {
    if (app.got_subcommand(name)) {
      subcommand = name;
      fn = cmd;
    }
  }

  try {
    const auto started = utc_timestamp();
    Context ctx;
    ctx.config = load_config(f.config_path);
    apply_overrides(f, ctx.config);
    ctx.seed = resolve_seed(f, ctx.config);
    ctx.config["seed"] = ctx.seed;
    ctx.threads = f.threads;
    OutputDir dir(f.out_dir ? std::optional<std::filesystem::path>(*f.out_dir) : std::nullopt);
    ctx.out = &dir;

    const json result = fn(ctx);
    out << result.dump(2) << '\n';

    RunManifest manifest;
    manifest.tool_version = std::string(kVersion);
    manifest.subcommand = subcommand;
    manifest.config_hash = config_hash(ctx.config);
    manifest.master_seed = ctx.seed;
    manifest.started = started;
    manifest.finished = utc_timestamp();
    dir.write_manifest(manifest);
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const WriteError& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const TrialError& e) {
    err << fmt::format("numeric failure in {}: {} (n={}, trial={}, seed={})\n", subcommand, e.what(),
                       e.n(), e.trial(), e.seed());
    return kNumeric;
  } catch (const std::exception& e) {
    err << fmt::format("numeric failure in {}: {}\n", subcommand, e.what());
    return kNumeric;
  }
}

}  // namespace priorplug::cli
