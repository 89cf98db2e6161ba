#include "priorplug/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "priorplug/error.hpp"
#include "priorplug/numerics.hpp"

namespace priorplug {

namespace {

constexpr std::size_t kUniformCells = 1024;
constexpr int kClusterSteps = 112;  // 10^(-k/8) down to 1e-14 of the piece length
constexpr int kNoMass = 3;

// 0: eta == 1/2, 1: 0 < |eta - 1/2| <= t, 2: |eta - 1/2| > t.
// Uses eta - 1/2 = (q p1 - (1 - q) p0) / (2 f) to avoid the division.
int margin_category(double q, double a0, double a1, double t) {
  const double f = q * a1 + (1.0 - q) * a0;
  if (!(f > 0.0)) return kNoMass;
  const double d = q * a1 - (1.0 - q) * a0;
  if (d == 0.0) return 0;
  return std::abs(d) <= 2.0 * t * f ? 1 : 2;
}

std::vector<double> clustered_grid(double u, double v) {
  const double len = v - u;
  std::vector<double> g;
  g.reserve(kUniformCells + 2 * kClusterSteps + 2);
  for (std::size_t i = 0; i <= kUniformCells; ++i) {
    g.push_back(u + len * static_cast<double>(i) / static_cast<double>(kUniformCells));
  }
  for (int k = 1; k <= kClusterSteps; ++k) {
    const double r = std::pow(10.0, -static_cast<double>(k) / 8.0);
    g.push_back(u + len * r);
    g.push_back(v - len * r);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  g.erase(std::remove_if(g.begin(), g.end(), [&](double x) { return x < u || x > v; }), g.end());
  // The right end belongs to the next segment's formula; stay just inside.
  g.back() = std::nextafter(v, u);
  return g;
}

double continuous_margin(const Scenario& s, double t) {
  const auto& pair = s.pair();
  const double q = s.q();
  auto cat = [&](double x) { return margin_category(q, pair.p0(x), pair.p1(x), t); };
  auto marginal = [&](double x) { return q * pair.p1(x) + (1.0 - q) * pair.p0(x); };
  auto side = [&](double x) {
    const double d = q * pair.p1(x) - (1.0 - q) * pair.p0(x);
    return (d > 0.0) - (d < 0.0);
  };

  const auto seg = pair.segments();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
    auto cuts = numerics::label_switches(side, seg[k], seg[k + 1]);
    cuts.insert(cuts.begin(), seg[k]);
    cuts.push_back(seg[k + 1]);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double u = cuts[p];
      const double v = cuts[p + 1];
      if (!(v > u)) continue;
      const auto g = clustered_grid(u, v);
      std::vector<int> c(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) c[i] = cat(g[i]);

      double start = u;
      auto emit = [&](double lo, double hi, int label) {
        if (label == 1 && hi > lo) {
          total += numerics::integrate(marginal, lo, hi, 1e-15, 1e-12).value;
        }
      };
      for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (c[i + 1] == c[i]) continue;
        const int left = c[i];
        const double sw = numerics::bisect_switch([&](double x) { return cat(x) != left; }, g[i],
                                                  g[i + 1], 1e-15);
        emit(start, sw, left);
        start = sw;
      }
      emit(start, v, c.back());
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double discrete_margin(const Scenario& s, double t) {
  const auto w0 = s.pair().weights(Hypothesis::h0);
  const auto w1 = s.pair().weights(Hypothesis::h1);
  const double q = s.q();
  double total = 0.0;
  for (std::size_t j = 0; j < w0.size(); ++j) {
    if (margin_category(q, w0[j], w1[j], t) == 1) total += q * w1[j] + (1.0 - q) * w0[j];
  }
  return std::min(total, 1.0);
}

void check_grid(std::span<const double> t_grid) {
  if (t_grid.size() < 5) {
    throw ArgumentError(fmt::format("margin fit needs at least 5 grid points, got {}", t_grid.size()));
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw ArgumentError("margin grid must be positive and strictly increasing");
    }
  }
  if (std::log10(t_grid.back() / t_grid.front()) < 1.5 - 1e-12) {
    throw ArgumentError(fmt::format("margin grid must span at least 1.5 decades, got [{}, {}]",
                                    t_grid.front(), t_grid.back()));
  }
}

// Index one past the last zero probability, if the zero prefix rule applies.
std::size_t zero_prefix(std::span<const double> probabilities) {
  std::size_t last_zero = 0;
  bool any = false;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] == 0.0) {
      last_zero = i;
      any = true;
    }
  }
  if (!any) return 0;
  for (std::size_t i = 0; i <= last_zero; ++i) {
    if (probabilities[i] != 0.0) {
      throw FitError(fmt::format(
          "margin fit: zero probability at grid index {} follows a positive one at index {}",
          last_zero, i));
    }
  }
  return last_zero + 1;
}

}  // namespace

double margin_probability(const Scenario& scenario, double t) {
  if (!(t > 0.0)) throw ArgumentError(fmt::format("margin_probability: t must be > 0, got {}", t));
  return scenario.pair().is_discrete() ? discrete_margin(scenario, t)
                                       : continuous_margin(scenario, t);
}

std::vector<double> default_margin_grid() { return numerics::log_spaced(1e-3, 0.3, 12); }

MarginProfile fit_margin_exponent(std::span<const double> t_grid,
                                  std::span<const double> probabilities) {
  check_grid(t_grid);
  if (probabilities.size() != t_grid.size()) {
    throw ArgumentError("margin fit: grid and probabilities differ in length");
  }
  MarginProfile out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.probabilities.assign(probabilities.begin(), probabilities.end());

  const std::size_t zeros = zero_prefix(probabilities);
  if (zeros >= 3) {
    out.infinite = true;
    out.alpha_hat = std::numeric_limits<double>::infinity();
    out.c0_hat = std::numeric_limits<double>::quiet_NaN();
    out.gap_c = t_grid[zeros - 1];
    out.r_squared = 1.0;
    return out;
  }

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = zeros; i < t_grid.size(); ++i) {
    const double p = probabilities[i];
    if (p < 0.0 || p > 1.0) throw FitError(fmt::format("margin fit: probability {} outside [0, 1]", p));
    if (p >= 1.0 - 1e-12) continue;  // saturated
    lx.push_back(std::log(t_grid[i]));
    ly.push_back(std::log(p));
  }
  if (lx.size() < 3) {
    throw FitError(fmt::format("margin fit: only {} unsaturated positive probabilities", lx.size()));
  }
  const auto fit = numerics::least_squares(lx, ly);
  out.alpha_hat = fit.slope;
  out.c0_hat = std::exp(fit.intercept);
  out.r_squared = fit.r_squared;
  out.fit_points = lx.size();
  return out;
}

MarginProfile fit_margin_exponent(const Scenario& scenario, std::span<const double> t_grid) {
  check_grid(t_grid);
  std::vector<double> probs;
  probs.reserve(t_grid.size());
  for (double t : t_grid) probs.push_back(margin_probability(scenario, t));
  auto out = fit_margin_exponent(t_grid, probs);
  if (out.infinite) out.gap_c = margin_gap(scenario);
  return out;
}

double margin_gap(const Scenario& scenario) {
  const auto& pair = scenario.pair();
  const double q = scenario.q();
  if (pair.is_discrete()) {
    const auto w0 = pair.weights(Hypothesis::h0);
    const auto w1 = pair.weights(Hypothesis::h1);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < w0.size(); ++j) {
      const double f = q * w1[j] + (1.0 - q) * w0[j];
      const double d = q * w1[j] - (1.0 - q) * w0[j];
      if (f > 0.0 && d != 0.0) gap = std::min(gap, std::abs(d) / (2.0 * f));
    }
    return gap;
  }
  if (margin_probability(scenario, 0.5) == 0.0) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 0.5;
  for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (margin_probability(scenario, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

nlohmann::json to_json(const MarginProfile& p) {
  nlohmann::json j;
  j["alpha_hat"] = p.infinite ? nlohmann::json("inf") : nlohmann::json(p.alpha_hat);
  j["c0_hat"] = p.infinite ? nlohmann::json(nullptr) : nlohmann::json(p.c0_hat);
  j["r2"] = p.r_squared;
  j["infinite"] = p.infinite;
  j["gap_c"] = p.infinite ? nlohmann::json(p.gap_c) : nlohmann::json(nullptr);
  j["fit_points"] = p.fit_points;
  return j;
}

}  // namespace priorplug
