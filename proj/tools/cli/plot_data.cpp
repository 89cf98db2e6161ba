#include "plot_data.hpp"

#include <cmath>

#include <fmt/format.h>

#include "priorplug/lowerbound.hpp"

namespace priorplug::cli {

void emit_plot_data(const ExcessRiskCurve& curve, const std::optional<FloorOverlay>& floor,
                    OutputDir& out, const std::string& stem) {
  std::string csv = "n,mean_excess,stderr,bound_thm2";
  if (floor) csv += ",floor_thm3";
  csv += '\n';
  nlohmann::json n_values = nlohmann::json::array();
  nlohmann::json bound = nlohmann::json::array();
  nlohmann::json floors = nlohmann::json::array();
  for (const auto& p : curve.points) {
    const double n = static_cast<double>(p.n);
    const double b = 0.5 / std::sqrt(n);
    csv += fmt::format("{},{},{},{}", p.n, p.mean_excess, p.std_error, b);
    n_values.push_back(p.n);
    bound.push_back(b);
    if (floor) {
      const double f = minimax_floor(n, floor->alpha, floor->c_prime);
      csv += fmt::format(",{}", f);
      floors.push_back(f);
    }
    csv += '\n';
  }
  nlohmann::json overlay = {{"n", n_values}, {"bound_thm2", {{"formula", "0.5*n^-0.5"}, {"values", bound}}}};
  if (floor) {
    overlay["floor_thm3"] = {{"formula", "c_prime*n^(-(1+alpha)/2)"},
                             {"alpha", floor->alpha},
                             {"c_prime", floor->c_prime},
                             {"values", floors}};
  }
  out.write(stem + ".csv", csv);
  out.write(stem + ".overlay.json", overlay.dump(2) + "\n");
}

void emit_plot_data(const MarginProfile& profile, OutputDir& out, const std::string& stem) {
  const bool fitted = !profile.infinite;
  std::string csv = fitted ? "t,probability,fitted\n" : "t,probability\n";
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < profile.t_grid.size(); ++i) {
    const double t = profile.t_grid[i];
    csv += fmt::format("{},{}", t, profile.probabilities[i]);
    if (fitted) {
      const double f = profile.c0_hat * std::pow(t, profile.alpha_hat);
      csv += fmt::format(",{}", f);
      values.push_back(f);
    }
    csv += '\n';
  }
  nlohmann::json overlay = {{"t", profile.t_grid}};
  if (fitted) {
    overlay["fitted"] = {{"formula", "c0_hat*t^alpha_hat"},
                         {"alpha_hat", profile.alpha_hat},
                         {"c0_hat", profile.c0_hat},
                         {"values", values}};
  }
  out.write(stem + ".csv", csv);
  out.write(stem + ".overlay.json", overlay.dump(2) + "\n");
}

}  // namespace priorplug::cli
