#pragma once

#include <optional>
#include <string>

#include "manifest.hpp"
#include "priorplug/experiments.hpp"
#include "priorplug/margin.hpp"

namespace priorplug::cli {

/// Minimax floor overlay c' n^(-(1 + alpha)/2).
struct FloorOverlay {
  double alpha = 1.0;
  double c_prime = 0.0;
};

/// <stem>.csv: n,mean_excess,stderr,bound_thm2[,floor_thm3]
/// <stem>.overlay.json: the overlay series keyed by name.
void emit_plot_data(const ExcessRiskCurve& curve, const std::optional<FloorOverlay>& floor,
                    OutputDir& out, const std::string& stem);

/// <stem>.csv: t,probability[,fitted]; <stem>.overlay.json: fitted c0 t^alpha.
void emit_plot_data(const MarginProfile& profile, OutputDir& out, const std::string& stem);

}  // namespace priorplug::cli
