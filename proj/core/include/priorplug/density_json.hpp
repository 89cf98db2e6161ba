#pragma once

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"

namespace priorplug {

/// {"family": "gaussian"|"discrete"|"appendix_a"|"mixture"|"uniform", "params": {...}}
///
/// For appendix_a the stored c1 is informational; loading re-solves it from
/// (kappa, c, t). Custom pairs are not serializable.
nlohmann::json pair_to_json(const DensityPair& pair);
DensityPair pair_from_json(const nlohmann::json& j);

/// Pair fields plus "q" and "theta".
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

}  // namespace priorplug
