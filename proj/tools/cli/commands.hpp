#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "manifest.hpp"

namespace priorplug::cli {

struct Context {
  nlohmann::json config;  // effective configuration after flag overrides
  std::uint64_t seed = 42;
  unsigned threads = 0;
  OutputDir* out = nullptr;
};

nlohmann::json run_risk(Context& ctx);
nlohmann::json run_estimate(Context& ctx);
nlohmann::json run_divergence(Context& ctx);
nlohmann::json run_margin(Context& ctx);
nlohmann::json run_lowerbound(Context& ctx);
nlohmann::json run_rates(Context& ctx);
nlohmann::json run_lipschitz(Context& ctx);
nlohmann::json run_concentration(Context& ctx);

}  // namespace priorplug::cli
