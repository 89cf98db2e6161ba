#include "priorplug/density_json.hpp"

#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "priorplug/error.hpp"

namespace priorplug {

namespace {

using nlohmann::json;

/// Collects every schema problem before throwing, so the CLI can list them all.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {}

  double number(const char* key) {
    if (!obj_.is_object() || !obj_.contains(key)) {
      missing_.push_back(prefix_ + key);
      return 0.0;
    }
    const auto& v = obj_.at(key);
    if (!v.is_number()) {
      missing_.push_back(prefix_ + key + " (not a number)");
      return 0.0;
    }
    return v.get<double>();
  }

  std::vector<double> numbers(const char* key) {
    if (!obj_.is_object() || !obj_.contains(key) || !obj_.at(key).is_array()) {
      missing_.push_back(prefix_ + key + " (array of numbers)");
      return {};
    }
    std::vector<double> out;
    for (const auto& v : obj_.at(key)) {
      if (!v.is_number()) {
        missing_.push_back(prefix_ + key + " (non-numeric entry)");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::vector<MixtureComponent> components(const char* key) {
    if (!obj_.is_object() || !obj_.contains(key) || !obj_.at(key).is_array()) {
      missing_.push_back(prefix_ + key + " (array of {weight, mean, sigma})");
      return {};
    }
    std::vector<MixtureComponent> out;
    std::size_t i = 0;
    for (const auto& c : obj_.at(key)) {
      FieldReader sub(c, fmt::format("{}{}[{}].", prefix_, key, i++));
      MixtureComponent comp{sub.number("weight"), sub.number("mean"), sub.number("sigma")};
      sub.forward_to(missing_);
      out.push_back(comp);
    }
    return out;
  }

  void problem(std::string what) { missing_.push_back(prefix_ + what); }

  void forward_to(std::vector<std::string>& sink) const {
    sink.insert(sink.end(), missing_.begin(), missing_.end());
  }

  void throw_if_invalid(std::string_view what) const {
    if (!missing_.empty()) {
      throw ConfigError(fmt::format("{}: missing or invalid field(s): {}", what,
                                    fmt::join(missing_, ", ")));
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string> missing_;
};

}  // namespace

nlohmann::json pair_to_json(const DensityPair& pair) {
  json params;
  switch (pair.family()) {
    case Family::gaussian: {
      const auto& p = std::get<GaussianPairParams>(pair.params());
      params = {{"mean0", p.mean0}, {"mean1", p.mean1}, {"sigma", p.sigma}};
      if (p.degenerate_equal) params["degenerate_equal"] = true;
      break;
    }
    case Family::discrete: {
      const auto& p = std::get<DiscretePairParams>(pair.params());
      params = {{"alphabet", p.alphabet}, {"weights0", p.weights0}, {"weights1", p.weights1}};
      break;
    }
    case Family::appendix_a: {
      const auto& p = std::get<AppendixAPairParams>(pair.params());
      params = {{"kappa", p.kappa}, {"c", p.c}, {"t", p.t}, {"c1", p.c1}};
      break;
    }
    case Family::mixture: {
      const auto& p = std::get<MixturePairParams>(pair.params());
      auto comps = [](const std::vector<MixtureComponent>& cs) {
        json arr = json::array();
        for (const auto& c : cs) arr.push_back({{"weight", c.weight}, {"mean", c.mean}, {"sigma", c.sigma}});
        return arr;
      };
      params = {{"components0", comps(p.components0)}, {"components1", comps(p.components1)}};
      break;
    }
    case Family::uniform: {
      const auto& p = std::get<UniformPairParams>(pair.params());
      params = {{"lo0", p.lo0}, {"hi0", p.hi0}, {"lo1", p.lo1}, {"hi1", p.hi1}};
      break;
    }
    case Family::custom:
      throw ConfigError("custom density pairs cannot be serialized");
  }
  return {{"family", std::string(to_string(pair.family()))}, {"params", params}};
}

DensityPair pair_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError("scenario: missing or invalid field(s): family");
  }
  const auto family = j.at("family").get<std::string>();
  static const json kEmpty = json::object();
  const json& params = j.contains("params") ? j.at("params") : kEmpty;
  FieldReader r(params, "params.");
  if (!j.contains("params")) r.number("<object>");

  try {
    if (family == "gaussian") {
      const double m0 = r.number("mean0");
      const double m1 = r.number("mean1");
      const double s = r.number("sigma");
      const bool eq = params.is_object() && params.value("degenerate_equal", false);
      r.throw_if_invalid("gaussian pair");
      return DensityPair::gaussian(m0, m1, s, eq);
    }
    if (family == "discrete") {
      auto a = r.numbers("alphabet");
      auto w0 = r.numbers("weights0");
      auto w1 = r.numbers("weights1");
      r.throw_if_invalid("discrete pair");
      return DensityPair::discrete(std::move(a), std::move(w0), std::move(w1));
    }
    if (family == "appendix_a") {
      const double kappa = r.number("kappa");
      const double c = r.number("c");
      const double t = r.number("t");
      r.throw_if_invalid("appendix_a pair");
      return build_appendix_a(kappa, c, t);
    }
    if (family == "mixture") {
      auto c0 = r.components("components0");
      auto c1 = r.components("components1");
      r.throw_if_invalid("mixture pair");
      return DensityPair::mixture(std::move(c0), std::move(c1));
    }
    if (family == "uniform") {
      const double lo0 = r.number("lo0");
      const double hi0 = r.number("hi0");
      const double lo1 = r.number("lo1");
      const double hi1 = r.number("hi1");
      r.throw_if_invalid("uniform pair");
      return DensityPair::uniform(lo0, hi0, lo1, hi1);
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const ConstructionError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError(fmt::format(
      "scenario: unknown family '{}' (expected gaussian, discrete, appendix_a, mixture, uniform)",
      family));
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  auto j = pair_to_json(scenario.pair());
  j["q"] = scenario.q();
  j["theta"] = scenario.theta();
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  FieldReader r(j, "");
  const double q = r.number("q");
  const double theta = r.number("theta");
  if (j.contains("theta") && j.at("theta").is_number() && !(theta > 0.0 && theta < 0.5)) {
    r.problem(fmt::format("theta (must lie in (0, 1/2), got {})", theta));
  } else if (j.contains("q") && j.at("q").is_number() && !(q >= theta && q <= 1.0 - theta)) {
    r.problem(fmt::format("q (must lie in [theta, 1 - theta], got {})", q));
  }
  std::optional<DensityPair> pair;
  try {
    pair = pair_from_json(j);
  } catch (const ConfigError& e) {
    std::vector<std::string> problems;
    r.forward_to(problems);
    if (problems.empty()) throw;
    throw ConfigError(fmt::format("{}; scenario: missing or invalid field(s): {}", e.what(),
                                  fmt::join(problems, ", ")));
  }
  r.throw_if_invalid("scenario");
  try {
    return Scenario(std::move(*pair), q, theta);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace priorplug
