#include "priorplug/error.hpp"

#include <fmt/format.h>

namespace priorplug {

UndefinedPointError::UndefinedPointError(double x)
    : std::domain_error(fmt::format("both densities vanish at x = {}", x)), x_(x) {}

DegenerateSampleError::DegenerateSampleError(std::size_t index, double x)
    : std::domain_error(
          fmt::format("sample {} (x = {}) has p0 = p1 = 0; mixture density is zero", index, x)),
      index_(index) {}

TrialError::TrialError(const std::string& cause, std::size_t n, std::size_t trial,
                       std::uint64_t seed)
    : std::runtime_error(
          fmt::format("trial {} at n = {} (seed {}) failed: {}", trial, n, seed, cause)),
      n_(n),
      trial_(trial),
      seed_(seed) {}

}  // namespace priorplug
