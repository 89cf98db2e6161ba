#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace priorplug {

/// Invalid argument or violated precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric routine (quadrature, root finding) failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

/// Both class-conditional densities vanish at the queried point.
class UndefinedPointError : public std::domain_error {
 public:
  explicit UndefinedPointError(double x);

  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// A sample at which the mixture density is zero for every prior.
class DegenerateSampleError : public std::domain_error {
 public:
  DegenerateSampleError(std::size_t index, double x);

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Building a density family or hypothesis instance failed.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Regression fits (margin exponent, rate) that cannot be carried out.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Monte Carlo trial failed; carries the trial coordinates for replay.
class TrialError : public std::runtime_error {
 public:
  TrialError(const std::string& cause, std::size_t n, std::size_t trial,
             std::uint64_t seed);

  std::size_t n() const noexcept { return n_; }
  std::size_t trial() const noexcept { return trial_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t n_;
  std::size_t trial_;
  std::uint64_t seed_;
};

/// Configuration / serialized description does not match the schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace priorplug
