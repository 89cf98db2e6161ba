#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "priorplug/density.hpp"

namespace priorplug {

enum class DivergenceKind { tv, hellinger_sq, chi_sq, kl };
enum class DivergenceMethod { exact_sum, quadrature, closed_form };

std::string_view to_string(DivergenceKind kind) noexcept;
std::string_view to_string(DivergenceMethod method) noexcept;
DivergenceKind divergence_kind_from_string(std::string_view s);

struct DivergenceValue {
  DivergenceKind kind = DivergenceKind::tv;
  double value = 0.0;  // +infinity is a valid chi_sq / kl result
  DivergenceMethod method = DivergenceMethod::quadrature;
  double tol = 0.0;
};

/// V(p1, p0) = 1 - integral min(p1, p0).
DivergenceValue total_variation(const DensityPair& pair);

/// H^2(p1, p0) = integral (sqrt p1 - sqrt p0)^2, in [0, 2].
DivergenceValue hellinger_sq(const DensityPair& pair);

/// Which density sits in the numerator of chi-square.
enum class ChiSqOrder { p1_over_p0, p0_over_p1 };

/// chi^2(p || q) = integral_{pq > 0} p^2 / q - 1 with (p, q) = (p1, p0) by default.
/// Mass of p where q vanishes gives +infinity.
DivergenceValue chi_sq(const DensityPair& pair, ChiSqOrder order = ChiSqOrder::p1_over_p0);

/// KL(Bern(a) || Bern(b)) in nats with 0 log 0 = 0.
/// Returns +infinity for b in {0, 1} and a != b.
double bernoulli_kl(double a, double b);

/// Per-sample KL between the labeled joint laws of (X, Y) under priors qa and qb
/// with shared class densities. The X parts cancel, leaving bernoulli_kl(qa, qb).
double labeled_joint_kl(const DensityPair& pair, double qa, double qb);

/// I(q) = integral (p1 - p0)^2 / (q p1 + (1 - q) p0) for one unlabeled observation.
double fisher_information_unlabeled(const DensityPair& pair, double q);

/// r2^2(q, q + h) = H^2(f(., q), f(., q + h)) with f(., q) = q p1 + (1 - q) p0.
double hellinger_shift_sq(const DensityPair& pair, double q, double h);

/// V(f(., q), f(., q + h)); equals |h| V(p1, p0) analytically.
double mixture_shift_tv(const DensityPair& pair, double q, double h);

nlohmann::json to_json(const DivergenceValue& value);

}  // namespace priorplug
