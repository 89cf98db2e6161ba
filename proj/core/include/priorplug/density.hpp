#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "priorplug/random.hpp"

namespace priorplug {

/// H0: X ~ p0, H1: X ~ p1. Also used as the {0,1} decision of a detector.
enum class Hypothesis : std::uint8_t { h0 = 0, h1 = 1 };

constexpr int to_int(Hypothesis h) noexcept { return static_cast<int>(h); }

enum class Family { gaussian, discrete, appendix_a, mixture, uniform, custom };

std::string_view to_string(Family family) noexcept;

/// Equal-variance Gaussian pair N(mean0, sigma^2) vs N(mean1, sigma^2).
struct GaussianPairParams {
  double mean0 = 0.0;
  double mean1 = 0.0;
  double sigma = 1.0;
  /// Must be set to construct a pair with mean0 == mean1.
  bool degenerate_equal = false;
};

/// Two probability mass functions on a shared finite alphabet.
struct DiscretePairParams {
  std::vector<double> alphabet;
  std::vector<double> weights0;
  std::vector<double> weights1;
};

/// Piecewise family on [0, 1] with margin exponent 1/(kappa - 1) at q = 1/2:
///
///   p1(x) = (1 + 2c x^(k-1)) (1 - 2 t^(k-1)) / (1 - 4c (t x)^(k-1))   on [0, t)
///   p1(x) = 1 + 2 c1 (x - t)^(k-1)                                     on [t, 1]
///   p0(x) = 2 - p1(x)
///
/// c1 is not free: it is solved so that p1 integrates to one.
struct AppendixAPairParams {
  double kappa = 2.0;
  double c = 0.01;
  double t = 0.1;
  double c1 = 0.0;
};

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};

/// Finite Gaussian mixtures for each hypothesis (test corpora, heavier overlap shapes).
struct MixturePairParams {
  std::vector<MixtureComponent> components0;
  std::vector<MixtureComponent> components1;
};

/// Uniform densities on [lo0, hi0] and [lo1, hi1]; may be disjoint.
struct UniformPairParams {
  double lo0 = 0.0;
  double hi0 = 1.0;
  double lo1 = 0.0;
  double hi1 = 1.0;
};

/// Arbitrary continuous pair given by callables. Not serializable.
struct CustomPairParams {
  std::string name = "custom";
  std::function<double(double)> p0;
  std::function<double(double)> p1;
  double lo = 0.0;
  double hi = 1.0;
  /// Interior points where either density may jump or kink.
  std::vector<double> breakpoints;
  /// Set when p0 and p1 are the same function.
  bool identical = false;
};

class InverseCdfTable;

/// A pair of known class-conditional densities (p0, p1) on the real line.
///
/// Immutable after construction. Continuous families expose a bounded
/// integration domain split into smooth segments; discrete families expose
/// their atoms. Densities return 0 outside the support.
class DensityPair {
 public:
  using Params = std::variant<GaussianPairParams, DiscretePairParams, AppendixAPairParams,
                              MixturePairParams, UniformPairParams, CustomPairParams>;

  static DensityPair gaussian(double mean0, double mean1, double sigma,
                              bool degenerate_equal = false);
  static DensityPair discrete(std::vector<double> alphabet, std::vector<double> weights0,
                              std::vector<double> weights1);
  static DensityPair mixture(std::vector<MixtureComponent> components0,
                             std::vector<MixtureComponent> components1);
  static DensityPair uniform(double lo0, double hi0, double lo1, double hi1);
  static DensityPair custom(CustomPairParams params);
  /// Wraps already-solved parameters; see build_appendix_a for the solver.
  static DensityPair appendix_a(const AppendixAPairParams& solved);

  Family family() const noexcept { return family_; }
  const Params& params() const noexcept { return params_; }

  bool is_discrete() const noexcept { return family_ == Family::discrete; }
  /// p0 and p1 coincide.
  bool is_degenerate() const noexcept { return degenerate_; }
  /// Both densities are strictly positive on the whole integration domain.
  bool has_common_support() const noexcept { return common_support_; }

  double p0(double x) const;
  double p1(double x) const;
  double density(Hypothesis h, double x) const { return h == Hypothesis::h0 ? p0(x) : p1(x); }

  /// Continuous pairs: sorted segment endpoints lo = s0 < ... < sk = hi.
  /// Both densities are smooth inside each segment and vanish outside [lo, hi]
  /// (Gaussian tails beyond 10 sigma are treated as zero mass).
  std::span<const double> segments() const noexcept { return segments_; }
  double support_lo() const noexcept { return segments_.front(); }
  double support_hi() const noexcept { return segments_.back(); }

  /// Discrete pairs only (empty otherwise).
  std::span<const double> atoms() const noexcept;
  std::span<const double> weights(Hypothesis h) const noexcept;

  double sample(Hypothesis h, RandomStream& rng) const;

 private:
  DensityPair(Family family, Params params);
  void finish_construction();

  Family family_;
  Params params_;
  std::vector<double> segments_;
  bool degenerate_ = false;
  bool common_support_ = true;
  std::shared_ptr<const InverseCdfTable> inverse0_;
  std::shared_ptr<const InverseCdfTable> inverse1_;
};

/// A density pair with the true prior q = P(Y = 1) and trim bound theta.
class Scenario {
 public:
  /// Requires theta in (0, 1/2) and q in [theta, 1 - theta].
  Scenario(DensityPair pair, double q, double theta);

  const DensityPair& pair() const noexcept { return pair_; }
  double q() const noexcept { return q_; }
  double theta() const noexcept { return theta_; }

 private:
  DensityPair pair_;
  double q_;
  double theta_;
};

struct LabeledDataset {
  std::vector<double> x;
  std::vector<std::uint8_t> y;
  std::uint64_t seed = 0;
};

struct UnlabeledDataset {
  std::vector<double> x;
  std::uint64_t seed = 0;
};

double evaluate(const DensityPair& pair, Hypothesis h, double x);

/// p1(x)/p0(x); +infinity when p0(x) = 0 < p1(x).
/// Throws UndefinedPointError when both densities vanish.
double likelihood_ratio(const DensityPair& pair, double x);

/// Y_1..Y_n ~ Bernoulli(q). sample_labeled draws exactly these labels first,
/// so label-only consumers see the same labels as full samples with equal seeds.
std::vector<std::uint8_t> sample_labels(double q, std::size_t n, RandomStream& rng);

/// (Y_i, X_i) with Y ~ Bernoulli(q), X ~ p_Y. All labels are drawn before observations.
LabeledDataset sample_labeled(const Scenario& scenario, std::size_t n, RandomStream& rng);

/// X_i ~ q p1 + (1 - q) p0, drawn through latent labels; equals sample_labeled with
/// the labels dropped for the same stream state.
UnlabeledDataset sample_unlabeled(const Scenario& scenario, std::size_t n, RandomStream& rng);

UnlabeledDataset drop_labels(LabeledDataset data);

/// Alphabet {0, 1}, weights0 = (0.8, 0.2), weights1 = (0.3, 0.7). Used for
/// the infinite-margin-exponent experiments.
DensityPair default_discrete_pair();

/// Solves c1 by bisection on c1 in [0, 1] against the normalization of p1.
/// Throws ConstructionError for invalid parameters, a missing sign change or
/// a non-positive density.
DensityPair build_appendix_a(double kappa, double c, double t);

struct NormalizationResidual {
  double h0 = 0.0;  // |integral p0 - 1|
  double h1 = 0.0;  // |integral p1 - 1|
};

NormalizationResidual normalization_residual(const DensityPair& pair);

}  // namespace priorplug
