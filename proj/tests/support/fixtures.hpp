#pragma once

#include <vector>

#include "priorplug/density.hpp"

namespace fixtures {

priorplug::DensityPair gaussian02();  // N(0,1) vs N(2,1)

/// 20 seeded pairs of 2-3 component Gaussian mixtures, sigma in [0.9, 1.1].
/// The narrow sigma range keeps chi-square finite in both directions.
const std::vector<priorplug::DensityPair>& mixture_corpus();

/// One (pair, q) per corpus entry, q drawn in [0.1, 0.9].
struct PairPrior {
  const priorplug::DensityPair* pair;
  double q;
};
std::vector<PairPrior> mixture_corpus_priors();

}  // namespace fixtures
