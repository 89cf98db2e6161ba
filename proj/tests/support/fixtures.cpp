#include "fixtures.hpp"

#include <random>

namespace fixtures {

using priorplug::DensityPair;
using priorplug::MixtureComponent;

DensityPair gaussian02() { return DensityPair::gaussian(0.0, 2.0, 1.0); }

namespace {

std::vector<MixtureComponent> draw_components(std::mt19937& gen) {
  std::uniform_int_distribution<int> count(2, 3);
  std::uniform_real_distribution<double> mean(-2.0, 2.0);
  std::uniform_real_distribution<double> sigma(0.9, 1.1);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  const int k = count(gen);
  std::vector<MixtureComponent> comps;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    comps.push_back({weight(gen), mean(gen), sigma(gen)});
    total += comps.back().weight;
  }
  for (auto& c : comps) c.weight /= total;
  return comps;
}

}  // namespace

const std::vector<DensityPair>& mixture_corpus() {
  static const std::vector<DensityPair> corpus = [] {
    std::mt19937 gen(20240611);
    std::vector<DensityPair> out;
    for (int i = 0; i < 20; ++i) {
      auto c0 = draw_components(gen);
      auto c1 = draw_components(gen);
      out.push_back(DensityPair::mixture(std::move(c0), std::move(c1)));
    }
    return out;
  }();
  return corpus;
}

std::vector<PairPrior> mixture_corpus_priors() {
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> q(0.1, 0.9);
  std::vector<PairPrior> out;
  for (const auto& p : mixture_corpus()) out.push_back({&p, q(gen)});
  return out;
}

}  // namespace fixtures
