#pragma once

// Random fixtures shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "entlab/dist_core.hpp"
#include "entlab/hypotheses.hpp"
#include "entlab/rng.hpp"

namespace entlab::testing {

inline Pmf random_pmf(std::size_t support, std::uint64_t seed) {
  rng::SequentialEngine engine(seed, 0x7465737450ull);
  std::vector<double> w(support);
  for (auto& v : w) {
    v = -std::log(engine.open_unit());
  }
  return Pmf::from_weights(w);
}

inline JointPmf random_joint(std::size_t support, std::uint64_t seed) {
  rng::SequentialEngine engine(seed, 0x746573744Aull);
  const Pmf px = random_pmf(support, seed);
  std::vector<double> p1(support);
  for (auto& v : p1) {
    v = engine.unit();
  }
  return JointPmf::from_marginal_and_conditional(px, p1);
}

inline Hypothesis random_hypothesis(std::size_t support, std::uint64_t seed) {
  return Hypothesis::from_mask(rng::splitmix64(seed), support);
}

}  // namespace entlab::testing
