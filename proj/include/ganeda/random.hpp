#pragma once

#include <cstdint>
#include <random>

namespace ganeda {

// Every stochastic operation takes an explicit generator; there is no global
// random state anywhere in the library.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace ganeda
