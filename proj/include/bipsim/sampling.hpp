#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "bipsim/errors.hpp"

namespace bipsim {

// Deterministic level sampler. Only the raw mt19937_64 stream is used
// (uniform doubles come from the top 53 bits, levels from inverse-CDF
// lookup), so identical seeds give identical draws on every platform and
// release. The manifest records algorithm().
class LevelSampler {
 public:
  explicit LevelSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  // Index m drawn with probability probs[m] / sum(probs).
  int sample(const Eigen::VectorXd& probs) {
    const double total = probs.sum();
    if (!(total > 0.0)) {
      throw PreconditionError("LevelSampler: probabilities sum to zero");
    }
    const double u = uniform01() * total;
    double cumulative = 0.0;
    for (int m = 0; m < probs.size(); ++m) {
      cumulative += probs[m];
      if (u < cumulative) return m;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  static const char* algorithm() { return "mt19937_64/inverse-cdf-53bit"; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace bipsim
