#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cmix {

// Seed derivation: every stage of a pipeline gets its own stream derived
// from one command-level seed, so partial pipelines replay identically.
//   stream for stage "cmc", sentence 17:  mix_seed(mix_seed(seed, "cmc"), 17)
uint64_t fnv1a64(std::string_view s);
uint64_t splitmix64(uint64_t x);
uint64_t mix_seed(uint64_t seed, std::string_view stage);
uint64_t mix_seed(uint64_t seed, uint64_t index);

// Deterministic random stream. mt19937_64 is fully specified by the
// standard; the float/index conversions are done by hand because the
// std::*_distribution adapters are implementation-defined and artifacts
// must be bit-reproducible across toolchains.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
  uint64_t uniform_index(uint64_t n) { return gen_() % n; }

  // Standard normal via Box-Muller with a cached spare.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Draws an index with probability weights[i] / sum(weights).
  // Weights must be non-negative with a positive sum.
  size_t weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    // Rounding may push u past the last positive weight.
    for (size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
  }

  // First k elements of a uniform random permutation of [0, n).
  std::vector<size_t> sample_without_replacement(size_t n, size_t k);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cmix
