#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "netweight/errors.hpp"

namespace netweight {

// mt19937_64 with local uniform conversions.  The engine's word sequence is
// fixed by the C++ standard; the standard <random> distributions are not, so
// we do the conversions ourselves to keep seeded runs reproducible across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on {0, ..., n-1}; modulo bias is < n / 2^64, irrelevant at our n
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // index sampled according to probs (need not be exactly normalized)
  int discrete(const std::vector<double>& probs) {
    double total = 0;
    for (double p : probs) total += p;
    double u = uniform() * total;
    double acc = 0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace netweight
