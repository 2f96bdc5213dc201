#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mjam {

// Deterministic RNG used everywhere randomness is needed. All sampling goes
// through the helpers below instead of <random> distributions, whose output
// is implementation-defined and would break run-to-run reproducibility
// guarantees if the standard library changed underneath us.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  // Box-Muller; one value per call keeps the draw count predictable.
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
  }

  // Index sampled from unnormalized nonnegative weights.
  int categorical(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double u = uniform() * total;
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Derive an independent stream, e.g. one per episode index.
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    // splitmix64 over the combined value
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::string save_state() const {
    std::ostringstream os;
    os << gen_;
    return os.str();
  }

  void restore_state(const std::string& s) {
    std::istringstream is(s);
    is >> gen_;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mjam
