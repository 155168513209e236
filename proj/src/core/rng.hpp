#pragma once

#include <cstdint>
#include <random>

namespace cohort {

// Deterministic random source. Distribution objects are constructed per call
// so no hidden distribution state survives between draws; the stream is fully
// determined by the seed and the call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(engine_);
  }

  double normal(double mean, double sd) {
    std::normal_distribution<double> d(mean, sd);
    return d(engine_);
  }

  // Gaussian truncated at zero from below.
  double truncated_normal(double mean, double sd) {
    double x = normal(mean, sd);
    return x < 0.0 ? 0.0 : x;
  }

  double lognormal(double log_mean, double log_sd) {
    std::lognormal_distribution<double> d(log_mean, log_sd);
    return d(engine_);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(engine_);
  }

  // Derives an independent child stream; used to hand each world/update its
  // own seed from one master seed.
  std::uint64_t fork() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cohort
