#pragma once

#include <cstdint>
#include <random>

namespace netbart {

// All stochastic code draws from this wrapper instead of <random>'s
// distribution objects, whose output is implementation-defined. The
// generators below are pinned down exactly, so a seed reproduces the
// same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53-bit uniform in [0, 1).
  double uniform();

  // Uniform in (lo, hi); resamples the endpoints away.
  double uniform_open(double lo, double hi);

  // Uniform integer in {0, ..., n-1}, n >= 1. Rejection, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Marsaglia's polar method.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1. scale = theta.
  double gamma(double shape, double scale);

  double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

  // Standard normal conditioned on z > lower (Robert's exponential
  // rejection once the bound is deep in the tail).
  double truncated_normal_above(double lower);
  // Standard normal conditioned on z <= upper.
  double truncated_normal_below(double upper) { return -truncated_normal_above(-upper); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stateless mixer for deriving independent substream seeds from a master
// seed and a job index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace netbart
