#include "netbart/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace netbart {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open(double lo, double hi) {
  for (;;) {
    double u = lo + (hi - lo) * uniform();
    if (u > lo && u < hi) return u;
  }
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

double Rng::normal() {
  for (;;) {
    double u = 2.0 * uniform() - 1.0;
    double v = 2.0 * uniform() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double Rng::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) throw std::invalid_argument("gamma: bad parameters");
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^{1/a}.
    double u = uniform_open(0.0, 1.0);
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform_open(0.0, 1.0);
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return scale * d * v;
    }
  }
}

double Rng::truncated_normal_above(double lower) {
  if (lower < 0.45) {
    // Plain rejection: acceptance probability = 1 - Phi(lower) >= 0.33.
    for (;;) {
      double z = normal();
      if (z > lower) return z;
    }
  }
  // Robert (1995): exponential proposal with rate at the optimal alpha.
  const double alpha = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    double z = lower - std::log(uniform_open(0.0, 1.0)) / alpha;
    double rho = std::exp(-0.5 * (z - alpha) * (z - alpha));
    if (uniform() < rho) return z;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace netbart
