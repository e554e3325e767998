#include "samsara/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace samsara {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

double Rng::exponential(double mean) { return -mean * std::log(uniform_pos()); }

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = uniform_pos();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

void Rng::dirichlet(std::span<const double> concentration, std::span<double> out) {
  if (concentration.size() != out.size())
    throw std::invalid_argument("dirichlet: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gamma(concentration[i]);
    sum += out[i];
  }
  for (auto& x : out) x /= sum;
}

std::uint64_t Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
  std::uint64_t total = 0;
  // Split large means so the product method stays in range.
  while (mean > 30.0) {
    const double half = mean * 0.5;
    total += poisson(half);
    mean -= half;
  }
  const double limit = std::exp(-mean);
  double prod = uniform();
  std::uint64_t n = 0;
  while (prod > limit) {
    ++n;
    prod *= uniform();
  }
  return total + n;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

std::size_t Rng::categorical(std::span<const double> weights, double total) {
  if (weights.empty() || !(total > 0.0))
    throw std::invalid_argument("categorical: empty weights or nonpositive total");
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding pushed u past the accumulated sum; return the last viable entry.
  if (last_positive == weights.size())
    throw std::invalid_argument("categorical: all weights are zero");
  return last_positive;
}

}  // namespace samsara
