#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace samsara {

// Deterministic random stream. All variates are generated from the raw
// mt19937_64 output through fixed algorithms, so a seed reproduces the same
// chain regardless of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();
  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // Exponential with the given mean.
  double exponential(double mean);

  // Unit-scale gamma variate, shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);

  double beta(double a, double b);

  void dirichlet(std::span<const double> concentration, std::span<double> out);

  // Inverse-gamma with shape a, scale b.
  double inverse_gamma(double a, double b) { return b / gamma(a); }

  std::uint64_t poisson(double mean);

  // Unbiased integer in [0, n); n > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  // Index i with probability weights[i] / total; total must equal the sum of
  // the (nonnegative) weights and be positive.
  std::size_t categorical(std::span<const double> weights, double total);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace samsara
