#pragma once

// Small statistical helpers for tests: chi-square and Kolmogorov-Smirnov
// p-values, weighted ECDFs. Test-side oracles only.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace teststats {

// Regularized lower incomplete gamma P(a, x), series and continued fraction.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction for Q(a, x)
  double b = x + 1.0 - a;
  double c = 1e308;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Survival function of a chi-square with k degrees of freedom.
inline double chi2_sf(double x, double k) { return 1.0 - gamma_p(0.5 * k, 0.5 * x); }

// Kolmogorov distribution survival function.
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// Two-sample KS p-value from the max ECDF gap and the effective sizes.
inline double ks_two_sample_pvalue(double d, double n1, double n2) {
  const double ne = n1 * n2 / (n1 + n2);
  return kolmogorov_sf((std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d);
}

struct WeightedEcdf {
  std::vector<double> values;
  std::vector<double> cum;  // normalized cumulative weight, same order

  WeightedEcdf(std::vector<double> v, std::vector<double> w) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return v[a] < v[b];
    });
    double total = 0.0;
    for (double x : w) total += x;
    values.reserve(v.size());
    cum.reserve(v.size());
    double acc = 0.0;
    for (std::size_t i : order) {
      acc += w[i];
      values.push_back(v[i]);
      cum.push_back(acc / total);
    }
  }

  double at(double x) const {
    const auto it = std::upper_bound(values.begin(), values.end(), x);
    if (it == values.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - values.begin()) - 1];
  }

  // effective sample size of the weights
  static double effective_n(std::span<const double> w) {
    double s = 0.0;
    double s2 = 0.0;
    for (double x : w) {
      s += x;
      s2 += x * x;
    }
    return s * s / s2;
  }
};

// KS distance between a weighted sample and an unweighted one.
inline double ks_distance(const WeightedEcdf& f, std::span<const double> sample) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double g_hi = static_cast<double>(i + 1) / n;
    const double g_lo = static_cast<double>(i) / n;
    const double fx = f.at(sorted[i]);
    d = std::max(d, std::abs(fx - g_hi));
    d = std::max(d, std::abs(fx - g_lo));
  }
  return d;
}

}  // namespace teststats
