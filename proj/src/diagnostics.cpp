#include "samsara/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace samsara {

double acf(std::span<const double> series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag >= n) throw Error("acf: lag out of range");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double x : series) denom += (x - mean) * (x - mean);
  if (!(denom > 0.0)) throw Error("acf: series has zero variance");
  double num = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i)
    num += (series[i] - mean) * (series[i + lag] - mean);
  const double nf = static_cast<double>(n);
  return (nf / (nf - static_cast<double>(lag))) * num / denom;
}

CorrLength correlation_length(std::span<const double> series) {
  const std::size_t n = series.size();
  std::size_t changes = 0;
  double prev = acf(series, 0);
  for (std::size_t lag = 1; lag < n; ++lag) {
    const double cur = acf(series, lag);
    if ((prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0)) ++changes;
    if (changes >= 5) return {lag, false};
    prev = cur;
  }
  return {n, true};
}

double min_distance_scalar(const Population& pop, std::span<const double> v) {
  if (pop.size() == 0) return kPosInf;
  double best = kPosInf;
  for (const auto& ind : pop.individuals) {
    if (ind.params.size() != v.size()) throw Error("min_distance_scalar: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double d = ind.params[k] - v[k];
      d2 += d * d;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

double empirical_cmf(std::span<const double> xs, double threshold) {
  if (xs.empty()) throw Error("empirical_cmf: empty sample");
  std::size_t count = 0;
  for (double x : xs)
    if (x <= threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(xs.size());
}

ReferencePointSet draw_reference_points(const std::vector<std::vector<Society>>& chains,
                                        std::size_t sp, std::size_t n_points,
                                        std::uint64_t seed) {
  std::vector<const Params*> pool;
  for (const auto& chain : chains)
    for (const auto& y : chain)
      for (const auto& ind : y.populations.at(sp).individuals) pool.push_back(&ind.params);
  if (pool.empty()) throw Error("draw_reference_points: no individuals in the pooled chains");
  Rng rng(seed);
  ReferencePointSet refs;
  refs.points.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    refs.points.push_back(*pool[rng.uniform_int(pool.size())]);
  return refs;
}

DistanceSeries min_distance_series(const std::vector<std::vector<Society>>& chains,
                                   std::size_t sp, const ReferencePointSet& refs) {
  DistanceSeries x(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    x[c].resize(refs.points.size());
    for (std::size_t l = 0; l < refs.points.size(); ++l) {
      x[c][l].reserve(chains[c].size());
      for (const auto& y : chains[c])
        x[c][l].push_back(min_distance_scalar(y.populations.at(sp), refs.points[l]));
    }
  }
  // Empty populations produce +inf sentinels; cap them at twice the pooled
  // finite maximum per reference point so the moment-based comparisons stay
  // defined. CMF values below the cap are unaffected.
  for (std::size_t l = 0; l < refs.points.size(); ++l) {
    double max_finite = 0.0;
    for (const auto& chain : x)
      for (double v : chain[l])
        if (std::isfinite(v)) max_finite = std::max(max_finite, v);
    const double cap = max_finite > 0.0 ? 2.0 * max_finite : 1.0;
    for (auto& chain : x)
      for (double& v : chain[l])
        if (!std::isfinite(v)) v = cap;
  }
  return x;
}

namespace {

void check_rect(const DistanceSeries& x) {
  if (x.size() < 2) throw Error("diagnostics: need at least two chains");
  const std::size_t n_ref = x[0].size();
  const std::size_t n = n_ref == 0 ? 0 : x[0][0].size();
  for (const auto& chain : x) {
    if (chain.size() != n_ref) throw Error("diagnostics: ragged reference sets");
    for (const auto& series : chain)
      if (series.size() != n) throw Error("diagnostics: chains must have equal thinned length");
  }
}

// Shared threshold grid for one reference point, spanning the pooled finite
// range of all chains.
std::vector<double> threshold_grid(const DistanceSeries& x, std::size_t l, std::size_t grid) {
  double lo = kPosInf;
  double hi = -kPosInf;
  for (const auto& chain : x)
    for (double v : chain[l]) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi >= lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  std::vector<double> t(grid);
  for (std::size_t i = 0; i < grid; ++i)
    t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
  return t;
}

double lp_norm(std::span<const double> a, std::span<const double> b, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(acc / static_cast<double>(a.size()), 1.0 / p);
}

std::vector<std::vector<double>> cmf_on_grid(const DistanceSeries& x, std::size_t l,
                                             std::span<const double> t) {
  std::vector<std::vector<double>> f(x.size(), std::vector<double>(t.size()));
  for (std::size_t c = 0; c < x.size(); ++c)
    for (std::size_t i = 0; i < t.size(); ++i) f[c][i] = empirical_cmf(x[c][l], t[i]);
  return f;
}

}  // namespace

double pairwise_u(const DistanceSeries& x, double p, std::size_t grid) {
  check_rect(x);
  const std::size_t n_chains = x.size();
  const std::size_t n_ref = x[0].size();
  double total = 0.0;
  for (std::size_t l = 0; l < n_ref; ++l) {
    const auto t = threshold_grid(x, l, grid);
    const auto f = cmf_on_grid(x, l, t);
    double pair_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t c1 = 0; c1 < n_chains; ++c1)
      for (std::size_t c2 = c1 + 1; c2 < n_chains; ++c2) {
        pair_sum += lp_norm(f[c1], f[c2], p);
        ++pairs;
      }
    total += pair_sum / static_cast<double>(pairs);
  }
  return total / static_cast<double>(n_ref);
}

std::vector<double> mc_test_w(const DistanceSeries& x, double p, std::size_t grid) {
  check_rect(x);
  const std::size_t n_chains = x.size();
  const std::size_t n_ref = x[0].size();
  std::vector<double> w(n_chains, 0.0);
  for (std::size_t l = 0; l < n_ref; ++l) {
    const auto t = threshold_grid(x, l, grid);
    const auto f = cmf_on_grid(x, l, t);
    for (std::size_t c = 0; c < n_chains; ++c) {
      std::vector<double> fbar(t.size(), 0.0);
      for (std::size_t k = 0; k < n_chains; ++k) {
        if (k == c) continue;
        for (std::size_t i = 0; i < t.size(); ++i) fbar[i] += f[k][i];
      }
      for (auto& v : fbar) v /= static_cast<double>(n_chains - 1);
      w[c] += lp_norm(f[c], fbar, p);
    }
  }
  for (auto& v : w) v /= static_cast<double>(n_ref);
  return w;
}

PsrfResult psrf(const DistanceSeries& x) {
  check_rect(x);
  const std::size_t n_chains = x.size();
  const std::size_t n_ref = x[0].size();
  const double n = static_cast<double>(x[0][0].size());
  if (n < 2) throw Error("psrf: need at least two thinned samples per chain");
  PsrfResult out;
  out.per_ref.resize(n_ref);
  for (std::size_t l = 0; l < n_ref; ++l) {
    std::vector<double> chain_mean(n_chains, 0.0);
    std::vector<double> chain_var(n_chains, 0.0);
    for (std::size_t c = 0; c < n_chains; ++c) {
      for (double v : x[c][l]) chain_mean[c] += v;
      chain_mean[c] /= n;
      for (double v : x[c][l]) chain_var[c] += (v - chain_mean[c]) * (v - chain_mean[c]);
      chain_var[c] /= (n - 1.0);
    }
    double grand = 0.0;
    for (double m : chain_mean) grand += m;
    grand /= static_cast<double>(n_chains);
    double b = 0.0;
    for (double m : chain_mean) b += (m - grand) * (m - grand);
    b *= n / static_cast<double>(n_chains - 1);
    double w = 0.0;
    for (double v : chain_var) w += v;
    w /= static_cast<double>(n_chains);
    if (!(w > 0.0)) throw Error("psrf: zero within-chain variance at a reference point");
    out.per_ref[l] = std::sqrt(((n - 1.0) / n * w + b / n) / w);
  }
  out.max = *std::max_element(out.per_ref.begin(), out.per_ref.end());
  return out;
}

}  // namespace samsara
