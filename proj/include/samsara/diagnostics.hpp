#pragma once

#include <span>
#include <vector>

#include "samsara/model.hpp"

namespace samsara {

// Normalized autocorrelation at the given lag, with the N/(N-delta)
// finite-sample prefactor. Throws on constant series.
double acf(std::span<const double> series, std::size_t lag);

struct CorrLength {
  std::size_t length = 0;
  // set when fewer than five sign changes exist; length is then the series length
  bool truncated = false;
};

// Lag of the fifth sign change of the autocorrelation sequence.
CorrLength correlation_length(std::span<const double> series);

// Euclidean distance from the nearest individual; +inf for an empty
// population.
double min_distance_scalar(const Population& pop, std::span<const double> v);

// Fraction of values <= threshold.
double empirical_cmf(std::span<const double> xs, double threshold);

// Min-distance series per chain and reference point: x[chain][ref][sample].
using DistanceSeries = std::vector<std::vector<std::vector<double>>>;

struct ReferencePointSet {
  std::vector<Params> points;
};

// Reference points drawn uniformly from the pooled individuals of all
// chains' thinned samples.
ReferencePointSet draw_reference_points(const std::vector<std::vector<Society>>& chains,
                                        std::size_t sp, std::size_t n_points,
                                        std::uint64_t seed);

DistanceSeries min_distance_series(const std::vector<std::vector<Society>>& chains,
                                   std::size_t sp, const ReferencePointSet& refs);

// Mean over reference points of the L^p distance between per-chain empirical
// CMFs, averaged over all chain pairs. The norm is evaluated on a shared
// grid of thresholds spanning the pooled sample range.
double pairwise_u(const DistanceSeries& x, double p = 1.0, std::size_t grid = 256);

// Leave-one-out comparison, one value per chain.
std::vector<double> mc_test_w(const DistanceSeries& x, double p = 1.0, std::size_t grid = 256);

struct PsrfResult {
  std::vector<double> per_ref;
  double max = 0.0;
};

// Potential scale reduction factor over the min-distance scalars; throws if
// any reference point has zero within-chain variance.
PsrfResult psrf(const DistanceSeries& x);

}  // namespace samsara
