#pragma once

#include <functional>
#include <map>

#include "samsara/storage.hpp"

namespace samsara {

// Burned-in, thinned view of a chain store with the per-sample waiting-time
// weights of the Rao-Blackwellized estimators.
struct WeightedSamples {
  std::vector<Society> societies;
  std::vector<double> tau;
  std::vector<double> log_target;

  static WeightedSamples from_store(const ChainStore& store, double burn_in_frac = 0.1,
                                    std::size_t stride = 1);
  std::size_t size() const { return societies.size(); }
};

// Waiting-time weighted mean of f over the samples.
double rb_estimate(const WeightedSamples& samples,
                   const std::function<double(const Society&)>& f);

// Normalized posterior pmf over the individual count of one species.
std::map<std::size_t, double> number_posterior(const WeightedSamples& samples, std::size_t sp);

struct Histogram {
  std::vector<double> edges;  // size bins + 1
  std::vector<double> mass;   // normalized to sum 1; empty when no individuals
  bool empty = false;
};

// Waiting-time weighted histogram of one flattened parameter across all
// individuals of a species.
Histogram parameter_distribution(const WeightedSamples& samples, std::size_t sp,
                                 std::size_t param_idx, std::size_t bins);
Histogram parameter_distribution(const WeightedSamples& samples, std::size_t sp,
                                 std::size_t param_idx, std::size_t bins, double lo, double hi);

struct SignalBand {
  std::vector<double> times;
  std::vector<double> q_lo;   // default 5% quantile
  std::vector<double> q_mid;  // median
  std::vector<double> q_hi;   // default 95% quantile
};

// Per-time waiting-time weighted quantiles of the summed template of one
// species over the samples.
SignalBand signal_band(const WeightedSamples& samples, std::size_t sp,
                       std::span<const double> times,
                       std::array<double, 3> quantiles = {0.05, 0.5, 0.95});

// Catalog reordering: per species, a list of per-individual tracks across
// generations. Individuals are labeled by their population slot order; this
// is a deterministic placeholder labeling, not a statistical relabeling.
struct CatalogTrack {
  std::vector<std::uint64_t> generation;  // thinned sample index
  std::vector<Params> params;
};
std::vector<CatalogTrack> export_for_catalog(const WeightedSamples& samples, std::size_t sp);

}  // namespace samsara
