#include "samsara/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "samsara/target.hpp"

namespace samsara {

WeightedSamples WeightedSamples::from_store(const ChainStore& store, double burn_in_frac,
                                            std::size_t stride) {
  if (burn_in_frac < 0.0 || burn_in_frac >= 1.0)
    throw Error("postprocess: burn-in fraction must lie in [0, 1)");
  if (stride == 0) throw Error("postprocess: stride must be >= 1");
  const std::uint64_t n = store.n_gen();
  const auto first = static_cast<std::uint64_t>(burn_in_frac * static_cast<double>(n + 1));
  WeightedSamples out;
  store.for_each_society(first, stride, [&](std::uint64_t g, const Society& y) {
    out.societies.push_back(y);
    out.tau.push_back(store.tau_at(g));
    out.log_target.push_back(store.log_target_at(g));
  });
  return out;
}

double rb_estimate(const WeightedSamples& samples,
                   const std::function<double(const Society&)>& f) {
  if (samples.size() == 0) throw Error("rb_estimate: no samples");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    num += samples.tau[i] * f(samples.societies[i]);
    den += samples.tau[i];
  }
  return num / den;
}

std::map<std::size_t, double> number_posterior(const WeightedSamples& samples, std::size_t sp) {
  if (samples.size() == 0) throw Error("number_posterior: no samples");
  std::map<std::size_t, double> pmf;
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pmf[samples.societies[i].populations.at(sp).size()] += samples.tau[i];
    total += samples.tau[i];
  }
  for (auto& [n, mass] : pmf) mass /= total;
  return pmf;
}

Histogram parameter_distribution(const WeightedSamples& samples, std::size_t sp,
                                 std::size_t param_idx, std::size_t bins) {
  double lo = kPosInf;
  double hi = -kPosInf;
  for (const auto& y : samples.societies)
    for (const auto& ind : y.populations.at(sp).individuals) {
      lo = std::min(lo, ind.params.at(param_idx));
      hi = std::max(hi, ind.params.at(param_idx));
    }
  if (!(hi >= lo)) {
    Histogram h;
    h.empty = true;
    return h;
  }
  if (hi == lo) hi = lo + 1.0;
  return parameter_distribution(samples, sp, param_idx, bins, lo, hi);
}

Histogram parameter_distribution(const WeightedSamples& samples, std::size_t sp,
                                 std::size_t param_idx, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw Error("parameter_distribution: invalid binning");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  h.mass.assign(bins, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (const auto& ind : samples.societies[i].populations.at(sp).individuals) {
      const double v = ind.params.at(param_idx);
      if (v < lo || v > hi) continue;
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      if (b == bins) b = bins - 1;  // right edge closed
      h.mass[b] += samples.tau[i];
      total += samples.tau[i];
    }
  }
  if (total == 0.0) {
    h.empty = true;
    return h;
  }
  for (auto& m : h.mass) m /= total;
  return h;
}

namespace {

double weighted_quantile(std::vector<std::pair<double, double>>& vw, double q) {
  std::sort(vw.begin(), vw.end());
  double total = 0.0;
  for (const auto& [v, w] : vw) total += w;
  const double cut = q * total;
  double acc = 0.0;
  for (const auto& [v, w] : vw) {
    acc += w;
    if (acc >= cut) return v;
  }
  return vw.back().first;
}

}  // namespace

SignalBand signal_band(const WeightedSamples& samples, std::size_t sp,
                       std::span<const double> times, std::array<double, 3> quantiles) {
  if (samples.size() == 0) throw Error("signal_band: no samples");
  const TemplateKind kind = samples.societies[0].populations.at(sp).species->template_kind;
  if (kind == TemplateKind::None) throw Error("signal_band: species has no signal template");
  SignalBand band;
  band.times.assign(times.begin(), times.end());
  band.q_lo.resize(times.size());
  band.q_mid.resize(times.size());
  band.q_hi.resize(times.size());
  std::vector<std::pair<double, double>> vw(samples.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double h = 0.0;
      for (const auto& ind : samples.societies[i].populations.at(sp).individuals)
        h += species_template(kind, times[t], ind.params);
      vw[i] = {h, samples.tau[i]};
    }
    band.q_lo[t] = weighted_quantile(vw, quantiles[0]);
    band.q_mid[t] = weighted_quantile(vw, quantiles[1]);
    band.q_hi[t] = weighted_quantile(vw, quantiles[2]);
  }
  return band;
}

std::vector<CatalogTrack> export_for_catalog(const WeightedSamples& samples, std::size_t sp) {
  std::size_t max_count = 0;
  for (const auto& y : samples.societies)
    max_count = std::max(max_count, y.populations.at(sp).size());
  std::vector<CatalogTrack> tracks(max_count);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& pop = samples.societies[i].populations.at(sp);
    for (std::size_t j = 0; j < pop.size(); ++j) {
      tracks[j].generation.push_back(i);
      tracks[j].params.push_back(pop.individuals[j].params);
    }
  }
  return tracks;
}

}  // namespace samsara
