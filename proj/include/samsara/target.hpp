#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "samsara/model.hpp"

namespace samsara {

struct Dataset {
  enum class Kind { None, Timeseries, Samples };
  Kind kind = Kind::None;

  // timeseries: uniform cadence, known white noise variance
  std::vector<double> times;
  std::vector<double> values;
  double noise_variance = 1.0;

  // samples: univariate observations, one row per datum
  std::vector<double> points;

  static Dataset none() { return {}; }
  static Dataset timeseries(std::vector<double> t, std::vector<double> v, double c);
  static Dataset samples(std::vector<double> pts);

  double cadence() const;
  void validate() const;
};

// Trans-dimensional analytic density: Poisson number times a 3-component
// 2-D Gaussian mixture per individual.
struct AnalyticTargetConfig {
  double nbar = 5.0;
  std::array<double, 3> weights{};
  std::array<std::array<double, 2>, 3> means{};
  // (xx, xy, yy) per component
  std::array<std::array<double, 3>, 3> covs{};

  static AnalyticTargetConfig reference(double nbar);
  void validate() const;
  double log_mixture_density(double t1, double t2) const;
};

// theta_sine = (log_amp, log_f, log_fdot, phase)
double sine_template(double t, std::span<const double> theta);
// theta_lor = (amp, width, t0); width must be > 0
double lorentzian_template(double t, std::span<const double> theta);
double species_template(TemplateKind kind, double t, std::span<const double> theta);

double timeseries_log_likelihood(const Society& y, const Dataset& data);
double gmm_log_likelihood(const Society& y, const Dataset& data);
double analytic_log_density(const Society& y, const AnalyticTargetConfig& cfg);

class TargetState;

// Unnormalized log posterior over societies. Densities are evaluated per
// ordered representative; only ratios ever enter the sampler.
class Target {
 public:
  virtual ~Target() = default;
  virtual double log_density(const Society& y) const = 0;
  // State bound to a society supporting incremental single-move evaluation;
  // the default recomputes from scratch on every query.
  virtual std::unique_ptr<TargetState> make_state(Society y) const;
};

// Snapshot of a society plus whatever caches the target keeps. Variant
// queries evaluate the log target of the society one move away; commits
// apply the move to the bound society and caches.
class TargetState {
 public:
  virtual ~TargetState() = default;
  virtual const Society& society() const = 0;
  virtual double current() const = 0;
  virtual double with_birth(std::size_t sp, const Params& theta) = 0;
  virtual double with_death(std::size_t sp, std::size_t idx) = 0;
  virtual double with_mutation(std::size_t sp, std::size_t idx, const Params& theta) = 0;
  virtual void commit_birth(std::size_t sp, const Params& theta) = 0;
  virtual void commit_death(std::size_t sp, std::size_t idx) = 0;
  virtual void commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) = 0;
  // Full resync after an external edit (e.g. a blocked Gibbs sweep).
  virtual void rebind(Society y) = 0;
};

// Fallback state: every query clones the society and recomputes.
class RecomputeState final : public TargetState {
 public:
  RecomputeState(const Target& target, Society y);
  const Society& society() const override { return society_; }
  double current() const override { return current_; }
  double with_birth(std::size_t sp, const Params& theta) override;
  double with_death(std::size_t sp, std::size_t idx) override;
  double with_mutation(std::size_t sp, std::size_t idx, const Params& theta) override;
  void commit_birth(std::size_t sp, const Params& theta) override;
  void commit_death(std::size_t sp, std::size_t idx) override;
  void commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) override;
  void rebind(Society y) override;

 private:
  const Target& target_;
  Society society_;
  double current_;
};

class AnalyticTarget final : public Target {
 public:
  explicit AnalyticTarget(SpeciesPtr species, AnalyticTargetConfig cfg);
  double log_density(const Society& y) const override;
  std::unique_ptr<TargetState> make_state(Society y) const override;
  const AnalyticTargetConfig& config() const { return cfg_; }

 private:
  SpeciesPtr species_;
  AnalyticTargetConfig cfg_;
};

// Gaussian time-series likelihood over the summed templates of all species,
// with the box priors of the species. Keeps per-individual template caches
// so single-move queries cost one pass over the series.
class TimeseriesTarget final : public Target {
 public:
  TimeseriesTarget(std::vector<SpeciesPtr> species, Dataset data);
  double log_density(const Society& y) const override;
  std::unique_ptr<TargetState> make_state(Society y) const override;
  const Dataset& data() const { return data_; }

 private:
  std::vector<SpeciesPtr> species_;
  Dataset data_;
};

// Univariate Gaussian mixture likelihood with conjugate priors.
class GmmTarget final : public Target {
 public:
  GmmTarget(SpeciesPtr species, Dataset data);
  double log_density(const Society& y) const override;
  std::unique_ptr<TargetState> make_state(Society y) const override;
  const Dataset& data() const { return data_; }

 private:
  SpeciesPtr species_;
  Dataset data_;
};

}  // namespace samsara
