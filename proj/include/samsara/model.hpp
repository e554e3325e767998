#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "samsara/mathutil.hpp"
#include "samsara/rng.hpp"

namespace samsara {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Params = std::vector<double>;

// One parameter vector of a species.
struct Individual {
  Params params;
};

// Closed interval; infinities mark unbounded sides.
struct Interval {
  double lo = kNegInf;
  double hi = kPosInf;

  bool bounded() const { return lo > kNegInf && hi < kPosInf; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

enum class PriorKind { UniformBox, GmmConjugate, Custom };
enum class ZFactorKind { Unit, Gmm };
enum class BirthKind { Prior, NiwBeta };
enum class MutationKind { Gaussian, Mitosis, Prior };
enum class MutationSamplerKind { Mh, GibbsGmm };
enum class TemplateKind { None, Sine, Lorentzian };

struct ProposalConfig {
  BirthKind birth = BirthKind::Prior;
  MutationKind mutation = MutationKind::Gaussian;
  std::vector<double> sigma;        // Gaussian drift widths, one per dimension
  std::vector<double> xi_strength;  // mitosis strengths, one per dimension
  double keep_prob = 0.0;           // mitosis: probability a component is copied unchanged
};

// Conjugate normal-inverse-gamma hyperparameters for mixture species
// (univariate marks). Defaults follow kappa = 1/5 and nu = M + 2 with M = 1;
// mu0 and lambda are set from the data at setup time.
struct GmmHyper {
  double mu0 = 0.0;
  double kappa = 0.2;
  double nu = 3.0;
  double lambda = 1.0;

  double ig_shape() const { return 0.5 * nu; }
  double ig_scale() const { return 0.5 * lambda; }
};

// Flat prior over nonnegative integers contributes zero to log-density
// differences; it is never evaluated in isolation.
struct NumberPrior {
  enum class Kind { ImproperUniform, Poisson, CustomPmf };
  Kind kind = Kind::ImproperUniform;
  double poisson_mean = 1.0;
  std::function<double(std::size_t)> log_pmf;

  double log_at(std::size_t n) const;
};

// Population-level hooks for user-defined priors.
struct CustomPrior {
  std::function<double(const std::vector<Individual>&)> log_density;
  std::function<Individual(Rng&)> sample;  // unset means not sampleable
};

struct SpeciesSpec {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<Interval> bounds;
  PriorKind prior_kind = PriorKind::UniformBox;
  ZFactorKind z_factor_kind = ZFactorKind::Unit;
  ProposalConfig proposal;
  MutationSamplerKind mutation_sampler = MutationSamplerKind::Mh;
  TemplateKind template_kind = TemplateKind::None;
  NumberPrior number_prior;
  GmmHyper gmm;
  std::optional<CustomPrior> custom_prior;

  std::size_t n_par() const { return param_names.size(); }
  // Mixture species keep their component weight at parameter index 0 and the
  // weights of a population on the unit simplex.
  bool simplex_weight() const { return prior_kind == PriorKind::GmmConjugate; }
  void validate() const;
};

using SpeciesPtr = std::shared_ptr<const SpeciesSpec>;

// Unordered collection of individuals of one species. Stored as a sequence
// for O(1) indexing; all densities treat it as a multiset.
struct Population {
  SpeciesPtr species;
  std::vector<Individual> individuals;

  std::size_t size() const { return individuals.size(); }
};

// Full chain state: one population per declared species, fixed order.
struct Society {
  std::vector<Population> populations;

  std::size_t n_species() const { return populations.size(); }
  std::size_t count(std::size_t sp) const { return populations[sp].size(); }
};

bool in_support(const SpeciesSpec& spec, const Params& theta);

// Per-individual prior log-density. For uniform boxes this is the box
// density; mixture species have no per-individual factorization of the
// weight prior, so only the mark factors are returned (see
// population_log_prior for the full density).
double individual_log_prior(const SpeciesSpec& spec, const Params& theta);

// Full prior log-density of one population, including the number prior and,
// for mixture species, the Dirichlet(1/N_pop, ...) weight prior on the
// simplex.
double population_log_prior(const Population& pop);

double log_prior(const Society& society);

Individual sample_prior_individual(const SpeciesSpec& spec, Rng& rng);
Population sample_prior_population(const SpeciesPtr& spec, std::size_t count, Rng& rng);

Society make_society(const std::vector<SpeciesPtr>& specs, const std::vector<std::size_t>& counts,
                     Rng& rng);

// Slot-level clones: the new society differs from the source only in the
// stated slot; the source is never aliased.
Society clone_with_birth(const Society& y, std::size_t sp, Individual ind);
Society clone_with_death(const Society& y, std::size_t sp, std::size_t idx);
Society clone_with_mutation(const Society& y, std::size_t sp, std::size_t idx, Params theta);

// Move transforms used by the sampler. For plain species these match the
// slot clones; for mixture species a birth rescales the existing weights by
// (1 - pi') and a death renormalizes the survivors by 1/(1 - pi_j), keeping
// every visited state on the simplex.
Society birth_move(const Society& y, std::size_t sp, const Params& theta);
Society death_move(const Society& y, std::size_t sp, std::size_t idx);

}  // namespace samsara
