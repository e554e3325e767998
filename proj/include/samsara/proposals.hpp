#pragma once

#include <memory>

#include "samsara/model.hpp"

namespace samsara {

// Birth proposal h(theta | population). The density must be evaluable at
// arbitrary points: death rates need h at every removal candidate.
class BirthProposal {
 public:
  virtual ~BirthProposal() = default;
  struct Draw {
    Params theta;
    double log_h;
  };
  virtual Draw sample(const Population& pop, Rng& rng) const = 0;
  virtual double log_density(const Population& pop, const Params& theta) const = 0;
};

// h = species prior, factorized per individual.
class PriorBirth final : public BirthProposal {
 public:
  explicit PriorBirth(SpeciesPtr spec);
  Draw sample(const Population& pop, Rng& rng) const override;
  double log_density(const Population& pop, const Params& theta) const override;

 private:
  SpeciesPtr spec_;
};

// Mixture-species birth: weight from Beta(1, N_pop), mark from the conjugate
// normal-inverse-gamma prior. A birth into an empty population takes the
// whole simplex (weight 1) with no weight density factor.
class NiwBetaBirth final : public BirthProposal {
 public:
  explicit NiwBetaBirth(SpeciesPtr spec);
  Draw sample(const Population& pop, Rng& rng) const override;
  double log_density(const Population& pop, const Params& theta) const override;

 private:
  SpeciesPtr spec_;
};

class MutationProposal {
 public:
  virtual ~MutationProposal() = default;
  struct Draw {
    Params theta;
    double log_fwd;
    double log_rev;
  };
  virtual Draw propose(const Population& pop, std::size_t idx, Rng& rng) const = 0;
};

// Symmetric Gaussian drift with fixed per-dimension widths.
class GaussianMutation final : public MutationProposal {
 public:
  explicit GaussianMutation(SpeciesPtr spec);
  Draw propose(const Population& pop, std::size_t idx, Rng& rng) const override;

 private:
  SpeciesPtr spec_;
};

// Multiplicative Gaussian shift: component k moves to N(theta_k,
// xi_k |theta_k|) unless kept unchanged (probability keep_prob, or forced
// when the width vanishes). Densities are conditional on the realized mask.
class MitosisMutation final : public MutationProposal {
 public:
  explicit MitosisMutation(SpeciesPtr spec);
  Draw propose(const Population& pop, std::size_t idx, Rng& rng) const override;

 private:
  SpeciesPtr spec_;
};

// Independence proposal from the species prior.
class PriorMutation final : public MutationProposal {
 public:
  explicit PriorMutation(SpeciesPtr spec);
  Draw propose(const Population& pop, std::size_t idx, Rng& rng) const override;

 private:
  SpeciesPtr spec_;
};

std::unique_ptr<BirthProposal> make_birth_proposal(const SpeciesPtr& spec);
std::unique_ptr<MutationProposal> make_mutation_proposal(const SpeciesPtr& spec);

}  // namespace samsara
