#include "samsara/proposals.hpp"

#include <cmath>

namespace samsara {

PriorBirth::PriorBirth(SpeciesPtr spec) : spec_(std::move(spec)) {
  if (spec_->prior_kind == PriorKind::GmmConjugate)
    throw Error("species '" + spec_->name + "': mixture species use the niw_beta birth proposal");
}

BirthProposal::Draw PriorBirth::sample(const Population&, Rng& rng) const {
  Individual ind = sample_prior_individual(*spec_, rng);
  const double lh = individual_log_prior(*spec_, ind.params);
  return {std::move(ind.params), lh};
}

double PriorBirth::log_density(const Population&, const Params& theta) const {
  return individual_log_prior(*spec_, theta);
}

NiwBetaBirth::NiwBetaBirth(SpeciesPtr spec) : spec_(std::move(spec)) {
  if (spec_->prior_kind != PriorKind::GmmConjugate)
    throw Error("species '" + spec_->name + "': niw_beta birth requires a mixture species");
}

BirthProposal::Draw NiwBetaBirth::sample(const Population& pop, Rng& rng) const {
  const auto& h = spec_->gmm;
  const std::size_t n = pop.size();
  const double var = rng.inverse_gamma(h.ig_shape(), h.ig_scale());
  const double mu = rng.normal(h.mu0, std::sqrt(var / h.kappa));
  double w = 1.0;
  double log_h = log_normal_pdf(mu, h.mu0, std::sqrt(var / h.kappa)) +
                 log_inverse_gamma_pdf(var, h.ig_shape(), h.ig_scale());
  if (n > 0) {
    w = rng.beta(1.0, static_cast<double>(n));
    log_h += log_beta_pdf(w, 1.0, static_cast<double>(n));
  }
  return {{w, mu, var}, log_h};
}

double NiwBetaBirth::log_density(const Population& pop, const Params& theta) const {
  const auto& h = spec_->gmm;
  const std::size_t n = pop.size();
  const double w = theta[0];
  const double mu = theta[1];
  const double var = theta[2];
  if (!(var > 0.0)) return kNegInf;
  double lh = log_normal_pdf(mu, h.mu0, std::sqrt(var / h.kappa)) +
              log_inverse_gamma_pdf(var, h.ig_shape(), h.ig_scale());
  if (n == 0) {
    // weight is the deterministic simplex point
    return std::abs(w - 1.0) <= 1e-12 ? lh : kNegInf;
  }
  const double lb = log_beta_pdf(w, 1.0, static_cast<double>(n));
  return lb == kNegInf ? kNegInf : lh + lb;
}

GaussianMutation::GaussianMutation(SpeciesPtr spec) : spec_(std::move(spec)) {
  if (spec_->proposal.sigma.size() != spec_->n_par())
    throw Error("species '" + spec_->name + "': gaussian proposal needs one sigma per parameter");
  for (double s : spec_->proposal.sigma)
    if (!(s >= 0.0)) throw Error("species '" + spec_->name + "': proposal sigma must be >= 0");
}

MutationProposal::Draw GaussianMutation::propose(const Population& pop, std::size_t idx,
                                                 Rng& rng) const {
  const Params& theta = pop.individuals.at(idx).params;
  Params out(theta.size());
  double lq = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double s = spec_->proposal.sigma[k];
    if (s == 0.0) {
      out[k] = theta[k];
      continue;
    }
    out[k] = rng.normal(theta[k], s);
    lq += log_normal_pdf(out[k], theta[k], s);
  }
  return {std::move(out), lq, lq};
}

MitosisMutation::MitosisMutation(SpeciesPtr spec) : spec_(std::move(spec)) {
  const auto& p = spec_->proposal;
  if (p.xi_strength.size() != spec_->n_par())
    throw Error("species '" + spec_->name + "': mitosis needs one xi_strength per parameter");
  for (double x : p.xi_strength)
    if (!(x >= 0.0)) throw Error("species '" + spec_->name + "': xi_strength must be >= 0");
  if (!(p.keep_prob >= 0.0) || !(p.keep_prob <= 1.0))
    throw Error("species '" + spec_->name + "': keep_prob must lie in [0, 1]");
}

MutationProposal::Draw MitosisMutation::propose(const Population& pop, std::size_t idx,
                                                Rng& rng) const {
  const Params& theta = pop.individuals.at(idx).params;
  const auto& cfg = spec_->proposal;
  Params out(theta.size());
  double lf = 0.0;
  double lr = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double width = cfg.xi_strength[k] * std::abs(theta[k]);
    const bool keep = width == 0.0 || rng.uniform() < cfg.keep_prob;
    if (keep) {
      out[k] = theta[k];
      continue;
    }
    out[k] = rng.normal(theta[k], width);
    lf += log_normal_pdf(out[k], theta[k], width);
    const double rev_width = cfg.xi_strength[k] * std::abs(out[k]);
    lr += rev_width > 0.0 ? log_normal_pdf(theta[k], out[k], rev_width) : kNegInf;
  }
  return {std::move(out), lf, lr};
}

PriorMutation::PriorMutation(SpeciesPtr spec) : spec_(std::move(spec)) {
  if (spec_->prior_kind == PriorKind::GmmConjugate)
    throw Error("species '" + spec_->name + "': prior mutation undefined for mixture species");
}

MutationProposal::Draw PriorMutation::propose(const Population& pop, std::size_t idx,
                                              Rng& rng) const {
  const Params& theta = pop.individuals.at(idx).params;
  Individual ind = sample_prior_individual(*spec_, rng);
  const double lf = individual_log_prior(*spec_, ind.params);
  const double lr = individual_log_prior(*spec_, theta);
  return {std::move(ind.params), lf, lr};
}

std::unique_ptr<BirthProposal> make_birth_proposal(const SpeciesPtr& spec) {
  switch (spec->proposal.birth) {
    case BirthKind::Prior:
      return std::make_unique<PriorBirth>(spec);
    case BirthKind::NiwBeta:
      return std::make_unique<NiwBetaBirth>(spec);
  }
  throw Error("unknown birth proposal kind");
}

std::unique_ptr<MutationProposal> make_mutation_proposal(const SpeciesPtr& spec) {
  switch (spec->proposal.mutation) {
    case MutationKind::Gaussian:
      return std::make_unique<GaussianMutation>(spec);
    case MutationKind::Mitosis:
      return std::make_unique<MitosisMutation>(spec);
    case MutationKind::Prior:
      return std::make_unique<PriorMutation>(spec);
  }
  throw Error("unknown mutation proposal kind");
}

}  // namespace samsara
