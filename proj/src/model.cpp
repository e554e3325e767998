#include "samsara/model.hpp"

#include <cmath>

namespace samsara {

namespace {
constexpr double kSimplexTol = 1e-9;
}

double NumberPrior::log_at(std::size_t n) const {
  switch (kind) {
    case Kind::ImproperUniform:
      return 0.0;
    case Kind::Poisson:
      return log_poisson_pmf(n, poisson_mean);
    case Kind::CustomPmf:
      if (!log_pmf) throw Error("number prior: custom pmf not set");
      return log_pmf(n);
  }
  return 0.0;
}

void SpeciesSpec::validate() const {
  if (name.empty()) throw Error("species: empty name");
  if (param_names.size() != bounds.size())
    throw Error("species '" + name + "': param_names and bounds must have the same length");
  if (param_names.empty()) throw Error("species '" + name + "': no parameters");
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const auto& b = bounds[k];
    if (std::isnan(b.lo) || std::isnan(b.hi) || !(b.lo < b.hi))
      throw Error("species '" + name + "': invalid bounds for parameter '" + param_names[k] + "'");
  }
  if (prior_kind == PriorKind::GmmConjugate) {
    if (param_names.size() != 3)
      throw Error("species '" + name + "': mixture species use parameters (weight, mean, var)");
    if (!(gmm.kappa > 0.0) || !(gmm.lambda > 0.0) || !(gmm.nu > 0.0))
      throw Error("species '" + name + "': invalid conjugate hyperparameters");
  }
  if (prior_kind == PriorKind::Custom && !custom_prior)
    throw Error("species '" + name + "': custom prior kind without hooks");
}

bool in_support(const SpeciesSpec& spec, const Params& theta) {
  if (theta.size() != spec.n_par()) return false;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (std::isnan(theta[k])) return false;
    if (!spec.bounds[k].contains(theta[k])) return false;
  }
  return true;
}

double individual_log_prior(const SpeciesSpec& spec, const Params& theta) {
  if (!in_support(spec, theta)) return kNegInf;
  switch (spec.prior_kind) {
    case PriorKind::UniformBox: {
      double lp = 0.0;
      for (const auto& b : spec.bounds) {
        if (!b.bounded()) return kNegInf;  // improper density has no finite value
        lp -= std::log(b.width());
      }
      return lp;
    }
    case PriorKind::GmmConjugate: {
      // Mark factors only: N(mu | mu0, var/kappa) * InvGamma(var | nu/2, lambda/2).
      const double mu = theta[1];
      const double var = theta[2];
      if (!(var > 0.0)) return kNegInf;
      const auto& h = spec.gmm;
      return log_normal_pdf(mu, h.mu0, std::sqrt(var / h.kappa)) +
             log_inverse_gamma_pdf(var, h.ig_shape(), h.ig_scale());
    }
    case PriorKind::Custom:
      throw Error("species '" + spec.name + "': custom prior has no per-individual density");
  }
  return kNegInf;
}

namespace {

double simplex_defect(const Population& pop) {
  double sum = 0.0;
  for (const auto& ind : pop.individuals) sum += ind.params[0];
  return sum - 1.0;
}

double gmm_population_log_prior(const Population& pop) {
  const auto& spec = *pop.species;
  const std::size_t n = pop.size();
  if (n == 0) return 0.0;
  if (std::abs(simplex_defect(pop)) > kSimplexTol) return kNegInf;
  double lp = 0.0;
  for (const auto& ind : pop.individuals) {
    const double w = ind.params[0];
    if (!(w > 0.0) || w > 1.0) return kNegInf;
    lp += individual_log_prior(spec, ind.params);
    if (lp == kNegInf) return kNegInf;
  }
  // Dirichlet(1/n, ..., 1/n) over the n-1 free weight coordinates; for a
  // single component the simplex is a point and contributes nothing.
  if (n >= 2) {
    const double a = 1.0 / static_cast<double>(n);
    lp += std::lgamma(1.0) - static_cast<double>(n) * std::lgamma(a);
    for (const auto& ind : pop.individuals) lp += (a - 1.0) * std::log(ind.params[0]);
  }
  return lp;
}

}  // namespace

double population_log_prior(const Population& pop) {
  const auto& spec = *pop.species;
  double lp = spec.number_prior.log_at(pop.size());
  switch (spec.prior_kind) {
    case PriorKind::UniformBox:
      for (const auto& ind : pop.individuals) {
        lp += individual_log_prior(spec, ind.params);
        if (lp == kNegInf) return kNegInf;
      }
      return lp;
    case PriorKind::GmmConjugate: {
      const double g = gmm_population_log_prior(pop);
      return g == kNegInf ? kNegInf : lp + g;
    }
    case PriorKind::Custom:
      if (!spec.custom_prior || !spec.custom_prior->log_density)
        throw Error("species '" + spec.name + "': custom prior density not set");
      return lp + spec.custom_prior->log_density(pop.individuals);
  }
  return kNegInf;
}

double log_prior(const Society& society) {
  double lp = 0.0;
  for (const auto& pop : society.populations) {
    lp += population_log_prior(pop);
    if (lp == kNegInf) return kNegInf;
  }
  return lp;
}

Individual sample_prior_individual(const SpeciesSpec& spec, Rng& rng) {
  switch (spec.prior_kind) {
    case PriorKind::UniformBox: {
      Individual ind;
      ind.params.reserve(spec.n_par());
      for (const auto& b : spec.bounds) {
        if (!b.bounded())
          throw Error("species '" + spec.name + "': cannot sample an improper uniform prior");
        ind.params.push_back(rng.uniform(b.lo, b.hi));
      }
      return ind;
    }
    case PriorKind::GmmConjugate: {
      const auto& h = spec.gmm;
      const double var = rng.inverse_gamma(h.ig_shape(), h.ig_scale());
      const double mu = rng.normal(h.mu0, std::sqrt(var / h.kappa));
      return Individual{{1.0, mu, var}};  // weight filled in by the population sampler
    }
    case PriorKind::Custom:
      if (!spec.custom_prior || !spec.custom_prior->sample)
        throw Error("species '" + spec.name + "': custom prior sampler not set");
      return spec.custom_prior->sample(rng);
  }
  throw Error("unreachable");
}

Population sample_prior_population(const SpeciesPtr& spec, std::size_t count, Rng& rng) {
  Population pop{spec, {}};
  pop.individuals.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    pop.individuals.push_back(sample_prior_individual(*spec, rng));
  if (spec->simplex_weight() && count > 0) {
    std::vector<double> conc(count, 1.0 / static_cast<double>(count));
    std::vector<double> w(count);
    rng.dirichlet(conc, w);
    for (std::size_t i = 0; i < count; ++i) pop.individuals[i].params[0] = w[i];
  }
  return pop;
}

Society make_society(const std::vector<SpeciesPtr>& specs, const std::vector<std::size_t>& counts,
                     Rng& rng) {
  if (specs.size() != counts.size()) throw Error("make_society: specs/counts size mismatch");
  Society y;
  y.populations.reserve(specs.size());
  for (std::size_t sp = 0; sp < specs.size(); ++sp) {
    specs[sp]->validate();
    y.populations.push_back(sample_prior_population(specs[sp], counts[sp], rng));
  }
  return y;
}

Society clone_with_birth(const Society& y, std::size_t sp, Individual ind) {
  Society out = y;
  out.populations.at(sp).individuals.push_back(std::move(ind));
  return out;
}

Society clone_with_death(const Society& y, std::size_t sp, std::size_t idx) {
  Society out = y;
  auto& inds = out.populations.at(sp).individuals;
  if (idx >= inds.size()) throw Error("clone_with_death: no such individual");
  inds.erase(inds.begin() + static_cast<std::ptrdiff_t>(idx));
  return out;
}

Society clone_with_mutation(const Society& y, std::size_t sp, std::size_t idx, Params theta) {
  Society out = y;
  auto& inds = out.populations.at(sp).individuals;
  if (idx >= inds.size()) throw Error("clone_with_mutation: no such individual");
  inds[idx].params = std::move(theta);
  return out;
}

Society birth_move(const Society& y, std::size_t sp, const Params& theta) {
  Society out = clone_with_birth(y, sp, Individual{theta});
  auto& pop = out.populations[sp];
  if (pop.species->simplex_weight() && pop.size() > 1) {
    const double w_new = theta[0];
    auto& inds = pop.individuals;
    for (std::size_t i = 0; i + 1 < inds.size(); ++i) inds[i].params[0] *= (1.0 - w_new);
  } else if (pop.species->simplex_weight()) {
    pop.individuals.back().params[0] = 1.0;  // first component takes the whole simplex
  }
  return out;
}

Society death_move(const Society& y, std::size_t sp, std::size_t idx) {
  const auto& pop = y.populations.at(sp);
  if (pop.size() == 0) throw Error("death_move: population is empty");
  const bool simplex = pop.species->simplex_weight();
  const double w_dead = simplex ? pop.individuals.at(idx).params[0] : 0.0;
  Society out = clone_with_death(y, sp, idx);
  if (simplex && out.populations[sp].size() > 0) {
    if (!(w_dead < 1.0)) throw Error("death_move: cannot remove a unit-weight component");
    auto& inds = out.populations[sp].individuals;
    if (inds.size() == 1) {
      inds[0].params[0] = 1.0;  // sole survivor takes the whole simplex exactly
    } else {
      const double scale = 1.0 / (1.0 - w_dead);
      for (auto& ind : inds) ind.params[0] *= scale;
    }
  }
  return out;
}

}  // namespace samsara
