#include "samsara/mutation_samplers.hpp"

#include <cmath>

namespace samsara {

bool mh_mutate(TargetState& state, std::size_t sp, std::size_t idx,
               const MutationProposal& proposal, Rng& rng) {
  const auto& pop = state.society().populations.at(sp);
  if (pop.size() == 0) throw Error("mh_mutate: population is empty");
  auto draw = proposal.propose(pop, idx, rng);
  const double lt_prop = state.with_mutation(sp, idx, draw.theta);
  const double xi = mutation_acceptance(state.current(), lt_prop, draw.log_fwd, draw.log_rev);
  if (rng.uniform() < xi) {
    state.commit_mutation(sp, idx, draw.theta);
    return true;
  }
  return false;
}

std::pair<Society, bool> mh_mutate(const Society& y, std::size_t sp, std::size_t idx,
                                   const MutationProposal& proposal, const Target& target,
                                   Rng& rng) {
  auto state = target.make_state(y);
  const bool accepted = mh_mutate(*state, sp, idx, proposal, rng);
  return {state->society(), accepted};
}

Society gibbs_sweep_gmm(const Society& y, std::size_t sp, const Dataset& data,
                        const GmmHyper& hyper, Rng& rng) {
  if (data.kind != Dataset::Kind::Samples || data.points.empty())
    throw Error("gibbs_sweep_gmm: needs sample data");
  const auto& pop = y.populations.at(sp);
  const std::size_t k = pop.size();
  if (k == 0) throw Error("gibbs_sweep_gmm: population is empty");
  if (!pop.species->simplex_weight())
    throw Error("gibbs_sweep_gmm: species is not a mixture species");

  const std::size_t n = data.points.size();

  // (a) latent assignments, categorically by responsibility
  std::vector<double> logw(k);
  std::vector<double> mu(k);
  std::vector<double> var(k);
  for (std::size_t j = 0; j < k; ++j) {
    logw[j] = std::log(pop.individuals[j].params[0]);
    mu[j] = pop.individuals[j].params[1];
    var[j] = pop.individuals[j].params[2];
  }
  std::vector<std::size_t> count(k, 0);
  std::vector<double> sum(k, 0.0);
  std::vector<double> sumsq(k, 0.0);
  std::vector<double> resp(k);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = data.points[i];
    double m = kNegInf;
    for (std::size_t j = 0; j < k; ++j) {
      resp[j] = logw[j] + log_normal_pdf(x, mu[j], std::sqrt(var[j]));
      if (resp[j] > m) m = resp[j];
    }
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      resp[j] = std::exp(resp[j] - m);
      total += resp[j];
    }
    const std::size_t z = rng.categorical(resp, total);
    ++count[z];
    sum[z] += x;
    sumsq[z] += x * x;
  }

  // (b) weights from Dirichlet(counts + 1/K)
  std::vector<double> conc(k);
  for (std::size_t j = 0; j < k; ++j)
    conc[j] = static_cast<double>(count[j]) + 1.0 / static_cast<double>(k);
  std::vector<double> w(k);
  rng.dirichlet(conc, w);
  // Tiny-concentration draws can underflow to exact zero; keep weights
  // strictly inside the simplex.
  double wsum = 0.0;
  for (auto& x : w) {
    if (x < 1e-290) x = 1e-290;
    wsum += x;
  }
  for (auto& x : w) x /= wsum;

  // (c) component parameters from the conjugate posterior; empty components
  // fall back to the prior (empty sufficient statistics)
  Society out = y;
  auto& inds = out.populations[sp].individuals;
  for (std::size_t j = 0; j < k; ++j) {
    const double m = static_cast<double>(count[j]);
    const double kappa_n = hyper.kappa + m;
    const double xbar = m > 0.0 ? sum[j] / m : 0.0;
    const double ss = m > 0.0 ? sumsq[j] - m * xbar * xbar : 0.0;
    const double mu_n = (hyper.kappa * hyper.mu0 + m * xbar) / kappa_n;
    const double a_n = hyper.ig_shape() + 0.5 * m;
    const double b_n = hyper.ig_scale() + 0.5 * std::max(ss, 0.0) +
                       0.5 * hyper.kappa * m * (xbar - hyper.mu0) * (xbar - hyper.mu0) / kappa_n;
    const double v = rng.inverse_gamma(a_n, b_n);
    const double mean = rng.normal(mu_n, std::sqrt(v / kappa_n));
    inds[j].params = {w[j], mean, v};
  }
  return out;
}

}  // namespace samsara
