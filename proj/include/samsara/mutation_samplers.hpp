#pragma once

#include "samsara/rates.hpp"

namespace samsara {

// Single-individual Metropolis-Hastings update through the bound state.
// Returns true when the proposal was accepted (the state was committed).
bool mh_mutate(TargetState& state, std::size_t sp, std::size_t idx,
               const MutationProposal& proposal, Rng& rng);

std::pair<Society, bool> mh_mutate(const Society& y, std::size_t sp, std::size_t idx,
                                   const MutationProposal& proposal, const Target& target,
                                   Rng& rng);

// One sweep of the standard conjugate blocked Gibbs sampler at fixed
// component count: latent assignments, Dirichlet(counts + 1/K) weights,
// then normal-inverse-gamma draws per component. Assignments are resampled
// each sweep and never persisted.
Society gibbs_sweep_gmm(const Society& y, std::size_t sp, const Dataset& data,
                        const GmmHyper& hyper, Rng& rng);

}  // namespace samsara
