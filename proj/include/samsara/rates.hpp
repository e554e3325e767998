#pragma once

#include <utility>
#include <vector>

#include "samsara/proposals.hpp"
#include "samsara/target.hpp"

namespace samsara {

// All transition rates for one species at the current state.
struct SpeciesRates {
  bool active = false;  // species scheduled for evolution this step
  double birth = 0.0;   // rate of the single proposed birth move
  std::vector<double> deaths;
  double mutation = 0.0;
  Params birth_candidate;
  double birth_candidate_log_h = kNegInf;

  double death_total() const {
    double s = 0.0;
    for (double d : deaths) s += d;
    return s;
  }
  double total() const { return birth + death_total() + mutation; }
};

struct RateTable {
  std::vector<SpeciesRates> species;

  double grand_total() const {
    double s = 0.0;
    for (const auto& r : species) s += r.total();
    return s;
  }
};

struct RatePrescription {
  enum class Kind { FixedBirth, Varying };
  Kind kind = Kind::Varying;
  double fixed_rate = 1.0;  // birth rate when kind == FixedBirth
};

// Prior-measure factor of the rate formulas: 1 for plain point processes,
// the simplex factor for mixture species.
double z_factor(const SpeciesSpec& spec, std::size_t n_pop, const Params& theta);

// Log of the measure factor entering the birth/death balance, with n_small
// the population count of the state that does NOT contain theta. Death rates
// multiply by it, birth rates divide by it. For plain species it is 0; for
// mixture species it is the Jacobian of the weight rescaling,
// -(n_small - 1) * log(1 - pi).
double log_birth_measure_factor(const SpeciesSpec& spec, std::size_t n_small, const Params& theta);

// Death rates under a fixed birth rate (unclamped detailed-balance values).
std::vector<double> death_rates_fixed_birth(TargetState& state, std::size_t sp,
                                            const RatePrescription& prescription,
                                            const BirthProposal& birth);
std::vector<double> death_rates_fixed_birth(const Society& y, std::size_t sp,
                                            const RatePrescription& prescription,
                                            const Target& target, const BirthProposal& birth);

// Birth and death rates under the varying prescription, both clamped to
// [0, 1]. The birth candidate is drawn once per step by the caller.
std::pair<double, std::vector<double>> varying_rates(TargetState& state, std::size_t sp,
                                                     const Params& candidate, double cand_log_h,
                                                     const BirthProposal& birth);
std::pair<double, std::vector<double>> varying_rates(const Society& y, std::size_t sp,
                                                     const Params& candidate, double cand_log_h,
                                                     const Target& target,
                                                     const BirthProposal& birth);

// Metropolis-Hastings acceptance, clamped to [0, 1].
double mutation_acceptance(double log_target_cur, double log_target_prop, double log_q_fwd,
                           double log_q_rev);

// Split of the constant mutation rate into move and stay rates.
std::pair<double, double> split_mutation_rates(double xi, double rate_m);

}  // namespace samsara
