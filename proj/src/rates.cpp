#include "samsara/rates.hpp"

#include <cmath>

namespace samsara {

double z_factor(const SpeciesSpec& spec, std::size_t n_pop, const Params& theta) {
  switch (spec.z_factor_kind) {
    case ZFactorKind::Unit:
      return 1.0;
    case ZFactorKind::Gmm: {
      if (n_pop == 0) return 1.0;
      const double pi = theta.at(0);
      if (pi >= 1.0) throw Error("z_factor: mixture weight must be < 1");
      const double n = static_cast<double>(n_pop);
      return 1.0 / ((n + 1.0) * std::pow(1.0 - pi, n));
    }
  }
  throw Error("z_factor: unknown kind");
}

double log_birth_measure_factor(const SpeciesSpec& spec, std::size_t n_small,
                                const Params& theta) {
  if (spec.z_factor_kind == ZFactorKind::Unit || n_small <= 1) return 0.0;
  const double pi = theta.at(0);
  if (!(pi > 0.0) || !(pi < 1.0))
    throw Error("measure factor: mixture weight must lie in (0, 1)");
  return -(static_cast<double>(n_small) - 1.0) * std::log1p(-pi);
}

namespace {

// log of Z_m(N-1, theta_j)/N * p(x_j)/p(y) * h(theta_j | x_j) per individual;
// -inf where the post-death state has zero density.
std::vector<double> death_log_args(TargetState& state, std::size_t sp,
                                   const BirthProposal& birth) {
  const Society& y = state.society();
  const auto& pop = y.populations.at(sp);
  const std::size_t n = pop.size();
  const double lt_y = state.current();
  if (lt_y == kNegInf) throw Error("rates: current state has zero target density");
  std::vector<double> args(n, kNegInf);
  for (std::size_t j = 0; j < n; ++j) {
    const double lt_x = state.with_death(sp, j);
    if (lt_x == kNegInf) continue;
    const Society x = death_move(y, sp, j);
    const double log_h = birth.log_density(x.populations[sp], pop.individuals[j].params);
    if (log_h == kNegInf) continue;
    args[j] = log_birth_measure_factor(*pop.species, n - 1, pop.individuals[j].params) -
              std::log(static_cast<double>(n)) + (lt_x - lt_y) + log_h;
  }
  return args;
}

}  // namespace

std::vector<double> death_rates_fixed_birth(TargetState& state, std::size_t sp,
                                            const RatePrescription& prescription,
                                            const BirthProposal& birth) {
  if (prescription.kind != RatePrescription::Kind::FixedBirth)
    throw Error("death_rates_fixed_birth: prescription is not fixed-birth");
  if (!(prescription.fixed_rate > 0.0)) throw Error("fixed birth rate must be > 0");
  auto args = death_log_args(state, sp, birth);
  const double log_rb = std::log(prescription.fixed_rate);
  std::vector<double> rates(args.size(), 0.0);
  for (std::size_t j = 0; j < args.size(); ++j) rates[j] = clamped_exp(args[j] + log_rb);
  return rates;
}

std::vector<double> death_rates_fixed_birth(const Society& y, std::size_t sp,
                                            const RatePrescription& prescription,
                                            const Target& target, const BirthProposal& birth) {
  auto state = target.make_state(y);
  return death_rates_fixed_birth(*state, sp, prescription, birth);
}

std::pair<double, std::vector<double>> varying_rates(TargetState& state, std::size_t sp,
                                                     const Params& candidate, double cand_log_h,
                                                     const BirthProposal& birth) {
  const Society& y = state.society();
  const std::size_t n = y.populations.at(sp).size();
  const double lt_y = state.current();
  if (lt_y == kNegInf) throw Error("rates: current state has zero target density");
  if (cand_log_h == kNegInf) throw Error("rates: birth proposal cannot regenerate its own draw");

  const double lt_z = state.with_birth(sp, candidate);
  double birth_rate = 0.0;
  if (lt_z > kNegInf) {
    const double log_arg = std::log(static_cast<double>(n) + 1.0) -
                           log_birth_measure_factor(*y.populations[sp].species, n, candidate) +
                           (lt_z - lt_y) - cand_log_h;
    birth_rate = std::min(1.0, clamped_exp(log_arg));
  }

  auto args = death_log_args(state, sp, birth);
  std::vector<double> deaths(args.size(), 0.0);
  for (std::size_t j = 0; j < args.size(); ++j) deaths[j] = std::min(1.0, clamped_exp(args[j]));
  return {birth_rate, std::move(deaths)};
}

std::pair<double, std::vector<double>> varying_rates(const Society& y, std::size_t sp,
                                                     const Params& candidate, double cand_log_h,
                                                     const Target& target,
                                                     const BirthProposal& birth) {
  auto state = target.make_state(y);
  return varying_rates(*state, sp, candidate, cand_log_h, birth);
}

double mutation_acceptance(double log_target_cur, double log_target_prop, double log_q_fwd,
                           double log_q_rev) {
  if (!std::isfinite(log_target_cur))
    throw Error("mutation acceptance: current log target must be finite");
  if (log_target_prop == kNegInf) return 0.0;
  const double log_ratio = log_target_prop - log_target_cur + log_q_rev - log_q_fwd;
  return std::min(1.0, clamped_exp(log_ratio));
}

std::pair<double, double> split_mutation_rates(double xi, double rate_m) {
  if (!(rate_m > 0.0)) throw Error("split_mutation_rates: mutation rate must be > 0");
  return {rate_m * xi, rate_m * (1.0 - xi)};
}

}  // namespace samsara
