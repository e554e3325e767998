#pragma once

#include <cstdint>
#include <memory>

#include "samsara/rates.hpp"

namespace samsara {

enum class Scheduling { Poisson, GibbsCycle };

enum class Process : std::uint8_t { Init = 0, Birth = 1, Death = 2, Mutation = 3, Stay = 4 };

// Transition applied at one generation.
struct Event {
  Process process = Process::Init;
  std::uint32_t species = 0;
  std::int64_t idx = -1;  // dying / mutated individual, -1 when not applicable
  Params theta;           // born / mutated parameters
  bool sweep = false;     // blocked-Gibbs mutation: all individuals replaced
};

struct ChainConfig {
  std::uint64_t n_gen = 0;
  std::uint64_t seed = 0;
  Scheduling scheduling = Scheduling::Poisson;
  // Record exponential dwell draws instead of expected waiting times. The
  // draws come from a separate stream, so the trajectory is unchanged.
  bool sample_dwell = false;
  std::uint64_t log_every = 0;
};

struct StepRecord {
  std::uint64_t generation = 0;
  std::uint32_t species = 0;
  Process process = Process::Stay;
  std::int64_t move_idx = -1;
  double tau = 0.0;  // waiting time of the pre-move state
  double log_target = 0.0;
};

struct SpeciesRuntime {
  SpeciesPtr spec;
  RatePrescription prescription;
  std::shared_ptr<const BirthProposal> birth;
  std::shared_ptr<const MutationProposal> mutation;
  std::size_t init_count = 0;
};

SpeciesRuntime make_species_runtime(SpeciesPtr spec, RatePrescription prescription,
                                    std::size_t init_count);

double waiting_time(const RateTable& table);

struct Selection {
  std::size_t species = 0;
  Process process = Process::Stay;
  std::size_t move_idx = 0;
};

// Nested categorical draws: species by total rate, process by process rate,
// move by move rate.
Selection select_transition(const RateTable& table, Rng& rng);

class ChainStore;

// The continuous-time chain driver. Owns the evolving society via the
// target state; one engine runs one sequential chain.
class Engine {
 public:
  Engine(std::vector<SpeciesRuntime> species, const Target& target, const Dataset& data,
         ChainConfig cfg);

  // Rate table for the current state; draws one fresh birth candidate per
  // active species. Under Gibbs-cycle scheduling only the cycled species is
  // active.
  RateTable build_rates(Rng& rng);

  // One generation: build the table, pick and apply a move.
  StepRecord step(Rng& rng);

  // Full run: initializes the society from the priors and records
  // generations 0..n_gen into the store.
  void run(ChainStore& store);

  const Society& society() const { return state_->society(); }
  double log_target() const { return state_->current(); }
  const ChainConfig& config() const { return cfg_; }
  void reset(Society y);

 private:
  Event apply(const RateTable& table, const Selection& sel, Rng& rng);

  std::vector<SpeciesRuntime> species_;
  const Target& target_;
  const Dataset& data_;
  ChainConfig cfg_;
  std::unique_ptr<TargetState> state_;
  std::uint64_t generation_ = 0;
};

}  // namespace samsara
