#include "samsara/engine.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "samsara/mutation_samplers.hpp"
#include "samsara/storage.hpp"

namespace samsara {

SpeciesRuntime make_species_runtime(SpeciesPtr spec, RatePrescription prescription,
                                    std::size_t init_count) {
  SpeciesRuntime rt;
  rt.birth = make_birth_proposal(spec);
  if (spec->mutation_sampler == MutationSamplerKind::Mh)
    rt.mutation = make_mutation_proposal(spec);
  rt.spec = std::move(spec);
  rt.prescription = prescription;
  rt.init_count = init_count;
  return rt;
}

double waiting_time(const RateTable& table) {
  const double total = table.grand_total();
  if (!(total > 0.0)) throw Error("waiting_time: all rates are zero (absorbing state)");
  return 1.0 / total;
}

Selection select_transition(const RateTable& table, Rng& rng) {
  std::vector<double> totals(table.species.size(), 0.0);
  double grand = 0.0;
  for (std::size_t sp = 0; sp < table.species.size(); ++sp) {
    totals[sp] = table.species[sp].total();
    grand += totals[sp];
  }
  const std::size_t sp = rng.categorical(totals, grand);
  const auto& r = table.species[sp];
  const std::array<double, 3> process_rates{r.birth, r.death_total(), r.mutation};
  const std::size_t p = rng.categorical(process_rates, r.total());
  Selection sel;
  sel.species = sp;
  if (p == 0) {
    sel.process = Process::Birth;
    sel.move_idx = 0;
  } else if (p == 1) {
    sel.process = Process::Death;
    sel.move_idx = rng.categorical(r.deaths, r.death_total());
  } else {
    sel.process = Process::Mutation;
    sel.move_idx = 0;
  }
  return sel;
}

Engine::Engine(std::vector<SpeciesRuntime> species, const Target& target, const Dataset& data,
               ChainConfig cfg)
    : species_(std::move(species)), target_(target), data_(data), cfg_(cfg) {
  if (species_.empty()) throw Error("engine: no species");
  for (const auto& rt : species_) rt.spec->validate();
}

void Engine::reset(Society y) {
  state_ = target_.make_state(std::move(y));
  generation_ = 0;
  if (state_->current() == kNegInf)
    throw Error("engine: initial state has zero target density");
}

RateTable Engine::build_rates(Rng& rng) {
  if (!state_) throw Error("engine: no state; call reset() first");
  RateTable table;
  table.species.resize(species_.size());
  const std::size_t cycled =
      cfg_.scheduling == Scheduling::GibbsCycle
          ? static_cast<std::size_t>(generation_ % species_.size())
          : 0;
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    if (cfg_.scheduling == Scheduling::GibbsCycle && sp != cycled) continue;
    auto& out = table.species[sp];
    out.active = true;
    const auto& rt = species_[sp];
    const auto& pop = state_->society().populations[sp];
    auto draw = rt.birth->sample(pop, rng);
    out.birth_candidate = std::move(draw.theta);
    out.birth_candidate_log_h = draw.log_h;
    if (rt.prescription.kind == RatePrescription::Kind::FixedBirth) {
      out.birth = rt.prescription.fixed_rate;
      out.deaths = death_rates_fixed_birth(*state_, sp, rt.prescription, *rt.birth);
    } else {
      auto [b, d] =
          varying_rates(*state_, sp, out.birth_candidate, out.birth_candidate_log_h, *rt.birth);
      out.birth = b;
      out.deaths = std::move(d);
    }
    out.mutation = pop.size() > 0 ? 1.0 : 0.0;
  }
  return table;
}

Event Engine::apply(const RateTable& table, const Selection& sel, Rng& rng) {
  Event ev;
  ev.species = static_cast<std::uint32_t>(sel.species);
  const auto& rt = species_[sel.species];
  switch (sel.process) {
    case Process::Birth: {
      ev.process = Process::Birth;
      ev.theta = table.species[sel.species].birth_candidate;
      state_->commit_birth(sel.species, ev.theta);
      break;
    }
    case Process::Death: {
      ev.process = Process::Death;
      ev.idx = static_cast<std::int64_t>(sel.move_idx);
      state_->commit_death(sel.species, sel.move_idx);
      break;
    }
    case Process::Mutation: {
      const auto& pop = state_->society().populations[sel.species];
      if (rt.spec->mutation_sampler == MutationSamplerKind::GibbsGmm) {
        Society next = gibbs_sweep_gmm(state_->society(), sel.species, data_, rt.spec->gmm, rng);
        state_->rebind(std::move(next));
        ev.process = Process::Mutation;
        ev.sweep = true;
      } else {
        const std::size_t idx = static_cast<std::size_t>(rng.uniform_int(pop.size()));
        if (mh_mutate(*state_, sel.species, idx, *rt.mutation, rng)) {
          ev.process = Process::Mutation;
          ev.idx = static_cast<std::int64_t>(idx);
          ev.theta = state_->society().populations[sel.species].individuals[idx].params;
        } else {
          ev.process = Process::Stay;
        }
      }
      break;
    }
    default:
      throw Error("engine: invalid selection");
  }
  ++generation_;
  return ev;
}

StepRecord Engine::step(Rng& rng) {
  const RateTable table = build_rates(rng);
  const double tau = waiting_time(table);
  const Selection sel = select_transition(table, rng);
  const Event ev = apply(table, sel, rng);
  StepRecord rec;
  rec.generation = generation_;
  rec.species = ev.species;
  rec.process = ev.process;
  rec.move_idx = ev.idx;
  rec.tau = tau;  // waiting time of the pre-move state
  rec.log_target = state_->current();
  return rec;
}

void Engine::run(ChainStore& store) {
  Rng rng(cfg_.seed);
  // Dwell draws come from their own stream so the trajectory is unchanged.
  Rng dwell_rng(cfg_.seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<SpeciesPtr> specs;
  std::vector<std::size_t> counts;
  for (const auto& rt : species_) {
    specs.push_back(rt.spec);
    counts.push_back(rt.init_count);
  }
  reset(make_society(specs, counts, rng));

  const char* log_env = std::getenv("SAMSARA_LOG");
  const bool quiet = log_env != nullptr && std::string_view(log_env) == "off";

  Event pending;  // Process::Init
  for (std::uint64_t g = 0;; ++g) {
    RateTable table = build_rates(rng);
    const double tau = waiting_time(table);
    const double recorded = cfg_.sample_dwell ? dwell_rng.exponential(tau) : tau;
    store.record(g, pending, state_->society(), recorded, state_->current());
    if (cfg_.log_every > 0 && !quiet && g % cfg_.log_every == 0) {
      std::fprintf(stderr, "samsara: gen %llu", static_cast<unsigned long long>(g));
      for (std::size_t sp = 0; sp < species_.size(); ++sp)
        std::fprintf(stderr, " N_%s=%zu", species_[sp].spec->name.c_str(),
                     state_->society().populations[sp].size());
      std::fprintf(stderr, " log_target=%.6g tau=%.6g\n", state_->current(), tau);
    }
    if (g == cfg_.n_gen) break;
    const Selection sel = select_transition(table, rng);
    pending = apply(table, sel, rng);
    if (state_->current() == kNegInf)
      throw Error("engine: chain reached a zero-density state at generation " +
                  std::to_string(g + 1) + " (process " +
                  std::to_string(static_cast<int>(pending.process)) + ", species " +
                  std::to_string(pending.species) + ", idx " + std::to_string(pending.idx) +
                  ", N_pop " + std::to_string(state_->society().populations[pending.species].size()) +
                  ")");
  }
}

}  // namespace samsara
