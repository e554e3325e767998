#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "samsara/engine.hpp"

#include <json.hpp>

namespace samsara {

enum class StoreKind { Indexed, Dense };

std::uint64_t encode_event(const Event& e);
// Decoded shape only; born/mutated parameter values live in the stores.
Event decode_event(std::uint64_t code);

// Chain persistence. record() is called once per generation, generation 0
// carrying the initial state; waiting times and log targets are stored per
// generation in both modes.
class ChainStore {
 public:
  virtual ~ChainStore() = default;
  virtual StoreKind kind() const = 0;

  virtual void record(std::uint64_t gen, const Event& event, const Society& society, double tau,
                      double log_target) = 0;

  // Largest recorded generation.
  virtual std::uint64_t n_gen() const = 0;
  virtual Society society_at(std::uint64_t gen) const = 0;

  // Sequential visit of generations first, first+stride, ...; the indexed
  // scheme replays its rows incrementally, which is far cheaper than
  // repeated society_at calls.
  virtual void for_each_society(
      std::uint64_t first, std::uint64_t stride,
      const std::function<void(std::uint64_t, const Society&)>& fn) const;
  double tau_at(std::uint64_t gen) const { return meta_checked(gen).tau; }
  double log_target_at(std::uint64_t gen) const { return meta_checked(gen).log_target; }
  std::uint64_t event_code_at(std::uint64_t gen) const { return meta_checked(gen).event_code; }

  const std::vector<SpeciesPtr>& species() const { return species_; }
  std::size_t species_index(const std::string& name) const;

  nlohmann::json& manifest_extra() { return extra_; }
  const nlohmann::json& manifest_extra() const { return extra_; }

  virtual void save(const std::filesystem::path& dir) const = 0;
  static std::unique_ptr<ChainStore> load(const std::filesystem::path& dir);

 protected:
  struct GenerationMeta {
    double tau = 0.0;
    double log_target = 0.0;
    std::uint64_t event_code = 0;
  };
  const GenerationMeta& meta_checked(std::uint64_t gen) const;
  void check_record_order(std::uint64_t gen) const;
  nlohmann::json manifest_base(const char* kind_name) const;

  std::vector<SpeciesPtr> species_;
  std::vector<GenerationMeta> meta_;
  nlohmann::json extra_ = nlohmann::json::object();
};

// Indexed scheme: each unique individual is stored once with its birth and
// death generations; a mutation closes the old row and opens a new one at
// the same generation.
class IndexedStore final : public ChainStore {
 public:
  explicit IndexedStore(std::vector<SpeciesPtr> species);
  StoreKind kind() const override { return StoreKind::Indexed; }
  void record(std::uint64_t gen, const Event& event, const Society& society, double tau,
              double log_target) override;
  std::uint64_t n_gen() const override;
  Society society_at(std::uint64_t gen) const override;
  void for_each_society(
      std::uint64_t first, std::uint64_t stride,
      const std::function<void(std::uint64_t, const Society&)>& fn) const override;
  void save(const std::filesystem::path& dir) const override;

  struct SpeciesRows {
    std::vector<double> values;         // row-major, n_rows x n_par
    std::vector<std::int64_t> born;     // birth generation per row
    std::vector<std::int64_t> died;     // death generation per row, -1 while alive
    std::vector<std::size_t> alive;     // row index per live individual, population order
    std::size_t n_rows() const { return born.size(); }
  };
  const SpeciesRows& rows(std::size_t sp) const { return rows_.at(sp); }

 private:
  friend class ChainStore;
  std::vector<SpeciesRows> rows_;
};

// Dense scheme: a full society snapshot per generation.
class DenseStore final : public ChainStore {
 public:
  explicit DenseStore(std::vector<SpeciesPtr> species);
  StoreKind kind() const override { return StoreKind::Dense; }
  void record(std::uint64_t gen, const Event& event, const Society& society, double tau,
              double log_target) override;
  std::uint64_t n_gen() const override;
  Society society_at(std::uint64_t gen) const override;
  void save(const std::filesystem::path& dir) const override;

 private:
  friend class ChainStore;
  // per generation, per species: flattened parameter block
  std::vector<std::vector<std::vector<double>>> snapshots_;
};

std::unique_ptr<ChainStore> make_store(StoreKind kind, std::vector<SpeciesPtr> species);

// Memory footprint of the two schemes per the closed-form estimates:
// full = n_gen * sum_a nbar_a * n_par_a * 8 bytes,
// opt  = n_gen * sum_a accept_rate * (n_par_a + 16) bytes.
std::pair<double, double> memory_estimates(double n_gen, std::span<const double> nbar,
                                           std::span<const double> n_par, double accept_rate);

}  // namespace samsara
