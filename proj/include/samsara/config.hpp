#pragma once

#include <filesystem>

#include "samsara/engine.hpp"
#include "samsara/storage.hpp"

#include <json.hpp>

namespace samsara {

struct ConfigError : Error {
  explicit ConfigError(std::vector<std::string> errs);
  std::vector<std::string> errors;
};

struct SpeciesConfig {
  std::string name;
  std::vector<std::string> params;
  std::vector<Interval> bounds;
  PriorKind prior = PriorKind::UniformBox;
  TemplateKind template_kind = TemplateKind::None;
  BirthKind birth = BirthKind::Prior;
  MutationKind mutation = MutationKind::Gaussian;
  std::vector<double> sigma;
  std::vector<double> xi_strength;
  double keep_prob = 0.0;
  RatePrescription prescription{RatePrescription::Kind::Varying, 1.0};
  MutationSamplerKind sampler = MutationSamplerKind::Mh;
  std::size_t init_count = 0;
  NumberPrior::Kind number_prior = NumberPrior::Kind::ImproperUniform;
  double poisson_mean = 1.0;
};

struct RunConfig {
  // [run]
  std::uint64_t n_gen = 0;
  std::uint64_t seed = 0;
  std::uint64_t log_every = 0;
  std::string out_dir;
  StoreKind storage = StoreKind::Indexed;
  Scheduling scheduling = Scheduling::Poisson;
  bool sample_dwell = false;
  std::size_t chains = 1;
  // [target]
  std::string target_kind;
  double nbar = 5.0;
  std::string data_path;
  double noise_variance = 1.0;
  // [diagnostics]
  std::size_t diag_refs = 100;
  double psrf_threshold = 0.003;
  double null_level = 0.05;

  std::vector<SpeciesConfig> species;
  std::string source_text;  // verbatim INI, echoed into run manifests
};

// Strict parse: unknown sections and keys are rejected; every error is
// collected and reported together.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

// Everything needed to run one chain, assembled from a parsed config.
struct Run {
  std::vector<SpeciesPtr> specs;
  std::vector<SpeciesRuntime> runtimes;
  std::unique_ptr<Target> target;
  Dataset data;
  ChainConfig chain;
  RunConfig raw;
};

// base_dir resolves relative data paths (usually the config file's parent).
Run assemble_run(const RunConfig& cfg, const std::filesystem::path& base_dir);

// CSV ingestion: timeseries as "t,value" rows, samples as one value per row.
// A non-numeric first line is treated as a header.
Dataset load_timeseries_csv(const std::filesystem::path& path, double noise_variance);
Dataset load_samples_csv(const std::filesystem::path& path);

}  // namespace samsara
