#pragma once

#include "samsara/config.hpp"

namespace samsara {

// A ready-to-run benchmark: config text, optional injected dataset, and the
// injection truth record.
struct BenchmarkSpec {
  std::string config_ini;
  Dataset dataset;  // Kind::None for the analytic case
  nlohmann::json truth;
};

// kind: analytic | sine_lor | gmm; scale: desk | paper.
BenchmarkSpec generate_benchmark(const std::string& kind, const std::string& scale,
                                 std::uint64_t seed, bool noise_on = true);

// Writes config.ini, data.csv (when present) and truth.json into out_dir.
void write_benchmark(const BenchmarkSpec& bench, const std::filesystem::path& out_dir);

}  // namespace samsara
