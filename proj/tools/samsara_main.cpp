#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "samsara/bench.hpp"
#include "samsara/diagnostics.hpp"
#include "samsara/postprocess.hpp"

namespace {

using namespace samsara;
using nlohmann::json;

void emit_error(const std::string& type, const std::string& message,
                const std::vector<std::string>& details = {}) {
  json err;
  err["error"] = {{"type", type}, {"message", message}};
  if (!details.empty()) err["error"]["details"] = details;
  std::cerr << err.dump(2) << "\n";
}

// Runs every chain of a parsed config and saves the stores. Returns the
// store directories.
std::vector<std::filesystem::path> execute_run(const RunConfig& cfg,
                                               const std::filesystem::path& base_dir,
                                               const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> dirs;
  for (std::size_t c = 0; c < cfg.chains; ++c) {
    Run run = assemble_run(cfg, base_dir);
    run.chain.seed = cfg.seed + c;
    Engine engine(std::move(run.runtimes), *run.target, run.data, run.chain);
    auto store = make_store(cfg.storage, run.specs);
    store->manifest_extra()["config_ini"] = cfg.source_text;
    store->manifest_extra()["seed"] = run.chain.seed;
    store->manifest_extra()["chain_index"] = c;
    engine.run(*store);
    const auto dir = cfg.chains == 1 ? out_dir : out_dir / ("chain_" + std::to_string(c));
    store->save(dir);
    dirs.push_back(dir);
  }
  return dirs;
}

// Thinned samples with the stride picked from the log-target correlation
// length, as used by both post and diag.
WeightedSamples thinned_samples(const ChainStore& store, double burn_in, std::size_t stride_opt,
                                std::size_t* stride_used = nullptr) {
  std::size_t stride = stride_opt;
  if (stride == 0) {
    const std::uint64_t n = store.n_gen();
    const auto first = static_cast<std::uint64_t>(burn_in * static_cast<double>(n + 1));
    std::vector<double> series;
    series.reserve(n + 1 - first);
    for (std::uint64_t g = first; g <= n; ++g) series.push_back(store.log_target_at(g));
    const auto cl = correlation_length(series);
    stride = std::max<std::size_t>(1, cl.length);
    if (cl.truncated) stride = std::max<std::size_t>(1, series.size() / 100);
  }
  if (stride_used != nullptr) *stride_used = stride;
  return WeightedSamples::from_store(store, burn_in, stride);
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::function<void(std::ofstream&)>& body) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f.precision(17);
  f << header << "\n";
  body(f);
}

int cmd_post(const std::string& dir_arg, double burn_in, std::size_t bins, std::size_t stride) {
  const std::filesystem::path dir(dir_arg);
  auto store = ChainStore::load(dir);
  std::size_t stride_used = 1;
  WeightedSamples samples = thinned_samples(*store, burn_in, stride, &stride_used);
  const auto out = dir / "post";
  std::filesystem::create_directories(out);

  json summary;
  summary["n_gen"] = store->n_gen();
  summary["burn_in"] = burn_in;
  summary["stride"] = stride_used;
  summary["n_samples"] = samples.size();

  for (std::size_t sp = 0; sp < store->species().size(); ++sp) {
    const auto& spec = *store->species()[sp];
    auto pmf = number_posterior(samples, sp);
    write_csv(out / ("number_pmf_" + spec.name + ".csv"), "n,mass", [&](std::ofstream& f) {
      for (const auto& [n, mass] : pmf) f << n << "," << mass << "\n";
    });
    std::size_t mode = 0;
    double best = -1.0;
    for (const auto& [n, mass] : pmf)
      if (mass > best) {
        best = mass;
        mode = n;
      }
    summary["species"][spec.name]["number_mode"] = mode;
    summary["species"][spec.name]["mean_count"] =
        rb_estimate(samples, [sp](const Society& y) {
          return static_cast<double>(y.populations[sp].size());
        });

    for (std::size_t k = 0; k < spec.n_par(); ++k) {
      const auto hist = parameter_distribution(samples, sp, k, bins);
      if (hist.empty) continue;
      write_csv(out / ("hist_" + spec.name + "_" + spec.param_names[k] + ".csv"),
                "bin_lo,bin_hi,mass", [&](std::ofstream& f) {
                  for (std::size_t b = 0; b < hist.mass.size(); ++b)
                    f << hist.edges[b] << "," << hist.edges[b + 1] << "," << hist.mass[b] << "\n";
                });
    }

    if (spec.template_kind != TemplateKind::None) {
      // reconstruct on a coarse grid spanning the run's observation window
      const auto manifest_extra = store->manifest_extra();
      std::vector<double> grid;
      const std::size_t g_n = 200;
      double t_hi = 1.0;
      if (manifest_extra.contains("t_obs")) t_hi = manifest_extra["t_obs"].get<double>();
      for (std::size_t i = 0; i < g_n; ++i)
        grid.push_back(t_hi * static_cast<double>(i) / static_cast<double>(g_n - 1));
      const auto band = signal_band(samples, sp, grid);
      write_csv(out / ("band_" + spec.name + ".csv"), "t,q05,q50,q95", [&](std::ofstream& f) {
        for (std::size_t i = 0; i < band.times.size(); ++i)
          f << band.times[i] << "," << band.q_lo[i] << "," << band.q_mid[i] << ","
            << band.q_hi[i] << "\n";
      });
    }

    const auto catalog = export_for_catalog(samples, sp);
    write_csv(out / ("catalog_" + spec.name + ".csv"), "track,sample," + [&] {
      std::string names;
      for (std::size_t k = 0; k < spec.n_par(); ++k)
        names += spec.param_names[k] + (k + 1 < spec.n_par() ? "," : "");
      return names;
    }(), [&](std::ofstream& f) {
      for (std::size_t tr = 0; tr < catalog.size(); ++tr)
        for (std::size_t i = 0; i < catalog[tr].generation.size(); ++i) {
          f << tr << "," << catalog[tr].generation[i];
          for (double v : catalog[tr].params[i]) f << "," << v;
          f << "\n";
        }
    });
  }

  std::ofstream(out / "summary.json") << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_diag(const std::vector<std::string>& store_dirs, std::size_t refs, std::uint64_t seed,
             double burn_in, const std::string& csv_path) {
  if (store_dirs.size() < 2) throw Error("diag needs at least two stores");
  std::vector<std::unique_ptr<ChainStore>> stores;
  for (const auto& d : store_dirs) stores.push_back(ChainStore::load(d));
  const std::size_t n_species = stores[0]->species().size();

  json out;
  for (std::size_t sp = 0; sp < n_species; ++sp) {
    const std::string name = stores[0]->species()[sp]->name;
    // equal-length thinned chains: common stride = max over chains
    std::size_t stride = 1;
    std::vector<WeightedSamples> full;
    for (const auto& s : stores) {
      std::size_t used = 1;
      thinned_samples(*s, burn_in, 0, &used);
      stride = std::max(stride, used);
    }
    std::vector<std::vector<Society>> chains;
    std::size_t min_len = SIZE_MAX;
    std::vector<double> corr_lengths;
    for (const auto& s : stores) {
      WeightedSamples ws = WeightedSamples::from_store(*s, burn_in, stride);
      corr_lengths.push_back(static_cast<double>(stride));
      chains.push_back(std::move(ws.societies));
      min_len = std::min(min_len, chains.back().size());
    }
    for (auto& c : chains) c.resize(min_len);

    const auto refs_set = draw_reference_points(chains, sp, refs, seed);
    const auto x = min_distance_series(chains, sp, refs_set);
    const auto u = pairwise_u(x);
    const auto w = mc_test_w(x);
    const auto r = psrf(x);

    out["species"][name] = {{"stride", stride},
                            {"thinned_length", min_len},
                            {"u", u},
                            {"w", w},
                            {"max_psrf", r.max}};
    if (!csv_path.empty()) {
      write_csv(std::filesystem::path(csv_path + "." + name + ".csv"), "ref,psrf",
                [&](std::ofstream& f) {
                  for (std::size_t l = 0; l < r.per_ref.size(); ++l)
                    f << l << "," << r.per_ref[l] << "\n";
                });
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_export(const std::string& dir_arg, const std::string& base) {
  auto store = ChainStore::load(dir_arg);
  write_csv(base + ".generations.csv", "generation,tau,log_target,event_code",
            [&](std::ofstream& f) {
              for (std::uint64_t g = 0; g <= store->n_gen(); ++g)
                f << g << "," << store->tau_at(g) << "," << store->log_target_at(g) << ","
                  << store->event_code_at(g) << "\n";
            });
  for (std::size_t sp = 0; sp < store->species().size(); ++sp) {
    const auto& spec = *store->species()[sp];
    std::string header = "generation";
    for (const auto& p : spec.param_names) header += "," + p;
    write_csv(base + "." + spec.name + ".csv", header, [&](std::ofstream& f) {
      for (std::uint64_t g = 0; g <= store->n_gen(); ++g) {
        const auto y = store->society_at(g);
        for (const auto& ind : y.populations[sp].individuals) {
          f << g;
          for (double v : ind.params) f << "," << v;
          f << "\n";
        }
      }
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"samsara: continuous-time birth-death-mutation MCMC for trans-dimensional "
               "Bayesian inference"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run chains from an INI config");
  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = UINT64_MAX;
  std::size_t chains_override = 0;
  run_cmd->add_option("--config", config_path, "INI config path")->required();
  run_cmd->add_option("--out", out_override, "output directory (overrides [run] out)");
  run_cmd->add_option("--seed", seed_override, "seed override");
  run_cmd->add_option("--chains", chains_override, "number of chains (seeds seed+0..C-1)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "generate and run a benchmark");
  std::string bench_kind;
  std::string bench_scale = "desk";
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  std::string bench_noise = "on";
  bool bench_no_run = false;
  std::uint64_t bench_ngen_override = 0;
  bench_cmd->add_option("kind", bench_kind, "analytic | sine_lor | gmm")->required();
  bench_cmd->add_option("--scale", bench_scale, "desk | paper");
  bench_cmd->add_option("--seed", bench_seed, "injection and chain seed");
  bench_cmd->add_option("--out", bench_out, "output directory")->required();
  bench_cmd->add_option("--noise", bench_noise, "on | off (timeseries injection noise)");
  bench_cmd->add_option("--n-gen", bench_ngen_override, "override the generation count");
  bench_cmd->add_flag("--no-run", bench_no_run, "generate files only");

  // post
  auto* post_cmd = app.add_subcommand("post", "post-process a completed run");
  std::string post_dir;
  double post_burn_in = 0.1;
  std::size_t post_bins = 50;
  std::size_t post_stride = 0;
  post_cmd->add_option("dir", post_dir, "run directory")->required();
  post_cmd->add_option("--burn-in", post_burn_in, "burn-in fraction (default 0.1)");
  post_cmd->add_option("--bins", post_bins, "histogram bins");
  post_cmd->add_option("--stride", post_stride, "thinning stride (0 = correlation length)");

  // diag
  auto* diag_cmd = app.add_subcommand("diag", "multi-chain convergence diagnostics");
  std::vector<std::string> diag_stores;
  std::size_t diag_refs = 100;
  std::uint64_t diag_seed = 1;
  double diag_burn_in = 0.1;
  std::string diag_csv;
  diag_cmd->add_option("--stores", diag_stores, "two or more run directories")->required();
  diag_cmd->add_option("--refs", diag_refs, "number of reference points");
  diag_cmd->add_option("--seed", diag_seed, "reference draw seed");
  diag_cmd->add_option("--burn-in", diag_burn_in, "burn-in fraction");
  diag_cmd->add_option("--csv", diag_csv, "per-reference PSRF CSV base path");

  // export
  auto* export_cmd = app.add_subcommand("export", "convert a store to CSV");
  std::string export_dir;
  std::string export_base;
  export_cmd->add_option("dir", export_dir, "run directory")->required();
  export_cmd->add_option("--csv", export_base, "output CSV base path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::stringstream ss;
    ss << e.what();
    emit_error("usage", ss.str());
    return 2;
  }

  try {
    if (*run_cmd) {
      RunConfig cfg = parse_config(config_path);
      if (seed_override != UINT64_MAX) cfg.seed = seed_override;
      if (chains_override > 0) cfg.chains = chains_override;
      std::filesystem::path out =
          !out_override.empty() ? out_override
                                : (!cfg.out_dir.empty() ? cfg.out_dir : std::string("run_out"));
      const auto base = std::filesystem::path(config_path).parent_path();
      const auto dirs = execute_run(cfg, base, out);
      json j;
      for (const auto& d : dirs) j["stores"].push_back(d.string());
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*bench_cmd) {
      auto bench = generate_benchmark(bench_kind, bench_scale, bench_seed, bench_noise != "off");
      write_benchmark(bench, bench_out);
      if (!bench_no_run) {
        RunConfig cfg = parse_config_text(bench.config_ini);
        if (bench_ngen_override > 0) cfg.n_gen = bench_ngen_override;
        const auto dirs = execute_run(cfg, bench_out, bench_out);
        json j;
        for (const auto& d : dirs) j["stores"].push_back(d.string());
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
    if (*post_cmd) return cmd_post(post_dir, post_burn_in, post_bins, post_stride);
    if (*diag_cmd) return cmd_diag(diag_stores, diag_refs, diag_seed, diag_burn_in, diag_csv);
    if (*export_cmd) return cmd_export(export_dir, export_base);
  } catch (const ConfigError& e) {
    emit_error("config", "configuration invalid", e.errors);
    return 2;
  } catch (const Error& e) {
    emit_error("runtime", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
  return 0;
}
