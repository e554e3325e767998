#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "samsara/bench.hpp"
#include "samsara/diagnostics.hpp"
#include "samsara/postprocess.hpp"

namespace py = pybind11;
using namespace samsara;

namespace {

// Societies cross the boundary as per-species lists of parameter vectors.
using PySociety = std::vector<std::vector<Params>>;

PySociety to_py(const Society& y) {
  PySociety out;
  for (const auto& pop : y.populations) {
    std::vector<Params> inds;
    for (const auto& ind : pop.individuals) inds.push_back(ind.params);
    out.push_back(std::move(inds));
  }
  return out;
}

std::vector<std::filesystem::path> run_ini(const std::string& text,
                                           const std::string& out_dir,
                                           const std::string& base_dir) {
  RunConfig cfg = parse_config_text(text);
  std::vector<std::filesystem::path> dirs;
  for (std::size_t c = 0; c < cfg.chains; ++c) {
    Run run = assemble_run(cfg, base_dir);
    run.chain.seed = cfg.seed + c;
    Engine engine(std::move(run.runtimes), *run.target, run.data, run.chain);
    auto store = make_store(cfg.storage, run.specs);
    store->manifest_extra()["config_ini"] = cfg.source_text;
    store->manifest_extra()["seed"] = run.chain.seed;
    engine.run(*store);
    const auto dir = cfg.chains == 1
                         ? std::filesystem::path(out_dir)
                         : std::filesystem::path(out_dir) / ("chain_" + std::to_string(c));
    store->save(dir);
    dirs.push_back(dir);
  }
  return dirs;
}

}  // namespace

PYBIND11_MODULE(_samsara, m) {
  m.doc() = "Continuous-time birth-death-mutation MCMC for trans-dimensional inference";

  py::register_exception<Error>(m, "SamsaraError");

  // densities and templates
  m.def("sine_template", [](double t, const Params& th) { return sine_template(t, th); });
  m.def("lorentzian_template",
        [](double t, const Params& th) { return lorentzian_template(t, th); });
  m.def("log_poisson_pmf",
        [](std::size_t n, double mean) { return log_poisson_pmf(n, mean); });

  py::class_<AnalyticTargetConfig>(m, "AnalyticTargetConfig")
      .def_static("reference", &AnalyticTargetConfig::reference, py::arg("nbar"))
      .def("log_mixture_density", &AnalyticTargetConfig::log_mixture_density);

  // rate primitives
  m.def("mutation_acceptance", &mutation_acceptance, py::arg("log_target_cur"),
        py::arg("log_target_prop"), py::arg("log_q_fwd"), py::arg("log_q_rev"));
  m.def("split_mutation_rates", &split_mutation_rates, py::arg("xi"), py::arg("rate_m"));
  m.def(
      "z_factor_gmm",
      [](std::size_t n_pop, double weight) {
        SpeciesSpec spec;
        spec.z_factor_kind = ZFactorKind::Gmm;
        return z_factor(spec, n_pop, {weight});
      },
      py::arg("n_pop"), py::arg("weight"));

  // diagnostics over plain arrays
  m.def("acf", [](const std::vector<double>& s, std::size_t lag) { return acf(s, lag); });
  m.def("correlation_length", [](const std::vector<double>& s) {
    const auto out = correlation_length(s);
    return py::make_tuple(out.length, out.truncated);
  });
  m.def("empirical_cmf",
        [](const std::vector<double>& xs, double t) { return empirical_cmf(xs, t); });
  m.def("pairwise_u", [](const DistanceSeries& x, double p) { return pairwise_u(x, p); },
        py::arg("x"), py::arg("p") = 1.0);
  m.def("mc_test_w", [](const DistanceSeries& x, double p) { return mc_test_w(x, p); },
        py::arg("x"), py::arg("p") = 1.0);
  m.def("psrf", [](const DistanceSeries& x) {
    const auto out = psrf(x);
    return py::make_tuple(out.max, out.per_ref);
  });

  m.def("memory_estimates",
        [](double n_gen, const std::vector<double>& nbar, const std::vector<double>& n_par,
           double acc) { return memory_estimates(n_gen, nbar, n_par, acc); });

  // estimators over plain arrays
  m.def("rb_estimate", [](const std::vector<double>& tau, const std::vector<double>& f) {
    if (tau.size() != f.size() || tau.empty()) throw Error("rb_estimate: size mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      num += tau[i] * f[i];
      den += tau[i];
    }
    return num / den;
  });

  // runs and stores
  m.def("run_ini", &run_ini, py::arg("config_text"), py::arg("out_dir"),
        py::arg("base_dir") = std::string("."),
        "Run the chains described by an INI config and save their stores.");

  py::class_<ChainStore>(m, "ChainStore")
      .def_static("load",
                  [](const std::filesystem::path& dir) { return ChainStore::load(dir); })
      .def_property_readonly("n_gen", &ChainStore::n_gen)
      .def("tau", &ChainStore::tau_at)
      .def("log_target", &ChainStore::log_target_at)
      .def("society", [](const ChainStore& s, std::uint64_t g) { return to_py(s.society_at(g)); })
      .def_property_readonly("species_names", [](const ChainStore& s) {
        std::vector<std::string> names;
        for (const auto& sp : s.species()) names.push_back(sp->name);
        return names;
      });

  m.def(
      "number_posterior",
      [](const ChainStore& store, std::size_t sp, double burn_in, std::size_t stride) {
        const auto samples = WeightedSamples::from_store(store, burn_in, stride);
        return number_posterior(samples, sp);
      },
      py::arg("store"), py::arg("species") = 0, py::arg("burn_in") = 0.1, py::arg("stride") = 1);

  m.def("generate_benchmark",
        [](const std::string& kind, const std::string& scale, std::uint64_t seed, bool noise,
           const std::string& out_dir) {
          const auto bench = generate_benchmark(kind, scale, seed, noise);
          write_benchmark(bench, out_dir);
          return bench.truth.dump();
        },
        py::arg("kind"), py::arg("scale"), py::arg("seed"), py::arg("noise"), py::arg("out_dir"));
}
