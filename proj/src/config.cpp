#include "samsara/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace samsara {

namespace {

std::string join_errors(const std::vector<std::string>& errs) {
  std::string out = "configuration invalid:";
  for (const auto& e : errs) out += "\n  - " + e;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : Error(join_errors(errs)), errors(std::move(errs)) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// section -> ordered (key, value) pairs
using Sections = std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;

Sections tokenize(const std::string& text, std::vector<std::string>& errs) {
  Sections sections;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::string current;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back("line " + std::to_string(lineno) + ": unterminated section header");
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      sections.push_back({current, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    if (current.empty()) {
      errs.push_back("line " + std::to_string(lineno) + ": key outside any section");
      continue;
    }
    sections.back().second.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return sections;
}

struct KeyReader {
  const std::vector<std::pair<std::string, std::string>>& kv;
  std::string section;
  std::vector<std::string>& errs;
  std::set<std::string> seen;

  const std::string* find(const std::string& key) {
    const std::string* out = nullptr;
    std::size_t hits = 0;
    for (const auto& [k, v] : kv)
      if (k == key) {
        out = &v;
        ++hits;
      }
    if (hits > 1) errs.push_back("[" + section + "] duplicate key '" + key + "'");
    if (hits > 0) seen.insert(key);
    return out;
  }

  void fail(const std::string& key, const std::string& why) {
    errs.push_back("[" + section + "] key '" + key + "': " + why);
  }

  template <class T, class Parse>
  void get(const std::string& key, T& out, Parse parse) {
    if (const std::string* v = find(key)) parse(key, *v, out);
  }

  void get_u64(const std::string& key, std::uint64_t& out) {
    get(key, out, [this](const std::string& k, const std::string& v, std::uint64_t& o) {
      try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);  // accepts 1e6 notation
        if (pos != v.size() || d < 0.0 || d != std::floor(d)) throw std::invalid_argument("bad");
        o = static_cast<std::uint64_t>(d);
      } catch (const std::exception&) {
        fail(k, "expected a nonnegative integer, got '" + v + "'");
      }
    });
  }

  void get_double(const std::string& key, double& out) {
    get(key, out, [this](const std::string& k, const std::string& v, double& o) {
      try {
        std::size_t pos = 0;
        o = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("bad");
      } catch (const std::exception&) {
        fail(k, "expected a number, got '" + v + "'");
      }
    });
  }

  void get_bool(const std::string& key, bool& out) {
    get(key, out, [this](const std::string& k, const std::string& v, bool& o) {
      if (v == "true") o = true;
      else if (v == "false") o = false;
      else fail(k, "expected true or false, got '" + v + "'");
    });
  }

  void get_string(const std::string& key, std::string& out) {
    get(key, out, [](const std::string&, const std::string& v, std::string& o) { o = v; });
  }

  void get_double_list(const std::string& key, std::vector<double>& out) {
    get(key, out, [this](const std::string& k, const std::string& v, std::vector<double>& o) {
      o.clear();
      std::istringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t pos = 0;
          const std::string t = trim(item);
          o.push_back(std::stod(t, &pos));
          if (pos != t.size()) throw std::invalid_argument("bad");
        } catch (const std::exception&) {
          fail(k, "expected a comma-separated list of numbers, got '" + v + "'");
          return;
        }
      }
    });
  }

  void get_string_list(const std::string& key, std::vector<std::string>& out) {
    get(key, out, [](const std::string&, const std::string& v, std::vector<std::string>& o) {
      o.clear();
      std::istringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) o.push_back(trim(item));
    });
  }

  void reject_unknown() {
    for (const auto& [k, v] : kv)
      if (!seen.count(k)) errs.push_back("[" + section + "] unknown key '" + k + "'");
  }
};

void parse_species(const std::string& name,
                   const std::vector<std::pair<std::string, std::string>>& kv,
                   std::vector<std::string>& errs, SpeciesConfig& sc) {
  KeyReader r{kv, "species." + name, errs, {}};
  sc.name = name;
  r.get_string_list("params", sc.params);
  if (sc.params.empty()) r.fail("params", "at least one parameter name is required");

  sc.bounds.assign(sc.params.size(), Interval{});
  for (std::size_t k = 0; k < sc.params.size(); ++k) {
    std::vector<double> pair;
    r.get_double_list("bounds_" + sc.params[k], pair);
    if (pair.empty()) continue;  // unbounded
    if (pair.size() != 2 || !(pair[0] < pair[1])) {
      r.fail("bounds_" + sc.params[k], "expected 'low, high' with low < high");
      continue;
    }
    sc.bounds[k] = {pair[0], pair[1]};
  }

  std::string prior = "uniform";
  r.get_string("prior", prior);
  if (prior == "uniform") sc.prior = PriorKind::UniformBox;
  else if (prior == "gmm_conjugate") sc.prior = PriorKind::GmmConjugate;
  else r.fail("prior", "expected uniform or gmm_conjugate, got '" + prior + "'");

  std::string tpl = "none";
  r.get_string("template", tpl);
  if (tpl == "none") sc.template_kind = TemplateKind::None;
  else if (tpl == "sine") sc.template_kind = TemplateKind::Sine;
  else if (tpl == "lorentzian") sc.template_kind = TemplateKind::Lorentzian;
  else r.fail("template", "expected none, sine or lorentzian, got '" + tpl + "'");

  std::string birth = "prior";
  r.get_string("birth_proposal", birth);
  if (birth == "prior") sc.birth = BirthKind::Prior;
  else if (birth == "niw_beta") sc.birth = BirthKind::NiwBeta;
  else r.fail("birth_proposal", "expected prior or niw_beta, got '" + birth + "'");

  std::string mut = "gaussian";
  r.get_string("mutation_proposal", mut);
  if (mut == "gaussian") sc.mutation = MutationKind::Gaussian;
  else if (mut == "mitosis") sc.mutation = MutationKind::Mitosis;
  else if (mut == "prior") sc.mutation = MutationKind::Prior;
  else r.fail("mutation_proposal", "expected gaussian, mitosis or prior, got '" + mut + "'");

  r.get_double_list("sigma", sc.sigma);
  r.get_double_list("xi_strength", sc.xi_strength);
  r.get_double("keep_prob", sc.keep_prob);

  std::string rates = "varying";
  r.get_string("rates", rates);
  if (rates == "varying") {
    sc.prescription = {RatePrescription::Kind::Varying, 1.0};
  } else if (rates.rfind("fixed_birth:", 0) == 0) {
    try {
      const double rb = std::stod(rates.substr(12));
      if (!(rb > 0.0)) throw std::invalid_argument("bad");
      sc.prescription = {RatePrescription::Kind::FixedBirth, rb};
    } catch (const std::exception&) {
      r.fail("rates", "expected fixed_birth:<rate> with rate > 0, got '" + rates + "'");
    }
  } else {
    r.fail("rates", "expected varying or fixed_birth:<rate>, got '" + rates + "'");
  }

  std::string sampler = "mh";
  r.get_string("mutation_sampler", sampler);
  if (sampler == "mh") sc.sampler = MutationSamplerKind::Mh;
  else if (sampler == "gibbs_gmm") sc.sampler = MutationSamplerKind::GibbsGmm;
  else r.fail("mutation_sampler", "expected mh or gibbs_gmm, got '" + sampler + "'");

  std::uint64_t count = 0;
  r.get_u64("init_count", count);
  sc.init_count = count;

  std::string np = "improper";
  r.get_string("number_prior", np);
  if (np == "improper") {
    sc.number_prior = NumberPrior::Kind::ImproperUniform;
  } else if (np.rfind("poisson:", 0) == 0) {
    try {
      sc.poisson_mean = std::stod(np.substr(8));
      if (!(sc.poisson_mean > 0.0)) throw std::invalid_argument("bad");
      sc.number_prior = NumberPrior::Kind::Poisson;
    } catch (const std::exception&) {
      r.fail("number_prior", "expected poisson:<mean> with mean > 0, got '" + np + "'");
    }
  } else {
    r.fail("number_prior", "expected improper or poisson:<mean>, got '" + np + "'");
  }

  if (sc.prior == PriorKind::UniformBox && sc.mutation == MutationKind::Gaussian &&
      sc.sampler == MutationSamplerKind::Mh && sc.sigma.empty())
    r.fail("sigma", "gaussian mutation requires one width per parameter");

  r.reject_unknown();
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<std::string> errs;
  RunConfig cfg;
  cfg.source_text = text;
  const Sections sections = tokenize(text, errs);

  static const std::set<std::string> known{"run", "target", "diagnostics"};
  bool have_run = false;
  bool have_target = false;
  for (const auto& [name, kv] : sections) {
    if (name.rfind("species.", 0) == 0) {
      SpeciesConfig sc;
      const std::string spname = name.substr(8);
      if (spname.empty()) {
        errs.push_back("[" + name + "] species name must not be empty");
        continue;
      }
      for (const auto& other : cfg.species)
        if (other.name == spname) errs.push_back("duplicate species '" + spname + "'");
      parse_species(spname, kv, errs, sc);
      cfg.species.push_back(std::move(sc));
      continue;
    }
    if (!known.count(name)) {
      errs.push_back("unknown section [" + name +
                     "]; valid sections: [run], [target], [diagnostics], [species.<name>]");
      continue;
    }
    if (name == "run") {
      have_run = true;
      KeyReader r{kv, "run", errs, {}};
      r.get_u64("n_gen", cfg.n_gen);
      r.get_u64("seed", cfg.seed);
      r.get_u64("log_every", cfg.log_every);
      r.get_string("out", cfg.out_dir);
      std::string storage = "indexed";
      r.get_string("storage", storage);
      if (storage == "indexed") cfg.storage = StoreKind::Indexed;
      else if (storage == "dense") cfg.storage = StoreKind::Dense;
      else r.fail("storage", "expected indexed or dense, got '" + storage + "'");
      std::string sched = "poisson";
      r.get_string("scheduling", sched);
      if (sched == "poisson") cfg.scheduling = Scheduling::Poisson;
      else if (sched == "gibbs_cycle") cfg.scheduling = Scheduling::GibbsCycle;
      else r.fail("scheduling", "expected poisson or gibbs_cycle, got '" + sched + "'");
      r.get_bool("sample_dwell", cfg.sample_dwell);
      std::uint64_t chains = 1;
      r.get_u64("chains", chains);
      if (chains == 0) r.fail("chains", "must be >= 1");
      cfg.chains = chains;
      r.reject_unknown();
      if (r.find("n_gen") == nullptr) r.fail("n_gen", "required");
    } else if (name == "target") {
      have_target = true;
      KeyReader r{kv, "target", errs, {}};
      r.get_string("kind", cfg.target_kind);
      if (cfg.target_kind != "analytic" && cfg.target_kind != "timeseries" &&
          cfg.target_kind != "gmm")
        r.fail("kind", "expected analytic, timeseries or gmm, got '" + cfg.target_kind + "'");
      r.get_double("nbar", cfg.nbar);
      r.get_string("data", cfg.data_path);
      r.get_double("noise_variance", cfg.noise_variance);
      r.reject_unknown();
    } else {  // diagnostics
      KeyReader r{kv, "diagnostics", errs, {}};
      std::uint64_t refs = cfg.diag_refs;
      r.get_u64("refs", refs);
      cfg.diag_refs = refs;
      r.get_double("psrf_threshold", cfg.psrf_threshold);
      r.get_double("null_level", cfg.null_level);
      r.reject_unknown();
    }
  }

  if (!have_run) errs.push_back("missing required section [run]");
  if (!have_target) errs.push_back("missing required section [target]");
  if (cfg.species.empty()) errs.push_back("at least one [species.<name>] section is required");
  if (have_target) {
    if (cfg.target_kind == "analytic" && !(cfg.nbar > 0.0))
      errs.push_back("[target] nbar must be > 0 for the analytic target");
    if ((cfg.target_kind == "timeseries" || cfg.target_kind == "gmm") && cfg.data_path.empty())
      errs.push_back("[target] data path required for kind '" + cfg.target_kind + "'");
    if (cfg.target_kind == "timeseries" && !(cfg.noise_variance > 0.0))
      errs.push_back("[target] noise_variance must be > 0 for the timeseries target");
  }
  for (const auto& sc : cfg.species) {
    if (sc.sampler == MutationSamplerKind::GibbsGmm && cfg.storage == StoreKind::Indexed)
      errs.push_back("species '" + sc.name +
                     "': the blocked Gibbs sampler updates every individual per sweep and "
                     "requires dense storage");
    if (sc.prior == PriorKind::GmmConjugate && sc.birth != BirthKind::NiwBeta)
      errs.push_back("species '" + sc.name + "': mixture species require birth_proposal = niw_beta");
    if (sc.prior != PriorKind::GmmConjugate && sc.birth == BirthKind::NiwBeta)
      errs.push_back("species '" + sc.name + "': niw_beta requires prior = gmm_conjugate");
    if (sc.sampler == MutationSamplerKind::Mh && sc.mutation == MutationKind::Gaussian &&
        !sc.sigma.empty() && sc.sigma.size() != sc.params.size())
      errs.push_back("species '" + sc.name + "': sigma needs one entry per parameter");
  }

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["run"] = {{"n_gen", cfg.n_gen},
              {"seed", cfg.seed},
              {"log_every", cfg.log_every},
              {"out", cfg.out_dir},
              {"storage", cfg.storage == StoreKind::Indexed ? "indexed" : "dense"},
              {"scheduling", cfg.scheduling == Scheduling::Poisson ? "poisson" : "gibbs_cycle"},
              {"sample_dwell", cfg.sample_dwell},
              {"chains", cfg.chains}};
  j["target"] = {{"kind", cfg.target_kind},
                 {"nbar", cfg.nbar},
                 {"data", cfg.data_path},
                 {"noise_variance", cfg.noise_variance}};
  j["diagnostics"] = {{"refs", cfg.diag_refs},
                      {"psrf_threshold", cfg.psrf_threshold},
                      {"null_level", cfg.null_level}};
  auto species = nlohmann::json::array();
  for (const auto& sc : cfg.species) {
    nlohmann::json s;
    s["name"] = sc.name;
    s["params"] = sc.params;
    auto bounds = nlohmann::json::array();
    for (const auto& b : sc.bounds) bounds.push_back({b.lo, b.hi});
    s["bounds"] = std::move(bounds);
    s["prior"] = static_cast<int>(sc.prior);
    s["template"] = static_cast<int>(sc.template_kind);
    s["birth"] = static_cast<int>(sc.birth);
    s["mutation"] = static_cast<int>(sc.mutation);
    s["sigma"] = sc.sigma;
    s["xi_strength"] = sc.xi_strength;
    s["keep_prob"] = sc.keep_prob;
    s["rates_kind"] = static_cast<int>(sc.prescription.kind);
    s["rates_fixed"] = sc.prescription.fixed_rate;
    s["sampler"] = static_cast<int>(sc.sampler);
    s["init_count"] = sc.init_count;
    s["number_prior"] = static_cast<int>(sc.number_prior);
    s["poisson_mean"] = sc.poisson_mean;
    species.push_back(std::move(s));
  }
  j["species"] = std::move(species);
  return j;
}

namespace {

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path,
                                               std::size_t expect_cols) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read data file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        const std::string t = trim(cell);
        row.push_back(std::stod(t, &pos));
        if (pos != t.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error("non-numeric row in " + path.string());
    }
    first = false;
    if (row.size() != expect_cols)
      throw Error("expected " + std::to_string(expect_cols) + " columns in " + path.string());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Dataset load_timeseries_csv(const std::filesystem::path& path, double noise_variance) {
  auto rows = read_csv_rows(path, 2);
  std::vector<double> t;
  std::vector<double> v;
  t.reserve(rows.size());
  v.reserve(rows.size());
  for (const auto& row : rows) {
    t.push_back(row[0]);
    v.push_back(row[1]);
  }
  return Dataset::timeseries(std::move(t), std::move(v), noise_variance);
}

Dataset load_samples_csv(const std::filesystem::path& path) {
  auto rows = read_csv_rows(path, 1);
  std::vector<double> pts;
  pts.reserve(rows.size());
  for (const auto& row : rows) pts.push_back(row[0]);
  return Dataset::samples(std::move(pts));
}

Run assemble_run(const RunConfig& cfg, const std::filesystem::path& base_dir) {
  Run run;
  run.raw = cfg;

  // data first: mixture hyperparameters derive from it
  if (cfg.target_kind == "timeseries") {
    run.data = load_timeseries_csv(base_dir / cfg.data_path, cfg.noise_variance);
  } else if (cfg.target_kind == "gmm") {
    run.data = load_samples_csv(base_dir / cfg.data_path);
  } else {
    run.data = Dataset::none();
  }

  for (const auto& sc : cfg.species) {
    auto spec = std::make_shared<SpeciesSpec>();
    spec->name = sc.name;
    spec->param_names = sc.params;
    spec->bounds = sc.bounds;
    spec->prior_kind = sc.prior;
    spec->template_kind = sc.template_kind;
    spec->proposal.birth = sc.birth;
    spec->proposal.mutation = sc.mutation;
    spec->proposal.sigma = sc.sigma;
    spec->proposal.xi_strength = sc.xi_strength;
    spec->proposal.keep_prob = sc.keep_prob;
    spec->mutation_sampler = sc.sampler;
    spec->number_prior.kind = sc.number_prior;
    spec->number_prior.poisson_mean = sc.poisson_mean;
    if (sc.prior == PriorKind::GmmConjugate) {
      spec->z_factor_kind = ZFactorKind::Gmm;
      const auto& x = run.data.points;
      if (x.empty()) throw Error("species '" + sc.name + "': mixture species need sample data");
      double mean = 0.0;
      for (double v : x) mean += v;
      mean /= static_cast<double>(x.size());
      double var = 0.0;
      for (double v : x) var += (v - mean) * (v - mean);
      var /= static_cast<double>(x.size());
      if (!(var > 0.0)) var = 1.0;
      spec->gmm.mu0 = mean;
      spec->gmm.lambda = var;
    }
    spec->validate();
    run.specs.push_back(spec);
    run.runtimes.push_back(make_species_runtime(spec, sc.prescription, sc.init_count));
  }

  if (cfg.target_kind == "analytic") {
    if (run.specs.size() != 1 || run.specs[0]->n_par() != 2)
      throw Error("analytic target expects exactly one 2-parameter species");
    run.target = std::make_unique<AnalyticTarget>(run.specs[0],
                                                  AnalyticTargetConfig::reference(cfg.nbar));
  } else if (cfg.target_kind == "timeseries") {
    run.target = std::make_unique<TimeseriesTarget>(run.specs, run.data);
  } else if (cfg.target_kind == "gmm") {
    if (run.specs.size() != 1) throw Error("gmm target expects exactly one mixture species");
    run.target = std::make_unique<GmmTarget>(run.specs[0], run.data);
  } else {
    throw Error("unknown target kind '" + cfg.target_kind + "'");
  }

  run.chain.n_gen = cfg.n_gen;
  run.chain.seed = cfg.seed;
  run.chain.scheduling = cfg.scheduling;
  run.chain.sample_dwell = cfg.sample_dwell;
  run.chain.log_every = cfg.log_every;
  return run;
}

}  // namespace samsara
