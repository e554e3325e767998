#include "samsara/bench.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "samsara/target.hpp"

namespace samsara {

namespace {

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

BenchmarkSpec analytic_benchmark(const std::string& scale, std::uint64_t seed) {
  BenchmarkSpec b;
  const std::uint64_t n_gen = scale == "paper" ? 10000000ull : 1000000ull;
  std::ostringstream ini;
  ini << "[run]\n"
      << "n_gen = " << n_gen << "\n"
      << "seed = " << seed << "\n"
      << "storage = indexed\n"
      << "scheduling = poisson\n\n"
      << "[target]\n"
      << "kind = analytic\n"
      << "nbar = 5.0\n\n"
      << "[species.theta]\n"
      << "params = t1, t2\n"
      << "bounds_t1 = -5, 4\n"
      << "bounds_t2 = -8, 4\n"
      << "prior = uniform\n"
      << "birth_proposal = prior\n"
      << "mutation_proposal = gaussian\n"
      << "sigma = 0.005, 0.002\n"
      << "rates = fixed_birth:1.0\n"
      << "mutation_sampler = mh\n"
      << "init_count = 0\n";
  b.config_ini = ini.str();
  b.dataset = Dataset::none();
  b.truth = {{"kind", "analytic"},
             {"scale", scale},
             {"seed", seed},
             {"nbar", 5.0},
             {"weights", {8.0 / 18.0, 4.0 / 18.0, 6.0 / 18.0}},
             {"means", {{-3.0, 0.0}, {-1.5, -3.0}, {0.0, 1.0}}},
             {"covs", {{0.2, 0.0, 0.2}, {1.3, 0.0, 0.01}, {1.0, 0.5, 1.0}}}};
  return b;
}

BenchmarkSpec sine_lor_benchmark(const std::string& scale, std::uint64_t seed, bool noise_on) {
  BenchmarkSpec b;
  const bool paper = scale == "paper";
  const double dt = 500.0;
  const std::size_t n = paper ? 6311 : 2000;  // paper: T_obs = 0.1 yr
  const double t_obs = dt * static_cast<double>(n);
  const double c = 1e-45;
  const std::size_t n_sine = paper ? 15 : 3;
  const std::size_t n_lor = paper ? 5 : 2;
  const std::uint64_t n_gen = paper ? 10000000ull : 2000000ull;

  const double log_f_lo = std::log(1.0 / t_obs);
  const double log_f_hi = std::log(1.0 / (2.0 * dt));
  const double log_fd_lo = std::log(1.0 / (t_obs * t_obs));
  const double log_fd_hi = std::log(10.0 / (t_obs * t_obs));

  Rng rng(seed);
  auto draw_sine = [&]() {
    return Params{rng.uniform(-54.5, -52.5), rng.uniform(log_f_lo, log_f_hi),
                  rng.uniform(log_fd_lo, log_fd_hi), rng.uniform(0.0, 2.0 * 3.14159265358979)};
  };
  auto draw_lor = [&]() {
    return Params{rng.uniform(1e-22, 1e-20), rng.uniform(1e4, 2e4), rng.uniform(0.0, t_obs)};
  };

  std::vector<Params> sines;
  std::vector<Params> lors;
  for (std::size_t i = 0; i < n_sine; ++i) sines.push_back(draw_sine());
  for (std::size_t i = 0; i < n_lor; ++i) lors.push_back(draw_lor());

  std::vector<double> times(n);
  std::vector<double> values(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = dt * static_cast<double>(i);
    for (const auto& th : sines) values[i] += sine_template(times[i], th);
    for (const auto& th : lors) values[i] += lorentzian_template(times[i], th);
    if (noise_on) values[i] += rng.normal(0.0, std::sqrt(c));
  }
  b.dataset = Dataset::timeseries(std::move(times), std::move(values), c);

  std::ostringstream ini;
  ini << "[run]\n"
      << "n_gen = " << n_gen << "\n"
      << "seed = " << seed << "\n"
      << "storage = indexed\n"
      << "scheduling = poisson\n\n"
      << "[target]\n"
      << "kind = timeseries\n"
      << "data = data.csv\n"
      << "noise_variance = " << fmt(c) << "\n\n"
      << "[species.sine]\n"
      << "params = log_amp, log_f, log_fdot, phase\n"
      << "bounds_log_amp = -54.5, -52.5\n"
      << "bounds_log_f = " << fmt(log_f_lo) << ", " << fmt(log_f_hi) << "\n"
      << "bounds_log_fdot = " << fmt(log_fd_lo) << ", " << fmt(log_fd_hi) << "\n"
      << "bounds_phase = 0, " << fmt(2.0 * 3.14159265358979) << "\n"
      << "prior = uniform\n"
      << "template = sine\n"
      << "birth_proposal = prior\n"
      << "mutation_proposal = gaussian\n"
      << "sigma = 0.02, 0.0005, 0.02, 0.05\n"
      << "rates = varying\n"
      << "mutation_sampler = mh\n"
      << "init_count = 0\n\n"
      << "[species.lor]\n"
      << "params = amp, width, t0\n"
      << "bounds_amp = 1e-22, 1e-20\n"
      << "bounds_width = 1e4, 2e4\n"
      << "bounds_t0 = 0, " << fmt(t_obs) << "\n"
      << "prior = uniform\n"
      << "template = lorentzian\n"
      << "birth_proposal = prior\n"
      << "mutation_proposal = gaussian\n"
      << "sigma = 4e-24, 20, 20\n"
      << "rates = varying\n"
      << "mutation_sampler = mh\n"
      << "init_count = 0\n";
  b.config_ini = ini.str();

  b.truth = {{"kind", "sine_lor"}, {"scale", scale},   {"seed", seed},
             {"noise", noise_on},  {"cadence_s", dt},  {"n_samples", n},
             {"t_obs_s", t_obs},   {"noise_variance", c}};
  auto sj = nlohmann::json::array();
  for (const auto& th : sines)
    sj.push_back({{"log_amp", th[0]}, {"log_f", th[1]}, {"log_fdot", th[2]}, {"phase", th[3]}});
  auto lj = nlohmann::json::array();
  for (const auto& th : lors)
    lj.push_back({{"amp", th[0]}, {"width", th[1]}, {"t0", th[2]}});
  b.truth["sines"] = std::move(sj);
  b.truth["lorentzians"] = std::move(lj);
  return b;
}

BenchmarkSpec gmm_benchmark(const std::string& scale, std::uint64_t seed) {
  BenchmarkSpec b;
  const bool paper = scale == "paper";
  const std::size_t n = paper ? 1000 : 250;
  const std::uint64_t n_gen = paper ? 120000ull : 40000ull;
  const std::array<double, 3> w{0.1, 0.6, 0.3};
  const std::array<double, 3> mu{2.0, 3.0, 0.0};
  const std::array<double, 3> sigma{0.05, 1.0, 0.4};

  Rng rng(seed);
  std::vector<double> pts(n);
  for (auto& x : pts) {
    const double u = rng.uniform();
    const std::size_t j = u < w[0] ? 0 : (u < w[0] + w[1] ? 1 : 2);
    x = rng.normal(mu[j], sigma[j]);
  }
  b.dataset = Dataset::samples(std::move(pts));

  std::ostringstream ini;
  ini << "[run]\n"
      << "n_gen = " << n_gen << "\n"
      << "seed = " << seed << "\n"
      << "storage = dense\n"
      << "scheduling = poisson\n\n"
      << "[target]\n"
      << "kind = gmm\n"
      << "data = data.csv\n\n"
      << "[species.mix]\n"
      << "params = weight, mean, var\n"
      << "bounds_weight = 0, 1\n"
      << "prior = gmm_conjugate\n"
      << "birth_proposal = niw_beta\n"
      << "rates = fixed_birth:1.0\n"
      << "mutation_sampler = gibbs_gmm\n"
      << "number_prior = poisson:1.0\n"
      << "init_count = 1\n";
  b.config_ini = ini.str();
  b.truth = {{"kind", "gmm"},   {"scale", scale},   {"seed", seed}, {"n_samples", n},
             {"weights", w},    {"means", mu},      {"sigmas", sigma}};
  return b;
}

}  // namespace

BenchmarkSpec generate_benchmark(const std::string& kind, const std::string& scale,
                                 std::uint64_t seed, bool noise_on) {
  if (scale != "desk" && scale != "paper")
    throw Error("benchmark scale must be desk or paper, got '" + scale + "'");
  if (kind == "analytic") return analytic_benchmark(scale, seed);
  if (kind == "sine_lor") return sine_lor_benchmark(scale, seed, noise_on);
  if (kind == "gmm") return gmm_benchmark(scale, seed);
  throw Error("unknown benchmark '" + kind + "'; expected analytic, sine_lor or gmm");
}

void write_benchmark(const BenchmarkSpec& bench, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream(out_dir / "config.ini") << bench.config_ini;
  std::ofstream(out_dir / "truth.json") << bench.truth.dump(2) << "\n";
  if (bench.dataset.kind == Dataset::Kind::Timeseries) {
    std::ofstream f(out_dir / "data.csv");
    f << "t,value\n";
    f.precision(17);
    for (std::size_t i = 0; i < bench.dataset.times.size(); ++i)
      f << bench.dataset.times[i] << "," << bench.dataset.values[i] << "\n";
  } else if (bench.dataset.kind == Dataset::Kind::Samples) {
    std::ofstream f(out_dir / "data.csv");
    f << "x\n";
    f.precision(17);
    for (double x : bench.dataset.points) f << x << "\n";
  }
}

}  // namespace samsara
