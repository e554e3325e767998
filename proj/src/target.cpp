#include "samsara/target.hpp"

#include <cmath>
#include <cstring>

namespace samsara {

Dataset Dataset::timeseries(std::vector<double> t, std::vector<double> v, double c) {
  Dataset d;
  d.kind = Kind::Timeseries;
  d.times = std::move(t);
  d.values = std::move(v);
  d.noise_variance = c;
  d.validate();
  return d;
}

Dataset Dataset::samples(std::vector<double> pts) {
  Dataset d;
  d.kind = Kind::Samples;
  d.points = std::move(pts);
  d.validate();
  return d;
}

double Dataset::cadence() const {
  if (kind != Kind::Timeseries || times.size() < 2)
    throw Error("dataset: cadence undefined");
  return times[1] - times[0];
}

void Dataset::validate() const {
  switch (kind) {
    case Kind::None:
      return;
    case Kind::Timeseries: {
      if (times.size() != values.size()) throw Error("timeseries: times/values size mismatch");
      if (times.size() < 2) throw Error("timeseries: need at least two samples");
      if (!(noise_variance > 0.0)) throw Error("timeseries: noise variance must be > 0");
      const double dt = times[1] - times[0];
      if (!(dt > 0.0)) throw Error("timeseries: times must be strictly increasing");
      for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (!(step > 0.0)) throw Error("timeseries: times must be strictly increasing");
        if (std::abs(step - dt) > 1e-6 * dt) throw Error("timeseries: cadence must be uniform");
      }
      return;
    }
    case Kind::Samples:
      if (points.empty()) throw Error("samples: need at least one datum");
      return;
  }
}

AnalyticTargetConfig AnalyticTargetConfig::reference(double nbar) {
  AnalyticTargetConfig cfg;
  cfg.nbar = nbar;
  cfg.weights = {8.0 / 18.0, 4.0 / 18.0, 6.0 / 18.0};
  cfg.means = {{{-3.0, 0.0}, {-1.5, -3.0}, {0.0, 1.0}}};
  cfg.covs = {{{0.2, 0.0, 0.2}, {1.3, 0.0, 0.01}, {1.0, 0.5, 1.0}}};
  return cfg;
}

void AnalyticTargetConfig::validate() const {
  if (!(nbar > 0.0)) throw Error("analytic target: nbar must be > 0");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw Error("analytic target: weights must be > 0");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw Error("analytic target: weights must sum to 1");
  for (const auto& c : covs) {
    const double det = c[0] * c[2] - c[1] * c[1];
    if (!(c[0] > 0.0) || !(det > 0.0))
      throw Error("analytic target: covariances must be positive definite");
  }
}

double AnalyticTargetConfig::log_mixture_density(double t1, double t2) const {
  std::array<double, 3> terms{};
  for (std::size_t j = 0; j < 3; ++j) {
    const double dx = t1 - means[j][0];
    const double dy = t2 - means[j][1];
    const double a = covs[j][0];
    const double b = covs[j][1];
    const double c = covs[j][2];
    const double det = a * c - b * b;
    const double quad = (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
    terms[j] = std::log(weights[j]) - kLogTwoPi - 0.5 * std::log(det) - 0.5 * quad;
  }
  return log_sum_exp(terms);
}

double sine_template(double t, std::span<const double> theta) {
  const double amp = std::exp(theta[0]);
  const double f = std::exp(theta[1]);
  const double fdot = std::exp(theta[2]);
  const double phase = theta[3];
  constexpr double pi = 3.14159265358979323846;
  return amp * std::cos(2.0 * pi * f * t + pi * fdot * t * t + phase);
}

double lorentzian_template(double t, std::span<const double> theta) {
  const double amp = theta[0];
  const double width = theta[1];
  const double t0 = theta[2];
  if (!(width > 0.0)) throw Error("lorentzian template: width must be > 0");
  const double u = (t - t0) / width;
  return amp / (1.0 + u * u);
}

double species_template(TemplateKind kind, double t, std::span<const double> theta) {
  switch (kind) {
    case TemplateKind::Sine:
      return sine_template(t, theta);
    case TemplateKind::Lorentzian:
      return lorentzian_template(t, theta);
    case TemplateKind::None:
      break;
  }
  throw Error("species has no signal template");
}

double timeseries_log_likelihood(const Society& y, const Dataset& data) {
  if (data.kind != Dataset::Kind::Timeseries)
    throw Error("timeseries likelihood: dataset kind mismatch");
  const std::size_t n = data.times.size();
  const double c = data.noise_variance;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double h = 0.0;
    for (const auto& pop : y.populations) {
      const TemplateKind kind = pop.species->template_kind;
      if (kind == TemplateKind::None && pop.size() > 0)
        throw Error("timeseries likelihood: species '" + pop.species->name + "' has no template");
      for (const auto& ind : pop.individuals) h += species_template(kind, data.times[i], ind.params);
    }
    const double r = data.values[i] - h;
    chi2 += r * r;
  }
  return -0.5 * (chi2 / c + static_cast<double>(n) * std::log(2.0 * 3.14159265358979323846 * c));
}

double gmm_log_likelihood(const Society& y, const Dataset& data) {
  if (data.kind != Dataset::Kind::Samples) throw Error("gmm likelihood: dataset kind mismatch");
  if (y.n_species() != 1) throw Error("gmm likelihood: expects a single mixture species");
  const auto& pop = y.populations[0];
  const std::size_t k = pop.size();
  if (k == 0) return kNegInf;
  double wsum = 0.0;
  for (const auto& ind : pop.individuals) {
    wsum += ind.params[0];
    if (!(ind.params[2] > 0.0)) return kNegInf;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw Error("gmm likelihood: weights are off the simplex");
  double ll = 0.0;
  for (double x : data.points) {
    double mix = 0.0;
    for (const auto& ind : pop.individuals) {
      const double w = ind.params[0];
      const double mu = ind.params[1];
      const double var = ind.params[2];
      const double z = (x - mu) * (x - mu) / var;
      mix += w * std::exp(-0.5 * z) / std::sqrt(2.0 * 3.14159265358979323846 * var);
    }
    if (!(mix > 0.0)) return kNegInf;
    ll += std::log(mix);
  }
  return ll;
}

double analytic_log_density(const Society& y, const AnalyticTargetConfig& cfg) {
  if (y.n_species() != 1) throw Error("analytic density: expects a single species");
  const auto& pop = y.populations[0];
  double lp = log_poisson_pmf(pop.size(), cfg.nbar);
  for (const auto& ind : pop.individuals) {
    if (ind.params.size() != 2) throw Error("analytic density: individuals must be 2-D");
    lp += cfg.log_mixture_density(ind.params[0], ind.params[1]);
  }
  return lp;
}

// ---------------------------------------------------------------------------

std::unique_ptr<TargetState> Target::make_state(Society y) const {
  return std::make_unique<RecomputeState>(*this, std::move(y));
}

RecomputeState::RecomputeState(const Target& target, Society y)
    : target_(target), society_(std::move(y)), current_(target_.log_density(society_)) {}

double RecomputeState::with_birth(std::size_t sp, const Params& theta) {
  return target_.log_density(birth_move(society_, sp, theta));
}
double RecomputeState::with_death(std::size_t sp, std::size_t idx) {
  return target_.log_density(death_move(society_, sp, idx));
}
double RecomputeState::with_mutation(std::size_t sp, std::size_t idx, const Params& theta) {
  return target_.log_density(clone_with_mutation(society_, sp, idx, theta));
}
void RecomputeState::commit_birth(std::size_t sp, const Params& theta) {
  society_ = birth_move(society_, sp, theta);
  current_ = target_.log_density(society_);
}
void RecomputeState::commit_death(std::size_t sp, std::size_t idx) {
  society_ = death_move(society_, sp, idx);
  current_ = target_.log_density(society_);
}
void RecomputeState::commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) {
  society_ = clone_with_mutation(society_, sp, idx, theta);
  current_ = target_.log_density(society_);
}
void RecomputeState::rebind(Society y) {
  society_ = std::move(y);
  current_ = target_.log_density(society_);
}

// ---------------------------------------------------------------------------

AnalyticTarget::AnalyticTarget(SpeciesPtr species, AnalyticTargetConfig cfg)
    : species_(std::move(species)), cfg_(cfg) {
  cfg_.validate();
  if (species_->n_par() != 2) throw Error("analytic target: species must be 2-D");
}

double AnalyticTarget::log_density(const Society& y) const {
  if (y.n_species() != 1) throw Error("analytic target: expects a single species");
  const auto& pop = y.populations[0];
  for (const auto& ind : pop.individuals)
    if (!in_support(*species_, ind.params)) return kNegInf;
  return analytic_log_density(y, cfg_);
}

namespace {

// Per-individual mixture terms cached; birth/death/mutation queries are O(1).
class AnalyticState final : public TargetState {
 public:
  AnalyticState(const AnalyticTarget& target, const SpeciesSpec& spec,
                const AnalyticTargetConfig& cfg, Society y)
      : target_(target), spec_(spec), cfg_(cfg), society_(std::move(y)) {
    rebuild();
  }

  const Society& society() const override { return society_; }
  double current() const override { return current_; }

  double with_birth(std::size_t, const Params& theta) override {
    if (!in_support(spec_, theta)) return kNegInf;
    const double l = cfg_.log_mixture_density(theta[0], theta[1]);
    return log_poisson_pmf(terms_.size() + 1, cfg_.nbar) + sum_ + l;
  }
  double with_death(std::size_t, std::size_t idx) override {
    return log_poisson_pmf(terms_.size() - 1, cfg_.nbar) + sum_ - terms_.at(idx);
  }
  double with_mutation(std::size_t, std::size_t idx, const Params& theta) override {
    if (!in_support(spec_, theta)) return kNegInf;
    const double l = cfg_.log_mixture_density(theta[0], theta[1]);
    return log_poisson_pmf(terms_.size(), cfg_.nbar) + sum_ - terms_.at(idx) + l;
  }

  void commit_birth(std::size_t sp, const Params& theta) override {
    society_ = birth_move(society_, sp, theta);
    terms_.push_back(cfg_.log_mixture_density(theta[0], theta[1]));
    sum_ += terms_.back();
    refresh();
  }
  void commit_death(std::size_t sp, std::size_t idx) override {
    society_ = death_move(society_, sp, idx);
    sum_ -= terms_.at(idx);
    terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(idx));
    refresh();
  }
  void commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) override {
    society_ = clone_with_mutation(society_, sp, idx, theta);
    const double l = cfg_.log_mixture_density(theta[0], theta[1]);
    sum_ += l - terms_.at(idx);
    terms_[idx] = l;
    refresh();
  }
  void rebind(Society y) override {
    society_ = std::move(y);
    rebuild();
  }

 private:
  void refresh() {
    if (++commits_ % 16384 == 0) {
      rebuild();
    } else {
      current_ = log_poisson_pmf(terms_.size(), cfg_.nbar) + sum_;
      for (const auto& ind : society_.populations[0].individuals)
        if (!in_support(spec_, ind.params)) current_ = kNegInf;
    }
  }
  void rebuild() {
    const auto& pop = society_.populations.at(0);
    terms_.clear();
    sum_ = 0.0;
    bool ok = true;
    for (const auto& ind : pop.individuals) {
      ok = ok && in_support(spec_, ind.params);
      terms_.push_back(cfg_.log_mixture_density(ind.params[0], ind.params[1]));
      sum_ += terms_.back();
    }
    current_ = ok ? log_poisson_pmf(terms_.size(), cfg_.nbar) + sum_ : kNegInf;
  }

  const AnalyticTarget& target_;
  const SpeciesSpec& spec_;
  const AnalyticTargetConfig& cfg_;
  Society society_;
  std::vector<double> terms_;
  double sum_ = 0.0;
  double current_ = kNegInf;
  std::uint64_t commits_ = 0;
};

}  // namespace

std::unique_ptr<TargetState> AnalyticTarget::make_state(Society y) const {
  return std::make_unique<AnalyticState>(*this, *species_, cfg_, std::move(y));
}

// ---------------------------------------------------------------------------

TimeseriesTarget::TimeseriesTarget(std::vector<SpeciesPtr> species, Dataset data)
    : species_(std::move(species)), data_(std::move(data)) {
  if (data_.kind != Dataset::Kind::Timeseries)
    throw Error("timeseries target: dataset kind mismatch");
  for (const auto& sp : species_) {
    if (sp->template_kind == TemplateKind::None)
      throw Error("timeseries target: species '" + sp->name + "' has no template");
    if (sp->prior_kind != PriorKind::UniformBox)
      throw Error("timeseries target: species '" + sp->name + "' must use a uniform box prior");
  }
}

double TimeseriesTarget::log_density(const Society& y) const {
  const double lp = log_prior(y);
  if (lp == kNegInf) return kNegInf;
  return lp + timeseries_log_likelihood(y, data_);
}

namespace {

class TimeseriesState final : public TargetState {
 public:
  TimeseriesState(const TimeseriesTarget& target, const Dataset& data, Society y)
      : target_(target), data_(data), society_(std::move(y)) {
    rebuild();
  }

  const Society& society() const override { return society_; }
  double current() const override { return current_; }

  double with_birth(std::size_t sp, const Params& theta) override {
    const auto& spec = *society_.populations[sp].species;
    if (!in_support(spec, theta)) return kNegInf;
    const double lp = log_prior_ + individual_log_prior(spec, theta) + number_delta(sp, +1);
    if (lp == kNegInf) return kNegInf;
    fill_candidate(sp, theta);
    const double chi2 = chi2_ - 2.0 * dot(residual_, cand_tpl_) + dot(cand_tpl_, cand_tpl_);
    return lp + loglik_from(chi2);
  }

  double with_death(std::size_t sp, std::size_t idx) override {
    const auto& spec = *society_.populations[sp].species;
    const auto& theta = society_.populations[sp].individuals.at(idx).params;
    const double lp = log_prior_ - individual_log_prior(spec, theta) + number_delta(sp, -1);
    const auto& s = templates_[sp][idx];
    const double chi2 = chi2_ + 2.0 * dot(residual_, s) + dot(s, s);
    return lp + loglik_from(chi2);
  }

  double with_mutation(std::size_t sp, std::size_t idx, const Params& theta) override {
    const auto& spec = *society_.populations[sp].species;
    if (!in_support(spec, theta)) return kNegInf;
    const auto& old = society_.populations[sp].individuals.at(idx).params;
    const double lp =
        log_prior_ + individual_log_prior(spec, theta) - individual_log_prior(spec, old);
    if (lp == kNegInf) return kNegInf;
    fill_candidate(sp, theta);
    const auto& s_old = templates_[sp][idx];
    double chi2 = chi2_ + 2.0 * dot(residual_, s_old) + dot(s_old, s_old);
    chi2 += -2.0 * (dot(residual_, cand_tpl_) + dot(s_old, cand_tpl_)) + dot(cand_tpl_, cand_tpl_);
    return lp + loglik_from(chi2);
  }

  void commit_birth(std::size_t sp, const Params& theta) override {
    fill_candidate(sp, theta);
    society_ = birth_move(society_, sp, theta);
    templates_[sp].push_back(cand_tpl_);
    subtract_from_residual(cand_tpl_);
    after_commit();
  }
  void commit_death(std::size_t sp, std::size_t idx) override {
    add_to_residual(templates_[sp][idx]);
    society_ = death_move(society_, sp, idx);
    templates_[sp].erase(templates_[sp].begin() + static_cast<std::ptrdiff_t>(idx));
    after_commit();
  }
  void commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) override {
    fill_candidate(sp, theta);
    add_to_residual(templates_[sp][idx]);
    society_ = clone_with_mutation(society_, sp, idx, theta);
    templates_[sp][idx] = cand_tpl_;
    subtract_from_residual(cand_tpl_);
    after_commit();
  }
  void rebind(Society y) override {
    society_ = std::move(y);
    rebuild();
  }

 private:
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  double number_delta(std::size_t sp, int dn) const {
    const auto& np = society_.populations[sp].species->number_prior;
    const std::size_t n = society_.populations[sp].size();
    const std::size_t n_new =
        dn >= 0 ? n + static_cast<std::size_t>(dn) : n - static_cast<std::size_t>(-dn);
    return np.log_at(n_new) - np.log_at(n);
  }

  double loglik_from(double chi2) const {
    const double c = data_.noise_variance;
    const double n = static_cast<double>(data_.times.size());
    return -0.5 * (chi2 / c + n * std::log(2.0 * 3.14159265358979323846 * c));
  }

  void fill_candidate(std::size_t sp, const Params& theta) {
    if (cand_valid_ && cand_sp_ == sp && cand_params_ == theta) return;
    const TemplateKind kind = society_.populations[sp].species->template_kind;
    cand_tpl_.resize(data_.times.size());
    for (std::size_t i = 0; i < data_.times.size(); ++i)
      cand_tpl_[i] = species_template(kind, data_.times[i], theta);
    cand_sp_ = sp;
    cand_params_ = theta;
    cand_valid_ = true;
  }

  void add_to_residual(const std::vector<double>& s) {
    for (std::size_t i = 0; i < residual_.size(); ++i) residual_[i] += s[i];
  }
  void subtract_from_residual(const std::vector<double>& s) {
    for (std::size_t i = 0; i < residual_.size(); ++i) residual_[i] -= s[i];
  }

  void after_commit() {
    cand_valid_ = false;
    if (++commits_ % 4096 == 0) {
      rebuild();
      return;
    }
    log_prior_ = log_prior(society_);
    chi2_ = dot(residual_, residual_);
    current_ = log_prior_ == kNegInf ? kNegInf : log_prior_ + loglik_from(chi2_);
  }

  void rebuild() {
    const std::size_t n = data_.times.size();
    templates_.assign(society_.n_species(), {});
    residual_ = data_.values;
    for (std::size_t sp = 0; sp < society_.n_species(); ++sp) {
      const auto& pop = society_.populations[sp];
      templates_[sp].reserve(pop.size());
      for (const auto& ind : pop.individuals) {
        std::vector<double> tpl(n);
        for (std::size_t i = 0; i < n; ++i)
          tpl[i] = species_template(pop.species->template_kind, data_.times[i], ind.params);
        for (std::size_t i = 0; i < n; ++i) residual_[i] -= tpl[i];
        templates_[sp].push_back(std::move(tpl));
      }
    }
    cand_valid_ = false;
    log_prior_ = log_prior(society_);
    chi2_ = dot(residual_, residual_);
    current_ = log_prior_ == kNegInf ? kNegInf : log_prior_ + loglik_from(chi2_);
  }

  const TimeseriesTarget& target_;
  const Dataset& data_;
  Society society_;
  std::vector<std::vector<std::vector<double>>> templates_;  // [species][individual][sample]
  std::vector<double> residual_;                             // data minus summed signal
  std::vector<double> cand_tpl_;
  Params cand_params_;
  std::size_t cand_sp_ = 0;
  bool cand_valid_ = false;
  double log_prior_ = kNegInf;
  double chi2_ = 0.0;
  double current_ = kNegInf;
  std::uint64_t commits_ = 0;
};

}  // namespace

std::unique_ptr<TargetState> TimeseriesTarget::make_state(Society y) const {
  return std::make_unique<TimeseriesState>(*this, data_, std::move(y));
}

// ---------------------------------------------------------------------------

GmmTarget::GmmTarget(SpeciesPtr species, Dataset data)
    : species_(std::move(species)), data_(std::move(data)) {
  if (data_.kind != Dataset::Kind::Samples) throw Error("gmm target: dataset kind mismatch");
  if (species_->prior_kind != PriorKind::GmmConjugate)
    throw Error("gmm target: species must use the conjugate mixture prior");
}

double GmmTarget::log_density(const Society& y) const {
  const double lp = log_prior(y);
  if (lp == kNegInf) return kNegInf;
  return lp + gmm_log_likelihood(y, data_);
}

namespace {

class GmmState final : public TargetState {
 public:
  GmmState(const GmmTarget& target, const Dataset& data, Society y)
      : target_(target), data_(data), society_(std::move(y)) {
    rebuild();
  }

  const Society& society() const override { return society_; }
  double current() const override { return current_; }

  double with_birth(std::size_t sp, const Params& theta) override {
    const Society z = birth_move(society_, sp, theta);
    const double lp = log_prior(z);
    if (lp == kNegInf) return kNegInf;
    const std::size_t k = columns_.size();
    std::vector<double> col = component_column(theta);
    if (k == 0) {
      double ll = 0.0;
      for (double d : col) {
        if (!(d > 0.0)) return kNegInf;
        ll += std::log(d);
      }
      return lp + ll;
    }
    const double w_new = theta[0];
    double ll = 0.0;
    for (std::size_t i = 0; i < mix_.size(); ++i) {
      const double m = (1.0 - w_new) * mix_[i] + w_new * col[i];
      if (!(m > 0.0)) return kNegInf;
      ll += std::log(m);
    }
    return lp + ll;
  }

  double with_death(std::size_t sp, std::size_t idx) override {
    if (columns_.size() <= 1) return kNegInf;  // empty mixture has zero likelihood
    const Society x = death_move(society_, sp, idx);
    const double lp = log_prior(x);
    if (lp == kNegInf) return kNegInf;
    const double scale = 1.0 / (1.0 - weights_[idx]);
    double ll = 0.0;
    for (std::size_t i = 0; i < mix_.size(); ++i) {
      double m = 0.0;
      for (std::size_t j = 0; j < columns_.size(); ++j)
        if (j != idx) m += weights_[j] * columns_[j][i];
      m *= scale;
      if (!(m > 0.0)) return kNegInf;
      ll += std::log(m);
    }
    return lp + ll;
  }

  double with_mutation(std::size_t sp, std::size_t idx, const Params& theta) override {
    const Society v = clone_with_mutation(society_, sp, idx, theta);
    const double lp = log_prior(v);
    if (lp == kNegInf) return kNegInf;
    std::vector<double> col = component_column(theta);
    double ll = 0.0;
    for (std::size_t i = 0; i < mix_.size(); ++i) {
      double m = theta[0] * col[i];
      for (std::size_t j = 0; j < columns_.size(); ++j)
        if (j != idx) m += weights_[j] * columns_[j][i];
      if (!(m > 0.0)) return kNegInf;
      ll += std::log(m);
    }
    return lp + ll;
  }

  void commit_birth(std::size_t sp, const Params& theta) override {
    society_ = birth_move(society_, sp, theta);
    rebuild_from_society();
  }
  void commit_death(std::size_t sp, std::size_t idx) override {
    society_ = death_move(society_, sp, idx);
    rebuild_from_society();
  }
  void commit_mutation(std::size_t sp, std::size_t idx, const Params& theta) override {
    society_ = clone_with_mutation(society_, sp, idx, theta);
    rebuild_from_society();
  }
  void rebind(Society y) override {
    society_ = std::move(y);
    rebuild();
  }

 private:
  std::vector<double> component_column(const Params& theta) const {
    const double mu = theta[1];
    const double var = theta[2];
    std::vector<double> col(data_.points.size(), 0.0);
    if (!(var > 0.0)) return col;
    const double norm = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * var);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double d = data_.points[i] - mu;
      col[i] = norm * std::exp(-0.5 * d * d / var);
    }
    return col;
  }

  void rebuild_from_society() { rebuild(); }

  void rebuild() {
    const auto& pop = society_.populations.at(0);
    const std::size_t k = pop.size();
    columns_.clear();
    weights_.clear();
    for (const auto& ind : pop.individuals) {
      weights_.push_back(ind.params[0]);
      columns_.push_back(component_column(ind.params));
    }
    mix_.assign(data_.points.size(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < mix_.size(); ++i) mix_[i] += weights_[j] * columns_[j][i];
    const double lp = log_prior(society_);
    if (lp == kNegInf || k == 0) {
      current_ = kNegInf;
      return;
    }
    double ll = 0.0;
    for (double m : mix_) {
      if (!(m > 0.0)) {
        current_ = kNegInf;
        return;
      }
      ll += std::log(m);
    }
    current_ = lp + ll;
  }

  const GmmTarget& target_;
  const Dataset& data_;
  Society society_;
  std::vector<std::vector<double>> columns_;  // per component, density at each datum
  std::vector<double> weights_;
  std::vector<double> mix_;
  double current_ = kNegInf;
};

}  // namespace

std::unique_ptr<TargetState> GmmTarget::make_state(Society y) const {
  return std::make_unique<GmmState>(*this, data_, std::move(y));
}

}  // namespace samsara
