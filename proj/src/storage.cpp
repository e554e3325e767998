#include "samsara/storage.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <set>

namespace samsara {

static_assert(std::endian::native == std::endian::little,
              "store files are little-endian; big-endian hosts need byte swaps");

std::uint64_t encode_event(const Event& e) {
  std::uint64_t code = static_cast<std::uint64_t>(e.process);
  code |= static_cast<std::uint64_t>(e.species & 0xffffu) << 8;
  code |= static_cast<std::uint64_t>(e.sweep ? 1 : 0) << 24;
  code |= static_cast<std::uint64_t>(e.idx + 1) << 32;
  return code;
}

Event decode_event(std::uint64_t code) {
  Event e;
  e.process = static_cast<Process>(code & 0xffu);
  e.species = static_cast<std::uint32_t>((code >> 8) & 0xffffu);
  e.sweep = ((code >> 24) & 1u) != 0;
  e.idx = static_cast<std::int64_t>(code >> 32) - 1;
  return e;
}

void ChainStore::for_each_society(
    std::uint64_t first, std::uint64_t stride,
    const std::function<void(std::uint64_t, const Society&)>& fn) const {
  if (stride == 0) throw Error("store: stride must be >= 1");
  for (std::uint64_t g = first; g <= n_gen(); g += stride) fn(g, society_at(g));
}

const ChainStore::GenerationMeta& ChainStore::meta_checked(std::uint64_t gen) const {
  if (gen >= meta_.size()) throw Error("store: generation out of range");
  return meta_[gen];
}

void ChainStore::check_record_order(std::uint64_t gen) const {
  if (gen != meta_.size()) throw Error("store: generations must be recorded in order");
}

std::size_t ChainStore::species_index(const std::string& name) const {
  for (std::size_t i = 0; i < species_.size(); ++i)
    if (species_[i]->name == name) return i;
  throw Error("store: unknown species '" + name + "'");
}

nlohmann::json ChainStore::manifest_base(const char* kind_name) const {
  nlohmann::json m;
  m["format"] = "samsara-store-v1";
  m["kind"] = kind_name;
  m["n_gen"] = meta_.empty() ? 0 : meta_.size() - 1;
  auto spp = nlohmann::json::array();
  for (const auto& sp : species_) {
    nlohmann::json s;
    s["name"] = sp->name;
    s["param_names"] = sp->param_names;
    switch (sp->template_kind) {
      case TemplateKind::None: s["template"] = "none"; break;
      case TemplateKind::Sine: s["template"] = "sine"; break;
      case TemplateKind::Lorentzian: s["template"] = "lorentzian"; break;
    }
    s["simplex_weight"] = sp->simplex_weight();
    spp.push_back(std::move(s));
  }
  m["species"] = std::move(spp);
  m["extra"] = extra_;
  return m;
}

namespace {

void write_bytes(const std::filesystem::path& p, const void* data, std::size_t n) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("store: cannot write " + p.string());
  f.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!f) throw Error("store: short write to " + p.string());
}

std::vector<char> read_bytes(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary | std::ios::ate);
  if (!f) throw Error("store: cannot read " + p.string());
  const auto size = f.tellg();
  f.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  f.read(buf.data(), size);
  if (!f) throw Error("store: short read from " + p.string());
  return buf;
}

template <class T>
std::vector<T> read_array(const std::filesystem::path& p) {
  auto bytes = read_bytes(p);
  if (bytes.size() % sizeof(T) != 0) throw Error("store: truncated file " + p.string());
  std::vector<T> out(bytes.size() / sizeof(T));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

SpeciesPtr species_from_manifest(const nlohmann::json& s) {
  auto spec = std::make_shared<SpeciesSpec>();
  spec->name = s.at("name").get<std::string>();
  spec->param_names = s.at("param_names").get<std::vector<std::string>>();
  spec->bounds.assign(spec->param_names.size(), Interval{});
  const auto tpl = s.value("template", std::string("none"));
  spec->template_kind = tpl == "sine"        ? TemplateKind::Sine
                        : tpl == "lorentzian" ? TemplateKind::Lorentzian
                                              : TemplateKind::None;
  if (s.value("simplex_weight", false)) spec->prior_kind = PriorKind::GmmConjugate;
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------

IndexedStore::IndexedStore(std::vector<SpeciesPtr> species) {
  species_ = std::move(species);
  rows_.resize(species_.size());
}

std::uint64_t IndexedStore::n_gen() const {
  if (meta_.empty()) throw Error("store: empty");
  return meta_.size() - 1;
}

void IndexedStore::record(std::uint64_t gen, const Event& event, const Society& society,
                          double tau, double log_target) {
  check_record_order(gen);
  const auto g = static_cast<std::int64_t>(gen);
  switch (event.process) {
    case Process::Init: {
      if (gen != 0) throw Error("store: init event after generation 0");
      for (std::size_t sp = 0; sp < species_.size(); ++sp) {
        auto& r = rows_[sp];
        for (const auto& ind : society.populations.at(sp).individuals) {
          r.alive.push_back(r.n_rows());
          r.values.insert(r.values.end(), ind.params.begin(), ind.params.end());
          r.born.push_back(g);
          r.died.push_back(-1);
        }
      }
      break;
    }
    case Process::Birth: {
      auto& r = rows_.at(event.species);
      const auto& ind = society.populations.at(event.species).individuals.back();
      r.alive.push_back(r.n_rows());
      r.values.insert(r.values.end(), ind.params.begin(), ind.params.end());
      r.born.push_back(g);
      r.died.push_back(-1);
      break;
    }
    case Process::Death: {
      auto& r = rows_.at(event.species);
      if (event.idx < 0 || static_cast<std::size_t>(event.idx) >= r.alive.size())
        throw Error("store: death of a non-alive row");
      const std::size_t row = r.alive[static_cast<std::size_t>(event.idx)];
      if (r.died[row] != -1) throw Error("store: death of a dead row");
      r.died[row] = g;
      r.alive.erase(r.alive.begin() + event.idx);
      break;
    }
    case Process::Mutation: {
      if (event.sweep)
        throw Error("store: indexed scheme cannot hold whole-population updates");
      auto& r = rows_.at(event.species);
      if (event.idx < 0 || static_cast<std::size_t>(event.idx) >= r.alive.size())
        throw Error("store: mutation of a non-alive row");
      const std::size_t row = r.alive[static_cast<std::size_t>(event.idx)];
      if (r.died[row] != -1) throw Error("store: mutation of a dead row");
      r.died[row] = g;
      const auto& ind = society.populations.at(event.species).individuals.at(
          static_cast<std::size_t>(event.idx));
      r.alive[static_cast<std::size_t>(event.idx)] = r.n_rows();
      r.values.insert(r.values.end(), ind.params.begin(), ind.params.end());
      r.born.push_back(g);
      r.died.push_back(-1);
      break;
    }
    case Process::Stay:
      break;
  }
  meta_.push_back({tau, log_target, encode_event(event)});
}

Society IndexedStore::society_at(std::uint64_t gen) const {
  if (gen >= meta_.size()) throw Error("store: generation out of range");
  const auto g = static_cast<std::int64_t>(gen);
  Society y;
  y.populations.reserve(species_.size());
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    const auto& r = rows_[sp];
    const std::size_t n_par = species_[sp]->n_par();
    Population pop{species_[sp], {}};
    for (std::size_t row = 0; row < r.n_rows(); ++row) {
      const bool alive = r.born[row] <= g && (r.died[row] == -1 || g < r.died[row]);
      if (!alive) continue;
      Individual ind;
      ind.params.assign(r.values.begin() + static_cast<std::ptrdiff_t>(row * n_par),
                        r.values.begin() + static_cast<std::ptrdiff_t>((row + 1) * n_par));
      pop.individuals.push_back(std::move(ind));
    }
    y.populations.push_back(std::move(pop));
  }
  return y;
}

void IndexedStore::for_each_society(
    std::uint64_t first, std::uint64_t stride,
    const std::function<void(std::uint64_t, const Society&)>& fn) const {
  if (stride == 0) throw Error("store: stride must be >= 1");
  if (meta_.empty()) throw Error("store: empty");
  // incremental alive sets; rows are appended in birth order
  std::vector<std::set<std::size_t>> alive(species_.size());
  std::vector<std::vector<std::pair<std::int64_t, std::size_t>>> deaths(species_.size());
  std::vector<std::size_t> next_birth(species_.size(), 0);
  std::vector<std::size_t> next_death(species_.size(), 0);
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    for (std::size_t row = 0; row < rows_[sp].n_rows(); ++row)
      if (rows_[sp].died[row] != -1) deaths[sp].push_back({rows_[sp].died[row], row});
    std::sort(deaths[sp].begin(), deaths[sp].end());
  }
  for (std::uint64_t g = 0; g <= n_gen(); ++g) {
    const auto gi = static_cast<std::int64_t>(g);
    for (std::size_t sp = 0; sp < species_.size(); ++sp) {
      auto& r = rows_[sp];
      while (next_birth[sp] < r.n_rows() && r.born[next_birth[sp]] <= gi)
        alive[sp].insert(next_birth[sp]++);
      while (next_death[sp] < deaths[sp].size() && deaths[sp][next_death[sp]].first <= gi)
        alive[sp].erase(deaths[sp][next_death[sp]++].second);
    }
    if (g < first || (g - first) % stride != 0) continue;
    Society y;
    y.populations.reserve(species_.size());
    for (std::size_t sp = 0; sp < species_.size(); ++sp) {
      const std::size_t n_par = species_[sp]->n_par();
      Population pop{species_[sp], {}};
      pop.individuals.reserve(alive[sp].size());
      for (std::size_t row : alive[sp]) {
        Individual ind;
        ind.params.assign(
            rows_[sp].values.begin() + static_cast<std::ptrdiff_t>(row * n_par),
            rows_[sp].values.begin() + static_cast<std::ptrdiff_t>((row + 1) * n_par));
        pop.individuals.push_back(std::move(ind));
      }
      y.populations.push_back(std::move(pop));
    }
    fn(g, y);
  }
}

void IndexedStore::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto manifest = manifest_base("indexed");
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  write_bytes(dir / "generations.bin", meta_.data(), meta_.size() * sizeof(GenerationMeta));
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    const auto& r = rows_[sp];
    write_bytes(dir / (species_[sp]->name + ".values.bin"), r.values.data(),
                r.values.size() * sizeof(double));
    std::vector<std::int64_t> lifetimes;
    lifetimes.reserve(2 * r.n_rows());
    for (std::size_t row = 0; row < r.n_rows(); ++row) {
      lifetimes.push_back(r.born[row]);
      lifetimes.push_back(r.died[row]);
    }
    write_bytes(dir / (species_[sp]->name + ".lifetimes.bin"), lifetimes.data(),
                lifetimes.size() * sizeof(std::int64_t));
  }
}

// ---------------------------------------------------------------------------

DenseStore::DenseStore(std::vector<SpeciesPtr> species) { species_ = std::move(species); }

std::uint64_t DenseStore::n_gen() const {
  if (meta_.empty()) throw Error("store: empty");
  return meta_.size() - 1;
}

void DenseStore::record(std::uint64_t gen, const Event& event, const Society& society, double tau,
                        double log_target) {
  check_record_order(gen);
  std::vector<std::vector<double>> snap(species_.size());
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    const auto& pop = society.populations.at(sp);
    snap[sp].reserve(pop.size() * species_[sp]->n_par());
    for (const auto& ind : pop.individuals)
      snap[sp].insert(snap[sp].end(), ind.params.begin(), ind.params.end());
  }
  snapshots_.push_back(std::move(snap));
  meta_.push_back({tau, log_target, encode_event(event)});
}

Society DenseStore::society_at(std::uint64_t gen) const {
  if (gen >= meta_.size()) throw Error("store: generation out of range");
  Society y;
  y.populations.reserve(species_.size());
  for (std::size_t sp = 0; sp < species_.size(); ++sp) {
    const std::size_t n_par = species_[sp]->n_par();
    const auto& block = snapshots_[gen][sp];
    Population pop{species_[sp], {}};
    pop.individuals.reserve(block.size() / n_par);
    for (std::size_t i = 0; i + n_par <= block.size(); i += n_par) {
      Individual ind;
      ind.params.assign(block.begin() + static_cast<std::ptrdiff_t>(i),
                        block.begin() + static_cast<std::ptrdiff_t>(i + n_par));
      pop.individuals.push_back(std::move(ind));
    }
    y.populations.push_back(std::move(pop));
  }
  return y;
}

void DenseStore::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto manifest = manifest_base("dense");
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  write_bytes(dir / "generations.bin", meta_.data(), meta_.size() * sizeof(GenerationMeta));
  std::ofstream f(dir / "dense.bin", std::ios::binary | std::ios::trunc);
  if (!f) throw Error("store: cannot write dense.bin");
  for (const auto& snap : snapshots_) {
    for (std::size_t sp = 0; sp < species_.size(); ++sp) {
      const std::uint64_t count =
          species_[sp]->n_par() == 0 ? 0 : snap[sp].size() / species_[sp]->n_par();
      f.write(reinterpret_cast<const char*>(&count), sizeof(count));
      f.write(reinterpret_cast<const char*>(snap[sp].data()),
              static_cast<std::streamsize>(snap[sp].size() * sizeof(double)));
    }
  }
  if (!f) throw Error("store: short write to dense.bin");
}

// ---------------------------------------------------------------------------

std::unique_ptr<ChainStore> make_store(StoreKind kind, std::vector<SpeciesPtr> species) {
  if (kind == StoreKind::Indexed) return std::make_unique<IndexedStore>(std::move(species));
  return std::make_unique<DenseStore>(std::move(species));
}

std::unique_ptr<ChainStore> ChainStore::load(const std::filesystem::path& dir) {
  nlohmann::json manifest;
  {
    std::ifstream f(dir / "manifest.json");
    if (!f) throw Error("store: cannot read manifest in " + dir.string());
    f >> manifest;
  }
  if (manifest.value("format", "") != std::string("samsara-store-v1"))
    throw Error("store: unknown format in " + dir.string());
  std::vector<SpeciesPtr> species;
  for (const auto& s : manifest.at("species")) species.push_back(species_from_manifest(s));

  const auto kind = manifest.at("kind").get<std::string>();
  std::unique_ptr<ChainStore> store =
      make_store(kind == "indexed" ? StoreKind::Indexed : StoreKind::Dense, species);
  store->extra_ = manifest.value("extra", nlohmann::json::object());

  auto raw = read_bytes(dir / "generations.bin");
  if (raw.size() % sizeof(GenerationMeta) != 0) throw Error("store: truncated generations.bin");
  store->meta_.resize(raw.size() / sizeof(GenerationMeta));
  std::memcpy(store->meta_.data(), raw.data(), raw.size());

  if (kind == "indexed") {
    auto* ix = static_cast<IndexedStore*>(store.get());
    for (std::size_t sp = 0; sp < species.size(); ++sp) {
      auto& r = ix->rows_[sp];
      r.values = read_array<double>(dir / (species[sp]->name + ".values.bin"));
      auto lifetimes = read_array<std::int64_t>(dir / (species[sp]->name + ".lifetimes.bin"));
      if (lifetimes.size() % 2 != 0) throw Error("store: truncated lifetimes");
      for (std::size_t i = 0; i < lifetimes.size(); i += 2) {
        r.born.push_back(lifetimes[i]);
        r.died.push_back(lifetimes[i + 1]);
      }
      const std::size_t n_par = species[sp]->n_par();
      if (r.values.size() != n_par * r.n_rows()) throw Error("store: values/lifetimes mismatch");
    }
  } else {
    auto* dn = static_cast<DenseStore*>(store.get());
    auto raw_dense = read_bytes(dir / "dense.bin");
    std::size_t off = 0;
    dn->snapshots_.resize(store->meta_.size());
    for (auto& snap : dn->snapshots_) {
      snap.resize(species.size());
      for (std::size_t sp = 0; sp < species.size(); ++sp) {
        if (off + sizeof(std::uint64_t) > raw_dense.size())
          throw Error("store: truncated dense.bin");
        std::uint64_t count;
        std::memcpy(&count, raw_dense.data() + off, sizeof(count));
        off += sizeof(count);
        const std::size_t n = static_cast<std::size_t>(count) * species[sp]->n_par();
        if (off + n * sizeof(double) > raw_dense.size())
          throw Error("store: truncated dense.bin");
        snap[sp].resize(n);
        std::memcpy(snap[sp].data(), raw_dense.data() + off, n * sizeof(double));
        off += n * sizeof(double);
      }
    }
  }
  return store;
}

std::pair<double, double> memory_estimates(double n_gen, std::span<const double> nbar,
                                           std::span<const double> n_par, double accept_rate) {
  if (nbar.size() != n_par.size()) throw Error("memory_estimates: size mismatch");
  if (n_gen < 0.0 || accept_rate < 0.0) throw Error("memory_estimates: negative input");
  double full = 0.0;
  double opt = 0.0;
  for (std::size_t i = 0; i < nbar.size(); ++i) {
    full += nbar[i] * n_par[i] * 8.0;
    opt += accept_rate * (n_par[i] + 16.0);
  }
  return {n_gen * full, n_gen * opt};
}

}  // namespace samsara
