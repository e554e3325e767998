#include <doctest.h>

#include <cmath>

#include "samsara/rates.hpp"

using namespace samsara;

namespace {

std::shared_ptr<SpeciesSpec> plain_species() {
  auto spec = std::make_shared<SpeciesSpec>();
  spec->name = "s";
  spec->param_names = {"x"};
  spec->bounds = {{0.0, 1.0}};
  return spec;
}

std::shared_ptr<SpeciesSpec> mix_species() {
  auto spec = std::make_shared<SpeciesSpec>();
  spec->name = "mix";
  spec->param_names = {"weight", "mean", "var"};
  spec->bounds = {{0.0, 1.0}, {kNegInf, kPosInf}, {0.0, kPosInf}};
  spec->prior_kind = PriorKind::GmmConjugate;
  spec->z_factor_kind = ZFactorKind::Gmm;
  spec->gmm.mu0 = 0.0;
  spec->gmm.lambda = 1.0;
  return spec;
}

// Target with a per-individual log weight and a count factor, shifted by a
// constant offset.
struct StubTarget final : Target {
  double per_individual = 0.0;
  double offset = 0.0;
  double log_density(const Society& y) const override {
    return offset + per_individual * static_cast<double>(y.populations[0].size());
  }
};

// Birth proposal with constant density.
struct StubBirth final : BirthProposal {
  double log_h = 0.0;
  Draw sample(const Population&, Rng& rng) const override {
    return {{rng.uniform()}, log_h};
  }
  double log_density(const Population&, const Params&) const override { return log_h; }
};

Society plain_state(std::size_t n) {
  Society y;
  y.populations.push_back({plain_species(), {}});
  for (std::size_t i = 0; i < n; ++i)
    y.populations[0].individuals.push_back(Individual{{0.5}});
  return y;
}

}  // namespace

TEST_CASE("z_factor values") {
  auto plain = plain_species();
  CHECK(z_factor(*plain, 0, {0.5}) == 1.0);
  CHECK(z_factor(*plain, 7, {0.5}) == 1.0);

  auto mix = mix_species();
  CHECK(z_factor(*mix, 1, {0.5, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(z_factor(*mix, 0, {0.9, 0.0, 1.0}) == 1.0);
  CHECK(z_factor(*mix, 2, {0.25, 0.0, 1.0}) ==
        doctest::Approx(1.0 / (3.0 * 0.75 * 0.75)).epsilon(1e-14));
  CHECK_THROWS_AS((void)z_factor(*mix, 2, {1.0, 0.0, 1.0}), Error);
}

TEST_CASE("fixed-birth death rates from stub densities") {
  StubTarget target;  // ratio p(x)/p(y) = exp(-per_individual)
  StubBirth birth;

  // all factors unity: ratio 1, N = 1, R_b = 1, h = 1
  target.per_individual = 0.0;
  birth.log_h = 0.0;
  auto rates1 = death_rates_fixed_birth(plain_state(1), 0,
                                        {RatePrescription::Kind::FixedBirth, 1.0}, target, birth);
  REQUIRE(rates1.size() == 1);
  CHECK(rates1[0] == doctest::Approx(1.0).epsilon(1e-14));

  // ratio 0.5, N = 2, h = 0.1: (1/2) * 0.5 * 1 * 0.1 = 0.025
  target.per_individual = std::log(2.0);
  birth.log_h = std::log(0.1);
  auto rates2 = death_rates_fixed_birth(plain_state(2), 0,
                                        {RatePrescription::Kind::FixedBirth, 1.0}, target, birth);
  REQUIRE(rates2.size() == 2);
  CHECK(rates2[0] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(rates2[1] == doctest::Approx(0.025).epsilon(1e-12));

  // removal candidate outside the proposal support has rate zero
  birth.log_h = kNegInf;
  auto rates3 = death_rates_fixed_birth(plain_state(1), 0,
                                        {RatePrescription::Kind::FixedBirth, 1.0}, target, birth);
  CHECK(rates3[0] == 0.0);
}

TEST_CASE("rate computations are invariant under constant log-target shifts") {
  StubTarget target;
  target.per_individual = -0.7;
  StubBirth birth;
  birth.log_h = std::log(0.3);
  auto base = death_rates_fixed_birth(plain_state(3), 0,
                                      {RatePrescription::Kind::FixedBirth, 2.0}, target, birth);
  target.offset = 1234.5;
  auto shifted = death_rates_fixed_birth(plain_state(3), 0,
                                         {RatePrescription::Kind::FixedBirth, 2.0}, target, birth);
  for (std::size_t j = 0; j < base.size(); ++j)
    CHECK(shifted[j] == doctest::Approx(base[j]).epsilon(1e-10));
}

TEST_CASE("varying rates clamp and reciprocate") {
  StubTarget target;
  StubBirth birth;

  // uphill birth clamps at exactly 1
  target.per_individual = 5.0;
  birth.log_h = 0.0;
  auto [b1, d1] = varying_rates(plain_state(1), 0, {0.5}, 0.0, target, birth);
  CHECK(b1 == 1.0);

  // the death rates of the same stub are the exact reciprocals before the clamp
  target.per_individual = std::log(10.0);  // ratio p(x)/p(y) = 0.1 per removal
  auto [b2, d2] = varying_rates(plain_state(2), 0, {0.5}, 0.0, target, birth);
  // death argument: (1/2) * 0.1 * 1 = 0.05
  CHECK(d2[0] == doctest::Approx(0.05).epsilon(1e-12));
  // birth argument: 3 * 10 = 30 -> clamped
  CHECK(b2 == 1.0);

  // downhill birth stays unclamped: ratio e^-3 per individual
  target.per_individual = -3.0;
  auto [b3, d3] = varying_rates(plain_state(2), 0, {0.5}, 0.0, target, birth);
  CHECK(b3 == doctest::Approx(3.0 * std::exp(-3.0)).epsilon(1e-12));
  for (double r : d3) CHECK(r == 1.0);  // uphill deaths clamp

  // empty population: no deaths, birth well defined
  auto [b4, d4] = varying_rates(plain_state(0), 0, {0.5}, 0.0, target, birth);
  CHECK(d4.empty());
  CHECK(b4 == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));

  // a proposal that cannot regenerate its own draw is an error
  CHECK_THROWS_AS((void)varying_rates(plain_state(1), 0, {0.5}, kNegInf, target, birth), Error);
}

TEST_CASE("mutation acceptance") {
  CHECK(mutation_acceptance(-10.0, -10.0, 0.0, 0.0) == 1.0);
  CHECK(mutation_acceptance(-10.0, kNegInf, 0.0, 0.0) == 0.0);
  CHECK(mutation_acceptance(-10.0, -11.0, 0.0, 0.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(mutation_acceptance(-10.0, -9.0, 0.0, 0.0) == 1.0);
  // asymmetric proposal enters through the q ratio
  CHECK(mutation_acceptance(-10.0, -10.0, std::log(2.0), 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)mutation_acceptance(kNegInf, -1.0, 0.0, 0.0), Error);
}

TEST_CASE("mutation rate split") {
  auto [m1, s1] = split_mutation_rates(1.0, 1.0);
  CHECK(m1 == 1.0);
  CHECK(s1 == 0.0);
  auto [m2, s2] = split_mutation_rates(0.0, 1.0);
  CHECK(m2 == 0.0);
  CHECK(s2 == 1.0);
  auto [m3, s3] = split_mutation_rates(0.25, 1.0);
  CHECK(m3 == doctest::Approx(0.25));
  CHECK(s3 == doctest::Approx(0.75));
  CHECK(m3 + s3 == doctest::Approx(1.0));
}

// Balance identity on random fixtures: for states related by one birth the
// clamped arguments are exact reciprocals, so
// p(y) R_b(y->z) h(theta'|y) == (N+1) / Z p(z) R_d(z->y) with the mixture
// measure factor Z.
TEST_CASE("birth/death balance identity on random mixture fixtures") {
  auto spec = mix_species();
  GmmTarget* raw = nullptr;
  Rng rng(2718);
  std::vector<double> pts(12);
  for (auto& x : pts) x = rng.normal(0.3, 1.2);
  GmmTarget target(spec, Dataset::samples(pts));
  raw = &target;
  NiwBetaBirth birth(spec);

  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t k = 1 + rng.uniform_int(4);
    Society y;
    Population pop{spec, {}};
    std::vector<double> conc(k, 1.0);
    std::vector<double> w(k);
    rng.dirichlet(conc, w);
    for (std::size_t j = 0; j < k; ++j)
      pop.individuals.push_back(Individual{{w[j], rng.normal(0.3, 1.0), rng.uniform(0.3, 2.0)}});
    y.populations.push_back(pop);

    auto draw = birth.sample(y.populations[0], rng);
    const Society z = birth_move(y, 0, draw.theta);
    const double lp_y = raw->log_density(y);
    const double lp_z = raw->log_density(z);
    REQUIRE(lp_y > kNegInf);
    REQUIRE(lp_z > kNegInf);

    // unclamped arguments are reciprocal: log_birth_arg + log_death_arg == 0
    const double log_zm = log_birth_measure_factor(*spec, k, draw.theta);
    const double log_birth_arg = std::log(static_cast<double>(k) + 1.0) - log_zm +
                                 (lp_z - lp_y) - draw.log_h;
    const Society x = death_move(z, 0, k);  // remove the newborn (appended last)
    const double log_h_rev = birth.log_density(x.populations[0], draw.theta);
    const double log_death_arg = log_zm - std::log(static_cast<double>(k) + 1.0) +
                                 (lp_y - lp_z) + log_h_rev;
    CHECK(log_birth_arg + log_death_arg == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(log_h_rev == doctest::Approx(draw.log_h).epsilon(1e-10));

    // flux form, through the production rate functions (fixed prescription)
    auto deaths = death_rates_fixed_birth(z, 0, {RatePrescription::Kind::FixedBirth, 1.0},
                                          target, birth);
    const double lhs = std::exp(lp_y) * 1.0 * std::exp(draw.log_h);
    const double rhs = (static_cast<double>(k) + 1.0) / std::exp(-log_zm) * std::exp(lp_z) *
                       deaths.back();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("plain-species balance identity uses unit measure factor") {
  StubTarget target;
  target.per_individual = -0.4;
  StubBirth birth;
  birth.log_h = std::log(0.7);
  Rng rng(31);
  for (std::size_t n : {0u, 1u, 3u}) {
    auto y = plain_state(n);
    auto [b, d] = varying_rates(y, 0, {0.5}, birth.log_h, target, birth);
    const Society z = birth_move(y, 0, {0.5});
    auto [bz, dz] = varying_rates(z, 0, {0.5}, birth.log_h, target, birth);
    // R_b(y) and R_d(z, new) multiply to the unclamped ratio product = 1
    const double arg_b = (static_cast<double>(n) + 1.0) * std::exp(target.per_individual) / 0.7;
    const double arg_d = 1.0 / arg_b;
    CHECK(b == doctest::Approx(std::min(1.0, arg_b)).epsilon(1e-12));
    CHECK(dz.back() == doctest::Approx(std::min(1.0, arg_d)).epsilon(1e-12));
  }
}
