#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "samsara/rng.hpp"

using namespace samsara;

TEST_CASE("rng streams are reproducible") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(a.gamma(1.7) == b.gamma(1.7));
  }
}

TEST_CASE("distribution moments") {
  Rng rng(7);
  const int n = 200000;
  double su = 0.0, su2 = 0.0, sn = 0.0, sn2 = 0.0, sg = 0.0, sb = 0.0, sp = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sg += rng.gamma(2.5);
    sb += rng.beta(2.0, 3.0);
    sp += static_cast<double>(rng.poisson(4.0));
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(sn / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sg / n == doctest::Approx(2.5).epsilon(0.02));
  CHECK(sb / n == doctest::Approx(0.4).epsilon(0.02));
  CHECK(sp / n == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("categorical respects weights and rejects degenerate input") {
  Rng rng(3);
  std::vector<double> w{0.0, 2.0, 0.0, 6.0};
  std::size_t hits1 = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.categorical(w, 8.0);
    CHECK((k == 1 || k == 3));
    hits1 += k == 1 ? 1 : 0;
  }
  CHECK(static_cast<double>(hits1) / n == doctest::Approx(0.25).epsilon(0.05));
  CHECK_THROWS_AS((void)rng.categorical(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST_CASE("dirichlet draws live on the simplex") {
  Rng rng(9);
  std::vector<double> conc{0.5, 1.0, 2.0};
  std::vector<double> w(3);
  for (int i = 0; i < 200; ++i) {
    rng.dirichlet(conc, w);
    double sum = 0.0;
    for (double x : w) {
      CHECK(x > 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}
