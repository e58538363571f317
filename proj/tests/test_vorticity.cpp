#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vorstokes/errors.hpp"
#include "vorstokes/vorticity.hpp"

using namespace vorstokes;
using testing::Gen;

TEST_CASE("Gamma vanishes at the surface for every kind") {
  Gen gen(11);
  for (int k = 0; k < 40; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    CHECK(m.big_gamma(0.0) == 0.0);
    CHECK(big_gamma(m, 0.0) == 0.0);
  }
}

TEST_CASE("dGamma/dp equals gamma(-p)") {
  Gen gen(12);
  for (int k = 0; k < 40; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    for (int n = 0; n < 5; ++n) {
      const double p = gen.uniform(-3.0, -0.05);
      const double h = 1e-5;
      const double fd = (m.big_gamma(p + h) - m.big_gamma(p - h)) / (2.0 * h);
      const double exact = m.gamma(-p);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("Gamma against independent Simpson quadrature") {
  Gen gen(13);
  for (int k = 1; k < 4; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    for (double p : {-0.3, -1.0, -2.5}) {
      const double ref = testing::simpson([&](double t) { return m.gamma(-t); }, 0.0, p, 4000);
      CHECK(m.big_gamma(p) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("closed forms: exp decay and Gerstner") {
  const double A = 0.7, r0 = 1.3;
  const VorticityModel e = VorticityModel::exp_decay(A, r0);
  CHECK(e.big_gamma(-2.0) == doctest::Approx(A / r0 * (std::exp(-2.0 * r0) - 1.0)));
  CHECK(e.big_gamma_limit() == doctest::Approx(-A / r0));

  // Gerstner limit: -∫γ dr over [0, ∞) by Simpson on a long interval.
  const VorticityModel g = VorticityModel::gerstner(0.5, -1.0, 1.0);
  const double ref = -testing::simpson([&](double r) { return g.gamma(r); }, 0.0, 40.0, 40000);
  CHECK(g.big_gamma_limit() == doctest::Approx(ref).epsilon(1e-10));
  CHECK(g.gamma(0.0) == doctest::Approx(-2.0 * 0.25 * std::exp(-2.0) / (1.0 - 0.25 * std::exp(-2.0))));
}

TEST_CASE("Gamma_inf <= Gamma(p) <= Gamma_sup on random depths") {
  Gen gen(14);
  for (int k = 0; k < 12; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    const VorticityFunctionals fn = functionals(m);
    CHECK(fn.gamma_inf_bound <= 0.0);
    CHECK(fn.gamma_sup_bound >= 0.0);
    for (int n = 0; n < 1000; ++n) {
      const double p = -std::exp(gen.uniform(-6.0, 3.5));
      const double G = m.big_gamma(p);
      CHECK(G >= fn.gamma_inf_bound - 1e-12);
      CHECK(G <= fn.gamma_sup_bound + 1e-12);
    }
  }
}

TEST_CASE("Gerstner vorticity is negative and increasing toward zero") {
  Gen gen(15);
  for (int k = 0; k < 20; ++k) {
    const VorticityModel m =
        VorticityModel::gerstner(gen.uniform(0.05, 0.95), gen.uniform(-2.0, -0.1), gen.uniform(0.2, 2.0));
    for (int n = 0; n < 50; ++n) {
      const double r = gen.uniform(0.0, 10.0);
      CHECK(m.gamma(r) < 0.0);
      CHECK(m.gamma_prime(r) >= 0.0);
    }
    CHECK(m.signs().nonpositive);
    CHECK(m.signs().nondecreasing);
  }
}

TEST_CASE("gamma_prime matches a centred difference") {
  Gen gen(16);
  for (int k = 1; k < 12; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    const double r = gen.uniform(0.2, 1.8);
    const double h = 1e-6;
    CHECK(m.gamma_prime(r) ==
          doctest::Approx((m.gamma(r + h) - m.gamma(r - h)) / (2.0 * h)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("tabulated model interpolates its knots and vanishes beyond the table") {
  const VorticityModel m = VorticityModel::tabulated({{0.0, -1.0}, {0.5, -0.5}, {1.0, -0.1}, {2.0, 0.0}});
  CHECK(m.gamma(0.0) == doctest::Approx(-1.0));
  CHECK(m.gamma(0.5) == doctest::Approx(-0.5));
  CHECK(m.gamma(1.0) == doctest::Approx(-0.1));
  CHECK(m.gamma(2.5) == 0.0);
  CHECK(m.gamma_prime(2.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(m.big_gamma(-5.0) == doctest::Approx(m.big_gamma_limit()));
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS(VorticityModel::exp_decay(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(VorticityModel::gerstner(1.0), DomainError);
  CHECK_THROWS_AS(VorticityModel::gerstner(0.5, 0.2), DomainError);
  CHECK_THROWS_AS(VorticityModel::tabulated({{0.0, 1.0}, {1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(VorticityModel::tabulated({{0.0, 1.0}, {1.0, 0.5}, {2.0, 0.2}, {3.0, 0.1}}),
                  DomainError);
  CHECK_THROWS_AS(VorticityModel::zero(0.0), DomainError);
  const VorticityModel m = VorticityModel::zero();
  CHECK_THROWS_AS(m.gamma(-1.0), DomainError);
  CHECK_THROWS_AS(m.big_gamma(0.5), DomainError);
}

TEST_CASE("Gamma table agrees with pointwise evaluation") {
  Gen gen(17);
  for (int k = 1; k < 4; ++k) {
    const VorticityModel m = testing::random_model(gen, k);
    std::vector<double> p{0.0};
    for (int n = 1; n < 60; ++n) p.push_back(p.back() - gen.uniform(0.01, 0.2));
    const auto t = big_gamma_table(m, p);
    for (std::size_t n = 0; n < p.size(); ++n) {
      CHECK(t[n] == doctest::Approx(m.big_gamma(p[n])).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("bifurcation condition: zero vorticity and monotonicity under scaling") {
  const auto z = check_bifurcation_condition(VorticityModel::zero(), 9.81, M_PI);
  CHECK(z.satisfied);
  CHECK(z.value == doctest::Approx(0.0).scale(1.0));
  CHECK(z.margin == doctest::Approx(9.81));

  // Scaling γ by t never turns a satisfied condition into a violated one as t decreases.
  for (double A : {-8.0, 8.0, 40.0}) {
    bool was = false;
    for (int n = 20; n >= 1; --n) {
      const double t = n / 20.0;
      const auto c = check_bifurcation_condition(VorticityModel::exp_decay(t * A, 1.0), 9.81, M_PI);
      if (was) CHECK(c.satisfied);
      was = was || c.satisfied;
    }
    CHECK(was);
  }
}
