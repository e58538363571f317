#pragma once

#include <cmath>
#include <random>

#include "vorstokes/sturm_liouville.hpp"
#include "vorstokes/strip.hpp"
#include "vorstokes/vorticity.hpp"

namespace testing {

// Fixed-seed draws for property tests; every test owns its own stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// One admissible model of each kind, with random parameters.
inline vorstokes::VorticityModel random_model(Gen& gen, int kind) {
  using vorstokes::VorticityModel;
  switch (kind % 4) {
    case 0: return VorticityModel::zero();
    case 1: return VorticityModel::exp_decay(gen.uniform(-1.5, 1.5), gen.uniform(0.5, 2.0));
    case 2:
      return VorticityModel::gerstner(gen.uniform(0.1, 0.8), gen.uniform(-1.5, -0.5),
                                      gen.uniform(0.5, 1.5));
    default: {
      const double g0 = gen.uniform(-1.0, 1.0);
      return VorticityModel::tabulated({{0.0, g0}, {0.5, 0.6 * g0}, {1.0, 0.2 * g0}, {2.0, 0.0}});
    }
  }
}

// Composite Simpson on [a, b] with n (even) panels; independent of the library quadrature.
template <class F>
double simpson(F&& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// λ with ελ³ + k²λ² = g² (γ = 0 bifurcation condition), by bisection.
inline double closed_form_lambda(double eps, double g, double L) {
  const double k = M_PI / L;
  double lo = 0.0, hi = g / k;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eps * mid * mid * mid + k * k * mid * mid < g * g ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testing
