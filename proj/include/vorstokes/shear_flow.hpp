#pragma once

#include <vector>

#include "vorstokes/vorticity.hpp"

namespace vorstokes {

/// Flat-surface shear flow: the trivial solution h_tr(p; λ) of the strip problem.
///
/// Valid iff λ + 2Γ(p) > 0 for every p <= 0, i.e. λ > -2Γ_inf; the wave speed
/// then follows from the bottom condition as c² = λ + 2Γ_∞.
class ShearFlow {
 public:
  ShearFlow(VorticityModel model, double lambda);
  ShearFlow(VorticityModel model, VorticityFunctionals fn, double lambda);

  double lambda() const noexcept { return lambda_; }
  double c() const noexcept { return c_; }
  const VorticityModel& model() const noexcept { return model_; }
  const VorticityFunctionals& functionals() const noexcept { return fn_; }

 private:
  VorticityModel model_;
  VorticityFunctionals fn_;
  double lambda_;
  double c_;
};

/// a(p; λ) = (λ + 2Γ(p))^{1/2}.
double a_coeff(const ShearFlow& flow, double p);

/// h_tr(p) = ∫_0^p a^{-1}(p'; λ) dp' - λ/(2g).
double h_trivial(const ShearFlow& flow, double p, double g);
/// h_tr'(p) = a^{-1}(p; λ).
double h_trivial_prime(const ShearFlow& flow, double p);
/// h_tr''(p) = -γ(-p) a^{-3}(p; λ).
double h_trivial_second(const ShearFlow& flow, double p);

/// h_tr at nonincreasing nodes starting at p_0 (cumulative quadrature).
std::vector<double> h_trivial_table(const ShearFlow& flow, const std::vector<double>& p, double g);

/// c = (λ + 2Γ_∞)^{1/2}.
double wave_speed(double lambda, const VorticityFunctionals& fn);

}  // namespace vorstokes
