#include "vorstokes/shear_flow.hpp"

#include <cmath>
#include <string>

#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vorstokes/errors.hpp"

namespace vorstokes {

namespace {

double integrate_inverse_a(const ShearFlow& flow, double p_hi, double p_lo) {
  // ∫_{p_lo}^{p_hi} a^{-1}, split into unit pieces and at the knots of a table,
  // where a is only C².
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&flow](double p) { return 1.0 / a_coeff(flow, p); };
  std::vector<double> breaks;
  if (flow.model().kind() == VorticityKind::Tabulated) {
    for (const auto& k : flow.model().knots()) {
      if (-k.first < p_hi && -k.first > p_lo) breaks.push_back(-k.first);
    }
  }
  double sum = 0.0;
  double top = p_hi;
  while (top > p_lo) {
    double bottom = std::max(p_lo, top - 1.0);
    for (double b : breaks) {
      if (b < top && b > bottom) bottom = b;
    }
    double err = 0.0;
    sum += gauss_kronrod<double, 31>::integrate(f, bottom, top, 15, 1e-12, &err);
    if (!(err <= 1e-10 * std::max(1.0, std::abs(sum)))) {
      throw NumericError("h_trivial: quadrature did not converge", err);
    }
    top = bottom;
  }
  return sum;
}

// Closed form of ∫_0^p (α + β e^{k p'})^{-1/2} dp' with α = c² > 0, β = 2A/k.
double exp_decay_integral(const ShearFlow& flow, double p) {
  const auto& m = flow.model();
  double k = m.rate();
  double alpha = flow.c() * flow.c();
  double sa = std::sqrt(alpha);
  double s0 = std::sqrt(flow.lambda());
  double sp = a_coeff(flow, p);
  return p / sa + 2.0 / (k * sa) * std::log((s0 + sa) / (sp + sa));
}

}  // namespace

ShearFlow::ShearFlow(VorticityModel model, double lambda)
    : ShearFlow(model, vorstokes::functionals(model), lambda) {}

ShearFlow::ShearFlow(VorticityModel model, VorticityFunctionals fn, double lambda)
    : model_(std::move(model)), fn_(fn), lambda_(lambda), c_(0.0) {
  if (!(lambda + 2.0 * fn_.gamma_inf_bound > 0)) {
    throw StagnationError("shear flow: lambda + 2 Gamma_inf = " +
                          std::to_string(lambda + 2.0 * fn_.gamma_inf_bound) +
                          " <= 0 (stagnation)");
  }
  c_ = wave_speed(lambda, fn_);
}

double a_coeff(const ShearFlow& flow, double p) {
  double arg = flow.lambda() + 2.0 * flow.model().big_gamma(p);
  if (!(arg > 0)) {
    throw StagnationError("a_coeff: lambda + 2 Gamma(p) <= 0 at p = " + std::to_string(p));
  }
  return std::sqrt(arg);
}

double h_trivial_prime(const ShearFlow& flow, double p) { return 1.0 / a_coeff(flow, p); }

double h_trivial_second(const ShearFlow& flow, double p) {
  double a = a_coeff(flow, p);
  return -flow.model().gamma(-p) / (a * a * a);
}

double h_trivial(const ShearFlow& flow, double p, double g) {
  if (!(p <= 0)) throw DomainError("h_trivial: p must be nonpositive");
  if (!(g > 0)) throw DomainError("h_trivial: g must be positive");
  double offset = -flow.lambda() / (2.0 * g);
  if (p == 0.0) return offset;
  switch (flow.model().kind()) {
    case VorticityKind::Zero: return p / std::sqrt(flow.lambda()) + offset;
    case VorticityKind::ExpDecay:
      if (flow.model().amplitude() == 0.0) return p / std::sqrt(flow.lambda()) + offset;
      return exp_decay_integral(flow, p) + offset;
    default: return -integrate_inverse_a(flow, 0.0, p) + offset;
  }
}

std::vector<double> h_trivial_table(const ShearFlow& flow, const std::vector<double>& p,
                                    double g) {
  std::vector<double> out(p.size());
  if (p.empty()) return out;
  auto kind = flow.model().kind();
  if (kind == VorticityKind::Zero || kind == VorticityKind::ExpDecay) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = h_trivial(flow, p[i], g);
    return out;
  }
  out[0] = h_trivial(flow, p[0], g);
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] <= p[i - 1])) throw DomainError("h_trivial_table: nodes must be nonincreasing");
    out[i] = out[i - 1] - integrate_inverse_a(flow, p[i - 1], p[i]);
  }
  return out;
}

double wave_speed(double lambda, const VorticityFunctionals& fn) {
  double c2 = lambda + 2.0 * fn.gamma_total;
  if (!(c2 > 0)) {
    throw DomainError("wave_speed: lambda + 2 Gamma_limit = " + std::to_string(c2) +
                      " <= 0; the bottom condition cannot be met");
  }
  return std::sqrt(c2);
}

}  // namespace vorstokes
