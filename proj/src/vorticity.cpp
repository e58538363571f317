#include "vorstokes/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pchip.hpp"
#include "vorstokes/errors.hpp"

namespace vorstokes {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kQuadTol = 1e-14;
// e^{-39.2} ≈ 1e-17: below this the integrand is invisible next to O(1) values.
constexpr double kLogTiny = 39.2;

double integrate_segment(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  double err = 0.0;
  double value = gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTol, &err);
  double scale = std::max(1.0, std::abs(value));
  if (!(err <= 1e-10 * scale)) {
    throw NumericError("vorticity quadrature did not converge on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]",
                       err);
  }
  return value;
}

// Exact for the cubic pieces of the tabulated model: [a, b] must not straddle a knot.
double integrate_cubic(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 3>::integrate(f, a, b);
}

// For integrands with a square-root endpoint singularity.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0, l1 = 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double value = ts.integrate(f, a, b, 1e-12, &err, &l1);
  if (!(err <= 1e-9 * std::max(1.0, l1))) {
    throw NumericError("vorticity quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]",
                       err);
  }
  return value;
}

}  // namespace

std::string to_string(VorticityKind kind) {
  switch (kind) {
    case VorticityKind::Zero: return "zero";
    case VorticityKind::ExpDecay: return "exp_decay";
    case VorticityKind::Gerstner: return "gerstner";
    case VorticityKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

struct VorticityModel::Spline {
  boost::math::interpolators::pchip<std::vector<double>> interp;
  double r_last;
};

VorticityModel VorticityModel::zero(double rho) {
  if (!(rho > 0)) throw DomainError("vorticity: rho must be positive");
  VorticityModel m;
  m.kind_ = VorticityKind::Zero;
  m.rho_ = rho;
  return m;
}

VorticityModel VorticityModel::exp_decay(double amplitude, double rate, double rho) {
  if (!(rho > 0)) throw DomainError("vorticity: rho must be positive");
  if (!(rate > 0)) throw DomainError("vorticity: exp_decay rate must be positive");
  if (!std::isfinite(amplitude)) throw DomainError("vorticity: amplitude must be finite");
  VorticityModel m;
  m.kind_ = VorticityKind::ExpDecay;
  m.rho_ = rho;
  m.amplitude_ = amplitude;
  m.rate_ = rate;
  return m;
}

VorticityModel VorticityModel::gerstner(double m_param, double b0, double slope, double rho) {
  if (!(rho > 0)) throw DomainError("vorticity: rho must be positive");
  if (!(m_param >= 0 && m_param < 1)) throw DomainError("vorticity: gerstner m must lie in [0,1)");
  if (!(b0 < 0)) throw DomainError("vorticity: gerstner b0 must be negative");
  if (!(slope > 0)) {
    throw DomainError("vorticity: gerstner depth-map slope must be positive (γ must decay)");
  }
  VorticityModel m;
  m.kind_ = VorticityKind::Gerstner;
  m.rho_ = rho;
  m.m_ = m_param;
  m.b0_ = b0;
  m.slope_ = slope;
  return m;
}

VorticityModel VorticityModel::gerstner(double m_param, DepthMap b, DepthMap b_prime, double rho) {
  if (!(rho > 0)) throw DomainError("vorticity: rho must be positive");
  if (!(m_param >= 0 && m_param < 1)) throw DomainError("vorticity: gerstner m must lie in [0,1)");
  if (!b || !b_prime) throw DomainError("vorticity: gerstner depth map must be callable");
  double prev = b(0.0);
  for (int i = 0; i <= 400; ++i) {
    double r = 0.5 * i;
    double v = b(r);
    if (!(v < 0)) throw DomainError("vorticity: gerstner depth map must be negative");
    if (v > prev) throw DomainError("vorticity: gerstner depth map must be nonincreasing");
    prev = v;
  }
  VorticityModel m;
  m.kind_ = VorticityKind::Gerstner;
  m.rho_ = rho;
  m.m_ = m_param;
  m.b0_ = b(0.0);
  m.slope_ = 0.0;
  m.custom_b_ = std::move(b);
  m.custom_b_prime_ = std::move(b_prime);
  // Must decay: tail_depth() throws otherwise.
  (void)m.tail_depth();
  return m;
}

VorticityModel VorticityModel::tabulated(std::vector<std::pair<double, double>> knots,
                                         double rho) {
  if (!(rho > 0)) throw DomainError("vorticity: rho must be positive");
  if (knots.size() < 4) throw DomainError("vorticity: tabulated model needs at least 4 knots");
  if (knots.front().first != 0.0) throw DomainError("vorticity: first knot must sit at r = 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) {
      throw DomainError("vorticity: knots must be strictly increasing in r");
    }
  }
  if (knots.back().second != 0.0) {
    throw DomainError("vorticity: last knot must carry gamma = 0 (decay beyond the table)");
  }
  std::vector<double> x, y;
  for (const auto& [r, g] : knots) {
    x.push_back(r);
    y.push_back(g);
  }
  double r_last = x.back();
  VorticityModel m;
  m.kind_ = VorticityKind::Tabulated;
  m.rho_ = rho;
  m.knots_ = std::move(knots);
  m.spline_ = std::make_shared<const Spline>(
      Spline{boost::math::interpolators::pchip<std::vector<double>>(
                 std::move(x), std::move(y), std::numeric_limits<double>::quiet_NaN(), 0.0),
             r_last});
  return m;
}

double VorticityModel::depth_map(double r) const {
  return custom_b_ ? custom_b_(r) : b0_ - slope_ * r;
}

double VorticityModel::depth_map_prime(double r) const {
  return custom_b_prime_ ? custom_b_prime_(r) : -slope_;
}

double VorticityModel::gamma(double r) const {
  if (!(r >= 0)) throw DomainError("gamma: r must be nonnegative");
  switch (kind_) {
    case VorticityKind::Zero: return 0.0;
    case VorticityKind::ExpDecay: return amplitude_ * std::exp(-rate_ * r);
    case VorticityKind::Gerstner: {
      double u = m_ * m_ * std::exp(2.0 * depth_map(r));
      return -2.0 * u / (1.0 - u);
    }
    case VorticityKind::Tabulated:
      return r >= spline_->r_last ? 0.0 : spline_->interp(r);
  }
  return 0.0;
}

double VorticityModel::gamma_prime(double r) const {
  if (!(r >= 0)) throw DomainError("gamma_prime: r must be nonnegative");
  switch (kind_) {
    case VorticityKind::Zero: return 0.0;
    case VorticityKind::ExpDecay: return -rate_ * amplitude_ * std::exp(-rate_ * r);
    case VorticityKind::Gerstner: {
      double u = m_ * m_ * std::exp(2.0 * depth_map(r));
      double du = 2.0 * depth_map_prime(r) * u;
      return -2.0 * du / ((1.0 - u) * (1.0 - u));
    }
    case VorticityKind::Tabulated:
      return r >= spline_->r_last ? 0.0 : spline_->interp.prime(r);
  }
  return 0.0;
}

double VorticityModel::quadrature_big_gamma(double p) const {
  // Γ(p) = -∫_0^{-p} γ(r) dr, integrated piecewise so kinks and tails stay resolved.
  double depth = -p;
  auto f = [this](double r) { return gamma(r); };
  std::vector<double> breaks{0.0};
  if (kind_ == VorticityKind::Tabulated) {
    for (const auto& k : knots_) {
      if (k.first > 0 && k.first < depth) breaks.push_back(k.first);
    }
    depth = std::min(depth, spline_->r_last);
  } else {
    double tail = tail_depth();
    depth = std::min(depth, tail);
    for (double r = 1.0; r < depth; r += 1.0) breaks.push_back(r);
  }
  breaks.push_back(depth);
  double sum = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    sum += kind_ == VorticityKind::Tabulated ? integrate_cubic(f, breaks[i - 1], breaks[i])
                                             : integrate_segment(f, breaks[i - 1], breaks[i]);
  }
  return -sum;
}

double VorticityModel::big_gamma(double p) const {
  if (!(p <= 0)) throw DomainError("big_gamma: p must be nonpositive");
  if (p == 0.0) return 0.0;
  switch (kind_) {
    case VorticityKind::Zero: return 0.0;
    case VorticityKind::ExpDecay: return amplitude_ / rate_ * std::expm1(rate_ * p);
    case VorticityKind::Gerstner:
      if (!custom_b_) {
        double u0 = m_ * m_ * std::exp(2.0 * b0_);
        double up = m_ * m_ * std::exp(2.0 * (b0_ + slope_ * p));
        return (std::log1p(-up) - std::log1p(-u0)) / slope_;
      }
      return quadrature_big_gamma(p);
    case VorticityKind::Tabulated: return quadrature_big_gamma(p);
  }
  return 0.0;
}

double VorticityModel::big_gamma_limit() const {
  switch (kind_) {
    case VorticityKind::Zero: return 0.0;
    case VorticityKind::ExpDecay: return -amplitude_ / rate_;
    case VorticityKind::Gerstner:
      if (!custom_b_) return -std::log1p(-m_ * m_ * std::exp(2.0 * b0_)) / slope_;
      break;
    case VorticityKind::Tabulated: return quadrature_big_gamma(-spline_->r_last);
  }
  // Custom Gerstner depth map: double-exponential quadrature on [0, ∞),
  // cross-checked against the truncated integral.
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  double tail_integral = integrator.integrate([this](double r) { return gamma(r); }, 0.0,
                                              std::numeric_limits<double>::infinity(), 1e-13,
                                              &err);
  double truncated = quadrature_big_gamma(-tail_depth());
  if (std::abs(-tail_integral - truncated) > 1e-10 * std::max(1.0, std::abs(truncated))) {
    throw NumericError("big_gamma_limit: tail integral not converged",
                       std::abs(-tail_integral - truncated));
  }
  return truncated;
}

VorticitySigns VorticityModel::signs() const {
  VorticitySigns s;
  switch (kind_) {
    case VorticityKind::Zero:
      s = {true, true, true, true};
      break;
    case VorticityKind::ExpDecay:
      s.nonnegative = amplitude_ >= 0;
      s.nonpositive = amplitude_ <= 0;
      s.nonincreasing = amplitude_ >= 0;
      s.nondecreasing = amplitude_ <= 0;
      break;
    case VorticityKind::Gerstner:
      // b nonincreasing ⇒ |γ| nonincreasing ⇒ γ <= 0 increases towards 0.
      s.nonpositive = true;
      s.nondecreasing = true;
      s.nonnegative = m_ == 0.0;
      s.nonincreasing = m_ == 0.0;
      break;
    case VorticityKind::Tabulated: {
      // PCHIP preserves the monotonicity and sign pattern of the data.
      s.nonnegative = s.nonpositive = s.nondecreasing = s.nonincreasing = true;
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (knots_[i].second < 0) s.nonnegative = false;
        if (knots_[i].second > 0) s.nonpositive = false;
        if (i > 0) {
          if (knots_[i].second < knots_[i - 1].second) s.nondecreasing = false;
          if (knots_[i].second > knots_[i - 1].second) s.nonincreasing = false;
        }
      }
      break;
    }
  }
  return s;
}

double VorticityModel::tail_depth() const {
  switch (kind_) {
    case VorticityKind::Zero: return 0.0;
    case VorticityKind::ExpDecay: return kLogTiny / rate_;
    case VorticityKind::Gerstner:
      if (m_ == 0.0) return 0.0;
      if (!custom_b_) {
        // m² e^{2(b0 - slope r)} < e^{-kLogTiny}
        double r = (kLogTiny + 2.0 * b0_ + 2.0 * std::log(m_)) / (2.0 * slope_);
        return std::max(r, 0.0);
      } else {
        double peak = std::abs(gamma(0.0));
        for (double r = 1.0; r < 1e7; r *= 2.0) {
          if (std::abs(gamma(r)) < 1e-17 * std::max(peak, 1e-300)) return r;
        }
        throw DomainError("vorticity: gerstner depth map does not make gamma decay");
      }
    case VorticityKind::Tabulated: return spline_->r_last;
  }
  return 0.0;
}

double gamma(const VorticityModel& model, double r) { return model.gamma(r); }

double big_gamma(const VorticityModel& model, double p) { return model.big_gamma(p); }

std::vector<double> big_gamma_table(const VorticityModel& model, const std::vector<double>& p) {
  std::vector<double> out(p.size(), 0.0);
  if (p.empty()) return out;
  bool closed_form = model.kind() == VorticityKind::Zero ||
                     model.kind() == VorticityKind::ExpDecay ||
                     (model.kind() == VorticityKind::Gerstner && model.has_linear_depth_map());
  if (closed_form) {
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = model.big_gamma(p[i]);
    return out;
  }
  double tail = model.tail_depth();
  double limit = model.big_gamma_limit();
  auto f = [&model](double r) { return model.gamma(r); };
  out[0] = model.big_gamma(p[0]);
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] <= p[i - 1])) throw DomainError("big_gamma_table: nodes must be nonincreasing");
    double r0 = -p[i - 1], r1 = -p[i];
    if (r0 >= tail) {
      out[i] = limit;
      continue;
    }
    double seg = 0.0;
    double hi = std::min(r1, tail);
    if (model.kind() == VorticityKind::Tabulated) {
      double a = r0;
      for (const auto& k : model.knots()) {
        if (k.first > a && k.first < hi) {
          seg += integrate_cubic(f, a, k.first);
          a = k.first;
        }
      }
      seg += integrate_cubic(f, a, hi);
    } else {
      seg = integrate_segment(f, r0, hi);
    }
    out[i] = out[i - 1] - seg;
  }
  return out;
}

VorticityFunctionals functionals(const VorticityModel& model) {
  VorticityFunctionals out;
  if (model.is_zero()) return out;
  double limit = model.big_gamma_limit();
  double depth = std::max(model.tail_depth(), 1.0);
  double lo = std::min(0.0, limit), hi = std::max(0.0, limit);
  double prev_lo = lo, prev_hi = hi;
  for (std::size_t n = 256; n <= 65536; n *= 2) {
    std::vector<double> p(n + 1);
    for (std::size_t i = 0; i <= n; ++i) p[i] = -depth * static_cast<double>(i) / n;
    auto table = big_gamma_table(model, p);
    double cur_lo = std::min(0.0, limit), cur_hi = std::max(0.0, limit);
    for (double v : table) {
      cur_lo = std::min(cur_lo, v);
      cur_hi = std::max(cur_hi, v);
    }
    lo = cur_lo;
    hi = cur_hi;
    if (n > 256 && std::abs(lo - prev_lo) < 1e-13 && std::abs(hi - prev_hi) < 1e-13) break;
    prev_lo = lo;
    prev_hi = hi;
  }
  out.gamma_inf_bound = lo;
  out.gamma_sup_bound = hi;
  out.gamma_total = limit;
  return out;
}

BifurcationCondition check_bifurcation_condition(const VorticityModel& model, double g,
                                                 double L) {
  if (!(g > 0) || !(L > 0)) throw DomainError("bifurcation condition: g and L must be positive");
  BifurcationCondition out;
  if (!model.is_zero()) {
    auto fn = functionals(model);
    double k2 = (M_PI / L) * (M_PI / L);
    double tail = model.tail_depth();
    double limit = fn.gamma_total;
    auto integrand = [&](double r) {
      double G = r >= tail ? limit : model.big_gamma(-r);
      double d = std::max(0.0, 2.0 * G - 2.0 * fn.gamma_inf_bound);
      return (2.0 * d * std::sqrt(d) + k2 * std::sqrt(d)) * std::exp(-2.0 * r);
    };
    // e^{-2r} with bounded Γ: [0, 25] leaves < 1e-21 of the integral out. Where Γ
    // attains Γ_inf at a segment end, √d has a square-root singularity there.
    double sum = 0.0;
    for (int i = 0; i < 25; ++i) sum += integrate_endpoint_singular(integrand, i, i + 1.0);
    out.value = sum;
  }
  out.margin = g - out.value;
  out.satisfied = out.value < g;
  return out;
}

}  // namespace vorstokes
