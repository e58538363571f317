#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace vorstokes {

enum class VorticityKind { Zero, ExpDecay, Gerstner, Tabulated };

std::string to_string(VorticityKind kind);

/// Sign and monotonicity facts about γ on [0, ∞), known symbolically per kind.
struct VorticitySigns {
  bool nonpositive = false;
  bool nonnegative = false;
  bool nondecreasing = false;  // γ'(r) >= 0
  bool nonincreasing = false;  // γ'(r) <= 0
};

/// The vorticity function γ(r), r = ψ >= 0, of a flow with ω = γ(ψ).
///
/// Kinds:
///  - Zero:       γ ≡ 0.
///  - ExpDecay:   γ(r) = A e^{-r0 r}.
///  - Gerstner:   γ(r) = -2m² e^{2b(r)} / (1 - m² e^{2b(r)}), b: [0,∞) → (-∞,0)
///                decreasing. The default depth map is b(r) = b0 - slope·r.
///  - Tabulated:  monotone cubic (PCHIP) through knots (r_i, γ_i), identically
///                zero beyond the last knot. The last knot must carry γ = 0 and
///                the interpolant is clamped to zero slope there, so γ stays C¹.
class VorticityModel {
 public:
  using DepthMap = std::function<double(double)>;

  static VorticityModel zero(double rho = 1.0);
  static VorticityModel exp_decay(double amplitude, double rate, double rho = 1.0);
  static VorticityModel gerstner(double m, double b0 = -1.0, double slope = 1.0,
                                 double rho = 1.0);
  /// Gerstner kind with a user-supplied depth map b and its derivative.
  static VorticityModel gerstner(double m, DepthMap b, DepthMap b_prime, double rho = 1.0);
  static VorticityModel tabulated(std::vector<std::pair<double, double>> knots,
                                  double rho = 1.0);

  VorticityKind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }

  double gamma(double r) const;
  double gamma_prime(double r) const;
  /// Γ(p) = ∫_0^p γ(-p') dp' for p <= 0.
  double big_gamma(double p) const;
  /// Γ_∞ = lim_{p→-∞} Γ(p).
  double big_gamma_limit() const;

  VorticitySigns signs() const;
  bool is_zero() const noexcept { return kind_ == VorticityKind::Zero; }

  /// Depth r beyond which |γ| has decayed below double precision relative to
  /// its peak (used to truncate improper integrals).
  double tail_depth() const;

  // Parameter accessors used for serialization.
  double amplitude() const noexcept { return amplitude_; }
  double rate() const noexcept { return rate_; }
  double gerstner_m() const noexcept { return m_; }
  double gerstner_b0() const noexcept { return b0_; }
  double gerstner_slope() const noexcept { return slope_; }
  bool has_linear_depth_map() const noexcept { return !custom_b_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  VorticityModel() = default;
  double depth_map(double r) const;
  double depth_map_prime(double r) const;
  double quadrature_big_gamma(double p) const;

  VorticityKind kind_ = VorticityKind::Zero;
  double rho_ = 1.0;
  double amplitude_ = 0.0;
  double rate_ = 1.0;
  double m_ = 0.0;
  double b0_ = -1.0;
  double slope_ = 1.0;
  DepthMap custom_b_;
  DepthMap custom_b_prime_;
  std::vector<std::pair<double, double>> knots_;
  struct Spline;
  std::shared_ptr<const Spline> spline_;
};

struct VorticityFunctionals {
  double gamma_inf_bound = 0.0;  // Γ_inf = inf_{p<=0} Γ(p)
  double gamma_sup_bound = 0.0;  // Γ_sup = sup_{p<=0} Γ(p)
  double gamma_total = 0.0;      // Γ_∞
};

double gamma(const VorticityModel& model, double r);
double big_gamma(const VorticityModel& model, double p);
VorticityFunctionals functionals(const VorticityModel& model);

struct BifurcationCondition {
  bool satisfied = false;
  double value = 0.0;   // the left-hand integral
  double margin = 0.0;  // g - value
};

/// Sufficient condition for local bifurcation:
///   ∫_{-∞}^0 (2(2Γ-2Γ_inf)^{3/2} + (π/L)²(2Γ-2Γ_inf)^{1/2}) e^{2p} dp < g.
BifurcationCondition check_bifurcation_condition(const VorticityModel& model, double g,
                                                 double L);

/// Cumulative table of Γ at the (decreasing, starting at 0) nodes p_0 = 0 > p_1 > ...
/// Computed segment by segment; cheaper than independent evaluations.
std::vector<double> big_gamma_table(const VorticityModel& model, const std::vector<double>& p);

}  // namespace vorstokes
