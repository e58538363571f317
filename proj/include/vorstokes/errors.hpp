#pragma once

#include <stdexcept>
#include <string>

namespace vorstokes {

/// Argument outside the mathematical domain of an operation (e.g. r < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature, root-finding or iteration failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// λ + 2Γ(p) <= 0 somewhere: the shear flow would stagnate.
class StagnationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No λ with Λ(λ) = -(π/L)² inside the search window.
class BifurcationAbsent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State left the admissible set O_δ. clause: 1 = λ floor, 2 = h_p > δ,
/// 3 = surface inequality. Node indices are -1 when not applicable.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, int clause, int i = -1, int j = -1)
      : std::runtime_error(what), clause_(clause), i_(i), j_(j) {}
  int clause() const noexcept { return clause_; }
  int node_q() const noexcept { return i_; }
  int node_p() const noexcept { return j_; }

 private:
  int clause_, i_, j_;
};

/// Newton iteration failed (divergence or singular linearization).
class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed or invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vorstokes
