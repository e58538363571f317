#pragma once

#include <span>
#include <vector>

namespace vorstokes {

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Exponential rate κ of a profile f(p) ~ C e^{κ p} on p <= 0, fitted over the
/// samples where |f| lies in [lo, hi]·max|f|. Returns 0 when fewer than three
/// samples qualify.
double fit_exponential_rate(std::span<const double> p, std::span<const double> f,
                            double hi = 1e-2, double lo = 1e-8);

/// Observed convergence order from errors at successively halved parameters.
double observed_order(double error_coarse, double error_fine, double ratio = 2.0);

}  // namespace vorstokes
