#include "vorstokes/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace vorstokes {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  LineFit fit;
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double fit_exponential_rate(std::span<const double> p, std::span<const double> f, double hi,
                            double lo) {
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < std::min(p.size(), f.size()); ++i) {
    double rel = std::abs(f[i]) / peak;
    if (rel <= hi && rel >= lo) {
      xs.push_back(p[i]);
      ys.push_back(std::log(std::abs(f[i])));
    }
  }
  if (xs.size() < 3) return 0.0;
  return fit_line(xs, ys).slope;
}

double observed_order(double error_coarse, double error_fine, double ratio) {
  return std::log(std::abs(error_coarse) / std::abs(error_fine)) / std::log(ratio);
}

}  // namespace vorstokes
