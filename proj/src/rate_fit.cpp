#include "mfg/rate_fit.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  RateFit fit;
  for (const auto& [scale, error] : points) {
    if (scale <= 0.0)
      throw std::invalid_argument("fit_rate: scales must be positive");
    if (error <= 0.0) {
      ++fit.filtered;
      continue;
    }
    fit.points.emplace_back(scale, error);
  }
  const int n = static_cast<int>(fit.points.size());
  if (n < 3) throw std::invalid_argument("fit_rate: need >= 3 usable points");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [scale, error] : fit.points) {
    double lx = std::log(scale), ly = std::log(error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_rate: degenerate scales");
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (const auto& [scale, error] : fit.points) {
    double pred = fit.intercept + fit.slope * std::log(scale);
    double r = std::log(error) - pred;
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return fit;
}

}  // namespace mfg
