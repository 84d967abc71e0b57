#ifndef MFG_RATE_FIT_HPP
#define MFG_RATE_FIT_HPP

#include <utility>
#include <vector>

namespace mfg {

/// Least-squares fit of log(error) against log(scale).
struct RateFit {
  std::vector<std::pair<double, double>> points;  // (scale, error), as used
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int filtered = 0;  // zero/non-positive errors dropped before fitting
};

/// Requires >= 3 usable points with positive scales; non-positive errors
/// are filtered (counted in the result). Throws std::invalid_argument when
/// fewer than 3 usable points remain.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

}  // namespace mfg

#endif
