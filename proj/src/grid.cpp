#include "mfg/grid.hpp"

#include <cmath>

namespace mfg {

Grid build_grid(int n_x, int n_t, double t0, double T, double alpha) {
  if (n_x < 3) throw std::invalid_argument("build_grid: n_x must be >= 3");
  if (n_t < 2) throw std::invalid_argument("build_grid: n_t must be >= 2");
  if (!(t0 < T)) throw std::invalid_argument("build_grid: need t0 < T");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("build_grid: alpha must lie in (0,1)");

  Grid g;
  g.n_x = n_x;
  g.n_t = n_t;
  g.t0 = t0;
  g.T = T;
  g.alpha = alpha;
  g.dx = 1.0 / (n_x - 1);
  g.dt = (T - t0) / (n_t - 1);
  g.weights = VectorXd::Constant(n_x, g.dx);
  g.weights(0) = g.dx / 2.0;
  g.weights(n_x - 1) = g.dx / 2.0;
  return g;
}

double mass(const Grid& grid, const VectorXd& density) {
  return grid.weights.dot(density);
}

GridMeasure make_measure(const Grid& grid, VectorXd density) {
  if (density.size() != grid.n_x)
    throw std::invalid_argument("make_measure: size mismatch");
  if ((density.array() < 0.0).any())
    throw std::invalid_argument("make_measure: negative density value");
  if (std::abs(mass(grid, density) - 1.0) > 1e-12)
    throw std::invalid_argument("make_measure: mass differs from 1");
  return GridMeasure{std::move(density)};
}

GridMeasure normalized_measure(const Grid& grid, VectorXd density) {
  VectorXd d = density.cwiseMax(0.0);
  double m = mass(grid, d);
  if (m <= 0.0)
    throw std::invalid_argument("normalized_measure: zero total mass");
  d /= m;
  return GridMeasure{std::move(d)};
}

GridMeasure delta_measure(const Grid& grid, int node) {
  if (node < 0 || node >= grid.n_x)
    throw std::out_of_range("delta_measure: node out of range");
  VectorXd d = VectorXd::Zero(grid.n_x);
  d(node) = 1.0 / grid.weights(node);
  return GridMeasure{std::move(d)};
}

double signed_mass(const Grid& grid, const VectorXd& density) {
  return grid.weights.dot(density);
}

}  // namespace mfg
