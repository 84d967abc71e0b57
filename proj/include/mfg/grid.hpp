#ifndef MFG_GRID_HPP
#define MFG_GRID_HPP

#include <Eigen/Dense>
#include <stdexcept>

namespace mfg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Uniform space-time grid on [t0,T] x [0,1] with trapezoidal quadrature
/// weights in space. Node j sits at x_j = j*dx; x_0 = 0, x_{n_x-1} = 1.
struct Grid {
  int n_x = 0;
  int n_t = 0;
  double t0 = 0.0;
  double T = 0.0;
  double alpha = 0.5;  // Hoelder exponent used by the discrete norm proxies
  double dx = 0.0;
  double dt = 0.0;
  VectorXd weights;  // trapezoid: dx/2 at the two boundary nodes, dx inside

  double x(int j) const { return j * dx; }
  double t(int k) const { return t0 + k * dt; }
};

Grid build_grid(int n_x, int n_t, double t0, double T, double alpha);

/// Nonnegative grid density integrating to 1 under the grid quadrature.
struct GridMeasure {
  VectorXd values;
};

/// Quadrature mass of a density.
double mass(const Grid& grid, const VectorXd& density);

/// Validates nonnegativity and unit mass (1e-12) and wraps the density.
GridMeasure make_measure(const Grid& grid, VectorXd density);

/// Clamps to >= 0 and rescales to unit mass. Throws on zero total mass.
GridMeasure normalized_measure(const Grid& grid, VectorXd density);

/// Discrete delta at a node: density 1/w_j there, zero elsewhere. Pairing
/// against any grid function reproduces point evaluation exactly.
GridMeasure delta_measure(const Grid& grid, int node);

/// Signed density on the grid (discrete surrogate of distributional data).
struct SignedGridMeasure {
  VectorXd values;
};

double signed_mass(const Grid& grid, const VectorXd& density);

}  // namespace mfg

#endif
