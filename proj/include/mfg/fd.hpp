#ifndef MFG_FD_HPP
#define MFG_FD_HPP

#include "mfg/grid.hpp"

namespace mfg {

/// Centered first derivative inside, first-order one-sided at the ends
/// (exact for affine functions).
inline VectorXd fd_gradient(const Grid& grid, const VectorXd& f) {
  const int n = grid.n_x;
  VectorXd g(n);
  g(0) = (f(1) - f(0)) / grid.dx;
  g(n - 1) = (f(n - 1) - f(n - 2)) / grid.dx;
  for (int j = 1; j < n - 1; ++j) g(j) = (f(j + 1) - f(j - 1)) / (2.0 * grid.dx);
  return g;
}

/// Gradient with the Neumann closure of the schemes: centered inside,
/// zero at the boundary nodes.
inline VectorXd fd_gradient_neumann(const Grid& grid, const VectorXd& f) {
  const int n = grid.n_x;
  VectorXd g = VectorXd::Zero(n);
  for (int j = 1; j < n - 1; ++j) g(j) = (f(j + 1) - f(j - 1)) / (2.0 * grid.dx);
  return g;
}

/// Second derivative; ghost-node reflection at the boundary, so constants
/// and the scheme's Neumann closure are respected.
inline VectorXd fd_second_derivative_neumann(const Grid& grid,
                                             const VectorXd& f) {
  const int n = grid.n_x;
  const double dx2 = grid.dx * grid.dx;
  VectorXd s(n);
  s(0) = 2.0 * (f(1) - f(0)) / dx2;
  s(n - 1) = 2.0 * (f(n - 2) - f(n - 1)) / dx2;
  for (int j = 1; j < n - 1; ++j) s(j) = (f(j + 1) - 2.0 * f(j) + f(j - 1)) / dx2;
  return s;
}

/// Second-order one-sided first derivative at the left/right boundary.
inline double fd_one_sided_left(const VectorXd& f, double dx) {
  return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dx);
}

inline double fd_one_sided_right(const VectorXd& f, double dx) {
  const int n = static_cast<int>(f.size());
  return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dx);
}

/// First derivative matrix row convention used for kernels in y: centered
/// inside, second-order one-sided at the boundary nodes.
inline VectorXd fd_gradient_one_sided(const Grid& grid, const VectorXd& f) {
  const int n = grid.n_x;
  if (n < 3) throw std::invalid_argument("fd_gradient_one_sided: need >= 3 nodes");
  VectorXd g(n);
  g(0) = fd_one_sided_left(f, grid.dx);
  g(n - 1) = fd_one_sided_right(f, grid.dx);
  for (int j = 1; j < n - 1; ++j) g(j) = (f(j + 1) - f(j - 1)) / (2.0 * grid.dx);
  return g;
}

}  // namespace mfg

#endif
