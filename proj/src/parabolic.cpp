#include "mfg/parabolic.hpp"

#include <cmath>

#include "mfg/fd.hpp"

namespace mfg {

VectorXd TriDiag::apply(const VectorXd& v) const {
  const int n = static_cast<int>(diag.size());
  VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double s = diag(i) * v(i);
    if (i > 0) s += lower(i) * v(i - 1);
    if (i < n - 1) s += upper(i) * v(i + 1);
    out(i) = s;
  }
  return out;
}

VectorXd TriDiag::apply_transpose(const VectorXd& v) const {
  const int n = static_cast<int>(diag.size());
  VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double s = diag(i) * v(i);
    if (i < n - 1) s += lower(i + 1) * v(i + 1);
    if (i > 0) s += upper(i - 1) * v(i - 1);
    out(i) = s;
  }
  return out;
}

VectorXd TriDiag::solve(const VectorXd& rhs) const {
  const int n = static_cast<int>(diag.size());
  VectorXd c(n), d(n);
  double den = diag(0);
  if (den == 0.0) throw std::runtime_error("TriDiag::solve: singular matrix");
  c(0) = upper(0) / den;
  d(0) = rhs(0) / den;
  for (int i = 1; i < n; ++i) {
    den = diag(i) - lower(i) * c(i - 1);
    if (den == 0.0) throw std::runtime_error("TriDiag::solve: singular matrix");
    c(i) = (i < n - 1) ? upper(i) / den : 0.0;
    d(i) = (rhs(i) - lower(i) * d(i - 1)) / den;
  }
  VectorXd x(n);
  x(n - 1) = d(n - 1);
  for (int i = n - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

VectorXd TriDiag::solve_transpose(const VectorXd& rhs) const {
  TriDiag t;
  const int n = static_cast<int>(diag.size());
  t.diag = diag;
  t.lower = VectorXd::Zero(n);
  t.upper = VectorXd::Zero(n);
  for (int i = 0; i < n - 1; ++i) {
    t.lower(i + 1) = upper(i);
    t.upper(i) = lower(i + 1);
  }
  return t.solve(rhs);
}

namespace {

/// Spatial operator L = -(a phi_x)_x + b phi_x at one level.
TriDiag assemble_level(const EllipticCoefficient& a, const VectorXd& b,
                       const Grid& grid) {
  const int n = grid.n_x;
  const double dx = grid.dx;
  TriDiag L;
  L.lower = VectorXd::Zero(n);
  L.diag = VectorXd::Zero(n);
  L.upper = VectorXd::Zero(n);
  // Finite-volume diffusion with zero-flux closure; cell size = weight.
  for (int j = 0; j < n; ++j) {
    const double w = grid.weights(j);
    if (j > 0) {
      double aw = 0.5 * (a.a(j - 1) + a.a(j)) / (dx * w);
      L.lower(j) -= aw;
      L.diag(j) += aw;
    }
    if (j < n - 1) {
      double ae = 0.5 * (a.a(j) + a.a(j + 1)) / (dx * w);
      L.upper(j) -= ae;
      L.diag(j) += ae;
    }
  }
  // Upwinded drift, zero at boundary nodes (the closure forces phi_x = 0).
  for (int j = 1; j < n - 1; ++j) {
    if (b(j) >= 0.0) {
      L.diag(j) += b(j) / dx;
      L.lower(j) -= b(j) / dx;
    } else {
      L.diag(j) -= b(j) / dx;
      L.upper(j) += b(j) / dx;
    }
  }
  return L;
}

}  // namespace

BackwardOperator assemble_backward_operator(const EllipticCoefficient& a,
                                            const MatrixXd& b,
                                            const Grid& grid) {
  if (b.rows() != grid.n_t || b.cols() != grid.n_x)
    throw std::invalid_argument("assemble_backward_operator: drift shape");
  if (!b.allFinite())
    throw std::invalid_argument("assemble_backward_operator: drift not finite");
  BackwardOperator op;
  op.grid = grid;
  op.drift = b;
  op.steps.reserve(grid.n_t - 1);
  op.spatial.reserve(grid.n_t - 1);
  for (int k = 0; k < grid.n_t - 1; ++k) {
    TriDiag L = assemble_level(a, b.row(k).transpose(), grid);
    op.spatial.push_back(L);
    TriDiag B = L;
    B.lower *= grid.dt;
    B.upper *= grid.dt;
    B.diag = VectorXd::Ones(grid.n_x) + grid.dt * L.diag;
    op.steps.push_back(std::move(B));
  }
  return op;
}

BackwardOperator assemble_backward_operator(const EllipticCoefficient& a,
                                            const VectorXd& b,
                                            const Grid& grid) {
  MatrixXd bt(grid.n_t, grid.n_x);
  for (int k = 0; k < grid.n_t; ++k) bt.row(k) = b.transpose();
  return assemble_backward_operator(a, bt, grid);
}

MatrixXd solve_linear_backward(const BackwardOperator& op, const VectorXd& xi,
                               const MatrixXd& psi) {
  const Grid& grid = op.grid;
  if (!xi.allFinite() || !psi.allFinite())
    throw std::invalid_argument("solve_linear_backward: non-finite input");
  MatrixXd phi(grid.n_t, grid.n_x);
  phi.row(grid.n_t - 1) = xi.transpose();
  for (int k = grid.n_t - 2; k >= 0; --k) {
    VectorXd rhs =
        phi.row(k + 1).transpose() + grid.dt * psi.row(k).transpose();
    phi.row(k) = op.steps[k].solve(rhs).transpose();
  }
  return phi;
}

MatrixXd solve_linear_backward(const BackwardOperator& op, const VectorXd& xi) {
  return solve_linear_backward(
      op, xi, MatrixXd::Zero(op.grid.n_t, op.grid.n_x));
}

VectorXd divergence_source(const Grid& grid, const VectorXd& c_nodes) {
  const int n = grid.n_x;
  VectorXd f = VectorXd::Zero(n);
  // Interior faces only; boundary faces carry zero total flux.
  for (int j = 0; j < n - 1; ++j) {
    double cf = 0.5 * (c_nodes(j) + c_nodes(j + 1));
    f(j) -= cf / grid.weights(j);
    f(j + 1) += cf / grid.weights(j + 1);
  }
  return f;
}

namespace {

VectorXd forward_step(const BackwardOperator& op, int k, const VectorXd& state,
                      const VectorXd& source) {
  const Grid& grid = op.grid;
  VectorXd rhs = state + grid.dt * source;
  VectorXd y = rhs.cwiseProduct(grid.weights);
  VectorXd z = op.steps[k].solve_transpose(y);
  return z.cwiseQuotient(grid.weights);
}

}  // namespace

MatrixXd solve_fokker_planck_forward(const BackwardOperator& op,
                                     const VectorXd& mu0, const MatrixXd& c) {
  const Grid& grid = op.grid;
  if (mu0.size() != grid.n_x || c.rows() != grid.n_t || c.cols() != grid.n_x)
    throw std::invalid_argument("solve_fokker_planck_forward: grid mismatch");
  MatrixXd mu(grid.n_t, grid.n_x);
  mu.row(0) = mu0.transpose();
  for (int k = 0; k < grid.n_t - 1; ++k) {
    VectorXd src = divergence_source(grid, c.row(k + 1).transpose());
    mu.row(k + 1) =
        forward_step(op, k, mu.row(k).transpose(), src).transpose();
  }
  return mu;
}

MatrixXd solve_fokker_planck_forward(const BackwardOperator& op,
                                     const VectorXd& mu0) {
  return solve_fokker_planck_forward(
      op, mu0, MatrixXd::Zero(op.grid.n_t, op.grid.n_x));
}

double duality_defect(const BackwardOperator& op, const VectorXd& xi,
                      const MatrixXd& psi, const VectorXd& mu0,
                      const MatrixXd& c) {
  const Grid& grid = op.grid;
  MatrixXd phi = solve_linear_backward(op, xi, psi);
  MatrixXd mu = solve_fokker_planck_forward(op, mu0, c);
  auto pair_w = [&](const VectorXd& a_, const VectorXd& b_) {
    return grid.weights.dot(a_.cwiseProduct(b_));
  };
  double lhs = pair_w(mu.row(grid.n_t - 1).transpose(), xi);
  double rhs = pair_w(mu0, phi.row(0).transpose());
  for (int k = 0; k < grid.n_t - 1; ++k) {
    lhs += grid.dt *
           pair_w(mu.row(k + 1).transpose(), psi.row(k).transpose());
    VectorXd f = divergence_source(grid, c.row(k + 1).transpose());
    rhs += grid.dt * pair_w(f, phi.row(k).transpose());
  }
  return std::abs(lhs - rhs);
}

double terminal_compatibility_defect(const MfgModel& model, const VectorXd& g) {
  const Grid& grid = model.grid;
  double left = model.a.a(0) * fd_one_sided_left(g, grid.dx);
  double right = model.a.a(grid.n_x - 1) * fd_one_sided_right(g, grid.dx);
  return std::max(std::abs(left), std::abs(right));
}

MatrixXd solve_hjb_backward(const MfgModel& model, const MatrixXd& m_path,
                            const VectorXd& g) {
  const Grid& grid = model.grid;
  if (m_path.rows() != grid.n_t || m_path.cols() != grid.n_x)
    throw std::invalid_argument("solve_hjb_backward: measure path shape");
  const double compat = terminal_compatibility_defect(model, g);
  const double tol =
      10.0 * grid.dx * grid.dx *
      (1.0 + fd_second_derivative_neumann(grid, g).cwiseAbs().maxCoeff());
  if (compat > tol)
    throw std::invalid_argument(
        "solve_hjb_backward: terminal datum violates Neumann compatibility");

  BackwardOperator op =
      assemble_backward_operator(model.a, model.a.b_tilde, grid);
  MatrixXd u(grid.n_t, grid.n_x);
  u.row(grid.n_t - 1) = g.transpose();
  for (int k = grid.n_t - 2; k >= 0; --k) {
    VectorXd f_k = coupling_value(grid, model.f_coupling,
                                  VectorXd(m_path.row(k).transpose()));
    VectorXd du = fd_gradient_neumann(grid, u.row(k + 1).transpose());
    VectorXd rhs = u.row(k + 1).transpose();
    for (int j = 0; j < grid.n_x; ++j)
      rhs(j) += grid.dt * (f_k(j) - model.h.h(grid.x(j), du(j)));
    u.row(k) = op.steps[k].solve(rhs).transpose();
  }
  return u;
}

}  // namespace mfg
