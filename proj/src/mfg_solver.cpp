#include "mfg/mfg_solver.hpp"

#include <cmath>

#include "mfg/fd.hpp"
#include "mfg/metrics.hpp"

namespace mfg {

MatrixXd density_drift(const MfgModel& model, const MatrixXd& u) {
  const Grid& grid = model.grid;
  MatrixXd b(grid.n_t, grid.n_x);
  for (int k = 0; k < grid.n_t; ++k) {
    VectorXd du = fd_gradient_neumann(grid, u.row(k).transpose());
    for (int j = 0; j < grid.n_x; ++j)
      b(k, j) = model.h.hp(grid.x(j), du(j)) + model.a.b_tilde(j);
  }
  return b;
}

MatrixXd fixed_point_map(const MfgModel& model, const MatrixXd& beta) {
  const Grid& grid = model.grid;
  VectorXd g = coupling_value(grid, model.g_coupling,
                              VectorXd(beta.row(grid.n_t - 1).transpose()));
  MatrixXd u = solve_hjb_backward(model, beta, g);
  BackwardOperator op =
      assemble_backward_operator(model.a, density_drift(model, u), grid);
  return solve_fokker_planck_forward(op, beta.row(0).transpose());
}

namespace {

double path_gap(const Grid& grid, const MatrixXd& p1, const MatrixXd& p2) {
  double gap = 0.0;
  for (int k = 0; k < grid.n_t; ++k)
    gap = std::max(gap, wasserstein1(grid, VectorXd(p1.row(k).transpose()),
                                     VectorXd(p2.row(k).transpose())));
  return gap;
}

}  // namespace

MfgSolution solve_mfg(const MfgModel& model, const GridMeasure& m0,
                      double theta, double tol, int max_iter,
                      const MatrixXd* init) {
  const Grid& grid = model.grid;
  if (theta <= 0.0 || theta > 1.0)
    throw std::invalid_argument("solve_mfg: theta must lie in (0,1]");
  if (tol <= 0.0) throw std::invalid_argument("solve_mfg: tol must be > 0");

  MatrixXd m(grid.n_t, grid.n_x);
  if (init) {
    if (init->rows() != grid.n_t || init->cols() != grid.n_x)
      throw std::invalid_argument("solve_mfg: init path shape");
    m = *init;
  } else {
    for (int k = 0; k < grid.n_t; ++k) m.row(k) = m0.values.transpose();
  }
  m.row(0) = m0.values.transpose();

  std::vector<double> gaps;
  bool fictitious = false;
  int stall = 0;
  int iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    MatrixXd next = fixed_point_map(model, m);
    double gap = path_gap(grid, m, next);
    gaps.push_back(gap);
    if (gap < tol) {
      converged = true;
      ++iter;
      break;
    }
    double weight = fictitious ? 1.0 / (iter + 1.0) : theta;
    m = (1.0 - weight) * m + weight * next;
    m.row(0) = m0.values.transpose();
    if (!fictitious && gaps.size() >= 2 && gap >= gaps[gaps.size() - 2]) {
      if (++stall >= 5) fictitious = true;
    } else {
      stall = 0;
    }
  }
  if (!converged)
    throw NonConvergenceError("solve_mfg: fixed point did not converge",
                              std::move(gaps));

  MfgSolution sol;
  sol.m = m;
  VectorXd g = coupling_value(grid, model.g_coupling,
                              VectorXd(m.row(grid.n_t - 1).transpose()));
  sol.u = solve_hjb_backward(model, m, g);
  // One last exact push-forward with the final drift so that the stored
  // (u, m) pair satisfies the discrete system up to the fixed-point gap.
  BackwardOperator op =
      assemble_backward_operator(model.a, density_drift(model, sol.u), grid);
  MatrixXd m_final = solve_fokker_planck_forward(op, m0.values);
  sol.final_gap = path_gap(grid, m, m_final);
  sol.m = m_final;
  sol.iterations = iter;
  sol.gap_history = std::move(gaps);

  sol.mass_drift = 0.0;
  sol.min_density = sol.m.minCoeff();
  for (int k = 0; k < grid.n_t; ++k)
    sol.mass_drift = std::max(
        sol.mass_drift, std::abs(mass(grid, sol.m.row(k).transpose()) - 1.0));

  // Scheme residuals by direct substitution into the step equations.
  BackwardOperator hjb_op =
      assemble_backward_operator(model.a, model.a.b_tilde, grid);
  double hjb_res = 0.0, fp_res = 0.0;
  for (int k = 0; k < grid.n_t - 1; ++k) {
    VectorXd f_k = coupling_value(grid, model.f_coupling,
                                  VectorXd(sol.m.row(k).transpose()));
    VectorXd du = fd_gradient_neumann(grid, sol.u.row(k + 1).transpose());
    VectorXd rhs = sol.u.row(k + 1).transpose();
    for (int j = 0; j < grid.n_x; ++j)
      rhs(j) += grid.dt * (f_k(j) - model.h.h(grid.x(j), du(j)));
    hjb_res = std::max(
        hjb_res, (hjb_op.steps[k].apply(sol.u.row(k).transpose()) - rhs)
                     .cwiseAbs()
                     .maxCoeff());
    VectorXd mw = sol.m.row(k + 1).transpose().cwiseProduct(grid.weights);
    VectorXd back = op.steps[k].apply_transpose(mw).cwiseQuotient(grid.weights);
    fp_res = std::max(
        fp_res,
        (back - sol.m.row(k).transpose()).cwiseAbs().maxCoeff());
  }
  sol.hjb_residual = hjb_res;
  sol.fp_residual = fp_res;

  // Zero-flux compatibility of the initial density (diagnostic only).
  double m0_flux = std::max(std::abs(fd_one_sided_left(m0.values, grid.dx)),
                            std::abs(fd_one_sided_right(m0.values, grid.dx)));
  sol.compatible_m0 = m0_flux <= 10.0 * grid.dx;
  return sol;
}

MonotonicityGap monotonicity_gap(const MfgModel& model, const MfgSolution& sol1,
                                 const MfgSolution& sol2) {
  const Grid& grid = model.grid;
  if (sol1.u.rows() != grid.n_t || sol2.u.rows() != grid.n_t ||
      sol1.u.cols() != grid.n_x || sol2.u.cols() != grid.n_x)
    throw std::invalid_argument("monotonicity_gap: grid mismatch");

  MonotonicityGap out;
  for (int k = 0; k < grid.n_t; ++k) {
    double wt = (k == 0 || k == grid.n_t - 1) ? grid.dt / 2.0 : grid.dt;
    VectorXd du1 = fd_gradient_neumann(grid, sol1.u.row(k).transpose());
    VectorXd du2 = fd_gradient_neumann(grid, sol2.u.row(k).transpose());
    for (int j = 0; j < grid.n_x; ++j) {
      double x = grid.x(j);
      double b1 = model.h.h(x, du2(j)) - model.h.h(x, du1(j)) -
                  model.h.hp(x, du1(j)) * (du2(j) - du1(j));
      double b2 = model.h.h(x, du1(j)) - model.h.h(x, du2(j)) -
                  model.h.hp(x, du2(j)) * (du1(j) - du2(j));
      out.bregman1 += b1 * sol1.m(k, j) * grid.weights(j) * wt;
      out.bregman2 += b2 * sol2.m(k, j) * grid.weights(j) * wt;
    }
  }
  out.lhs = out.bregman1 + out.bregman2;
  VectorXd diff_u = (sol1.u.row(0) - sol2.u.row(0)).transpose();
  VectorXd diff_m = (sol1.m.row(0) - sol2.m.row(0)).transpose();
  out.rhs = grid.weights.dot(diff_u.cwiseProduct(diff_m));
  return out;
}

double holder_time_quotient(const Grid& grid, const MatrixXd& m_path) {
  double worst = 0.0;
  for (int k = 0; k < grid.n_t; ++k)
    for (int l = k + 1; l < grid.n_t; ++l) {
      double d = wasserstein1(grid, VectorXd(m_path.row(k).transpose()),
                              VectorXd(m_path.row(l).transpose()));
      worst = std::max(worst, d / std::sqrt((l - k) * grid.dt));
    }
  return worst;
}

}  // namespace mfg
