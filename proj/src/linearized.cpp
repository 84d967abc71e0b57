#include "mfg/linearized.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "mfg/fd.hpp"

namespace mfg {

namespace {

/// Shared read-only context for linearized solves around one baseline.
struct LinearizedContext {
  const MfgModel* model;
  const MfgSolution* baseline;
  BackwardOperator backward;    // b_tilde drift, same operator as the HJB
  BackwardOperator forward;     // baseline density drift H_p(Du) + b_tilde
  MatrixXd du;                  // Neumann-closure gradient of baseline u
  TestDictionary dict;          // for iteration gaps

  LinearizedContext(const MfgModel& m, const MfgSolution& b)
      : model(&m), baseline(&b) {
    const Grid& grid = m.grid;
    backward = assemble_backward_operator(m.a, m.a.b_tilde, grid);
    forward = assemble_backward_operator(m.a, density_drift(m, b.u), grid);
    du.resize(grid.n_t, grid.n_x);
    for (int k = 0; k < grid.n_t; ++k)
      du.row(k) = fd_gradient_neumann(grid, b.u.row(k).transpose()).transpose();
    dict = default_dictionary(grid, HolderOrder::OnePlusAlpha, 16, 0);
  }

  /// Backward sweep for z given rho. The Hamiltonian tangent is explicit,
  /// H_p(x, Du^{k+1}) . Dz^{k+1}, matching the explicit H of the nonlinear
  /// sweep, so this is its exact directional derivative.
  MatrixXd solve_z(const GeneralLinearizedData& data,
                   const MatrixXd& rho) const {
    const Grid& grid = model->grid;
    MatrixXd z(grid.n_t, grid.n_x);
    VectorXd zt = coupling_value(grid, model->g_coupling,
                                 VectorXd(rho.row(grid.n_t - 1).transpose()));
    z.row(grid.n_t - 1) = (zt + data.z_T).transpose();
    for (int k = grid.n_t - 2; k >= 0; --k) {
      VectorXd f_k = coupling_value(grid, model->f_coupling,
                                    VectorXd(rho.row(k).transpose()));
      VectorXd dz = fd_gradient_neumann(grid, z.row(k + 1).transpose());
      VectorXd rhs = z.row(k + 1).transpose();
      for (int j = 0; j < grid.n_x; ++j) {
        double hp = model->h.hp(grid.x(j), du(k + 1, j));
        rhs(j) += grid.dt * (f_k(j) + data.h(k, j) - hp * dz(j));
      }
      z.row(k) = backward.steps[k].solve(rhs).transpose();
    }
    return z;
  }

  /// Source of the forward equation at step k: the exact tangent of the
  /// upwinded drift term, - W^{-1} L_tan(db)^T W m^{k+1}, with
  /// db = H_pp(x, Du^k) Dz^k and the upwind side frozen at the baseline
  /// drift sign.
  VectorXd tangent_drift_source(int k, const MatrixXd& z) const {
    const Grid& grid = model->grid;
    VectorXd dz = fd_gradient_neumann(grid, z.row(k).transpose());
    VectorXd db(grid.n_x);
    for (int j = 0; j < grid.n_x; ++j)
      db(j) = model->h.hpp(grid.x(j), du(k, j)) * dz(j);
    // Apply L_tan(db)^T to W m^{k+1} row by row of L_tan.
    VectorXd wm =
        baseline->m.row(k + 1).transpose().cwiseProduct(grid.weights);
    VectorXd out = VectorXd::Zero(grid.n_x);
    for (int j = 1; j < grid.n_x - 1; ++j) {
      double coeff = db(j) / grid.dx;
      if (forward.drift(k, j) >= 0.0) {
        // row j of L_tan: +coeff at j, -coeff at j-1
        out(j) += coeff * wm(j);
        out(j - 1) -= coeff * wm(j);
      } else {
        out(j) -= coeff * wm(j);
        out(j + 1) += coeff * wm(j);
      }
    }
    return -out.cwiseQuotient(grid.weights);
  }

  /// Forward sweep for rho given z.
  MatrixXd solve_rho(const GeneralLinearizedData& data,
                     const MatrixXd& z) const {
    const Grid& grid = model->grid;
    MatrixXd rho(grid.n_t, grid.n_x);
    rho.row(0) = data.rho0.transpose();
    for (int k = 0; k < grid.n_t - 1; ++k) {
      VectorXd src = tangent_drift_source(k, z) +
                     divergence_source(grid, data.c.row(k + 1).transpose());
      VectorXd rhs = rho.row(k).transpose() + grid.dt * src;
      VectorXd y = rhs.cwiseProduct(grid.weights);
      rho.row(k + 1) = forward.steps[k]
                           .solve_transpose(y)
                           .cwiseQuotient(grid.weights)
                           .transpose();
    }
    return rho;
  }

  LinearizedSolution solve(const GeneralLinearizedData& data, double tol,
                           int max_iter) const {
    const Grid& grid = model->grid;
    const double theta = 0.5;
    MatrixXd rho = MatrixXd::Zero(grid.n_t, grid.n_x);
    for (int k = 0; k < grid.n_t; ++k) rho.row(k) = data.rho0.transpose();

    LinearizedSolution sol;
    MatrixXd z;
    for (int iter = 0; iter < max_iter; ++iter) {
      z = solve_z(data, rho);
      MatrixXd next = solve_rho(data, z);
      double gap = 0.0;
      for (int k = 0; k < grid.n_t; ++k)
        gap = std::max(gap,
                       dual_norm(grid, (next.row(k) - rho.row(k)).transpose(),
                                 dict));
      sol.iterations = iter + 1;
      sol.final_gap = gap;
      if (gap < tol) {
        rho = next;
        sol.converged = true;
        break;
      }
      rho = (1.0 - theta) * rho + theta * next;
      rho.row(0) = data.rho0.transpose();
    }
    // Final consistency pass so (z, rho) is an exact sweep pair.
    sol.z = solve_z(data, rho);
    sol.rho = solve_rho(data, sol.z);
    sol.m_constant = linearized_data_size(grid, data);
    return sol;
  }
};

}  // namespace

GeneralLinearizedData empty_linearized_data(const MfgModel& model,
                                            const MfgSolution& baseline) {
  GeneralLinearizedData data;
  data.model = &model;
  data.baseline = &baseline;
  data.z_T = VectorXd::Zero(model.grid.n_x);
  data.rho0 = VectorXd::Zero(model.grid.n_x);
  data.h = MatrixXd::Zero(model.grid.n_t, model.grid.n_x);
  data.c = MatrixXd::Zero(model.grid.n_t, model.grid.n_x);
  return data;
}

double linearized_data_size(const Grid& grid,
                            const GeneralLinearizedData& data) {
  TestDictionary dict = default_dictionary(grid, HolderOrder::OnePlusAlpha, 16, 0);
  double m = discrete_holder_norm(grid, data.z_T, HolderOrder::TwoPlusAlpha) +
             dual_norm(grid, data.rho0, dict);
  double h_norm = 0.0;
  for (int k = 0; k < grid.n_t; ++k)
    h_norm = std::max(h_norm, discrete_holder_norm(grid, data.h.row(k).transpose(),
                                                   HolderOrder::Alpha));
  double c_l1 = 0.0;
  for (int k = 0; k < grid.n_t; ++k) {
    double wt = (k == 0 || k == grid.n_t - 1) ? grid.dt / 2.0 : grid.dt;
    c_l1 += wt * grid.weights.dot(data.c.row(k).transpose().cwiseAbs());
  }
  return m + h_norm + c_l1;
}

LinearizedSolution solve_linearized_general(const GeneralLinearizedData& data,
                                            double tol, int max_iter) {
  if (!data.model || !data.baseline)
    throw std::invalid_argument("solve_linearized_general: missing baseline");
  LinearizedContext ctx(*data.model, *data.baseline);
  return ctx.solve(data, tol, max_iter);
}

LinearizedSolution solve_linearized_mfg(const MfgModel& model,
                                        const MfgSolution& baseline,
                                        const VectorXd& mu0, double tol,
                                        int max_iter) {
  GeneralLinearizedData data = empty_linearized_data(model, baseline);
  data.rho0 = mu0;
  return solve_linearized_general(data, tol, max_iter);
}

MatrixXd fundamental_kernel(const MfgModel& model, const MfgSolution& baseline,
                            int n_jobs, double tol, int max_iter) {
  const Grid& grid = model.grid;
  LinearizedContext ctx(model, baseline);
  MatrixXd k(grid.n_x, grid.n_x);

  if (n_jobs <= 0)
    n_jobs = std::max(1u, std::thread::hardware_concurrency());
  n_jobs = std::min(n_jobs, grid.n_x);

  std::atomic<int> next_col{0};
  auto worker = [&]() {
    for (;;) {
      int j = next_col.fetch_add(1);
      if (j >= grid.n_x) break;
      GeneralLinearizedData data = empty_linearized_data(model, baseline);
      data.rho0 = VectorXd::Zero(grid.n_x);
      data.rho0(j) = 1.0 / grid.weights(j);
      LinearizedSolution sol = ctx.solve(data, tol, max_iter);
      k.col(j) = sol.z.row(0).transpose();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n_jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return k;
}

MatrixXd normalize_kernel(const Grid& grid, const MatrixXd& k,
                          const VectorXd& m0) {
  VectorXd means = k * m0.cwiseProduct(grid.weights);
  return k.colwise() - means;
}

MatrixXd intrinsic_derivative(const Grid& grid, const MatrixXd& k) {
  if (grid.n_x < 3 || k.cols() < 3)
    throw std::invalid_argument("intrinsic_derivative: need >= 3 y-nodes");
  MatrixXd d(k.rows(), k.cols());
  for (int i = 0; i < k.rows(); ++i)
    d.row(i) = fd_gradient_one_sided(grid, k.row(i).transpose()).transpose();
  return d;
}

}  // namespace mfg
