#ifndef MFG_LINEARIZED_HPP
#define MFG_LINEARIZED_HPP

#include "mfg/metrics.hpp"
#include "mfg/mfg_solver.hpp"

namespace mfg {

/// Data of the general linearized system around a solved baseline:
/// backward equation for z with terminal z(T) = dG/dm(rho(T)) + z_T and
/// source dF/dm(rho) + h - H_p(x,Du) Dz; forward equation for rho with the
/// baseline drift, the tangent drift source m H_pp(x,Du) Dz, and the extra
/// divergence source div(c).
struct GeneralLinearizedData {
  const MfgModel* model = nullptr;
  const MfgSolution* baseline = nullptr;
  VectorXd z_T;   // terminal grid function
  VectorXd rho0;  // signed initial density
  MatrixXd h;     // n_t x n_x source of the backward equation
  MatrixXd c;     // n_t x n_x divergence-form source of the forward equation
};

struct LinearizedSolution {
  MatrixXd z;    // n_t x n_x
  MatrixXd rho;  // n_t x n_x signed densities
  int iterations = 0;
  double final_gap = 0.0;   // sup_t dual-norm gap of the last update
  double m_constant = 0.0;  // size of the data in the natural norms
  bool converged = false;
};

/// Zero-filled data attached to a baseline.
GeneralLinearizedData empty_linearized_data(const MfgModel& model,
                                            const MfgSolution& baseline);

/// Damped fixed-point iteration (theta = 0.5) on rho for the coupled linear
/// pair. The discretization is the exact directional derivative of the
/// nonlinear forward-backward scheme, so the solution map is the exact
/// Jacobian of the discrete MFG solution map.
LinearizedSolution solve_linearized_general(const GeneralLinearizedData& data,
                                            double tol = 1e-11,
                                            int max_iter = 200);

/// Special case h = 0, c = 0, z_T = 0, rho(t0) = mu0.
LinearizedSolution solve_linearized_mfg(const MfgModel& model,
                                        const MfgSolution& baseline,
                                        const VectorXd& mu0, double tol = 1e-11,
                                        int max_iter = 200);

/// Fundamental solution K(x_i, y_j): column j is v(t0, .) for the initial
/// perturbation equal to the discrete delta at node j. Columns are
/// independent solves, computed concurrently with n_jobs threads
/// (n_jobs <= 0 uses the hardware concurrency).
MatrixXd fundamental_kernel(const MfgModel& model, const MfgSolution& baseline,
                            int n_jobs = 0, double tol = 1e-11,
                            int max_iter = 200);

/// K - integral of K against m0 (row-wise), so the normalized kernel pairs
/// to zero against m0.
MatrixXd normalize_kernel(const Grid& grid, const MatrixXd& k,
                          const VectorXd& m0);

/// y-derivative of the kernel: centered at interior y-nodes, one-sided
/// second-order at y in {0,1}. Throws with fewer than 3 y-nodes.
MatrixXd intrinsic_derivative(const Grid& grid, const MatrixXd& k);

/// The natural size of the data (terminal + initial + both sources) used
/// in the linear estimate; reported alongside solution norms.
double linearized_data_size(const Grid& grid, const GeneralLinearizedData& data);

}  // namespace mfg

#endif
