#ifndef MFG_PARABOLIC_HPP
#define MFG_PARABOLIC_HPP

#include <vector>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

/// Tridiagonal matrix stored by bands; lower(0) and upper(n-1) are unused.
struct TriDiag {
  VectorXd lower, diag, upper;

  VectorXd apply(const VectorXd& v) const;
  VectorXd apply_transpose(const VectorXd& v) const;
  VectorXd solve(const VectorXd& rhs) const;            // Thomas sweep
  VectorXd solve_transpose(const VectorXd& rhs) const;
};

/// Implicit-Euler step operators B_k = I + dt L_k, with
/// L = -(a phi_x)_x (finite-volume, zero-flux Neumann closure via ghost
/// reflection) + b phi_x (upwinded, zero at the boundary nodes where the
/// closure forces phi_x = 0). One operator per time step k -> k+1; the
/// drift coefficient may vary with the level.
struct BackwardOperator {
  Grid grid;
  std::vector<TriDiag> steps;    // size n_t - 1
  std::vector<TriDiag> spatial;  // L_k itself, for residual checks
  MatrixXd drift;                // b per level, n_t x n_x
};

/// b is the drift per time level (n_t rows x n_x nodes); step k uses row k.
BackwardOperator assemble_backward_operator(const EllipticCoefficient& a,
                                            const MatrixXd& b,
                                            const Grid& grid);
/// Time-constant drift convenience overload.
BackwardOperator assemble_backward_operator(const EllipticCoefficient& a,
                                            const VectorXd& b,
                                            const Grid& grid);

/// Backward sweep for -phi_t - (a phi_x)_x + b phi_x = psi with phi(T) = xi.
/// psi is indexed like the field; step k consumes psi row k.
MatrixXd solve_linear_backward(const BackwardOperator& op, const VectorXd& xi,
                               const MatrixXd& psi);
MatrixXd solve_linear_backward(const BackwardOperator& op, const VectorXd& xi);

/// Forward sweep for mu_t - (a mu_x)_x - (mu b)_x = (c)_x with zero total
/// flux [a mu_x + mu b + c] nu = 0. Each step applies the transpose of the
/// corresponding backward step in the quadrature inner product, so the
/// discrete duality identity holds to machine precision. c is node-valued;
/// it is averaged to faces with zero boundary faces.
MatrixXd solve_fokker_planck_forward(const BackwardOperator& op,
                                     const VectorXd& mu0, const MatrixXd& c);
MatrixXd solve_fokker_planck_forward(const BackwardOperator& op,
                                     const VectorXd& mu0);

/// Node-valued source f with <f, phi>_w = sum_faces c_face (D phi)_face dx
/// structure: the discrete divergence of the face average of c with zero
/// boundary faces. Conserves mass exactly.
VectorXd divergence_source(const Grid& grid, const VectorXd& c_nodes);

/// Defect of the discrete weak identity
///   <mu(t_n), xi> + dt sum <mu^{k+1}, psi^k> =
///   <mu0, phi^0> + dt sum <f^{k+1}, phi^k>
/// for the fields produced by the two sweeps above.
double duality_defect(const BackwardOperator& op, const VectorXd& xi,
                      const MatrixXd& psi, const VectorXd& mu0,
                      const MatrixXd& c);

/// Semi-implicit HJB sweep: diffusion (and b_tilde) implicit, Hamiltonian
/// explicit through H(x, Du^{k+1}) with the Neumann gradient closure.
/// The terminal datum must satisfy the discrete compatibility a Dg nu = 0
/// within tolerance; the level-k source is F(x, m_path(k)).
MatrixXd solve_hjb_backward(const MfgModel& model, const MatrixXd& m_path,
                            const VectorXd& g);

/// One-sided boundary-derivative compatibility defect |a Dg nu| of a
/// terminal datum.
double terminal_compatibility_defect(const MfgModel& model, const VectorXd& g);

}  // namespace mfg

#endif
