#ifndef MFG_MFG_SOLVER_HPP
#define MFG_MFG_SOLVER_HPP

#include <stdexcept>
#include <vector>

#include "mfg/parabolic.hpp"

namespace mfg {

/// Coupled forward-backward solution: value field u and density path m,
/// n_t x n_x each, with fixed-point diagnostics.
struct MfgSolution {
  MatrixXd u;             // value function, row k = level t_k
  MatrixXd m;             // density path, row k = level t_k
  int iterations = 0;
  double final_gap = 0.0;         // sup_t d1 between the last two paths
  double hjb_residual = 0.0;      // per-step scheme residual, sup norm
  double fp_residual = 0.0;
  double mass_drift = 0.0;        // max |mass(m(t)) - 1|
  double min_density = 0.0;       // min over all levels and nodes
  bool compatible_m0 = true;      // zero-flux compatibility of the data
  std::vector<double> gap_history;
};

struct NonConvergenceError : std::runtime_error {
  explicit NonConvergenceError(std::string what, std::vector<double> gaps)
      : std::runtime_error(std::move(what)), gap_history(std::move(gaps)) {}
  std::vector<double> gap_history;
};

/// Drift of the density equation at each level: H_p(x, Du) + b_tilde, with
/// the Neumann-closure gradient (zero at the boundary nodes).
MatrixXd density_drift(const MfgModel& model, const MatrixXd& u);

/// One application of the fixed-point map: solve the backward value
/// equation with couplings evaluated along beta, then push m0 = beta(t0)
/// forward with the resulting drift. Returns the new density path.
MatrixXd fixed_point_map(const MfgModel& model, const MatrixXd& beta);

/// Damped Picard iteration m <- (1-theta) m + theta Phi(m), with a
/// fictitious-play (running average) fallback when the sup_t d1 gap stops
/// decreasing for 5 consecutive iterations. Throws NonConvergenceError
/// (carrying the gap history) when max_iter is exceeded.
/// init, when given, seeds the iteration with an arbitrary density path
/// (its row 0 is overwritten by m0); the default seed is m0 frozen in time.
MfgSolution solve_mfg(const MfgModel& model, const GridMeasure& m0,
                      double theta = 0.5, double tol = 1e-9,
                      int max_iter = 200, const MatrixXd* init = nullptr);

/// Both sides of the monotonicity inequality: lhs is the sum of the two
/// Bregman integrals of H plus the coupling monotonicity terms, rhs is
/// -<(u1-u2)(t0), m01-m02>. first = lhs, second = rhs.
struct MonotonicityGap {
  double lhs = 0.0;
  double rhs = 0.0;
  double bregman1 = 0.0;  // each is >= 0 for convex H
  double bregman2 = 0.0;
};

MonotonicityGap monotonicity_gap(const MfgModel& model,
                                 const MfgSolution& sol1,
                                 const MfgSolution& sol2);

/// max over level pairs of d1(m(t), m(s)) / |t-s|^{1/2}.
double holder_time_quotient(const Grid& grid, const MatrixXd& m_path);

}  // namespace mfg

#endif
