#ifndef MFG_MASTER_HPP
#define MFG_MASTER_HPP

#include <map>
#include <string>
#include <vector>

#include "mfg/linearized.hpp"
#include "mfg/rate_fit.hpp"

namespace mfg {

/// One evaluation of the master field at (t0, m0): the value U(t0, ., m0),
/// its measure derivative as a kernel K (raw and m0-normalized), the
/// intrinsic derivative DmU = D_y K, the probed time derivative, and the
/// assembled equation residual.
struct MasterSample {
  double t0 = 0.0;
  VectorXd m0;
  VectorXd u;             // U(t0, ., m0) on the x-grid
  MatrixXd k_raw;         // delta U / delta m, x-node by y-node
  MatrixXd k;             // normalized: pairs to zero against m0
  MatrixXd dm_u;          // intrinsic derivative D_m U
  VectorXd dt_u;          // one-sided time-derivative probe
  VectorXd residual;      // master-equation residual in x
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double boundary_x = 0.0;  // max |a U_x nu| at x in {0,1}
  double boundary_y = 0.0;  // max |a DmU nu| at y in {0,1}
  std::map<std::string, double> diagnostics;
};

/// Restriction of the model to the sub-interval [t(level), T] (same space
/// grid, same data). level indexes the time grid of the original model.
MfgModel restrict_model(const MfgModel& model, int level);

/// Nearest time level to t0; throws when t0 is not within dt/2 of a level.
int time_level_of(const Grid& grid, double t0);

/// U(t0, ., m0) = u(t0, .) of the MFG solution started at (t0, m0).
/// At t0 = T this is G(., m0) exactly.
MasterSample evaluate_master(const MfgModel& model, double t0,
                             const GridMeasure& m0, double tol = 1e-9,
                             int max_iter = 200);

/// evaluate_master plus the fundamental kernel, its normalization, and the
/// intrinsic derivative.
MasterSample flat_derivative_field(const MfgModel& model, double t0,
                                   const GridMeasure& m0, int n_jobs = 0,
                                   double tol = 1e-9, int max_iter = 200);

/// One-sided difference (U(t0+dt_probe) - U(t0)) / dt_probe at fixed m0;
/// dt_probe <= 0 uses the grid step. Throws when t0 + dt_probe > T or the
/// probe does not land on a grid level.
VectorXd time_derivative_master(const MfgModel& model, double t0,
                                const GridMeasure& m0, double dt_probe = 0.0,
                                double tol = 1e-9);

/// Full sample with the master-equation residual
///   -dtU - a U_xx + H(x, U_x) - sum_j a(y_j) (D_y DmU)(x, y_j) m0_j w_j
///   + sum_j DmU(x, y_j) H_p(y_j, U_x(y_j)) m0_j w_j - F(x, m0)
/// and the two Neumann boundary residuals.
MasterSample master_residual(const MfgModel& model, double t0,
                             const GridMeasure& m0, int n_jobs = 0,
                             double tol = 1e-9, int max_iter = 200);

/// max over sampled interior levels of |U(t, ., m(t)) - u(t, .)|_inf where
/// (u, m) is the MFG solution from (t0, m0); U is re-evaluated by a fresh
/// solve at each sampled level.
double probe_flow_consistency(const MfgModel& model, double t0,
                              const GridMeasure& m0, int n_samples = 5,
                              double tol = 1e-9, int max_iter = 200);

struct LipschitzRatio {
  double d1_initial = 0.0;
  double field_ratio = 0.0;     // |U(., m01) - U(., m02)|_inf / d1
  double gradient_ratio = 0.0;  // same for the gradient sup-norm
  double flow_ratio = 0.0;      // sup_t d1(m1(t), m2(t)) / d1
  bool skipped = false;         // identical pair
};

std::vector<LipschitzRatio> probe_lipschitz(
    const MfgModel& model, double t0,
    const std::vector<std::pair<GridMeasure, GridMeasure>>& pairs,
    double tol = 1e-9, int max_iter = 200);

struct RemainderProbe {
  RateFit fit;                 // log r(s) against log d1(m_s, m0)
  std::vector<double> s_values;
  std::vector<double> d1_values;
  std::vector<double> remainders;
  bool degenerate = false;     // all remainders at rounding level
};

/// r(s) = |U(., m_s) - U(., m0) - <K(t0, ., m0, .), m_s - m0>|_inf with
/// m_s = (1-s) m0 + s m1; returns the fitted slope of r against d1.
RemainderProbe probe_remainder_order(const MfgModel& model, double t0,
                                     const GridMeasure& m0,
                                     const GridMeasure& m1,
                                     const std::vector<double>& s_ladder,
                                     int n_jobs = 0, double tol = 1e-11,
                                     int max_iter = 400);

/// Writes U.csv, K.csv, DmU.csv, residual.csv, diagnostics.json into dir.
void write_master_sample(const MasterSample& sample, const Grid& grid,
                         const std::string& dir);

}  // namespace mfg

#endif
