#ifndef MFG_MODEL_HPP
#define MFG_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

/// Scalar diffusion a(x) with ellipticity window and the drift
/// b_tilde = a' that converts divergence form to non-divergence form.
struct EllipticCoefficient {
  VectorXd a;
  double lambda_bound = 0.0;
  double mu_bound = 0.0;
  VectorXd b_tilde;  // centered difference of a inside, one-sided at ends
};

EllipticCoefficient make_elliptic(const Grid& grid, VectorXd a_values);
EllipticCoefficient constant_elliptic(const Grid& grid, double value);
/// a(x) = c0 + c1*x
EllipticCoefficient affine_elliptic(const Grid& grid, double c0, double c1);

/// Hamiltonian triple (H, H_p, H_pp) as pure scalar callables of (x,p).
struct Hamiltonian {
  std::function<double(double, double)> h;
  std::function<double(double, double)> hp;
  std::function<double(double, double)> hpp;
  double lip_p = 1.0;     // Lipschitz constant of H in p
  double hpp_upper = 1.0; // upper bound on H_pp
};

/// H(x,p) = sqrt(1+p^2) - 1 + V(x); globally Lipschitz in p, 0 < H_pp <= 1.
/// The potential is optional (pass an empty vector for V = 0) and is sampled
/// on the grid with linear interpolation between nodes.
Hamiltonian sqrt1p_hamiltonian(const Grid& grid, VectorXd potential = {});

/// Measure-linear coupling: F(x,m) = Int k(x,y) dm(y), so the flat
/// derivative is the kernel itself, independent of m.
struct CouplingKernel {
  MatrixXd k;                       // k(x_i, y_j) on the grid
  std::vector<double> cos_coeffs;   // set when built from a cosine expansion
};

/// k(x,y) = sum_n c_n cos(n pi x) cos(n pi y). Nonnegative coefficients
/// give a monotone coupling.
CouplingKernel cosine_kernel(const Grid& grid, const std::vector<double>& coeffs);
CouplingKernel zero_kernel(const Grid& grid);

struct MfgModel {
  Grid grid;
  EllipticCoefficient a;
  Hamiltonian h;
  CouplingKernel f_coupling;
  CouplingKernel g_coupling;
};

/// The reference monotone model: a = 1, H = sqrt(1+p^2) - 1,
/// k_F = k_G = c0 + c1 cos(pi x) cos(pi y).
MfgModel reference_model(const Grid& grid, double c0 = 0.5, double c1 = 0.3);

/// F(x_i, m) = sum_j k(x_i, y_j) m_j w_j.
VectorXd coupling_value(const Grid& grid, const CouplingKernel& kernel,
                        const GridMeasure& m);
VectorXd coupling_value(const Grid& grid, const CouplingKernel& kernel,
                        const VectorXd& density);

/// delta F / delta m (x_i, m, y_j) = k(x_i, y_j) for every m.
double coupling_flat_derivative(const CouplingKernel& kernel, int x_index,
                                int y_index);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;   // worst observed quantity for the check
  std::string detail;
};

struct HypothesesReport {
  std::vector<CheckResult> checks;
  bool pass = false;
};

/// Machine-checkable validation of the structural hypotheses:
/// (i) ellipticity, (iii) Hamiltonian convexity window, (iv)/(v)
/// monotonicity of F and G on random zero-mean signed measures,
/// (vi) kernel Neumann conditions. Failures are report entries.
HypothesesReport validate_hypotheses(const MfgModel& model, int n_random_pairs,
                                     unsigned seed = 12345);

}  // namespace mfg

#endif
