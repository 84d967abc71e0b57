#include "mfg/model.hpp"

#include <cmath>
#include <random>

#include "mfg/fd.hpp"

namespace mfg {

EllipticCoefficient make_elliptic(const Grid& grid, VectorXd a_values) {
  if (a_values.size() != grid.n_x)
    throw std::invalid_argument("make_elliptic: size mismatch");
  EllipticCoefficient e;
  e.lambda_bound = a_values.minCoeff();
  e.mu_bound = a_values.maxCoeff();
  e.b_tilde = fd_gradient(grid, a_values);
  e.a = std::move(a_values);
  return e;
}

EllipticCoefficient constant_elliptic(const Grid& grid, double value) {
  return make_elliptic(grid, VectorXd::Constant(grid.n_x, value));
}

EllipticCoefficient affine_elliptic(const Grid& grid, double c0, double c1) {
  VectorXd a(grid.n_x);
  for (int j = 0; j < grid.n_x; ++j) a(j) = c0 + c1 * grid.x(j);
  return make_elliptic(grid, a);
}

Hamiltonian sqrt1p_hamiltonian(const Grid& grid, VectorXd potential) {
  Hamiltonian ham;
  ham.lip_p = 1.0;
  ham.hpp_upper = 1.0;
  if (potential.size() == 0) {
    ham.h = [](double, double p) { return std::sqrt(1.0 + p * p) - 1.0; };
  } else {
    if (potential.size() != grid.n_x)
      throw std::invalid_argument("sqrt1p_hamiltonian: potential size mismatch");
    const double dx = grid.dx;
    const VectorXd v = std::move(potential);
    ham.h = [v, dx](double x, double p) {
      double s = std::clamp(x / dx, 0.0, static_cast<double>(v.size() - 1));
      int j = std::min(static_cast<int>(s), static_cast<int>(v.size()) - 2);
      double w = s - j;
      double vx = (1.0 - w) * v(j) + w * v(j + 1);
      return std::sqrt(1.0 + p * p) - 1.0 + vx;
    };
  }
  ham.hp = [](double, double p) { return p / std::sqrt(1.0 + p * p); };
  ham.hpp = [](double, double p) {
    double q = 1.0 + p * p;
    return 1.0 / (q * std::sqrt(q));
  };
  return ham;
}

CouplingKernel cosine_kernel(const Grid& grid, const std::vector<double>& coeffs) {
  CouplingKernel kernel;
  kernel.cos_coeffs = coeffs;
  kernel.k = MatrixXd::Zero(grid.n_x, grid.n_x);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    VectorXd mode(grid.n_x);
    for (int j = 0; j < grid.n_x; ++j)
      mode(j) = std::cos(static_cast<double>(n) * M_PI * grid.x(j));
    kernel.k += coeffs[n] * mode * mode.transpose();
  }
  return kernel;
}

CouplingKernel zero_kernel(const Grid& grid) {
  CouplingKernel kernel;
  kernel.k = MatrixXd::Zero(grid.n_x, grid.n_x);
  return kernel;
}

MfgModel reference_model(const Grid& grid, double c0, double c1) {
  MfgModel model;
  model.grid = grid;
  model.a = constant_elliptic(grid, 1.0);
  model.h = sqrt1p_hamiltonian(grid);
  model.f_coupling = cosine_kernel(grid, {c0, c1});
  model.g_coupling = cosine_kernel(grid, {c0, c1});
  return model;
}

VectorXd coupling_value(const Grid& grid, const CouplingKernel& kernel,
                        const VectorXd& density) {
  if (density.size() != grid.n_x)
    throw std::invalid_argument("coupling_value: grid mismatch");
  return kernel.k * density.cwiseProduct(grid.weights);
}

VectorXd coupling_value(const Grid& grid, const CouplingKernel& kernel,
                        const GridMeasure& m) {
  return coupling_value(grid, kernel, m.values);
}

double coupling_flat_derivative(const CouplingKernel& kernel, int x_index,
                                int y_index) {
  if (x_index < 0 || x_index >= kernel.k.rows() || y_index < 0 ||
      y_index >= kernel.k.cols())
    throw std::out_of_range("coupling_flat_derivative: index out of range");
  return kernel.k(x_index, y_index);
}

namespace {

CheckResult monotonicity_check(const std::string& name, const Grid& grid,
                               const CouplingKernel& kernel, int n_pairs,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double scale = std::max(1.0, kernel.k.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int trial = 0; trial < n_pairs; ++trial) {
    VectorXd rho(grid.n_x);
    for (int j = 0; j < grid.n_x; ++j) rho(j) = unif(rng);
    rho.array() -= grid.weights.dot(rho);  // weights sum to 1
    VectorXd wr = rho.cwiseProduct(grid.weights);
    double q = wr.dot(kernel.k * wr);
    worst = std::min(worst, q);
  }
  CheckResult r;
  r.name = name;
  r.value = worst;
  r.pass = worst >= -1e-12 * scale;
  r.detail = "min quadratic form over zero-mean signed measures";
  return r;
}

CheckResult kernel_neumann_check(const std::string& name, const Grid& grid,
                                 const MatrixXd& k, bool in_x) {
  // One-sided second-order boundary derivative should vanish up to O(dx^2).
  const double tol = 50.0 * grid.dx * grid.dx * (1.0 + k.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    VectorXd slice = in_x ? VectorXd(k.col(i)) : VectorXd(k.row(i).transpose());
    worst = std::max(worst, std::abs(fd_one_sided_left(slice, grid.dx)));
    worst = std::max(worst, std::abs(fd_one_sided_right(slice, grid.dx)));
  }
  CheckResult r;
  r.name = name;
  r.value = worst;
  r.pass = worst <= tol;
  r.detail = "max one-sided boundary derivative of the kernel";
  return r;
}

}  // namespace

HypothesesReport validate_hypotheses(const MfgModel& model, int n_random_pairs,
                                     unsigned seed) {
  HypothesesReport report;
  const Grid& grid = model.grid;
  std::mt19937_64 rng(seed);

  {
    CheckResult r;
    r.name = "(i) ellipticity";
    double amin = model.a.a.minCoeff();
    double amax = model.a.a.maxCoeff();
    r.value = amin;
    r.pass = model.a.lambda_bound > 0.0 && amin >= model.a.lambda_bound - 1e-14 &&
             amax <= model.a.mu_bound + 1e-14;
    r.detail = "lambda <= a(x) <= mu with lambda > 0";
    report.checks.push_back(r);
  }

  {
    // (iii) 0 < H_pp <= C on an (x,p) sample lattice, plus the Lipschitz
    // bound in p and consistency of H_p with H.
    CheckResult r;
    r.name = "(iii) hamiltonian convexity window";
    double hpp_min = 1e300, hpp_max = -1e300;
    double lip_worst = 0.0, cons_worst = 0.0;
    const double dp = 1e-3;
    for (int i = 0; i <= 20; ++i) {
      double x = i / 20.0;
      for (int jp = 0; jp <= 24; ++jp) {
        double p = -3.0 + 6.0 * jp / 24.0;
        double hpp = model.h.hpp(x, p);
        hpp_min = std::min(hpp_min, hpp);
        hpp_max = std::max(hpp_max, hpp);
        double q = p + 0.37 * (jp + 1);
        double lip = std::abs(model.h.h(x, p) - model.h.h(x, q)) /
                     std::max(1e-30, std::abs(p - q));
        lip_worst = std::max(lip_worst, lip);
        double cd = (model.h.h(x, p + dp) - model.h.h(x, p - dp)) / (2.0 * dp);
        cons_worst = std::max(cons_worst, std::abs(cd - model.h.hp(x, p)));
      }
    }
    r.value = hpp_max;
    r.pass = hpp_min > 0.0 && hpp_max <= model.h.hpp_upper + 1e-12 &&
             lip_worst <= model.h.lip_p + 1e-12 && cons_worst <= 10.0 * dp * dp;
    r.detail = "0 < H_pp <= C, |H|_Lip(p) <= lip_p, H_p consistent with H";
    report.checks.push_back(r);
  }

  report.checks.push_back(monotonicity_check("(iv) F monotone", grid,
                                             model.f_coupling, n_random_pairs,
                                             rng));
  report.checks.push_back(monotonicity_check("(v) G monotone", grid,
                                             model.g_coupling, n_random_pairs,
                                             rng));
  report.checks.push_back(
      kernel_neumann_check("(vi) F kernel Neumann in y", grid,
                           model.f_coupling.k, false));
  report.checks.push_back(
      kernel_neumann_check("(vi) G kernel Neumann in y", grid,
                           model.g_coupling.k, false));
  report.checks.push_back(kernel_neumann_check("(vi) G kernel Neumann in x",
                                               grid, model.g_coupling.k, true));

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace mfg
