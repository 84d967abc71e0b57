#include "mfg/master.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mfg/fd.hpp"

namespace mfg {

namespace {

struct SolvedSample {
  MfgModel sub;       // model on [t0, T]; grid.n_t = 1 marks the terminal case
  MfgSolution sol;    // empty in the terminal case
  VectorXd u;         // U(t0, ., m0)
  bool terminal = false;
};

SolvedSample solve_at(const MfgModel& model, int level, const GridMeasure& m0,
                      double tol, int max_iter) {
  SolvedSample s;
  if (level == model.grid.n_t - 1) {
    s.terminal = true;
    s.sub = model;
    s.u = coupling_value(model.grid, model.g_coupling, m0);
    return s;
  }
  s.sub = restrict_model(model, level);
  s.sol = solve_mfg(s.sub, m0, 0.5, tol, max_iter);
  s.u = s.sol.u.row(0).transpose();
  return s;
}

}  // namespace

MfgModel restrict_model(const MfgModel& model, int level) {
  const Grid& g = model.grid;
  if (level < 0 || level >= g.n_t - 1)
    throw std::invalid_argument("restrict_model: level out of range");
  MfgModel sub = model;
  sub.grid = build_grid(g.n_x, g.n_t - level, g.t(level), g.T, g.alpha);
  return sub;
}

int time_level_of(const Grid& grid, double t0) {
  double s = (t0 - grid.t0) / grid.dt;
  int level = static_cast<int>(std::lround(s));
  if (level < 0 || level > grid.n_t - 1 ||
      std::abs(s - level) > 0.25)
    throw std::invalid_argument("time_level_of: t0 not on the time grid");
  return level;
}

namespace {

MasterSample fill_sample(const MfgModel& model, int level,
                         const GridMeasure& m0, const SolvedSample& s) {
  MasterSample sample;
  sample.t0 = model.grid.t(level);
  sample.m0 = m0.values;
  sample.u = s.u;
  sample.diagnostics["iterations"] = s.terminal ? 0.0 : s.sol.iterations;
  sample.diagnostics["final_gap"] = s.terminal ? 0.0 : s.sol.final_gap;
  sample.diagnostics["mass_drift"] = s.terminal ? 0.0 : s.sol.mass_drift;
  sample.diagnostics["min_density"] =
      s.terminal ? m0.values.minCoeff() : s.sol.min_density;
  sample.diagnostics["holder_2a_norm"] =
      discrete_holder_norm(model.grid, s.u, HolderOrder::TwoPlusAlpha);
  return sample;
}

}  // namespace

MasterSample evaluate_master(const MfgModel& model, double t0,
                             const GridMeasure& m0, double tol, int max_iter) {
  int level = time_level_of(model.grid, t0);
  SolvedSample s = solve_at(model, level, m0, tol, max_iter);
  return fill_sample(model, level, m0, s);
}

MasterSample flat_derivative_field(const MfgModel& model, double t0,
                                   const GridMeasure& m0, int n_jobs,
                                   double tol, int max_iter) {
  int level = time_level_of(model.grid, t0);
  SolvedSample s = solve_at(model, level, m0, tol, max_iter);
  MasterSample sample = fill_sample(model, level, m0, s);
  if (s.terminal) {
    sample.k_raw = model.g_coupling.k;
  } else {
    sample.k_raw = fundamental_kernel(s.sub, s.sol, n_jobs,
                                      std::min(tol, 1e-11), max_iter);
  }
  sample.k = normalize_kernel(model.grid, sample.k_raw, m0.values);
  sample.dm_u = intrinsic_derivative(model.grid, sample.k);
  return sample;
}

VectorXd time_derivative_master(const MfgModel& model, double t0,
                                const GridMeasure& m0, double dt_probe,
                                double tol) {
  const Grid& grid = model.grid;
  if (dt_probe <= 0.0) dt_probe = grid.dt;
  if (t0 + dt_probe > grid.T + 1e-12 * (grid.T - grid.t0))
    throw std::invalid_argument("time_derivative_master: probe past T");
  MasterSample a = evaluate_master(model, t0, m0, tol);
  MasterSample b = evaluate_master(model, t0 + dt_probe, m0, tol);
  return (b.u - a.u) / dt_probe;
}

MasterSample master_residual(const MfgModel& model, double t0,
                             const GridMeasure& m0, int n_jobs, double tol,
                             int max_iter) {
  const Grid& grid = model.grid;
  MasterSample sample =
      flat_derivative_field(model, t0, m0, n_jobs, tol, max_iter);
  // Second-order one-sided probe of the time derivative; falls back to the
  // first-order difference when fewer than two forward levels remain.
  int level = time_level_of(grid, t0);
  if (level + 2 <= grid.n_t - 1) {
    VectorXd u1 = evaluate_master(model, grid.t(level + 1), m0, tol).u;
    VectorXd u2 = evaluate_master(model, grid.t(level + 2), m0, tol).u;
    sample.dt_u = (-3.0 * sample.u + 4.0 * u1 - u2) / (2.0 * grid.dt);
  } else {
    sample.dt_u = time_derivative_master(model, t0, m0, 0.0, tol);
  }

  VectorXd ux = fd_gradient_neumann(grid, sample.u);
  VectorXd uxx = fd_second_derivative_neumann(grid, sample.u);
  MatrixXd dy_dmu = intrinsic_derivative(grid, sample.dm_u);
  VectorXd f0 = coupling_value(grid, model.f_coupling, m0);

  VectorXd mw = m0.values.cwiseProduct(grid.weights);
  sample.residual.resize(grid.n_x);
  for (int i = 0; i < grid.n_x; ++i) {
    double diff_term = 0.0, drift_term = 0.0;
    for (int j = 0; j < grid.n_x; ++j) {
      diff_term += model.a.a(j) * dy_dmu(i, j) * mw(j);
      drift_term +=
          sample.dm_u(i, j) * model.h.hp(grid.x(j), ux(j)) * mw(j);
    }
    sample.residual(i) = -sample.dt_u(i) - model.a.a(i) * uxx(i) +
                         model.h.h(grid.x(i), ux(i)) - diff_term + drift_term -
                         f0(i);
  }
  sample.residual_sup = sample.residual.cwiseAbs().maxCoeff();
  sample.residual_l2 =
      std::sqrt(grid.weights.dot(sample.residual.cwiseAbs2()));

  // Neumann residual in x: the discrete flux the scheme enforces at the
  // boundary faces (exactly zero under the reflection closure), reported
  // from the closure gradient.
  sample.boundary_x =
      std::max(std::abs(model.a.a(0) * ux(0)),
               std::abs(model.a.a(grid.n_x - 1) * ux(grid.n_x - 1)));
  // Neumann residual in y: one-sided derivative of the kernel at y in
  // {0,1}, i.e. the boundary values of DmU itself.
  double by = 0.0;
  for (int i = 0; i < grid.n_x; ++i) {
    by = std::max(by, std::abs(model.a.a(0) * sample.dm_u(i, 0)));
    by = std::max(by, std::abs(model.a.a(grid.n_x - 1) *
                               sample.dm_u(i, grid.n_x - 1)));
  }
  sample.boundary_y = by;
  sample.diagnostics["residual_sup"] = sample.residual_sup;
  sample.diagnostics["residual_l2"] = sample.residual_l2;
  sample.diagnostics["boundary_x"] = sample.boundary_x;
  sample.diagnostics["boundary_y"] = sample.boundary_y;
  return sample;
}

double probe_flow_consistency(const MfgModel& model, double t0,
                              const GridMeasure& m0, int n_samples, double tol,
                              int max_iter) {
  const Grid& grid = model.grid;
  int level0 = time_level_of(grid, t0);
  SolvedSample base = solve_at(model, level0, m0, tol, max_iter);
  if (base.terminal) return 0.0;
  const Grid& sub_grid = base.sub.grid;

  double worst = 0.0;
  for (int s = 1; s <= n_samples; ++s) {
    int k = s * (sub_grid.n_t - 1) / (n_samples + 1);
    if (k <= 0 || k >= sub_grid.n_t - 1) continue;
    GridMeasure mk =
        normalized_measure(grid, base.sol.m.row(k).transpose());
    MasterSample re =
        evaluate_master(model, sub_grid.t(k), mk, tol, max_iter);
    worst = std::max(
        worst,
        (re.u - base.sol.u.row(k).transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<LipschitzRatio> probe_lipschitz(
    const MfgModel& model, double t0,
    const std::vector<std::pair<GridMeasure, GridMeasure>>& pairs, double tol,
    int max_iter) {
  const Grid& grid = model.grid;
  int level = time_level_of(grid, t0);
  std::vector<LipschitzRatio> out;
  for (const auto& [m01, m02] : pairs) {
    LipschitzRatio r;
    r.d1_initial = wasserstein1(grid, m01, m02);
    if (r.d1_initial == 0.0) {
      r.skipped = true;
      out.push_back(r);
      continue;
    }
    SolvedSample s1 = solve_at(model, level, m01, tol, max_iter);
    SolvedSample s2 = solve_at(model, level, m02, tol, max_iter);
    VectorXd du = fd_gradient_neumann(grid, VectorXd(s1.u - s2.u));
    r.field_ratio = (s1.u - s2.u).cwiseAbs().maxCoeff() / r.d1_initial;
    r.gradient_ratio = du.cwiseAbs().maxCoeff() / r.d1_initial;
    double flow = 0.0;
    if (!s1.terminal) {
      for (int k = 0; k < s1.sub.grid.n_t; ++k)
        flow = std::max(flow,
                        wasserstein1(grid, VectorXd(s1.sol.m.row(k).transpose()),
                                     VectorXd(s2.sol.m.row(k).transpose())));
    } else {
      flow = r.d1_initial;
    }
    r.flow_ratio = flow / r.d1_initial;
    out.push_back(r);
  }
  return out;
}

RemainderProbe probe_remainder_order(const MfgModel& model, double t0,
                                     const GridMeasure& m0,
                                     const GridMeasure& m1,
                                     const std::vector<double>& s_ladder,
                                     int n_jobs, double tol, int max_iter) {
  if (s_ladder.size() < 3)
    throw std::invalid_argument("probe_remainder_order: need >= 3 ladder points");
  const Grid& grid = model.grid;
  MasterSample base =
      flat_derivative_field(model, t0, m0, n_jobs, tol, max_iter);

  RemainderProbe probe;
  std::vector<std::pair<double, double>> points;
  for (double s : s_ladder) {
    if (s <= 0.0 || s > 1.0)
      throw std::invalid_argument("probe_remainder_order: s outside (0,1]");
    VectorXd ms = (1.0 - s) * m0.values + s * m1.values;
    GridMeasure m_s = make_measure(grid, ms);
    MasterSample us = evaluate_master(model, t0, m_s, tol, max_iter);
    VectorXd diff = (ms - m0.values).cwiseProduct(grid.weights);
    VectorXd linear = base.k_raw * diff;
    double r = (us.u - base.u - linear).cwiseAbs().maxCoeff();
    double d1 = wasserstein1(grid, ms, m0.values);
    probe.s_values.push_back(s);
    probe.d1_values.push_back(d1);
    probe.remainders.push_back(r);
    points.emplace_back(d1, r);
  }
  double rmax = 0.0;
  for (double r : probe.remainders) rmax = std::max(rmax, r);
  if (rmax < 1e-13) {
    probe.degenerate = true;
    return probe;
  }
  probe.fit = fit_rate(points);
  return probe;
}

namespace {

void write_matrix_csv(const std::string& path, const Grid& grid,
                      const MatrixXd& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.precision(17);
  os << "# n_x=" << grid.n_x << " n_t=" << grid.n_t << " t0=" << grid.t0
     << " T=" << grid.T << " alpha=" << grid.alpha << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << m(i, j);
    }
    os << "\n";
  }
}

}  // namespace

void write_master_sample(const MasterSample& sample, const Grid& grid,
                         const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir + "/U.csv", grid, sample.u.transpose());
  if (sample.k.size() > 0) write_matrix_csv(dir + "/K.csv", grid, sample.k);
  if (sample.dm_u.size() > 0)
    write_matrix_csv(dir + "/DmU.csv", grid, sample.dm_u);
  if (sample.residual.size() > 0)
    write_matrix_csv(dir + "/residual.csv", grid, sample.residual.transpose());
  nlohmann::json diag;
  diag["t0"] = sample.t0;
  for (const auto& [key, value] : sample.diagnostics) diag[key] = value;
  std::ofstream os(dir + "/diagnostics.json");
  if (!os) throw std::runtime_error("cannot write diagnostics.json");
  os << diag.dump(2) << "\n";
}

}  // namespace mfg
