#include "mfg/metrics.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "mfg/fd.hpp"

namespace mfg {

double wasserstein1(const Grid& grid, const VectorXd& d1, const VectorXd& d2) {
  if (d1.size() != grid.n_x || d2.size() != grid.n_x)
    throw std::invalid_argument("wasserstein1: grid mismatch");
  // CDF difference of the induced atomic measures is constant on each
  // inter-node interval; the L1 integral is a plain weighted sum.
  double acc = 0.0;
  double cdf_gap = 0.0;
  for (int j = 0; j < grid.n_x - 1; ++j) {
    cdf_gap += (d1(j) - d2(j)) * grid.weights(j);
    acc += std::abs(cdf_gap) * grid.dx;
  }
  return acc;
}

double wasserstein1(const Grid& grid, const GridMeasure& m1,
                    const GridMeasure& m2) {
  return wasserstein1(grid, m1.values, m2.values);
}

TestDictionary default_dictionary(const Grid& grid, HolderOrder order,
                                  int n_cos, int n_random, unsigned seed) {
  TestDictionary dict;
  dict.order = order;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto push_cosine_combo = [&](const std::vector<double>& coeffs) {
    VectorXd phi = VectorXd::Zero(grid.n_x);
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      for (int j = 0; j < grid.n_x; ++j)
        phi(j) += coeffs[n] * std::cos(static_cast<double>(n) * M_PI * grid.x(j));
    dict.phis.push_back(phi);
    dict.norms.push_back(discrete_holder_norm(grid, phi, order));
    // Cosine combinations have analytically vanishing boundary derivative.
    dict.neumann_admissible.push_back(true);
  };

  for (int n = 0; n <= n_cos; ++n) {
    std::vector<double> coeffs(n + 1, 0.0);
    coeffs[n] = 1.0;
    push_cosine_combo(coeffs);
  }
  for (int r = 0; r < n_random; ++r) {
    std::vector<double> coeffs(9, 0.0);
    for (int n = 0; n < 9; ++n)
      coeffs[n] = unif(rng) / std::pow(1.0 + n, 3.0);
    push_cosine_combo(coeffs);
  }
  return dict;
}

std::string dictionary_to_json(const TestDictionary& dict) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"order\":" << static_cast<int>(dict.order) << ",\"entries\":[";
  for (std::size_t k = 0; k < dict.phis.size(); ++k) {
    if (k) os << ",";
    os << "{\"norm\":" << dict.norms[k] << ",\"neumann\":"
       << (dict.neumann_admissible[k] ? "true" : "false") << ",\"values\":[";
    for (int j = 0; j < dict.phis[k].size(); ++j) {
      if (j) os << ",";
      os << dict.phis[k](j);
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

double dual_norm(const Grid& grid, const VectorXd& rho,
                 const TestDictionary& dict) {
  if (dict.phis.empty())
    throw std::invalid_argument("dual_norm: empty dictionary");
  double best = 0.0;
  for (std::size_t k = 0; k < dict.phis.size(); ++k) {
    if (dict.norms[k] <= 0.0) continue;
    double pairing = std::abs(grid.weights.dot(rho.cwiseProduct(dict.phis[k])));
    best = std::max(best, pairing / dict.norms[k]);
  }
  return best;
}

namespace {

double holder_quotient(const Grid& grid, const VectorXd& g, double exponent) {
  // Pairs closer than 2 dx are skipped: finite-difference noise hygiene.
  double worst = 0.0;
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = i + 2; j < grid.n_x; ++j) {
      double dist = (j - i) * grid.dx;
      worst = std::max(worst, std::abs(g(i) - g(j)) / std::pow(dist, exponent));
    }
  return worst;
}

}  // namespace

double discrete_holder_norm(const Grid& grid, const VectorXd& field,
                            HolderOrder order) {
  if (field.size() != grid.n_x)
    throw std::invalid_argument("discrete_holder_norm: grid mismatch");
  const double sup0 = field.cwiseAbs().maxCoeff();
  switch (order) {
    case HolderOrder::Zero:
      return sup0;
    case HolderOrder::Alpha:
      return sup0 + holder_quotient(grid, field, grid.alpha);
    case HolderOrder::OnePlusAlpha: {
      VectorXd g = fd_gradient(grid, field);
      return sup0 + g.cwiseAbs().maxCoeff() +
             holder_quotient(grid, g, grid.alpha);
    }
    case HolderOrder::TwoPlusAlpha: {
      VectorXd g = fd_gradient(grid, field);
      VectorXd s = fd_second_derivative_neumann(grid, field);
      return sup0 + g.cwiseAbs().maxCoeff() + s.cwiseAbs().maxCoeff() +
             holder_quotient(grid, s, grid.alpha);
    }
  }
  throw std::invalid_argument("discrete_holder_norm: unsupported order");
}

double lp_spacetime_norm(const Grid& grid, const MatrixXd& field, double alpha) {
  if (field.rows() != grid.n_t || field.cols() != grid.n_x)
    throw std::invalid_argument("lp_spacetime_norm: grid mismatch");
  const double p = 3.0 / (2.0 + alpha);
  double acc = 0.0;
  for (int k = 0; k < grid.n_t; ++k) {
    double wt = (k == 0 || k == grid.n_t - 1) ? grid.dt / 2.0 : grid.dt;
    for (int j = 0; j < grid.n_x; ++j)
      acc += std::pow(std::abs(field(k, j)), p) * grid.weights(j) * wt;
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace mfg
