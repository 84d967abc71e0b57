#ifndef MFG_METRICS_HPP
#define MFG_METRICS_HPP

#include <string>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

enum class HolderOrder { Zero, Alpha, OnePlusAlpha, TwoPlusAlpha };

/// Wasserstein-1 distance between two grid measures, computed as the L1
/// distance between the cumulative distribution functions of the induced
/// atomic measures (atom m_j w_j at x_j). Exact 1-D dual of the Lipschitz
/// formulation.
double wasserstein1(const Grid& grid, const GridMeasure& m1,
                    const GridMeasure& m2);
double wasserstein1(const Grid& grid, const VectorXd& d1, const VectorXd& d2);

/// Finite family of test functions with precomputed discrete Hoelder norms,
/// used to evaluate lower-bound estimates of negative-order dual norms.
struct TestDictionary {
  std::vector<VectorXd> phis;
  std::vector<double> norms;
  std::vector<bool> neumann_admissible;
  HolderOrder order = HolderOrder::OnePlusAlpha;
};

/// Cosines n = 0..n_cos plus n_random smooth Neumann-admissible random
/// combinations.
TestDictionary default_dictionary(const Grid& grid, HolderOrder order,
                                  int n_cos = 32, int n_random = 16,
                                  unsigned seed = 777);

std::string dictionary_to_json(const TestDictionary& dict);

/// max_k <rho, phi_k> / ||phi_k||; a lower bound of the true dual norm,
/// monotone under dictionary enlargement.
double dual_norm(const Grid& grid, const VectorXd& rho,
                 const TestDictionary& dict);

/// Sup-norms of the field and its finite-difference derivatives up to
/// floor(order), plus the top-derivative Hoelder quotient. Quotients are
/// restricted to node pairs with |x-y| >= 2 dx.
double discrete_holder_norm(const Grid& grid, const VectorXd& field,
                            HolderOrder order);

/// Space-time L^p norm with p = 3/(2+alpha) (the d = 1 exponent of the
/// density stability estimate); trapezoid weights in both variables.
double lp_spacetime_norm(const Grid& grid, const MatrixXd& field, double alpha);

}  // namespace mfg

#endif
