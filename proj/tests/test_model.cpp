#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/model.hpp"

using namespace mfg;

TEST_CASE("affine diffusion has exact derivative drift") {
  Grid g = build_grid(41, 2, 0.0, 1.0, 0.5);
  EllipticCoefficient a = affine_elliptic(g, 1.0, 0.5);
  for (int j = 0; j < g.n_x; ++j)
    CHECK(a.b_tilde(j) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.lambda_bound == doctest::Approx(1.0));
  CHECK(a.mu_bound == doctest::Approx(1.5));
}

TEST_CASE("sqrt1p hamiltonian basics") {
  Grid g = build_grid(11, 2, 0.0, 1.0, 0.5);
  Hamiltonian h = sqrt1p_hamiltonian(g);
  CHECK(h.h(0.3, 0.0) == doctest::Approx(0.0));
  CHECK(h.hp(0.3, 0.0) == doctest::Approx(0.0));
  for (double p : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    CHECK(h.hpp(0.1, p) > 0.0);
    CHECK(h.hpp(0.1, p) <= 1.0 + 1e-15);
    double fd = (h.h(0.1, p + 1e-6) - h.h(0.1, p - 1e-6)) / 2e-6;
    CHECK(h.hp(0.1, p) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("coupling evaluation") {
  Grid g = build_grid(41, 2, 0.0, 1.0, 0.5);
  GridMeasure uniform = make_measure(g, VectorXd::Ones(g.n_x));

  CouplingKernel unit = cosine_kernel(g, {1.0});
  VectorXd f = coupling_value(g, unit, uniform);
  for (int j = 0; j < g.n_x; ++j)
    CHECK(f(j) == doctest::Approx(1.0).epsilon(1e-14));

  CouplingKernel mode = cosine_kernel(g, {0.0, 1.0});
  VectorXd f2 = coupling_value(g, mode, uniform);
  // Trapezoid integrates the first cosine mode to zero exactly.
  CHECK(f2.cwiseAbs().maxCoeff() <= 1e-13);

  GridMeasure d = delta_measure(g, 13);
  VectorXd f3 = coupling_value(g, mode, d);
  for (int i = 0; i < g.n_x; ++i)
    CHECK(f3(i) == doctest::Approx(mode.k(i, 13)).epsilon(1e-13));
}

TEST_CASE("flat derivative is the kernel") {
  Grid g = build_grid(21, 2, 0.0, 1.0, 0.5);
  CouplingKernel k = cosine_kernel(g, {0.5, 0.3});
  CHECK(coupling_flat_derivative(k, 3, 7) == doctest::Approx(k.k(3, 7)));
  CHECK(coupling_flat_derivative(k, 3, 7) ==
        doctest::Approx(coupling_flat_derivative(k, 7, 3)).epsilon(1e-14));
  CHECK_THROWS_AS(coupling_flat_derivative(k, -1, 0), std::out_of_range);
  CHECK_THROWS_AS(coupling_flat_derivative(k, 0, 21), std::out_of_range);
  // Kernel built from cosines is flat in y at the boundary: the first two
  // nodes differ only at second order.
  double diff = std::abs(k.k(5, 0) - k.k(5, 1));
  CHECK(diff <= 10.0 * g.dx * g.dx);
}

TEST_CASE("hypotheses validation on the reference model") {
  Grid g = build_grid(41, 11, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  HypothesesReport report = validate_hypotheses(model, 64);
  for (const auto& check : report.checks) {
    INFO(check.name, " value ", check.value);
    CHECK(check.pass);
  }
  CHECK(report.pass);
}

TEST_CASE("hypotheses validation catches violations") {
  Grid g = build_grid(41, 11, 0.0, 1.0, 0.5);

  MfgModel bad_kernel = reference_model(g);
  bad_kernel.f_coupling = cosine_kernel(g, {0.0, -1.0});
  HypothesesReport r1 = validate_hypotheses(bad_kernel, 64);
  CHECK_FALSE(r1.pass);

  MfgModel bad_a = reference_model(g);
  bad_a.a = make_elliptic(g, VectorXd::Zero(g.n_x));
  HypothesesReport r2 = validate_hypotheses(bad_a, 8);
  CHECK_FALSE(r2.pass);
}
