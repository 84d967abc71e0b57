#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mfg/master.hpp"

using namespace mfg;

namespace {

MfgModel decoupled_model(const Grid& g, double c0) {
  MfgModel model;
  model.grid = g;
  model.a = constant_elliptic(g, 1.0);
  model.h = sqrt1p_hamiltonian(g);
  model.f_coupling = zero_kernel(g);
  model.g_coupling = cosine_kernel(g, {c0});
  return model;
}

GridMeasure bumped_measure(const Grid& g, double amp) {
  VectorXd v(g.n_x);
  for (int j = 0; j < g.n_x; ++j) v(j) = 1.0 + amp * std::cos(M_PI * g.x(j));
  return normalized_measure(g, v);
}

}  // namespace

TEST_CASE("time level lookup") {
  Grid g = build_grid(11, 21, 0.0, 1.0, 0.5);
  CHECK(time_level_of(g, 0.0) == 0);
  CHECK(time_level_of(g, g.T) == g.n_t - 1);
  CHECK(time_level_of(g, g.t(7)) == 7);
  CHECK_THROWS_AS(time_level_of(g, g.t(7) + 0.4 * g.dt),
                  std::invalid_argument);
  CHECK_THROWS_AS(time_level_of(g, g.T + g.dt), std::invalid_argument);
}

TEST_CASE("model restriction keeps space grid and shortens time") {
  Grid g = build_grid(21, 41, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  MfgModel sub = restrict_model(model, 10);
  CHECK(sub.grid.n_x == g.n_x);
  CHECK(sub.grid.n_t == g.n_t - 10);
  CHECK(sub.grid.t(0) == doctest::Approx(g.t(10)).epsilon(1e-14));
  CHECK(sub.grid.T == g.T);
  CHECK(sub.grid.dt == doctest::Approx(g.dt).epsilon(1e-14));
  for (int j = 0; j < g.n_x; ++j) CHECK(sub.grid.x(j) == g.x(j));
}

TEST_CASE("terminal evaluation returns the terminal coupling exactly") {
  Grid g = build_grid(31, 41, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  GridMeasure m0 = bumped_measure(g, 0.3);
  MasterSample s = evaluate_master(model, g.T, m0);
  VectorXd gval = coupling_value(g, model.g_coupling, m0.values);
  CHECK((s.u - gval).cwiseAbs().maxCoeff() <= 1e-13);

  // At t0 = T the flat derivative is the terminal kernel itself.
  MasterSample sk = flat_derivative_field(model, g.T, m0, 2);
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j)
      CHECK(std::abs(sk.k_raw(i, j) - model.g_coupling.k(i, j)) <= 1e-12);
}

TEST_CASE("decoupled master field is constant with zero derivatives") {
  Grid g = build_grid(26, 31, 0.0, 1.0, 0.5);
  MfgModel model = decoupled_model(g, 1.5);
  GridMeasure m0 = bumped_measure(g, 0.3);

  MasterSample s = master_residual(model, g.t(10), m0, 2, 1e-11, 200);
  CHECK((s.u.array() - 1.5).abs().maxCoeff() <= 1e-10);
  CHECK(s.dt_u.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(s.dm_u.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(s.residual_sup <= 1e-7);
  CHECK(s.boundary_x <= 1e-12);
}

TEST_CASE("constant running cost gives an exact linear-in-time field") {
  Grid g = build_grid(26, 41, 0.0, 1.0, 0.5);
  MfgModel model = decoupled_model(g, 0.0);
  model.g_coupling = zero_kernel(g);
  model.f_coupling = cosine_kernel(g, {0.7});
  GridMeasure m0 = bumped_measure(g, 0.2);

  double t0 = g.t(10);
  MasterSample s = evaluate_master(model, t0, m0, 1e-11, 200);
  CHECK((s.u.array() - 0.7 * (g.T - t0)).abs().maxCoeff() <= 1e-10);

  // u is linear in time, so the one-sided probe is exact.
  VectorXd dt_u = time_derivative_master(model, t0, m0, 0.0, 1e-11);
  CHECK((dt_u.array() + 0.7).abs().maxCoeff() <= 1e-8);

  MasterSample full = master_residual(model, t0, m0, 2, 1e-11, 200);
  CHECK(full.residual_sup <= 1e-7);
  CHECK(full.boundary_x <= 1e-12);
}

TEST_CASE("time derivative probe validates its arguments") {
  Grid g = build_grid(21, 21, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  GridMeasure m0 = bumped_measure(g, 0.2);
  CHECK_THROWS_AS(time_derivative_master(model, g.T, m0),
                  std::invalid_argument);
  CHECK_THROWS_AS(time_derivative_master(model, 0.0, m0, 0.3 * g.dt),
                  std::invalid_argument);
}

TEST_CASE("intrinsic derivative of the terminal kernel matches analytics") {
  Grid g = build_grid(41, 11, 0.0, 1.0, 0.5);
  MfgModel model = decoupled_model(g, 0.0);
  model.g_coupling = cosine_kernel(g, {0.0, 0.8});  // 0.8 cos(pi x) cos(pi y)
  GridMeasure m0 = bumped_measure(g, 0.2);
  MasterSample s = flat_derivative_field(model, g.T, m0, 2);
  double worst = 0.0;
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_x; ++j) {
      double exact =
          -0.8 * M_PI * std::cos(M_PI * g.x(i)) * std::sin(M_PI * g.x(j));
      worst = std::max(worst, std::abs(s.dm_u(i, j) - exact));
    }
  CHECK(worst <= 10.0 * g.dx * g.dx);
}

TEST_CASE("flow consistency on the reference model") {
  Grid g = build_grid(26, 31, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  GridMeasure m0 = bumped_measure(g, 0.3);
  double defect = probe_flow_consistency(model, 0.0, m0, 4, 1e-10, 200);
  CHECK(defect <= 1e-9);
}

TEST_CASE("lipschitz probe reports finite ratios and skips equal pairs") {
  Grid g = build_grid(26, 31, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  GridMeasure m1 = bumped_measure(g, 0.3);
  GridMeasure m2 = bumped_measure(g, -0.2);
  std::vector<std::pair<GridMeasure, GridMeasure>> pairs = {{m1, m2},
                                                            {m1, m1}};
  auto ratios = probe_lipschitz(model, 0.0, pairs, 1e-10, 200);
  REQUIRE(ratios.size() == 2);
  CHECK(!ratios[0].skipped);
  CHECK(ratios[0].d1_initial > 0.0);
  CHECK(ratios[0].field_ratio > 0.0);
  CHECK(std::isfinite(ratios[0].field_ratio));
  CHECK(std::isfinite(ratios[0].gradient_ratio));
  CHECK(ratios[0].flow_ratio > 0.0);
  CHECK(ratios[1].skipped);
}

TEST_CASE("remainder probe is degenerate when the field is measure-linear") {
  Grid g = build_grid(21, 26, 0.0, 1.0, 0.5);
  // Terminal time: U(T, ., m) = G(., m) is linear in m, so the first-order
  // expansion is exact and all remainders sit at rounding level.
  MfgModel model = reference_model(g);
  GridMeasure m0 = bumped_measure(g, 0.2);
  GridMeasure m1 = bumped_measure(g, -0.2);
  RemainderProbe probe = probe_remainder_order(model, g.T, m0, m1,
                                               {0.2, 0.1, 0.05}, 2);
  CHECK(probe.degenerate);
}

TEST_CASE("sample files round-trip") {
  Grid g = build_grid(11, 11, 0.0, 1.0, 0.5);
  MfgModel model = decoupled_model(g, 1.0);
  GridMeasure m0 = bumped_measure(g, 0.2);
  MasterSample s = master_residual(model, 0.5, m0, 2, 1e-10, 200);

  std::string dir = "master_sample_out";
  std::filesystem::remove_all(dir);
  write_master_sample(s, g, dir);
  for (const char* name : {"U.csv", "K.csv", "DmU.csv", "residual.csv",
                           "diagnostics.json"})
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / name));

  std::ifstream in(std::filesystem::path(dir) / "diagnostics.json");
  nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.contains("residual_sup"));
  CHECK(j.contains("boundary_x"));
  CHECK(j.contains("boundary_y"));
  CHECK(j["t0"].get<double>() == doctest::Approx(0.5).epsilon(1e-14));
  std::filesystem::remove_all(dir);
}
