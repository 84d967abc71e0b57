#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mfg/csv.hpp"
#include "mfg/experiments.hpp"
#include "mfg/rate_fit.hpp"

using namespace mfg;

namespace {

std::string write_config(const std::string& name, const std::string& body) {
  std::filesystem::create_directories("harness_tmp");
  std::string path = "harness_tmp/" + name;
  std::ofstream(path) << body;
  return path;
}

const char* kSmallModel = R"({
  "n_x": 21, "n_t": 21, "t0": 0.0, "T": 1.0, "alpha": 0.5,
  "a": {"kind": "constant", "value": 1.0},
  "hamiltonian": {"kind": "sqrt1p"},
  "F": {"cos_coeffs": [0.5, 0.3]},
  "G": {"cos_coeffs": [0.5, 0.3]}
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("rate fit recovers exact and noisy slopes") {
  std::vector<std::pair<double, double>> exact;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) exact.push_back({h, 3.0 * h * h});
  RateFit fit = fit_rate(exact);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.filtered == 0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-0.01, 0.01);
  std::vector<std::pair<double, double>> noisy;
  for (double h : {0.1, 0.05, 0.025, 0.0125, 0.00625})
    noisy.push_back({h, 3.0 * h * h * (1.0 + unif(rng))});
  RateFit nfit = fit_rate(noisy);
  CHECK(std::abs(nfit.slope - 2.0) <= 0.1);

  // Zero errors are filtered out, not fitted.
  std::vector<std::pair<double, double>> with_zero = exact;
  with_zero.push_back({0.2, 0.0});
  RateFit zfit = fit_rate(with_zero);
  CHECK(zfit.filtered == 1);
  CHECK(zfit.slope == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {-0.05, 0.5}, {0.025, 0.2}}),
                  std::invalid_argument);
}

TEST_CASE("csv emit and parse round trip") {
  std::filesystem::create_directories("harness_tmp");
  std::string path = "harness_tmp/t.csv";

  emit_csv({}, path);
  CHECK(read_file(path) == "experiment,parameter,metric,value\n");

  std::vector<CsvRecord> recs = {
      {"duality", "n=41", "max_defect", 1.25e-13},
      {"mfg-solve", "default-init", "iterations", 17.0}};
  emit_csv(recs, path);
  std::vector<CsvRecord> back = parse_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].experiment == "duality");
  CHECK(back[0].parameter == "n=41");
  CHECK(back[0].metric == "max_defect");
  CHECK(back[0].value == 1.25e-13);  // 17 digits round-trip doubles exactly
  CHECK(back[1].value == 17.0);
}

TEST_CASE("random measures are positive probability densities") {
  Grid g = build_grid(41, 2, 0.0, 1.0, 0.5);
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    GridMeasure smooth = random_smooth_measure(g, seed);
    CHECK(std::abs(mass(g, smooth.values) - 1.0) <= 1e-13);
    CHECK(smooth.values.minCoeff() > 0.0);
    GridMeasure rough = random_rough_measure(g, seed);
    CHECK(std::abs(mass(g, rough.values) - 1.0) <= 1e-13);
    CHECK(rough.values.minCoeff() > 0.0);
  }
  // Deterministic in the seed.
  CHECK((random_smooth_measure(g, 7).values -
         random_smooth_measure(g, 7).values)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("unknown experiment kind throws") {
  Grid g = build_grid(11, 11, 0.0, 1.0, 0.5);
  MfgModel model = reference_model(g);
  ExperimentSpec spec;
  spec.kind = "no-such-kind";
  CHECK_THROWS_AS(run_named_experiment(spec, model), UnknownExperimentError);
}

TEST_CASE("harness run on a small passing config") {
  std::string cfg = write_config("ok.json", std::string(R"({
    "model": )") + kSmallModel + R"(,
    "experiments": [
      {"kind": "duality", "seed": 2, "n_tuples": 5},
      {"kind": "mfg-solve", "seed": 3}
    ]
  })");
  std::filesystem::remove_all("harness_tmp/out");
  int code = run_harness(cfg, "harness_tmp/out", false, 0, 1);
  CHECK(code == 0);
  CHECK(std::filesystem::exists("harness_tmp/out/results.csv"));
  CHECK(std::filesystem::exists("harness_tmp/out/diagnostics.json"));

  nlohmann::json diag =
      nlohmann::json::parse(read_file("harness_tmp/out/diagnostics.json"));
  CHECK(diag["pass"].get<bool>());
  CHECK(diag["experiments"].size() == 2);

  // Same config, same seeds: byte-identical results.
  int code2 = run_harness(cfg, "harness_tmp/out2", false, 0, 1);
  CHECK(code2 == 0);
  CHECK(read_file("harness_tmp/out/results.csv") ==
        read_file("harness_tmp/out2/results.csv"));
}

TEST_CASE("decoupled model converges in one iteration through the harness") {
  std::string cfg = write_config("decoupled.json", R"({
    "model": {
      "n_x": 21, "n_t": 21, "t0": 0.0, "T": 1.0, "alpha": 0.5,
      "a": {"kind": "constant", "value": 1.0},
      "hamiltonian": {"kind": "sqrt1p"},
      "F": {"cos_coeffs": [0.0]},
      "G": {"cos_coeffs": [2.0]}
    },
    "experiments": [{"kind": "mfg-solve", "seed": 1, "uniform_m0": 1}]
  })");
  std::filesystem::remove_all("harness_tmp/dec");
  CHECK(run_harness(cfg, "harness_tmp/dec", false, 0, 1) == 0);
  bool found = false;
  for (const CsvRecord& r : parse_csv("harness_tmp/dec/results.csv"))
    if (r.metric == "iterations") {
      CHECK(r.value == 1.0);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("harness usage errors exit with code 2") {
  std::string bad_json = write_config("bad.json", "{ not json");
  CHECK(run_harness(bad_json, "harness_tmp/x", false, 0, 1) == 2);

  CHECK(run_harness("harness_tmp/missing.json", "harness_tmp/x", false, 0, 1) ==
        2);

  std::string bad_kind = write_config("badkind.json", std::string(R"({
    "model": )") + kSmallModel + R"(,
    "experiments": [{"kind": "no-such-kind"}]
  })");
  CHECK(run_harness(bad_kind, "harness_tmp/x", false, 0, 1) == 2);

  std::string no_exp = write_config("noexp.json", std::string(R"({
    "model": )") + kSmallModel + R"(,
    "experiments": []
  })");
  CHECK(run_harness(no_exp, "harness_tmp/x", false, 0, 1) == 2);
}

TEST_CASE("model validation exit codes") {
  std::string good = write_config("model_ok.json", kSmallModel);
  CHECK(validate_model(good) == 0);

  // Degenerate diffusion fails the ellipticity hypothesis.
  std::string degenerate = write_config("model_degenerate.json", R"({
    "n_x": 21, "n_t": 21, "t0": 0.0, "T": 1.0, "alpha": 0.5,
    "a": {"kind": "constant", "value": 0.0},
    "hamiltonian": {"kind": "sqrt1p"},
    "F": {"cos_coeffs": [0.5]},
    "G": {"cos_coeffs": [0.5]}
  })");
  CHECK(validate_model(degenerate) == 1);

  CHECK(validate_model("harness_tmp/missing.json") == 2);
}
