#ifndef MFG_EXPERIMENTS_HPP
#define MFG_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "mfg/csv.hpp"
#include "mfg/model.hpp"
#include "mfg/rate_fit.hpp"

namespace mfg {

/// One named experiment from a config: kind, seed, and flat scalar
/// parameters (ladders and tolerances have pinned defaults that the
/// parameters may override).
struct ExperimentSpec {
  std::string kind;
  unsigned seed = 1;
  std::map<std::string, double> params;
};

struct ExperimentOutcome {
  std::string kind;
  bool pass = true;
  std::vector<CsvRecord> records;       // long-format result rows
  std::vector<std::string> failures;    // human-readable failed assertions
  std::map<std::string, double> diagnostics;
  std::vector<RateFit> fits;
};

struct UnknownExperimentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Recognized kinds: oracle-convergence, duality, mfg-solve, monotonicity,
/// lipschitz, remainder-order, master-residual, neumann, flow-consistency,
/// holder-time. Throws UnknownExperimentError for anything else.
ExperimentOutcome run_named_experiment(const ExperimentSpec& spec,
                                       const MfgModel& model, int jobs = 0);

/// Smooth random density 1 + sum_n a_n cos(n pi x), positive by
/// construction, deterministic in the seed. amplitude scales the
/// perturbation from uniform.
GridMeasure random_smooth_measure(const Grid& grid, unsigned seed,
                                  double amplitude = 0.3);

/// Piecewise-linear positive random density (rough family: boundary
/// compatibility deliberately violated).
GridMeasure random_rough_measure(const Grid& grid, unsigned seed);

/// Runs the full config at path: parses the model and experiment list,
/// executes experiments (concurrently when jobs > 1), writes results.csv,
/// diagnostics.json, and fit.json into out_dir. Returns the process exit
/// status: 0 all assertions pass, 1 assertion failure, 2 usage error
/// (unreadable/malformed config or unknown kind).
int run_harness(const std::string& config_path, const std::string& out_dir,
                bool seed_override, unsigned seed, int jobs);

/// `validate` subcommand: parse the model and run validate_hypotheses,
/// printing the report. Exit 0 on pass, 1 on failed hypotheses, 2 on
/// usage errors.
int validate_model(const std::string& config_path);

}  // namespace mfg

#endif
