#include <CLI11.hpp>

#include "mfg/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical solver and verification harness for the first-order "
               "Master Equation of Mean Field Games on [0,1]"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  unsigned seed = 0;
  int jobs = 0;

  CLI::App* run = app.add_subcommand("run", "run the experiments in a config");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--out", out_dir, "output directory");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override every experiment seed");
  run->add_option("--jobs", jobs, "worker threads (0 = hardware)");

  CLI::App* validate =
      app.add_subcommand("validate", "check the model hypotheses only");
  validate->add_option("--config", config_path, "config JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed())
    return mfg::run_harness(config_path, out_dir, seed_opt->count() > 0, seed,
                            jobs);
  return mfg::validate_model(config_path);
}
