#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "momtour/complexity.hpp"
#include "momtour/csv.hpp"
#include "momtour/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"median-of-means tournament regression benchmark"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "run a trial experiment from a config file");
  run->add_option("--config", config_path, "config file (key = value lines)")
      ->required();
  run->add_option("--seed", seed, "master seed")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--parallel", parallel, "worker threads for trials");

  // compare
  std::vector<std::string> inputs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "compare method summary CSVs");
  compare->add_option("--inputs", inputs, "summary.csv files (first = baseline)")
      ->required()
      ->expected(-2);
  compare->add_option("--out", compare_out, "output CSV path")->required();

  // oracle meanwidth
  int mw_d = 2;
  double mw_rho = 1.0, mw_r = 1.0;
  std::size_t mw_samples = 100000;
  std::uint64_t mw_seed = 0;
  auto* oracle = app.add_subcommand("oracle", "Monte-Carlo oracles");
  auto* meanwidth =
      oracle->add_subcommand("meanwidth", "Gaussian mean width of rho*B1 cap r*B2");
  meanwidth->add_option("--d", mw_d, "dimension")->required();
  meanwidth->add_option("--rho", mw_rho, "l1 radius")->required();
  meanwidth->add_option("--r", mw_r, "l2 radius")->required();
  meanwidth->add_option("--samples", mw_samples, "Monte-Carlo samples");
  meanwidth->add_option("--seed", mw_seed, "RNG seed");
  oracle->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      momtour::ExperimentConfig cfg;
      try {
        cfg = momtour::parse_config_file(config_path);
      } catch (const momtour::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      const auto summaries = momtour::run_experiment(cfg, seed, out_dir, parallel);
      for (const auto& s : summaries) {
        std::cout << momtour::summary_row_csv(s) << "\n";
      }
      return 0;
    }
    if (*compare) {
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      const std::string csv = momtour::compare_methods(paths);
      std::ofstream out(compare_out);
      if (!out) {
        std::cerr << "cannot write " << compare_out << "\n";
        return 1;
      }
      out << csv;
      return 0;
    }
    if (*meanwidth) {
      const double width = momtour::gaussian_mean_width_mc(
          mw_rho, mw_r, mw_d, mw_samples, mw_seed);
      std::cout << momtour::format_double(width) << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
