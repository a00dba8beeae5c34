#ifndef MOMTOUR_EXPERIMENT_HPP
#define MOMTOUR_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momtour/complexity.hpp"
#include "momtour/datagen.hpp"
#include "momtour/solvers.hpp"

namespace momtour {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value experiment configuration (see README for the schema).
struct ExperimentConfig {
  ScenarioSpec scenario;
  ProcedureConstants consts;
  SolverConfig solver;
  std::vector<std::string> methods;
  int trials = 1;
  std::vector<int> n_grid;  // empty: use scenario.n_per_fold only
  double fail_threshold = 1.0;
  bool include_truth_in_pool = false;
  bool pool_fourth_fold = false;
  bool dump_data = false;
  double r_hat_override = 0.0;  // 0 = none
  std::size_t n2_override = 0;  // 0 = formula value
  int adaptive_depth = 0;       // 0 = single run at the formula radius
  double adaptive_r0 = 1.0;
  double validation_fraction = 0.2;

  std::vector<int> effective_n_grid() const;
  /// Canonical digest of the scenario and all procedure knobs plus the seed.
  std::string digest(std::uint64_t seed) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

struct TrialRecord {
  std::string method;
  int trial = 0;
  double l2_err = 0.0;
  double psi_err = 0.0;
  double excess_risk = 0.0;
  int level = 0;
  double r_hat = 0.0;
  int pool_size = 0;
  double runtime_ms = 0.0;  // measured; serialized as 0 (see README)
  bool failed = false;
};

struct MethodSummary {
  std::string method;
  int n_per_fold = 0;
  int trials = 0;
  int failures = 0;
  std::optional<double> p50, p90, p95;
  double fail_prob = 0.0;
  double threshold = 0.0;
  std::string digest;
};

/// One trial of every configured method on shared data and pools.
std::vector<TrialRecord> run_single_trial(const ExperimentConfig& config,
                                          std::uint64_t trial_seed, int trial,
                                          int n_per_fold);

/// Full experiment: per-N trial CSVs, a summary CSV, and a timing log
/// under out_dir. Returns the summaries.
std::vector<MethodSummary> run_experiment(const ExperimentConfig& config,
                                          std::uint64_t seed,
                                          const std::filesystem::path& out_dir,
                                          int parallel = 1);

std::string trials_csv_header();
std::string trial_record_csv(const TrialRecord& rec);
std::string summary_csv_header();
std::string summary_row_csv(const MethodSummary& s);

std::vector<MethodSummary> read_summary_csv(const std::filesystem::path& path);

/// Side-by-side quantiles and tail-probability ratios. The first input's
/// first method per N is the baseline; throws std::invalid_argument when
/// the scenario digests differ.
std::string compare_methods(const std::vector<std::filesystem::path>& inputs);

MethodSummary summarize(const std::string& method, int n_per_fold,
                        const std::vector<TrialRecord>& records,
                        double threshold, const std::string& digest);

}  // namespace momtour

#endif  // MOMTOUR_EXPERIMENT_HPP
