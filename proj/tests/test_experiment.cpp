#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "momtour/csv.hpp"
#include "momtour/experiment.hpp"

using namespace momtour;

namespace {

const char* kMiniConfig = R"(
# tiny smoke scenario
d = 8
n_per_fold = 60
noise = gaussian
noise_sigma = 0
truth_s = 2
methods = tournament_lasso
trials = 1
fail_threshold = 0.5
include_truth_in_pool = true
sigma4 = 0.5
r_hat_factor = 4.0
lambda_grid = 0.4,0.1
subsample_count = 2
subsample_fraction = 0.6
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: round trip and validation errors") {
  const auto cfg = parse_config_text(kMiniConfig);
  CHECK(cfg.scenario.d == 8);
  CHECK(cfg.scenario.sigma == 0.0);
  CHECK(cfg.methods == std::vector<std::string>{"tournament_lasso"});
  CHECK(cfg.include_truth_in_pool);
  CHECK(cfg.solver.lambda_grid == std::vector<double>{0.4, 0.1});

  CHECK_THROWS_AS(parse_config_text("nonsense line"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("unknown_key = 3"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("d = abc"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("methods = frobnicate"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("trials = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("lambda_grid = 0.1,0.4"), ConfigError);
}

TEST_CASE("nearest-rank quantiles") {
  std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
  CHECK(nearest_rank_quantile(v, 0.5) == 3.0);
  CHECK(nearest_rank_quantile(v, 0.9) == 5.0);
  CHECK(nearest_rank_quantile(v, 0.2) == 1.0);
  CHECK(nearest_rank_quantile({7.0}, 0.95) == 7.0);
  CHECK_THROWS_AS(nearest_rank_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("noiseless trial with the truth in the pool has zero error") {
  const auto cfg = parse_config_text(kMiniConfig);
  const auto records = run_single_trial(cfg, 123, 0, cfg.scenario.n_per_fold);
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].failed);
  CHECK(records[0].l2_err == 0.0);
  CHECK(records[0].pool_size >= 2);
}

TEST_CASE("run_experiment writes deterministic CSVs") {
  const auto cfg = parse_config_text(kMiniConfig);
  const auto dir_a = std::filesystem::temp_directory_path() / "momtour_test_a";
  const auto dir_b = std::filesystem::temp_directory_path() / "momtour_test_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  const auto sum_a = run_experiment(cfg, 99, dir_a, 1);
  const auto sum_b = run_experiment(cfg, 99, dir_b, 2);
  CHECK(slurp(dir_a / "trials_n60.csv") == slurp(dir_b / "trials_n60.csv"));
  CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
  CHECK(!slurp(dir_a / "summary.csv").empty());
  REQUIRE(sum_a.size() == 1);
  CHECK(sum_a[0].failures == 0);
}

TEST_CASE("run_experiment emits one summary row per method and per N") {
  auto cfg = parse_config_text(kMiniConfig);
  cfg.n_grid = {40, 60};
  cfg.methods = {"tournament_lasso", "ols"};
  const auto dir = std::filesystem::temp_directory_path() / "momtour_test_grid";
  std::filesystem::remove_all(dir);
  const auto summaries = run_experiment(cfg, 7, dir, 1);
  CHECK(summaries.size() == 4);
  CHECK(std::filesystem::exists(dir / "trials_n40.csv"));
  CHECK(std::filesystem::exists(dir / "trials_n60.csv"));

  const auto rows = read_summary_csv(dir / "summary.csv");
  REQUIRE(rows.size() == 4);
  int n40 = 0, n60 = 0;
  for (const auto& r : rows) {
    if (r.n_per_fold == 40) ++n40;
    if (r.n_per_fold == 60) ++n60;
    CHECK(r.digest == rows[0].digest);
  }
  CHECK(n40 == 2);
  CHECK(n60 == 2);
}

TEST_CASE("compare_methods: identical inputs give unit ratios") {
  const auto cfg = parse_config_text(kMiniConfig);
  const auto dir = std::filesystem::temp_directory_path() / "momtour_test_cmp";
  std::filesystem::remove_all(dir);
  run_experiment(cfg, 321, dir, 1);
  const auto csv =
      compare_methods({dir / "summary.csv", dir / "summary.csv"});
  std::istringstream in(csv);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  const auto fields = split_csv_line(row);
  // p50_ratio, p90_ratio, p95_ratio, fail_prob_ratio at indices 5, 8, 11, 14
  CHECK(fields[5] == "1");
  CHECK(fields[8] == "1");
  CHECK(fields[11] == "1");
  CHECK(fields[14] == "1");
}

TEST_CASE("compare_methods: all-failure summaries mark ratios unavailable") {
  MethodSummary ok;
  ok.method = "a";
  ok.n_per_fold = 10;
  ok.trials = 2;
  ok.p50 = ok.p90 = ok.p95 = 1.0;
  ok.fail_prob = 0.0;
  ok.threshold = 1.0;
  ok.digest = "d1";
  MethodSummary bad = ok;
  bad.method = "b";
  bad.failures = 2;
  bad.p50 = bad.p90 = bad.p95 = std::nullopt;
  bad.fail_prob = 1.0;

  const auto dir = std::filesystem::temp_directory_path() / "momtour_test_na";
  std::filesystem::create_directories(dir);
  {
    std::ofstream a(dir / "a.csv");
    a << summary_csv_header() << "\n" << summary_row_csv(ok) << "\n";
    std::ofstream b(dir / "b.csv");
    b << summary_csv_header() << "\n" << summary_row_csv(bad) << "\n";
  }
  const auto csv = compare_methods({dir / "a.csv", dir / "b.csv"});
  CHECK(csv.find("NA") != std::string::npos);

  // digest mismatch is an error
  MethodSummary alien = ok;
  alien.digest = "d2";
  {
    std::ofstream c(dir / "c.csv");
    c << summary_csv_header() << "\n" << summary_row_csv(alien) << "\n";
  }
  CHECK_THROWS_AS(compare_methods({dir / "a.csv", dir / "c.csv"}),
                  std::invalid_argument);
}

TEST_CASE("trial CSV serialization blanks error fields on failure") {
  TrialRecord rec;
  rec.method = "tournament_lasso";
  rec.trial = 3;
  rec.failed = true;
  rec.pool_size = 4;
  CHECK(trial_record_csv(rec) == "tournament_lasso,3,,,,,,4,0,1");

  rec.failed = false;
  rec.l2_err = 0.5;
  rec.psi_err = 1.25;
  rec.excess_risk = 0.25;
  rec.level = 3;
  rec.r_hat = 2.0;
  CHECK(trial_record_csv(rec) == "tournament_lasso,3,0.5,1.25,0.25,3,2,4,0,0");
}

TEST_CASE("adaptive radius configuration runs through the harness") {
  auto cfg = parse_config_text(kMiniConfig);
  cfg.adaptive_depth = 3;
  cfg.adaptive_r0 = 2.0;
  cfg.validation_fraction = 0.25;
  const auto records = run_single_trial(cfg, 55, 0, cfg.scenario.n_per_fold);
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].failed);
  CHECK(records[0].r_hat > 0.0);
  // noiseless data with the truth in the pool: error stays zero
  CHECK(records[0].l2_err == 0.0);
}

TEST_CASE("fourth-fold pool building keeps fold2 untouched by fits") {
  auto cfg = parse_config_text(kMiniConfig);
  cfg.pool_fourth_fold = true;
  const auto records = run_single_trial(cfg, 77, 0, cfg.scenario.n_per_fold);
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].failed);
}
