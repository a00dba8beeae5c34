#include "momtour/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <locale>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "momtour/csv.hpp"
#include "momtour/rng.hpp"
#include "momtour/tournament.hpp"

namespace momtour {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// from_chars keeps parsing independent of the global locale
double parse_double(const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument(v);
  }
  return x;
}

long parse_long(const std::string& v) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument(v);
  }
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    return parse_long(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<int> ExperimentConfig::effective_n_grid() const {
  if (!n_grid.empty()) return n_grid;
  return {scenario.n_per_fold};
}

std::string ExperimentConfig::digest(std::uint64_t seed) const {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "d=" << scenario.d << ";design=" << static_cast<int>(scenario.design)
    << ";design_nu=" << scenario.design_nu
    << ";noise=" << static_cast<int>(scenario.noise)
    << ";sigma=" << scenario.sigma << ";noise_nu=" << scenario.noise_nu
    << ";outlier_prob=" << scenario.outlier_prob
    << ";outlier_scale=" << scenario.outlier_scale
    << ";s=" << scenario.truth_s << ";support=" << scenario.truth_support
    << ";coef=" << scenario.truth_coef << ";eps1=" << scenario.truth_eps1
    << ";sigma4=" << consts.sigma4 << ";alpha=" << consts.alpha
    << ";beta=" << consts.beta << ";m1=" << consts.m1
    << ";theta1=" << consts.theta1 << ";theta2=" << consts.theta2
    << ";kappa=" << consts.kappa << ";eta=" << consts.eta
    << ";c_cl=" << consts.c_cl << ";c_delta=" << consts.c_delta
    << ";c_active=" << consts.c_active
    << ";c1_r=" << consts.c1_r << ";c3_rho=" << consts.c3_rho
    << ";slope_c0=" << consts.slope_c0
    << ";r_hat_factor=" << consts.r_hat_factor
    << ";det_do=" << consts.use_deterministic_do
    << ";r_hat_override=" << r_hat_override << ";n2_override=" << n2_override
    << ";trials=" << trials << ";threshold=" << fail_threshold
    << ";truth_in_pool=" << include_truth_in_pool
    << ";fourth_fold=" << pool_fourth_fold
    << ";adaptive=" << adaptive_depth << "," << adaptive_r0 << ","
    << validation_fraction << ";tol=" << solver.tol
    << ";iters=" << solver.max_iters << ";subs=" << solver.subsample_count
    << "," << solver.subsample_fraction << ";dedup=" << solver.dedup_tol
    << ";grid=";
  for (double l : solver.lambda_grid) s << l << ",";
  s << ";ngrid=";
  for (int n : effective_n_grid()) s << n << ",";
  s << ";seed=" << seed;
  return fnv1a_hex(s.str());
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.solver.lambda_grid = {0.5, 0.25, 0.1, 0.05, 0.02};
  cfg.methods = {"tournament_lasso"};

  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config: empty key or value at line " +
                        std::to_string(lineno));
    }
    kv[key] = value;
  }

  for (const auto& [key, v] : kv) {
    if (key == "d") cfg.scenario.d = static_cast<int>(to_long(key, v));
    else if (key == "n_per_fold") cfg.scenario.n_per_fold = static_cast<int>(to_long(key, v));
    else if (key == "n_grid") {
      for (const auto& item : split_list(v)) {
        cfg.n_grid.push_back(static_cast<int>(to_long(key, item)));
      }
    } else if (key == "design") {
      if (v == "gaussian") cfg.scenario.design = DesignKind::Gaussian;
      else if (v == "rademacher") cfg.scenario.design = DesignKind::Rademacher;
      else if (v == "student_t") cfg.scenario.design = DesignKind::StudentT;
      else throw ConfigError("config: unknown design '" + v + "'");
    } else if (key == "design_nu") cfg.scenario.design_nu = to_double(key, v);
    else if (key == "noise") {
      if (v == "gaussian") cfg.scenario.noise = NoiseKind::Gaussian;
      else if (v == "student_t") cfg.scenario.noise = NoiseKind::StudentT;
      else if (v == "contaminated") cfg.scenario.noise = NoiseKind::Contaminated;
      else throw ConfigError("config: unknown noise '" + v + "'");
    } else if (key == "noise_sigma") cfg.scenario.sigma = to_double(key, v);
    else if (key == "noise_nu") cfg.scenario.noise_nu = to_double(key, v);
    else if (key == "outlier_prob") cfg.scenario.outlier_prob = to_double(key, v);
    else if (key == "outlier_scale") cfg.scenario.outlier_scale = to_double(key, v);
    else if (key == "truth_s") cfg.scenario.truth_s = static_cast<int>(to_long(key, v));
    else if (key == "truth_support") cfg.scenario.truth_support = v;
    else if (key == "truth_coef") cfg.scenario.truth_coef = to_double(key, v);
    else if (key == "truth_eps1") cfg.scenario.truth_eps1 = to_double(key, v);
    else if (key == "methods") cfg.methods = split_list(v);
    else if (key == "trials") cfg.trials = static_cast<int>(to_long(key, v));
    else if (key == "fail_threshold") cfg.fail_threshold = to_double(key, v);
    else if (key == "include_truth_in_pool") cfg.include_truth_in_pool = to_bool(key, v);
    else if (key == "pool_fourth_fold") cfg.pool_fourth_fold = to_bool(key, v);
    else if (key == "dump_data") cfg.dump_data = to_bool(key, v);
    else if (key == "sigma4") cfg.consts.sigma4 = to_double(key, v);
    else if (key == "alpha") cfg.consts.alpha = to_double(key, v);
    else if (key == "beta") cfg.consts.beta = to_double(key, v);
    else if (key == "m1") cfg.consts.m1 = to_double(key, v);
    else if (key == "theta1") cfg.consts.theta1 = to_double(key, v);
    else if (key == "theta2") cfg.consts.theta2 = to_double(key, v);
    else if (key == "kappa") cfg.consts.kappa = to_double(key, v);
    else if (key == "eta") cfg.consts.eta = to_double(key, v);
    else if (key == "c_cl") cfg.consts.c_cl = to_double(key, v);
    else if (key == "c_delta") cfg.consts.c_delta = to_double(key, v);
    else if (key == "c_active") cfg.consts.c_active = to_double(key, v);
    else if (key == "c_width") cfg.consts.c_width = to_double(key, v);
    else if (key == "c1_r") cfg.consts.c1_r = to_double(key, v);
    else if (key == "c3_rho") cfg.consts.c3_rho = to_double(key, v);
    else if (key == "slope_c0") cfg.consts.slope_c0 = to_double(key, v);
    else if (key == "r_hat_factor") cfg.consts.r_hat_factor = to_double(key, v);
    else if (key == "use_deterministic_do") cfg.consts.use_deterministic_do = to_bool(key, v);
    else if (key == "r_hat_override") cfg.r_hat_override = to_double(key, v);
    else if (key == "n2_override") cfg.n2_override = static_cast<std::size_t>(to_long(key, v));
    else if (key == "adaptive_depth") cfg.adaptive_depth = static_cast<int>(to_long(key, v));
    else if (key == "adaptive_r0") cfg.adaptive_r0 = to_double(key, v);
    else if (key == "validation_fraction") cfg.validation_fraction = to_double(key, v);
    else if (key == "solver_max_iters") cfg.solver.max_iters = static_cast<int>(to_long(key, v));
    else if (key == "solver_tol") cfg.solver.tol = to_double(key, v);
    else if (key == "lambda_grid") {
      cfg.solver.lambda_grid.clear();
      for (const auto& item : split_list(v)) {
        cfg.solver.lambda_grid.push_back(to_double(key, item));
      }
    } else if (key == "subsample_count") cfg.solver.subsample_count = static_cast<int>(to_long(key, v));
    else if (key == "subsample_fraction") cfg.solver.subsample_fraction = to_double(key, v);
    else if (key == "dedup_tol") cfg.solver.dedup_tol = to_double(key, v);
    else throw ConfigError("config: unknown key '" + key + "'");
  }

  static const std::vector<std::string> known_methods = {
      "tournament_lasso", "tournament_slope", "lasso_erm", "slope_erm", "ols"};
  if (cfg.methods.empty()) throw ConfigError("config: methods must be nonempty");
  for (const auto& m : cfg.methods) {
    if (std::find(known_methods.begin(), known_methods.end(), m) ==
        known_methods.end()) {
      throw ConfigError("config: unknown method '" + m + "'");
    }
  }
  if (cfg.trials < 1) throw ConfigError("config: trials >= 1 required");
  try {
    cfg.scenario.validate();
    cfg.consts.validate();
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

const RegNorm& method_norm(const std::string& method, int d, double slope_c0,
                           std::map<std::string, RegNorm>& cache) {
  const bool slope = method == "tournament_slope" || method == "slope_erm";
  const std::string key = slope ? "slope" : "l1";
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, slope ? RegNorm::sorted_l1(slope_weights(d, slope_c0))
                                 : RegNorm::l1())
             .first;
  }
  return it->second;
}

Eigen::VectorXd fit_erm_baseline(const ExperimentConfig& cfg,
                                 const ThreeFoldData& data, bool slope) {
  // Penalized ERM at the same per-fit sample size as the tournament: one
  // fit per lambda on fold 2, regularization chosen from the same grid by
  // median-of-means validation on fold 1.
  const Eigen::Index N = data.fold2.X.rows();
  const Eigen::Index d = data.fold2.X.cols();

  const std::size_t val_blocks =
      std::min<std::size_t>(11, static_cast<std::size_t>(N));
  const Eigen::VectorXd slope_base =
      slope ? slope_weights(static_cast<int>(d), cfg.consts.slope_c0)
            : Eigen::VectorXd();

  Eigen::VectorXd best;
  double best_err = std::numeric_limits<double>::infinity();
  std::optional<Eigen::VectorXd> warm;
  for (double lambda : cfg.solver.lambda_grid) {
    FitResult fit = slope ? slope_pg(data.fold2.X, data.fold2.Y,
                                     lambda * slope_base,
                                     StepRule::Backtracking, cfg.solver, warm)
                          : lasso_cd(data.fold2.X, data.fold2.Y, lambda,
                                     cfg.solver, warm);
    warm = fit.t;
    const double err = mom_validation_error(fit.t, data.fold1, val_blocks);
    if (err < best_err) {
      best_err = err;
      best = fit.t;
    }
  }
  return best;
}

Eigen::VectorXd fit_ols(const ThreeFoldData& data) {
  const Eigen::Index N = data.fold1.X.rows();
  const Eigen::Index d = data.fold1.X.cols();
  Eigen::MatrixXd X(3 * N, d);
  X.topRows(N) = data.fold1.X;
  X.middleRows(N, N) = data.fold2.X;
  X.bottomRows(N) = data.fold3.X;
  Eigen::VectorXd Y(3 * N);
  Y.head(N) = data.fold1.Y;
  Y.segment(N, N) = data.fold2.Y;
  Y.tail(N) = data.fold3.Y;
  return X.colPivHouseholderQr().solve(Y);
}

}  // namespace

std::vector<TrialRecord> run_single_trial(const ExperimentConfig& config,
                                          std::uint64_t trial_seed, int trial,
                                          int n_per_fold) {
  ScenarioSpec spec = config.scenario;
  spec.n_per_fold = n_per_fold;
  spec.seed = trial_seed;
  auto [data, gt] = generate(spec);

  const bool want_lasso_pool =
      std::find(config.methods.begin(), config.methods.end(),
                "tournament_lasso") != config.methods.end();
  const bool want_slope_pool =
      std::find(config.methods.begin(), config.methods.end(),
                "tournament_slope") != config.methods.end();

  const FoldData pool_fold =
      config.pool_fourth_fold ? generate_fold(spec, 4) : data.fold2;
  const std::optional<Eigen::VectorXd> truth =
      config.include_truth_in_pool ? std::optional<Eigen::VectorXd>(gt.t0)
                                   : std::nullopt;

  std::vector<Candidate> pool_lasso, pool_slope;
  if (want_lasso_pool) {
    SolverConfig sc = config.solver;
    sc.seed = child_seed(trial_seed, 100);
    pool_lasso = build_pool(pool_fold.X, pool_fold.Y, Penalty::Lasso, sc, truth,
                            config.consts.slope_c0);
  }
  if (want_slope_pool) {
    SolverConfig sc = config.solver;
    sc.seed = child_seed(trial_seed, 101);
    pool_slope = build_pool(pool_fold.X, pool_fold.Y, Penalty::Slope, sc, truth,
                            config.consts.slope_c0);
  }

  std::map<std::string, RegNorm> norm_cache;
  std::vector<TrialRecord> records;
  for (const auto& method : config.methods) {
    TrialRecord rec;
    rec.method = method;
    rec.trial = trial;
    const auto start = std::chrono::steady_clock::now();

    Eigen::VectorXd estimate;
    bool failed = false;
    if (method == "tournament_lasso" || method == "tournament_slope") {
      const Penalty penalty =
          method == "tournament_lasso" ? Penalty::Lasso : Penalty::Slope;
      const auto& pool =
          penalty == Penalty::Lasso ? pool_lasso : pool_slope;
      rec.pool_size = static_cast<int>(pool.size());
      std::optional<double> r_hat_ov;
      if (config.r_hat_override > 0.0) r_hat_ov = config.r_hat_override;
      if (config.adaptive_depth > 0) {
        AdaptiveResult ar = adaptive_radius_run(
            pool, data, penalty, config.consts, config.adaptive_r0,
            config.adaptive_depth, config.validation_fraction);
        if (!ar.result.has_winner) {
          failed = true;
        } else {
          estimate = ar.result.winner_t;
          rec.level = ar.result.level;
          rec.r_hat = ar.chosen_r_hat;
        }
      } else {
        TournamentResult res =
            run_tournament(pool, data, penalty, config.consts, r_hat_ov,
                           config.n2_override);
        if (!res.has_winner) {
          failed = true;
        } else {
          estimate = res.winner_t;
          rec.level = res.level;
          rec.r_hat = res.r_hat_selected;
        }
      }
    } else if (method == "lasso_erm") {
      estimate = fit_erm_baseline(config, data, false);
    } else if (method == "slope_erm") {
      estimate = fit_erm_baseline(config, data, true);
    } else {  // ols
      estimate = fit_ols(data);
    }

    const auto stop = std::chrono::steady_clock::now();
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    rec.failed = failed;
    if (!failed) {
      const Eigen::VectorXd diff = estimate - gt.t0;
      rec.l2_err = diff.norm();
      rec.psi_err = norm_eval(
          method_norm(method, spec.d, config.consts.slope_c0, norm_cache),
          diff);
      // Isotropic design and independent noise: the population excess risk
      // equals the squared l2 parameter error.
      rec.excess_risk = diff.squaredNorm();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string trials_csv_header() {
  return "method,trial,l2_err,psi_err,excess_risk,level,r_hat,pool_size,"
         "runtime_ms,failed";
}

std::string trial_record_csv(const TrialRecord& rec) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << rec.method << ',' << rec.trial << ',';
  if (rec.failed) {
    // errors, level, and radius are absent on failure
    s << ",,,,,";
  } else {
    s << format_double(rec.l2_err) << ',' << format_double(rec.psi_err) << ','
      << format_double(rec.excess_risk) << ',' << rec.level << ','
      << format_double(rec.r_hat) << ',';
  }
  s << rec.pool_size << ',' << 0 << ',' << (rec.failed ? 1 : 0);
  return s.str();
}

std::string summary_csv_header() {
  return "method,n_per_fold,trials,failures,p50_l2,p90_l2,p95_l2,fail_prob,"
         "threshold,scenario_digest";
}

std::string summary_row_csv(const MethodSummary& s) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  o << s.method << ',' << s.n_per_fold << ',' << s.trials << ',' << s.failures
    << ',' << opt(s.p50) << ',' << opt(s.p90) << ',' << opt(s.p95) << ','
    << format_double(s.fail_prob) << ',' << format_double(s.threshold) << ','
    << s.digest;
  return o.str();
}

MethodSummary summarize(const std::string& method, int n_per_fold,
                        const std::vector<TrialRecord>& records,
                        double threshold, const std::string& digest) {
  MethodSummary s;
  s.method = method;
  s.n_per_fold = n_per_fold;
  s.threshold = threshold;
  s.digest = digest;
  std::vector<double> errs;
  int exceed = 0;
  for (const auto& rec : records) {
    if (rec.method != method) continue;
    ++s.trials;
    if (rec.failed) {
      ++s.failures;
      ++exceed;  // a trial with no estimate counts against any threshold
      continue;
    }
    errs.push_back(rec.l2_err);
    if (rec.l2_err > threshold) ++exceed;
  }
  if (!errs.empty()) {
    s.p50 = nearest_rank_quantile(errs, 0.50);
    s.p90 = nearest_rank_quantile(errs, 0.90);
    s.p95 = nearest_rank_quantile(errs, 0.95);
  }
  s.fail_prob = s.trials > 0
                    ? static_cast<double>(exceed) / static_cast<double>(s.trials)
                    : 0.0;
  return s;
}

std::vector<MethodSummary> run_experiment(const ExperimentConfig& config,
                                          std::uint64_t seed,
                                          const std::filesystem::path& out_dir,
                                          int parallel) {
  std::filesystem::create_directories(out_dir);
  const std::string digest = config.digest(seed);
  const std::vector<int> grid = config.effective_n_grid();

  std::vector<MethodSummary> summaries;
  std::ofstream timing(out_dir / "timings.log");
  timing.imbue(std::locale::classic());
  timing << "# wall-clock per (n_per_fold, trial, method), milliseconds;"
            " excluded from the determinism contract\n";

  for (std::size_t ni = 0; ni < grid.size(); ++ni) {
    const int N = grid[ni];
    std::vector<std::vector<TrialRecord>> per_trial(
        static_cast<std::size_t>(config.trials));

    const auto worker_count = std::max(1, parallel);
    std::vector<std::thread> workers;
    std::mutex next_mutex;
    int next_trial = 0;
    auto work = [&]() {
      for (;;) {
        int trial;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next_trial >= config.trials) return;
          trial = next_trial++;
        }
        const std::uint64_t trial_seed =
            child_seed(seed, ni * 1000003ULL + static_cast<std::uint64_t>(trial));
        per_trial[static_cast<std::size_t>(trial)] =
            run_single_trial(config, trial_seed, trial, N);
      }
    };
    if (worker_count == 1) {
      work();
    } else {
      for (int w = 0; w < worker_count; ++w) workers.emplace_back(work);
      for (auto& t : workers) t.join();
    }

    std::vector<TrialRecord> records;
    for (auto& trial_records : per_trial) {
      for (auto& rec : trial_records) records.push_back(std::move(rec));
    }

    std::ofstream trials_csv(out_dir /
                             ("trials_n" + std::to_string(N) + ".csv"));
    trials_csv << trials_csv_header() << "\n";
    for (const auto& rec : records) {
      trials_csv << trial_record_csv(rec) << "\n";
      timing << N << ',' << rec.trial << ',' << rec.method << ','
             << format_double(rec.runtime_ms) << "\n";
    }

    for (const auto& method : config.methods) {
      summaries.push_back(
          summarize(method, N, records, config.fail_threshold, digest));
    }

    if (config.dump_data) {
      ScenarioSpec spec = config.scenario;
      spec.n_per_fold = N;
      spec.seed = child_seed(seed, ni * 1000003ULL);
      auto [data, gt] = generate(spec);
      std::ofstream dump(out_dir / ("dataset_n" + std::to_string(N) + ".csv"));
      dump_dataset(dump, data.fold1, spec, digest);
    }
  }

  std::ofstream summary_csv(out_dir / "summary.csv");
  summary_csv << summary_csv_header() << "\n";
  for (const auto& s : summaries) summary_csv << summary_row_csv(s) << "\n";
  return summaries;
}

std::vector<MethodSummary> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != summary_csv_header()) {
    throw std::invalid_argument("bad summary header in " + path.string());
  }
  std::vector<MethodSummary> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) {
      throw std::invalid_argument("bad summary row in " + path.string());
    }
    MethodSummary s;
    s.method = f[0];
    s.n_per_fold = static_cast<int>(parse_long(f[1]));
    s.trials = static_cast<int>(parse_long(f[2]));
    s.failures = static_cast<int>(parse_long(f[3]));
    auto opt = [](const std::string& v) -> std::optional<double> {
      if (v == "NA") return std::nullopt;
      return parse_double(v);
    };
    s.p50 = opt(f[4]);
    s.p90 = opt(f[5]);
    s.p95 = opt(f[6]);
    s.fail_prob = parse_double(f[7]);
    s.threshold = parse_double(f[8]);
    s.digest = f[9];
    rows.push_back(std::move(s));
  }
  return rows;
}

std::string compare_methods(const std::vector<std::filesystem::path>& inputs) {
  if (inputs.size() < 2) {
    throw std::invalid_argument("compare_methods: need >= 2 summary files");
  }
  std::vector<std::vector<MethodSummary>> all;
  for (const auto& p : inputs) all.push_back(read_summary_csv(p));
  const std::string digest = all.front().front().digest;
  for (const auto& rows : all) {
    for (const auto& r : rows) {
      if (r.digest != digest) {
        throw std::invalid_argument(
            "compare_methods: scenario digest mismatch (" + r.digest +
            " vs " + digest + ")");
      }
    }
  }

  // Baseline: the first method of the first input, per n_per_fold.
  std::map<int, MethodSummary> base;
  for (const auto& r : all.front()) {
    if (base.find(r.n_per_fold) == base.end()) base.emplace(r.n_per_fold, r);
  }

  auto ratio = [](const std::optional<double>& num,
                  const std::optional<double>& den) -> std::string {
    if (!num || !den) return "NA";
    if (*den == 0.0) return *num == 0.0 ? "1" : "NA";
    return format_double(*num / *den);
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "n_per_fold,method_base,method,p50_base,p50,p50_ratio,p90_base,p90,"
         "p90_ratio,p95_base,p95,p95_ratio,fail_prob_base,fail_prob,"
         "fail_prob_ratio,scenario_digest\n";
  for (std::size_t i = 1; i < all.size(); ++i) {
    for (const auto& r : all[i]) {
      const auto it = base.find(r.n_per_fold);
      if (it == base.end()) continue;
      const auto& b = it->second;
      out << r.n_per_fold << ',' << b.method << ',' << r.method << ','
          << opt(b.p50) << ',' << opt(r.p50) << ',' << ratio(r.p50, b.p50)
          << ',' << opt(b.p90) << ',' << opt(r.p90) << ','
          << ratio(r.p90, b.p90) << ',' << opt(b.p95) << ',' << opt(r.p95)
          << ',' << ratio(r.p95, b.p95) << ','
          << format_double(b.fail_prob) << ',' << format_double(r.fail_prob)
          << ','
          << ratio(std::optional<double>(r.fail_prob),
                   std::optional<double>(b.fail_prob))
          << ',' << digest << "\n";
    }
  }
  return out.str();
}

}  // namespace momtour
