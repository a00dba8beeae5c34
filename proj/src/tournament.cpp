#include "momtour/tournament.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momtour {

Eigen::VectorXd predict(const FoldData& fold, const Eigen::VectorXd& t) {
  if (fold.X.cols() != t.size()) {
    throw std::invalid_argument("predict: dimension mismatch");
  }
  return fold.X * t;
}

double distance_stat_pred(const Eigen::VectorXd& pred_f,
                          const Eigen::VectorXd& pred_h,
                          const BlockPartition& partition) {
  std::vector<double> means(partition.n);
  for (std::size_t j = 0; j < partition.n; ++j) {
    double sum = 0.0;
    for (std::size_t i : partition.index_sets[j]) {
      sum += std::abs(pred_f[static_cast<Eigen::Index>(i)] -
                      pred_h[static_cast<Eigen::Index>(i)]);
    }
    means[j] = sum / static_cast<double>(partition.m);
  }
  return lower_median(std::move(means));
}

double distance_stat(const Candidate& f, const Candidate& h,
                     const FoldData& fold1, const BlockPartition& partition) {
  if (f.t.size() != h.t.size()) {
    throw std::invalid_argument("distance_stat: dimension mismatch");
  }
  return distance_stat_pred(predict(fold1, f.t), predict(fold1, h.t),
                            partition);
}

bool distance_oracle(const Candidate& f, const Candidate& h,
                     const LevelParams& params, const RegNorm& norm,
                     double phi) {
  if (!params.active) return false;
  const double psi = norm_eval(norm, f.t - h.t);
  if (psi >= params.rho) return true;
  return phi >= params.r1;
}

bool distance_oracle_deterministic(const Candidate& f, const Candidate& h,
                                   const LevelParams& params,
                                   const RegNorm& norm) {
  if (!params.active) return false;
  const double psi = norm_eval(norm, f.t - h.t);
  if (psi >= params.rho) return true;
  return (f.t - h.t).norm() >= params.r1;
}

bool elimination_match_pred(const Eigen::VectorXd& pred_f,
                            const Eigen::VectorXd& pred_h,
                            const Eigen::VectorXd& Y,
                            const BlockPartition& partition, double lambda,
                            double psi_f, double psi_h) {
  // Per-block statistic B^lambda_{h,f}(j); the per-sample terms and the
  // penalty difference are arranged so that swapping f and h negates every
  // block value exactly.
  std::size_t wins = 0;
  for (std::size_t j = 0; j < partition.n; ++j) {
    double sum = 0.0;
    for (std::size_t i : partition.index_sets[j]) {
      const auto k = static_cast<Eigen::Index>(i);
      const double dh = pred_h[k] - Y[k];
      const double df = pred_f[k] - Y[k];
      sum += dh * dh - df * df;
    }
    const double b = sum / static_cast<double>(partition.m) +
                     lambda * (psi_h - psi_f);
    if (b > 0.0) ++wins;
  }
  return 2 * wins > partition.n;
}

bool elimination_match(const Candidate& f, const Candidate& h,
                       const FoldData& fold2, const BlockPartition& partition,
                       double lambda, const RegNorm& norm) {
  return elimination_match_pred(predict(fold2, f.t), predict(fold2, h.t),
                                fold2.Y, partition, lambda,
                                norm_eval(norm, f.t), norm_eval(norm, h.t));
}

bool champions_match_pred(const Eigen::VectorXd& pred_f,
                          const Eigen::VectorXd& pred_h,
                          const Eigen::VectorXd& Y,
                          const BlockPartition& partition, double r3_sq) {
  std::size_t wins = 0;
  for (std::size_t j = 0; j < partition.n; ++j) {
    double sum = 0.0;
    for (std::size_t i : partition.index_sets[j]) {
      const auto k = static_cast<Eigen::Index>(i);
      sum += (pred_h[k] - pred_f[k]) * (pred_f[k] - Y[k]);
    }
    const double stat = 2.0 * sum / static_cast<double>(partition.m);
    if (stat >= -r3_sq) ++wins;
  }
  return 2 * wins > partition.n;
}

bool champions_match(const Candidate& f, const Candidate& h,
                     const FoldData& fold3, const BlockPartition& partition,
                     double r3_sq) {
  return champions_match_pred(predict(fold3, f.t), predict(fold3, h.t),
                              fold3.Y, partition, r3_sq);
}

namespace {

/// Per-pool cached predictions and penalty values for one fold.
struct PoolCache {
  std::vector<Eigen::VectorXd> pred1, pred2, pred3;
  std::vector<double> psi;

  PoolCache(const std::vector<Candidate>& pool, const ThreeFoldData& data,
            const RegNorm& norm) {
    pred1.reserve(pool.size());
    pred2.reserve(pool.size());
    pred3.reserve(pool.size());
    psi.reserve(pool.size());
    for (const auto& c : pool) {
      pred1.push_back(predict(data.fold1, c.t));
      pred2.push_back(predict(data.fold2, c.t));
      pred3.push_back(predict(data.fold3, c.t));
      psi.push_back(norm_eval(norm, c.t));
    }
  }
};

std::vector<int> champions_filter(const std::vector<Candidate>& pool,
                                  const std::vector<std::size_t>& hprime_pos,
                                  const std::vector<Eigen::VectorXd>& pred3,
                                  const Eigen::VectorXd& Y3,
                                  const BlockPartition& part3, double r3_sq,
                                  PhaseReport* report) {
  std::vector<int> survivors;
  for (std::size_t a : hprime_pos) {
    bool champion = true;
    for (std::size_t b : hprime_pos) {
      if (a == b) continue;
      if (report) ++report->matches_played;
      if (!champions_match_pred(pred3[a], pred3[b], Y3, part3, r3_sq)) {
        champion = false;
        break;
      }
    }
    if (champion) survivors.push_back(pool[a].id);
  }
  return survivors;
}

}  // namespace

std::vector<int> elimination_round(const std::vector<Candidate>& pool,
                                   const LevelParams& params,
                                   const RegNorm& norm, const FoldData& fold1,
                                   const BlockPartition& part1,
                                   const FoldData& fold2,
                                   const BlockPartition& part2,
                                   bool deterministic_do,
                                   PhaseReport* report) {
  std::vector<int> survivors;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    bool wins_all = true;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (a == b) continue;
      if (report) ++report->oracle_calls;
      const bool contested =
          deterministic_do
              ? distance_oracle_deterministic(pool[a], pool[b], params, norm)
              : distance_oracle(pool[a], pool[b], params, norm,
                                distance_stat(pool[a], pool[b], fold1, part1));
      if (!contested) {
        if (report) ++report->matches_abandoned;
        continue;
      }
      if (report) ++report->matches_played;
      if (!elimination_match(pool[a], pool[b], fold2, part2, params.lambda,
                             norm)) {
        wins_all = false;
        break;
      }
    }
    if (wins_all) survivors.push_back(pool[a].id);
  }
  return survivors;
}

std::vector<int> champions_round(const std::vector<Candidate>& pool,
                                 const std::vector<int>& hprime,
                                 const FoldData& fold3,
                                 const BlockPartition& part3, double r3_sq,
                                 PhaseReport* report) {
  std::vector<int> survivors;
  for (int fid : hprime) {
    const auto fa = std::find_if(pool.begin(), pool.end(),
                                 [&](const Candidate& c) { return c.id == fid; });
    if (fa == pool.end()) continue;
    bool champion = true;
    for (int hid : hprime) {
      if (hid == fid) continue;
      const auto hb = std::find_if(pool.begin(), pool.end(),
                                   [&](const Candidate& c) { return c.id == hid; });
      if (hb == pool.end()) continue;
      if (report) ++report->matches_played;
      if (!champions_match(*fa, *hb, fold3, part3, r3_sq)) {
        champion = false;
        break;
      }
    }
    if (champion) survivors.push_back(fid);
  }
  return survivors;
}

SelectionResult final_selection(const std::vector<std::vector<int>>& h_sets) {
  if (h_sets.empty()) {
    throw std::invalid_argument("final_selection: K >= 1 required");
  }
  SelectionResult sel;
  std::vector<int> inter = h_sets[0];
  std::sort(inter.begin(), inter.end());
  if (inter.empty()) return sel;  // H_1 empty: no winner
  int level = 1;
  for (std::size_t l = 1; l < h_sets.size(); ++l) {
    std::vector<int> next = h_sets[l];
    std::sort(next.begin(), next.end());
    std::vector<int> merged;
    std::set_intersection(inter.begin(), inter.end(), next.begin(), next.end(),
                          std::back_inserter(merged));
    if (merged.empty()) break;
    inter = std::move(merged);
    level = static_cast<int>(l) + 1;
  }
  sel.ok = true;
  sel.level = level;
  sel.winner_id = inter.front();
  return sel;
}

TournamentResult run_tournament(const std::vector<Candidate>& pool,
                                const ThreeFoldData& data, Penalty penalty,
                                const ProcedureConstants& consts,
                                std::optional<double> r_hat_override,
                                std::size_t n2_override) {
  if (pool.empty()) {
    throw std::invalid_argument("run_tournament: pool must be nonempty");
  }
  const Eigen::Index d_idx = pool.front().t.size();
  const int d = static_cast<int>(d_idx);
  for (const auto& c : pool) {
    if (c.t.size() != d_idx) {
      throw std::invalid_argument("run_tournament: candidate dimension mismatch");
    }
  }
  const auto N = static_cast<std::size_t>(data.fold1.X.rows());
  if (data.fold2.X.rows() != static_cast<Eigen::Index>(N) ||
      data.fold3.X.rows() != static_cast<Eigen::Index>(N) ||
      data.fold1.X.cols() != d_idx || data.fold2.X.cols() != d_idx ||
      data.fold3.X.cols() != d_idx) {
    throw std::invalid_argument("run_tournament: folds inconsistent");
  }
  consts.validate();

  const RegNorm norm = penalty == Penalty::Lasso
                           ? RegNorm::l1()
                           : RegNorm::sorted_l1(slope_weights(d, consts.slope_c0));
  const int K = SparsityHierarchy::level_count(d);

  TournamentResult out;
  out.params.reserve(static_cast<std::size_t>(K));
  out.reports.reserve(static_cast<std::size_t>(K));

  PoolCache cache(pool, data, norm);

  // Phase-1 partition is level independent; the pairwise distance
  // statistic is computed once and reused at every level.
  const BlockPartition part1 = partition_blocks(
      N, std::clamp<std::size_t>(
             static_cast<std::size_t>(static_cast<double>(N) / consts.m1), 1, N));
  const std::size_t P = pool.size();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P),
                                              static_cast<Eigen::Index>(P));
  Eigen::MatrixXd psi_diff = phi;
  if (!consts.use_deterministic_do) {
    for (std::size_t a = 0; a < P; ++a) {
      for (std::size_t b = a + 1; b < P; ++b) {
        const double v = distance_stat_pred(cache.pred1[a], cache.pred1[b], part1);
        phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
        phi(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
      }
    }
  }
  for (std::size_t a = 0; a < P; ++a) {
    for (std::size_t b = a + 1; b < P; ++b) {
      const double v = consts.use_deterministic_do
                           ? (pool[a].t - pool[b].t).norm()
                           : norm_eval(norm, pool[a].t - pool[b].t);
      psi_diff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      psi_diff(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }
  // For the deterministic oracle, psi_diff must hold Psi while the l2
  // distance feeds the threshold test; keep both when the flag is set.
  Eigen::MatrixXd l2_diff;
  if (consts.use_deterministic_do) {
    l2_diff = psi_diff;
    for (std::size_t a = 0; a < P; ++a) {
      for (std::size_t b = a + 1; b < P; ++b) {
        const double v = norm_eval(norm, pool[a].t - pool[b].t);
        psi_diff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
        psi_diff(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
      }
    }
  }

  std::vector<std::vector<int>> h_sets;
  h_sets.reserve(static_cast<std::size_t>(K));

  for (int level = 1; level <= K; ++level) {
    LevelParams lp = level_params(penalty, consts, d, N, level, r_hat_override);
    if (n2_override >= 1 && lp.active) {
      lp.n2 = std::min<std::size_t>(n2_override, N);
      lp.m2 = N / lp.n2;
    }
    PhaseReport report;
    report.level = level;
    report.active = lp.active;

    // Membership filter: |supp| <= s_l up to a Psi-residual of rho_l.
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < P; ++a) {
      if (!lp.active ||
          best_sparse_residual(norm, pool[a].t, lp.sparsity) <= lp.rho) {
        members.push_back(a);
      }
    }

    if (!lp.active) {
      // DO_l == 0: every match is abandoned, both phases keep everyone.
      for (std::size_t a : members) report.survivors_prime.push_back(pool[a].id);
      report.survivors = report.survivors_prime;
      report.matches_abandoned =
          static_cast<long>(members.size() * (members.size() - 1));
      h_sets.push_back(report.survivors);
      out.params.push_back(lp);
      out.reports.push_back(std::move(report));
      continue;
    }

    const BlockPartition part2 = partition_blocks(N, lp.n2);

    std::vector<std::size_t> hprime_pos;
    for (std::size_t a : members) {
      bool wins_all = true;
      for (std::size_t b : members) {
        if (a == b) continue;
        ++report.oracle_calls;
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        bool contested;
        if (consts.use_deterministic_do) {
          contested = psi_diff(ia, ib) >= lp.rho || l2_diff(ia, ib) >= lp.r1;
        } else {
          contested = psi_diff(ia, ib) >= lp.rho || phi(ia, ib) >= lp.r1;
        }
        if (!contested) {
          ++report.matches_abandoned;
          continue;
        }
        ++report.matches_played;
        if (!elimination_match_pred(cache.pred2[a], cache.pred2[b], data.fold2.Y,
                                    part2, lp.lambda, cache.psi[a],
                                    cache.psi[b])) {
          wins_all = false;
          break;
        }
      }
      if (wins_all) hprime_pos.push_back(a);
    }
    for (std::size_t a : hprime_pos) report.survivors_prime.push_back(pool[a].id);

    // Champions league on fold3 with the same block geometry as fold2.
    const BlockPartition part3 = partition_blocks(N, lp.n2);
    report.survivors = champions_filter(pool, hprime_pos, cache.pred3,
                                        data.fold3.Y, part3, lp.r3_sq, &report);

    h_sets.push_back(report.survivors);
    out.params.push_back(lp);
    out.reports.push_back(std::move(report));
  }

  const SelectionResult sel = final_selection(h_sets);
  if (sel.ok) {
    out.has_winner = true;
    out.winner_id = sel.winner_id;
    out.level = sel.level;
    for (const auto& c : pool) {
      if (c.id == sel.winner_id) {
        out.winner_t = c.t;
        break;
      }
    }
    const auto& lp = out.params[static_cast<std::size_t>(sel.level - 1)];
    out.r_hat_selected = lp.r_hat;
  }
  return out;
}

double mom_validation_error(const Eigen::VectorXd& t, const FoldData& fold,
                            std::size_t n_blocks) {
  const auto N = static_cast<std::size_t>(fold.X.rows());
  const BlockPartition part =
      partition_blocks(N, std::clamp<std::size_t>(n_blocks, 1, N));
  const Eigen::VectorXd pred = predict(fold, t);
  std::vector<double> sq(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = pred[static_cast<Eigen::Index>(i)] -
                     fold.Y[static_cast<Eigen::Index>(i)];
    sq[i] = r * r;
  }
  return median_of_block_means(sq, part);
}

AdaptiveResult adaptive_radius_run(const std::vector<Candidate>& pool,
                                   const ThreeFoldData& data, Penalty penalty,
                                   const ProcedureConstants& consts, double r0,
                                   int depth, double validation_fraction) {
  if (!(validation_fraction > 0.0) || validation_fraction > 0.5) {
    throw std::invalid_argument(
        "adaptive_radius_run: validation_fraction in (0, 1/2] required");
  }
  const auto N = static_cast<std::size_t>(data.fold2.X.rows());
  auto n_val = static_cast<Eigen::Index>(validation_fraction *
                                         static_cast<double>(N));
  n_val = std::clamp<Eigen::Index>(n_val, 1, static_cast<Eigen::Index>(N) - 1);
  const Eigen::Index n_train = static_cast<Eigen::Index>(N) - n_val;

  // The validation slice is carved off the tail of fold2 before any phase
  // sees it; folds 1 and 3 are trimmed to keep the three folds equal.
  ThreeFoldData trimmed;
  trimmed.fold1.X = data.fold1.X.topRows(n_train);
  trimmed.fold1.Y = data.fold1.Y.head(n_train);
  trimmed.fold2.X = data.fold2.X.topRows(n_train);
  trimmed.fold2.Y = data.fold2.Y.head(n_train);
  trimmed.fold3.X = data.fold3.X.topRows(n_train);
  trimmed.fold3.Y = data.fold3.Y.head(n_train);
  FoldData validation;
  validation.X = data.fold2.X.bottomRows(n_val);
  validation.Y = data.fold2.Y.tail(n_val);
  const std::size_t val_blocks =
      std::min<std::size_t>(11, static_cast<std::size_t>(n_val));

  const std::vector<double> grid = radius_grid(r0, depth);
  AdaptiveResult out;
  out.warning = true;
  bool have_accepted = false;
  double accepted_err = 0.0;

  for (double r_hat : grid) {
    TournamentResult res =
        run_tournament(pool, trimmed, penalty, consts, r_hat);
    if (!res.has_winner) break;
    const double err = mom_validation_error(res.winner_t, validation, val_blocks);
    out.validation_errors.push_back(err);
    if (!have_accepted) {
      have_accepted = true;
      out.result = std::move(res);
      out.chosen_r_hat = r_hat;
      accepted_err = err;
      out.warning = false;
      continue;
    }
    if (err <= 1.5 * accepted_err) {
      out.result = std::move(res);
      out.chosen_r_hat = r_hat;
      accepted_err = err;
    } else {
      break;
    }
  }
  return out;
}

}  // namespace momtour
