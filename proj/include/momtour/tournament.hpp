#ifndef MOMTOUR_TOURNAMENT_HPP
#define MOMTOUR_TOURNAMENT_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "momtour/complexity.hpp"
#include "momtour/datagen.hpp"
#include "momtour/mom.hpp"
#include "momtour/norms.hpp"
#include "momtour/solvers.hpp"

namespace momtour {

/// Survivors and diagnostics of one level's elimination + champions phases.
struct PhaseReport {
  int level = 0;
  bool active = true;
  std::vector<int> survivors_prime;  // H'_l (candidate ids)
  std::vector<int> survivors;        // H_l
  long matches_played = 0;
  long matches_abandoned = 0;
  long oracle_calls = 0;
};

struct TournamentResult {
  bool has_winner = false;
  int winner_id = -1;
  int level = 0;  // l_1 of the final phase
  Eigen::VectorXd winner_t;
  double r_hat_selected = 0.0;  // r_hat at the selected level
  std::vector<PhaseReport> reports;
  std::vector<LevelParams> params;
};

Eigen::VectorXd predict(const FoldData& fold, const Eigen::VectorXd& t);

/// Phase-1 statistic: median over blocks of the mean |f(X_i) - h(X_i)|.
double distance_stat(const Candidate& f, const Candidate& h,
                     const FoldData& fold1, const BlockPartition& partition);
double distance_stat_pred(const Eigen::VectorXd& pred_f,
                          const Eigen::VectorXd& pred_h,
                          const BlockPartition& partition);

/// DO_l(f, h) = 1 iff Psi(f-h) >= rho_l, or Psi(f-h) < rho_l and
/// phi >= r_{l,1}. Inactive levels always return 0.
bool distance_oracle(const Candidate& f, const Candidate& h,
                     const LevelParams& params, const RegNorm& norm,
                     double phi);

/// Deterministic variant for isotropic designs: the l2 distance replaces
/// the phase-1 estimate.
bool distance_oracle_deterministic(const Candidate& f, const Candidate& h,
                                   const LevelParams& params,
                                   const RegNorm& norm);

/// "f beats h": per block j,
///   (1/m) sum_{i in I_j} ((h(X_i)-Y_i)^2 - (f(X_i)-Y_i)^2)
///     + lambda (Psi(h) - Psi(f)) > 0
/// on a strict majority of blocks.
bool elimination_match(const Candidate& f, const Candidate& h,
                       const FoldData& fold2, const BlockPartition& partition,
                       double lambda, const RegNorm& norm);
bool elimination_match_pred(const Eigen::VectorXd& pred_f,
                            const Eigen::VectorXd& pred_h,
                            const Eigen::VectorXd& Y,
                            const BlockPartition& partition, double lambda,
                            double psi_f, double psi_h);

/// H'_l: members of the pool (already filtered to F_l by the caller or
/// filtered here via hierarchy membership) that win every non-abandoned
/// match. Matches with DO = 0 are abandoned and count as wins for both.
std::vector<int> elimination_round(const std::vector<Candidate>& pool,
                                   const LevelParams& params,
                                   const RegNorm& norm, const FoldData& fold1,
                                   const BlockPartition& part1,
                                   const FoldData& fold2,
                                   const BlockPartition& part2,
                                   bool deterministic_do = false,
                                   PhaseReport* report = nullptr);

/// "f is a champion against h": per block j,
///   (2/m) sum_{i in I_j} (h(X_i)-f(X_i)) (f(X_i)-Y_i) >= -r3_sq
/// on a strict majority of blocks. Both f >> h and h >> f may hold.
bool champions_match(const Candidate& f, const Candidate& h,
                     const FoldData& fold3, const BlockPartition& partition,
                     double r3_sq);
bool champions_match_pred(const Eigen::VectorXd& pred_f,
                          const Eigen::VectorXd& pred_h,
                          const Eigen::VectorXd& Y,
                          const BlockPartition& partition, double r3_sq);

/// H_l = {f in H'_l : f >> h for every h in H'_l}.
std::vector<int> champions_round(const std::vector<Candidate>& pool,
                                 const std::vector<int>& hprime,
                                 const FoldData& fold3,
                                 const BlockPartition& part3, double r3_sq,
                                 PhaseReport* report = nullptr);

struct SelectionResult {
  bool ok = false;
  int level = 0;
  int winner_id = -1;
};

/// l_1 = largest l with nonempty prefix intersection of H_1..H_l; the
/// winner is the smallest id in that intersection.
SelectionResult final_selection(const std::vector<std::vector<int>>& h_sets);

/// The full four-phase tournament over a finite candidate pool.
TournamentResult run_tournament(const std::vector<Candidate>& pool,
                                const ThreeFoldData& data, Penalty penalty,
                                const ProcedureConstants& consts,
                                std::optional<double> r_hat_override = {},
                                std::size_t n2_override = 0);

struct AdaptiveResult {
  TournamentResult result;
  double chosen_r_hat = 0.0;
  bool warning = false;  // set when no radius produced a winner
  std::vector<double> validation_errors;
};

/// Runs the tournament along the radius grid r0/2^j, accepting smaller
/// radii while the winner's median-of-means validation error (on a slice
/// carved from fold2) does not grow by more than factor 1.5.
AdaptiveResult adaptive_radius_run(const std::vector<Candidate>& pool,
                                   const ThreeFoldData& data, Penalty penalty,
                                   const ProcedureConstants& consts, double r0,
                                   int depth, double validation_fraction);

/// Median-of-means of squared residuals of t on (X, Y).
double mom_validation_error(const Eigen::VectorXd& t, const FoldData& fold,
                            std::size_t n_blocks);

}  // namespace momtour

#endif  // MOMTOUR_TOURNAMENT_HPP
