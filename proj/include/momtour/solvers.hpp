#ifndef MOMTOUR_SOLVERS_HPP
#define MOMTOUR_SOLVERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "momtour/complexity.hpp"

namespace momtour {

struct SolverConfig {
  int max_iters = 2000;
  double tol = 1e-9;                  // convergence tolerance on parameter change
  std::vector<double> lambda_grid;    // positive, strictly decreasing
  int subsample_count = 10;
  double subsample_fraction = 0.9;
  double dedup_tol = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FitResult {
  Eigen::VectorXd t;
  bool converged = false;
  int iters = 0;
  double kkt_residual = 0.0;
};

/// Cyclic coordinate descent for
///   min_t (1/N) ||X t - Y||^2 + lambda ||t||_1.
FitResult lasso_cd(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                   double lambda, const SolverConfig& config,
                   const std::optional<Eigen::VectorXd>& warm_start = {});

/// Exact prox of v -> step * sum_i w_i v_i^* at z: argmin_v
/// 0.5 ||v - z||^2 + step * sum_i w_i v_i^*, computed by stack-based
/// pooling on the sorted magnitudes.
Eigen::VectorXd sorted_l1_prox(const Eigen::VectorXd& z,
                               const Eigen::VectorXd& weights, double step);

enum class StepRule { Backtracking, Fixed };

/// Proximal gradient for (1/N)||X t - Y||^2 + sum_i w_i t_i^*.
FitResult slope_pg(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y,
                   const Eigen::VectorXd& weights, StepRule step_rule,
                   const SolverConfig& config,
                   const std::optional<Eigen::VectorXd>& warm_start = {});

struct Candidate {
  int id = 0;
  Eigen::VectorXd t;
  std::string provenance;
};

/// Candidate pool: solver fits on row-subsamples of the given fold across
/// the lambda grid, plus the zero vector and (optionally) the truth.
/// Deduplicated by l2 distance <= dedup_tol, keeping the lowest id.
std::vector<Candidate> build_pool(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& Y, Penalty penalty,
                                  const SolverConfig& config,
                                  const std::optional<Eigen::VectorXd>& truth,
                                  double slope_c0 = 1.0);

}  // namespace momtour

#endif  // MOMTOUR_SOLVERS_HPP
