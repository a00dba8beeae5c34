#ifndef MOMTOUR_NORMS_HPP
#define MOMTOUR_NORMS_HPP

#include <Eigen/Dense>
#include <vector>

namespace momtour {

enum class NormKind { L1, SortedL1 };

/// Regularization norm: plain l1, or the sorted-l1 norm
/// Psi(z) = sum_i beta_i * z_i^* with non-increasing positive weights beta
/// and z^* the magnitudes of z sorted non-increasingly.
struct RegNorm {
  NormKind kind = NormKind::L1;
  Eigen::VectorXd weights;  // used only for SortedL1

  static RegNorm l1() { return RegNorm{NormKind::L1, {}}; }
  static RegNorm sorted_l1(Eigen::VectorXd beta);
};

double norm_eval(const RegNorm& norm, const Eigen::VectorXd& z);

/// SLOPE weights beta_i = c0 * sqrt(log(e*d/i)), i = 1..d.
Eigen::VectorXd slope_weights(int d, double c0);

/// Psi(z - v*) where v* keeps the s largest-magnitude entries of z
/// (ties broken by lower index) and zeros the rest.
double best_sparse_residual(const RegNorm& norm, const Eigen::VectorXd& z, int s);

/// Nested sparsity classes: level l has budget s_l = ceil(d / 2^(l-1)) and
/// approximation radius rho_l (+inf encodes an unrestricted level).
struct SparsityHierarchy {
  int d = 0;
  int K = 0;
  std::vector<int> sparsity;    // s_1 = d, strictly decreasing, s_K >= 1
  std::vector<double> rho;      // non-increasing over the finite range

  static int level_count(int d);
  static int level_sparsity(int d, int level);
  static SparsityHierarchy make(int d, std::vector<double> rho);
};

/// t belongs to F_l iff its best s_l-sparse approximation error in Psi is
/// at most rho_l.
bool hierarchy_membership(const SparsityHierarchy& h, const RegNorm& norm,
                          const Eigen::VectorXd& t, int level);

/// Sufficient condition for Delta_l(rho, r) >= 4*rho/5:
/// L1: sqrt(s) <= c_delta * rho / r; SortedL1: B_s <= c_delta * rho / r
/// with B_s = sum_{i<=s} beta_i / sqrt(i).
bool delta_condition(const RegNorm& norm, int s, double rho, double r,
                     double c_delta);

/// B_s = sum_{i<=s} beta_i / sqrt(i) (SortedL1); sqrt(s) for L1.
double delta_condition_complexity(const RegNorm& norm, int s);

}  // namespace momtour

#endif  // MOMTOUR_NORMS_HPP
