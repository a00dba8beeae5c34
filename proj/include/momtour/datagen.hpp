#ifndef MOMTOUR_DATAGEN_HPP
#define MOMTOUR_DATAGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace momtour {

struct FoldData {
  Eigen::MatrixXd X;  // N x d design
  Eigen::VectorXd Y;  // N responses
};

struct ThreeFoldData {
  FoldData fold1, fold2, fold3;
};

enum class DesignKind { Gaussian, Rademacher, StudentT };
enum class NoiseKind { Gaussian, StudentT, Contaminated };

/// Synthetic regression scenario: isotropic design, additive mean-zero
/// noise independent of X, (approximately) sparse truth.
struct ScenarioSpec {
  int d = 16;
  int n_per_fold = 200;
  DesignKind design = DesignKind::Gaussian;
  double design_nu = 8.0;  // Student-t design dof, scaled to unit variance
  NoiseKind noise = NoiseKind::Gaussian;
  double sigma = 1.0;       // target noise scale ||W||_{L2}
  double noise_nu = 3.0;    // Student-t noise dof, scaled to sigma
  double outlier_prob = 0.05;
  double outlier_scale = 10.0;
  int truth_s = 1;
  std::string truth_support = "prefix";  // prefix | spread | random
  double truth_coef = 1.0;
  double truth_eps1 = 0.0;  // optional l1 perturbation of the truth
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  Eigen::VectorXd t0;
  std::vector<int> support;
  double sigma = 0.0;
};

/// Draws the three independent folds (disjoint RNG streams) and the truth.
std::pair<ThreeFoldData, GroundTruth> generate(const ScenarioSpec& spec);

/// One extra fold from stream `index` (>= 4 keeps it disjoint from the
/// three standard folds).
FoldData generate_fold(const ScenarioSpec& spec, std::uint64_t stream_index);

/// Ground truth vector alone (stream 0).
GroundTruth make_truth(const ScenarioSpec& spec);

/// Empirical L4/L2 ratio: (mean x^4)^{1/4} / (mean x^2)^{1/2}.
double moment_ratio_check(std::span<const double> samples);

/// Text dump: "# d=<d> N=<N> seed=<seed> digest=<hex>" then one
/// "y,x1,...,xd" row per sample.
void dump_dataset(std::ostream& os, const FoldData& fold,
                  const ScenarioSpec& spec, const std::string& digest);

}  // namespace momtour

#endif  // MOMTOUR_DATAGEN_HPP
