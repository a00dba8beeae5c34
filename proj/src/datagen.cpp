#include "momtour/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "momtour/csv.hpp"
#include "momtour/rng.hpp"

namespace momtour {

void ScenarioSpec::validate() const {
  if (d < 1 || n_per_fold < 1) {
    throw std::invalid_argument("ScenarioSpec: d >= 1 and n_per_fold >= 1 required");
  }
  if (truth_s < 0 || truth_s > d) {
    throw std::invalid_argument("ScenarioSpec: need 0 <= s <= d");
  }
  if (design == DesignKind::StudentT && !(design_nu > 4.0)) {
    throw std::invalid_argument("ScenarioSpec: Student-t design needs nu > 4");
  }
  if (noise == NoiseKind::StudentT && !(noise_nu > 2.0)) {
    throw std::invalid_argument("ScenarioSpec: Student-t noise needs nu > 2");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("ScenarioSpec: sigma >= 0 required");
  }
  if (noise == NoiseKind::Contaminated &&
      (outlier_prob < 0.0 || outlier_prob > 1.0 || !(outlier_scale > 0.0))) {
    throw std::invalid_argument("ScenarioSpec: bad contamination parameters");
  }
  if (truth_support != "prefix" && truth_support != "spread" &&
      truth_support != "random") {
    throw std::invalid_argument("ScenarioSpec: unknown support rule");
  }
  if (truth_eps1 < 0.0) {
    throw std::invalid_argument("ScenarioSpec: truth_eps1 >= 0 required");
  }
}

namespace {

double draw_design_entry(const ScenarioSpec& spec, std::mt19937_64& rng,
                         std::normal_distribution<double>& gauss,
                         std::student_t_distribution<double>& tdist) {
  switch (spec.design) {
    case DesignKind::Gaussian:
      return gauss(rng);
    case DesignKind::Rademacher:
      return (rng() & 1u) ? 1.0 : -1.0;
    case DesignKind::StudentT:
      return tdist(rng) * std::sqrt((spec.design_nu - 2.0) / spec.design_nu);
  }
  return 0.0;
}

double draw_noise(const ScenarioSpec& spec, std::mt19937_64& rng,
                  std::normal_distribution<double>& gauss,
                  std::student_t_distribution<double>& tnoise,
                  std::uniform_real_distribution<double>& unif) {
  switch (spec.noise) {
    case NoiseKind::Gaussian:
      return spec.sigma * gauss(rng);
    case NoiseKind::StudentT:
      return spec.sigma * std::sqrt((spec.noise_nu - 2.0) / spec.noise_nu) *
             tnoise(rng);
    case NoiseKind::Contaminated: {
      const double w = spec.sigma * gauss(rng);
      return (unif(rng) < spec.outlier_prob) ? w * spec.outlier_scale : w;
    }
  }
  return 0.0;
}

}  // namespace

GroundTruth make_truth(const ScenarioSpec& spec) {
  spec.validate();
  GroundTruth gt;
  gt.sigma = spec.sigma;
  gt.t0 = Eigen::VectorXd::Zero(spec.d);

  std::mt19937_64 rng(child_seed(spec.seed, 0));
  gt.support.resize(static_cast<std::size_t>(spec.truth_s));
  if (spec.truth_support == "prefix") {
    std::iota(gt.support.begin(), gt.support.end(), 0);
  } else if (spec.truth_support == "spread") {
    for (int k = 0; k < spec.truth_s; ++k) {
      gt.support[static_cast<std::size_t>(k)] =
          static_cast<int>(static_cast<long long>(k) * spec.d / spec.truth_s);
    }
  } else {  // random
    std::vector<int> all(static_cast<std::size_t>(spec.d));
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < spec.truth_s; ++k) {
      std::uniform_int_distribution<int> pick(k, spec.d - 1);
      std::swap(all[static_cast<std::size_t>(k)],
                all[static_cast<std::size_t>(pick(rng))]);
    }
    all.resize(static_cast<std::size_t>(spec.truth_s));
    std::sort(all.begin(), all.end());
    gt.support = all;
  }
  for (std::size_t k = 0; k < gt.support.size(); ++k) {
    gt.t0[gt.support[k]] = (k % 2 == 0 ? 1.0 : -1.0) * spec.truth_coef;
  }
  if (spec.truth_eps1 > 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd u(spec.d);
    for (int i = 0; i < spec.d; ++i) u[i] = gauss(rng);
    const double l1 = u.lpNorm<1>();
    if (l1 > 0.0) gt.t0 += (spec.truth_eps1 / l1) * u;
  }
  return gt;
}

FoldData generate_fold_with_truth(const ScenarioSpec& spec,
                                  const Eigen::VectorXd& t0,
                                  std::uint64_t stream_index) {
  std::mt19937_64 rng(child_seed(spec.seed, stream_index));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::student_t_distribution<double> tdesign(
      spec.design == DesignKind::StudentT ? spec.design_nu : 5.0);
  std::student_t_distribution<double> tnoise(
      spec.noise == NoiseKind::StudentT ? spec.noise_nu : 5.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  FoldData fold;
  fold.X.resize(spec.n_per_fold, spec.d);
  fold.Y.resize(spec.n_per_fold);
  for (int i = 0; i < spec.n_per_fold; ++i) {
    for (int j = 0; j < spec.d; ++j) {
      fold.X(i, j) = draw_design_entry(spec, rng, gauss, tdesign);
    }
    fold.Y[i] = fold.X.row(i).dot(t0) +
                draw_noise(spec, rng, gauss, tnoise, unif);
  }
  return fold;
}

FoldData generate_fold(const ScenarioSpec& spec, std::uint64_t stream_index) {
  const GroundTruth gt = make_truth(spec);
  return generate_fold_with_truth(spec, gt.t0, stream_index);
}

std::pair<ThreeFoldData, GroundTruth> generate(const ScenarioSpec& spec) {
  const GroundTruth gt = make_truth(spec);
  ThreeFoldData data;
  data.fold1 = generate_fold_with_truth(spec, gt.t0, 1);
  data.fold2 = generate_fold_with_truth(spec, gt.t0, 2);
  data.fold3 = generate_fold_with_truth(spec, gt.t0, 3);
  return {std::move(data), gt};
}

double moment_ratio_check(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("moment_ratio_check: need >= 2 samples");
  }
  double m2 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double x2 = x * x;
    m2 += x2;
    m4 += x2 * x2;
  }
  m2 /= static_cast<double>(samples.size());
  m4 /= static_cast<double>(samples.size());
  if (m2 == 0.0) {
    throw std::invalid_argument("moment_ratio_check: all samples are zero");
  }
  return std::pow(m4, 0.25) / std::sqrt(m2);
}

void dump_dataset(std::ostream& os, const FoldData& fold,
                  const ScenarioSpec& spec, const std::string& digest) {
  os << "# d=" << std::to_string(spec.d)
     << " N=" << std::to_string(fold.X.rows())
     << " seed=" << std::to_string(spec.seed) << " digest=" << digest << "\n";
  for (Eigen::Index i = 0; i < fold.X.rows(); ++i) {
    os << format_double(fold.Y[i]);
    for (Eigen::Index j = 0; j < fold.X.cols(); ++j) {
      os << ',' << format_double(fold.X(i, j));
    }
    os << "\n";
  }
}

}  // namespace momtour
