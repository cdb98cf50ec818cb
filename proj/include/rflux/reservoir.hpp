#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rflux/dfba.hpp"

namespace rflux {

struct EnsembleConfig {
  int n_templates = 20;
  int samples_per_template = 25;
  int train_per_template = 20;  // the rest of each template's samples are test
  double range_low = 0.0;       // mM, both sugars
  double range_high = 45.0;
  double noise_std = 0.2;       // mM
  std::uint64_t seed = 0;

  /// Throws ConfigError on empty sizes, an empty train or test split,
  /// range_low >= range_high, negative range or negative noise.
  void validate() const;
};

struct EnsembleSample {
  int template_index = 0;
  NutrientInput input;
  bool train = false;
};

/// Templates are uniform in [range_low, range_high]^2; each sample is its
/// template plus N(0, noise_std) per sugar, clamped at 0. Samples are stored
/// template by template, train samples first.
struct InputEnsemble {
  std::vector<NutrientInput> templates;
  std::vector<EnsembleSample> samples;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> train_indices() const;
  std::vector<std::size_t> test_indices() const;
};

InputEnsemble generate_ensemble(const EnsembleConfig& config);

/// Binary labelings of the templates, +1 / -1. No labeling is constant and
/// no two are equal.
struct TaskSet {
  std::vector<std::vector<int>> labels;  // [task][template]
  std::uint64_t seed = 0;
};

/// Throws ConfigError when n_tasks exceeds the number of distinct
/// non-constant labelings of n_templates.
TaskSet generate_tasks(int n_tasks, int n_templates, std::uint64_t seed);

/// Rows = trajectories, columns = the first T biomass values.
/// Throws ConfigError when T < 1 or a trajectory is shorter than T.
Eigen::MatrixXd build_state_matrix(std::span<const GrowthTrajectory> trajectories, int T);

/// Rows = samples, columns = (glucose, xylose) input concentrations.
Eigen::MatrixXd input_feature_matrix(std::span<const NutrientInput> inputs);

/// 7 geometric points from 1e-3 to 1.
std::vector<double> default_alphas();

struct RidgeReadout {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double alpha = 0.0;

  Eigen::VectorXd decision(const Eigen::MatrixXd& features) const;
  /// sign of the decision; exactly 0 maps to +1.
  Eigen::VectorXi predict(const Eigen::MatrixXd& features) const;
};

/// Ridge on centred features and +-1 targets at one alpha. The intercept is
/// not penalised. Throws std::invalid_argument on shape mismatch or alpha <= 0.
RidgeReadout fit_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels, double alpha);

/// Chooses alpha by exact leave-one-out squared error (closed form from the
/// SVD of the centred features); the first minimum along `alphas` wins.
/// Throws std::invalid_argument if the labels are not +-1 or are all one class.
RidgeReadout fit_ridge_readout(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                               std::span<const double> alphas);

struct AccuracyReport {
  int prefix_length = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population std across tasks
  std::vector<double> task_accuracy;
  std::vector<double> task_alpha;
};

/// Fits one readout per task on the train rows and scores the test rows.
/// Row i of `states` belongs to ensemble.samples[i]. All tasks share one
/// decomposition of the train features.
AccuracyReport evaluate_tasks(const Eigen::MatrixXd& states, const InputEnsemble& ensemble,
                              const TaskSet& tasks, std::span<const double> alphas);

}  // namespace rflux
