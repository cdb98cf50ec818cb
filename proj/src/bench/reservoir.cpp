#include "rflux/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "rflux/error.hpp"

namespace rflux {

void EnsembleConfig::validate() const {
  if (n_templates < 1 || samples_per_template < 2) {
    throw ConfigError("ensemble needs >= 1 template and >= 2 samples per template");
  }
  if (train_per_template < 1 || train_per_template >= samples_per_template) {
    throw ConfigError("train_per_template must leave at least one train and one test sample");
  }
  if (!(range_low >= 0.0) || !(range_high > range_low) || !std::isfinite(range_high)) {
    throw ConfigError("ensemble range must satisfy 0 <= low < high < inf");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ConfigError("noise_std must be finite and non-negative");
  }
}

std::vector<std::size_t> InputEnsemble::train_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].train) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> InputEnsemble::test_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].train) out.push_back(i);
  }
  return out;
}

InputEnsemble generate_ensemble(const EnsembleConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uniform(config.range_low, config.range_high);
  std::normal_distribution<double> noise(0.0, 1.0);

  InputEnsemble out;
  out.noise_std = config.noise_std;
  out.seed = config.seed;
  for (int t = 0; t < config.n_templates; ++t) {
    const double g = uniform(rng);
    const double x = uniform(rng);
    out.templates.push_back({g, x});
  }
  for (int t = 0; t < config.n_templates; ++t) {
    const NutrientInput& base = out.templates[static_cast<std::size_t>(t)];
    for (int s = 0; s < config.samples_per_template; ++s) {
      NutrientInput in = base;
      if (config.noise_std > 0.0) {
        in.glucose = std::max(0.0, base.glucose + config.noise_std * noise(rng));
        in.xylose = std::max(0.0, base.xylose + config.noise_std * noise(rng));
      }
      out.samples.push_back({t, in, s < config.train_per_template});
    }
  }
  return out;
}

TaskSet generate_tasks(int n_tasks, int n_templates, std::uint64_t seed) {
  if (n_tasks < 1 || n_templates < 2) throw ConfigError("need >= 1 task and >= 2 templates");
  const double available = std::ldexp(1.0, n_templates) - 2.0;
  if (n_tasks > available) {
    throw ConfigError("cannot draw " + std::to_string(n_tasks) + " distinct labelings of " +
                      std::to_string(n_templates) + " templates");
  }
  // Bits are taken straight from the engine so the labels do not depend on
  // the standard library's distribution implementations.
  std::mt19937_64 rng(seed);
  TaskSet out;
  out.seed = seed;
  std::set<std::vector<int>> seen;
  while (static_cast<int>(out.labels.size()) < n_tasks) {
    std::vector<int> labels(static_cast<std::size_t>(n_templates));
    for (int& l : labels) l = (rng() >> 63) ? 1 : -1;
    const bool constant = std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; });
    if (constant || !seen.insert(labels).second) continue;
    out.labels.push_back(std::move(labels));
  }
  return out;
}

Eigen::MatrixXd build_state_matrix(std::span<const GrowthTrajectory> trajectories, int T) {
  if (T < 1) throw ConfigError("prefix length must be >= 1");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(trajectories.size()), T);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& b = trajectories[i].biomass;
    if (b.size() < static_cast<std::size_t>(T)) {
      throw ConfigError("trajectory " + std::to_string(i) + " has " + std::to_string(b.size()) +
                        " points, prefix needs " + std::to_string(T));
    }
    for (int t = 0; t < T; ++t) m(static_cast<Eigen::Index>(i), t) = b[static_cast<std::size_t>(t)];
  }
  return m;
}

Eigen::MatrixXd input_feature_matrix(std::span<const NutrientInput> inputs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(inputs.size()), 2);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = inputs[i].glucose;
    m(static_cast<Eigen::Index>(i), 1) = inputs[i].xylose;
  }
  return m;
}

std::vector<double> default_alphas() {
  std::vector<double> a(7);
  for (int k = 0; k < 7; ++k) a[static_cast<std::size_t>(k)] = std::pow(10.0, -3.0 + 0.5 * k);
  a.front() = 1e-3;
  a.back() = 1.0;
  return a;
}

Eigen::VectorXd RidgeReadout::decision(const Eigen::MatrixXd& features) const {
  if (features.cols() != weights.size()) throw std::invalid_argument("ridge: feature count mismatch");
  return (features * weights).array() + intercept;
}

Eigen::VectorXi RidgeReadout::predict(const Eigen::MatrixXd& features) const {
  const Eigen::VectorXd d = decision(features);
  return d.unaryExpr([](double v) { return v >= 0.0 ? 1 : -1; });
}

namespace {

void check_labels(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Y) {
  if (F.rows() != Y.rows()) throw std::invalid_argument("ridge: #rows != #labels");
  if (F.rows() < 2 || F.cols() < 1) throw std::invalid_argument("ridge: need >= 2 rows and >= 1 column");
  if (!F.allFinite()) throw std::invalid_argument("ridge: non-finite features");
  for (Eigen::Index k = 0; k < Y.cols(); ++k) {
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (Y(i, k) == 1.0) {
        pos = true;
      } else if (Y(i, k) == -1.0) {
        neg = true;
      } else {
        throw std::invalid_argument("ridge: labels must be +1 or -1");
      }
    }
    if (!pos || !neg) throw std::invalid_argument("ridge: labels contain a single class");
  }
}

// Centred SVD shared by every target column.
struct CentredSvd {
  Eigen::RowVectorXd x_mean;
  Eigen::MatrixXd U, V;
  Eigen::VectorXd s;

  explicit CentredSvd(const Eigen::MatrixXd& F) {
    x_mean = F.colwise().mean();
    const Eigen::MatrixXd Fc = F.rowwise() - x_mean;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Fc, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("ridge: SVD failed");
    U = svd.matrixU();
    V = svd.matrixV();
    s = svd.singularValues();
  }
};

// Multi-target ridge with per-column alpha selection by leave-one-out error.
struct RidgeBatch {
  Eigen::MatrixXd W;
  Eigen::RowVectorXd intercept;
  std::vector<double> alpha;
};

RidgeBatch fit_batch(const Eigen::MatrixXd& F, const Eigen::MatrixXd& Y, std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("ridge: empty alpha grid");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("ridge: alphas must be positive");
  }
  check_labels(F, Y);
  const Eigen::Index n = F.rows(), K = Y.cols();
  const CentredSvd svd(F);
  const Eigen::RowVectorXd y_mean = Y.colwise().mean();
  const Eigen::MatrixXd Yc = Y.rowwise() - y_mean;
  const Eigen::MatrixXd UtY = svd.U.transpose() * Yc;
  const Eigen::ArrayXd s2 = svd.s.array().square();
  const Eigen::MatrixXd U2 = svd.U.array().square().matrix();

  Eigen::VectorXd best_error = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best(static_cast<std::size_t>(K), 0);
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const Eigen::VectorXd shrink = (s2 / (s2 + alphas[a])).matrix();
    const Eigen::VectorXd one_minus_h = (1.0 - 1.0 / static_cast<double>(n)) - (U2 * shrink).array();
    const Eigen::MatrixXd fitted = svd.U * (shrink.asDiagonal() * UtY);
    const Eigen::MatrixXd loo = (Yc - fitted).array().colwise() / one_minus_h.array();
    const Eigen::VectorXd err = loo.colwise().squaredNorm().transpose();
    for (Eigen::Index k = 0; k < K; ++k) {
      if (err[k] < best_error[k]) {
        best_error[k] = err[k];
        best[static_cast<std::size_t>(k)] = a;
      }
    }
  }

  RidgeBatch out;
  out.W.resize(F.cols(), K);
  out.alpha.resize(static_cast<std::size_t>(K));
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (best[static_cast<std::size_t>(k)] == a) cols.push_back(k);
    }
    if (cols.empty()) continue;
    const Eigen::VectorXd gain = (svd.s.array() / (s2 + alphas[a])).matrix();
    const Eigen::MatrixXd w = svd.V * (gain.asDiagonal() * UtY(Eigen::all, cols));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.W.col(cols[c]) = w.col(static_cast<Eigen::Index>(c));
      out.alpha[static_cast<std::size_t>(cols[c])] = alphas[a];
    }
  }
  out.intercept = y_mean - svd.x_mean * out.W;
  return out;
}

}  // namespace

RidgeReadout fit_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels, double alpha) {
  const double grid[] = {alpha};
  return fit_ridge_readout(features, labels, grid);
}

RidgeReadout fit_ridge_readout(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                               std::span<const double> alphas) {
  const RidgeBatch b = fit_batch(features, labels, alphas);
  return {b.W.col(0), b.intercept[0], b.alpha[0]};
}

AccuracyReport evaluate_tasks(const Eigen::MatrixXd& states, const InputEnsemble& ensemble,
                              const TaskSet& tasks, std::span<const double> alphas) {
  if (states.rows() != static_cast<Eigen::Index>(ensemble.samples.size())) {
    throw std::invalid_argument("evaluate_tasks: one state row per ensemble sample required");
  }
  if (tasks.labels.empty()) throw std::invalid_argument("evaluate_tasks: no tasks");
  for (const auto& l : tasks.labels) {
    if (l.size() != ensemble.templates.size()) {
      throw std::invalid_argument("evaluate_tasks: task labels do not match the template count");
    }
  }
  const auto train = ensemble.train_indices();
  const auto test = ensemble.test_indices();
  const auto K = static_cast<Eigen::Index>(tasks.labels.size());
  auto label_matrix = [&](const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(rows.size()), K);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto t = static_cast<std::size_t>(ensemble.samples[rows[i]].template_index);
      for (Eigen::Index k = 0; k < K; ++k) {
        Y(static_cast<Eigen::Index>(i), k) = tasks.labels[static_cast<std::size_t>(k)][t];
      }
    }
    return Y;
  };
  const Eigen::MatrixXd Ytrain = label_matrix(train), Ytest = label_matrix(test);
  const Eigen::MatrixXd Ftrain = states(train, Eigen::all), Ftest = states(test, Eigen::all);

  const RidgeBatch fit = fit_batch(Ftrain, Ytrain, alphas);
  const Eigen::MatrixXd scores = (Ftest * fit.W).rowwise() + fit.intercept;

  AccuracyReport out;
  out.prefix_length = static_cast<int>(states.cols());
  out.task_alpha = fit.alpha;
  out.task_accuracy.resize(static_cast<std::size_t>(K));
  for (Eigen::Index k = 0; k < K; ++k) {
    int correct = 0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double predicted = scores(i, k) >= 0.0 ? 1.0 : -1.0;
      if (predicted == Ytest(i, k)) ++correct;
    }
    out.task_accuracy[static_cast<std::size_t>(k)] = static_cast<double>(correct) / static_cast<double>(scores.rows());
  }
  double sum = 0.0;
  for (double a : out.task_accuracy) sum += a;
  out.mean_accuracy = sum / static_cast<double>(K);
  double var = 0.0;
  for (double a : out.task_accuracy) var += (a - out.mean_accuracy) * (a - out.mean_accuracy);
  out.std_accuracy = std::sqrt(var / static_cast<double>(K));
  return out;
}

}  // namespace rflux
