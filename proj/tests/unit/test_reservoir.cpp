#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "rflux/error.hpp"
#include "rflux/reservoir.hpp"

using namespace rflux;
using rflux::testing::dense_ridge;

namespace {

Eigen::VectorXd random_labels(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = (rng() & 1) ? 1.0 : -1.0;
  y[0] = 1.0;
  y[1] = -1.0;
  return y;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd F(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) F(i, j) = 3.0 + 2.0 * g(rng);
  }
  return F;
}

// Leave-one-out squared error by refitting n times.
double brute_loo(const Eigen::MatrixXd& F, const Eigen::VectorXd& y, double alpha) {
  const Eigen::Index n = F.rows();
  double err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r != i) keep.push_back(r);
    }
    const auto [w, b] = dense_ridge(F(keep, Eigen::all), y(keep), alpha);
    const double r = y[i] - (F.row(i).dot(w) + b);
    err += r * r;
  }
  return err;
}

}  // namespace

TEST(Ridge, MatchesDenseSolveAcrossAlphaGrid) {
  std::mt19937_64 rng(11);
  for (auto [n, p] : {std::pair<int, int>{10, 5}, {50, 10}}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXd F = random_matrix(rng, n, p);
      const Eigen::VectorXd y = random_labels(rng, n);
      for (double alpha : default_alphas()) {
        const RidgeReadout r = fit_ridge(F, y, alpha);
        const auto [w, b] = dense_ridge(F, y, alpha);
        EXPECT_LE((r.weights - w).cwiseAbs().maxCoeff(), 1e-8) << n << "x" << p << " alpha " << alpha;
        EXPECT_NEAR(r.intercept, b, 1e-8);
        EXPECT_EQ(r.alpha, alpha);
      }
    }
  }
}

TEST(Ridge, LeaveOneOutSelectionMatchesRefitting) {
  std::mt19937_64 rng(12);
  const std::vector<double> alphas = {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0};
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd F = random_matrix(rng, 20, 6);
    const Eigen::VectorXd y = random_labels(rng, 20);
    double best = std::numeric_limits<double>::infinity(), best_alpha = 0.0;
    for (double a : alphas) {
      const double e = brute_loo(F, y, a);
      if (e < best) {
        best = e;
        best_alpha = a;
      }
    }
    EXPECT_EQ(fit_ridge_readout(F, y, alphas).alpha, best_alpha) << rep;
  }
}

TEST(Ridge, DefaultAlphaGrid) {
  const auto a = default_alphas();
  ASSERT_EQ(a.size(), 7u);
  EXPECT_DOUBLE_EQ(a.front(), 1e-3);
  EXPECT_DOUBLE_EQ(a.back(), 1.0);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_NEAR(a[i] / a[i - 1], std::pow(10.0, 0.5), 1e-12);
}

TEST(Ridge, RejectsBadInput) {
  const Eigen::MatrixXd F = Eigen::MatrixXd::Random(6, 2);
  Eigen::VectorXd y(6);
  y << 1, -1, 1, -1, 1, -1;
  EXPECT_THROW(fit_ridge(F, y, 0.0), std::invalid_argument);
  EXPECT_THROW(fit_ridge(F, y.head(5), 1.0), std::invalid_argument);
  EXPECT_THROW(fit_ridge(F, Eigen::VectorXd::Ones(6), 1.0), std::invalid_argument);
  Eigen::VectorXd bad = y;
  bad[0] = 0.5;
  EXPECT_THROW(fit_ridge(F, bad, 1.0), std::invalid_argument);
}

TEST(Ridge, ZeroScorePredictsPositive) {
  RidgeReadout r;
  r.weights = Eigen::VectorXd::Zero(2);
  r.intercept = 0.0;
  const Eigen::VectorXi p = r.predict(Eigen::MatrixXd::Ones(3, 2));
  EXPECT_TRUE((p.array() == 1).all());
}

TEST(Ensemble, LayoutAndSplit) {
  EnsembleConfig c;
  c.seed = 5;
  const InputEnsemble e = generate_ensemble(c);
  ASSERT_EQ(e.templates.size(), 20u);
  ASSERT_EQ(e.samples.size(), 500u);
  EXPECT_EQ(e.train_indices().size(), 400u);
  EXPECT_EQ(e.test_indices().size(), 100u);
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    EXPECT_EQ(e.samples[i].template_index, static_cast<int>(i / 25));
    EXPECT_EQ(e.samples[i].train, i % 25 < 20);
    EXPECT_GE(e.samples[i].input.glucose, 0.0);
    EXPECT_GE(e.samples[i].input.xylose, 0.0);
  }
  for (const auto& t : e.templates) {
    EXPECT_GE(t.glucose, 0.0);
    EXPECT_LE(t.glucose, 45.0);
    EXPECT_GE(t.xylose, 0.0);
    EXPECT_LE(t.xylose, 45.0);
  }
}

TEST(Ensemble, NoiseFreeSamplesEqualTemplates) {
  EnsembleConfig c;
  c.noise_std = 0.0;
  c.seed = 9;
  const InputEnsemble e = generate_ensemble(c);
  for (const auto& s : e.samples) {
    EXPECT_EQ(s.input.glucose, e.templates[s.template_index].glucose);
    EXPECT_EQ(s.input.xylose, e.templates[s.template_index].xylose);
  }
}

TEST(Ensemble, SeedDeterminesDraws) {
  EnsembleConfig c;
  c.seed = 3;
  const auto a = generate_ensemble(c), b = generate_ensemble(c);
  c.seed = 4;
  const auto other = generate_ensemble(c);
  EXPECT_EQ(a.samples[17].input.glucose, b.samples[17].input.glucose);
  EXPECT_NE(a.templates[0].glucose, other.templates[0].glucose);
}

TEST(Ensemble, Validation) {
  EnsembleConfig c;
  c.train_per_template = 25;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.range_low = 50.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.noise_std = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Tasks, DistinctNonConstantLabelings) {
  const TaskSet t = generate_tasks(100, 20, 2);
  ASSERT_EQ(t.labels.size(), 100u);
  std::set<std::vector<int>> seen;
  for (const auto& l : t.labels) {
    ASSERT_EQ(l.size(), 20u);
    int pos = 0;
    for (int v : l) {
      ASSERT_TRUE(v == 1 || v == -1);
      pos += v == 1;
    }
    EXPECT_GT(pos, 0);
    EXPECT_LT(pos, 20);
    seen.insert(l);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Tasks, TooManyTasksForTemplates) {
  EXPECT_NO_THROW(generate_tasks(2, 2, 0));
  EXPECT_THROW(generate_tasks(3, 2, 0), ConfigError);
  EXPECT_THROW(generate_tasks(1, 1, 0), ConfigError);
}

TEST(StateMatrix, PrefixesAreNested) {
  std::vector<GrowthTrajectory> trajs(3);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 5; ++k) trajs[i].biomass.push_back(10 * i + k);
    trajs[i].time = trajs[i].biomass;
  }
  const Eigen::MatrixXd m5 = build_state_matrix(trajs, 5);
  const Eigen::MatrixXd m3 = build_state_matrix(trajs, 3);
  ASSERT_EQ(m5.rows(), 3);
  ASSERT_EQ(m3.cols(), 3);
  EXPECT_EQ(m3, m5.leftCols(3));
  EXPECT_EQ(m5(2, 4), 24.0);
  EXPECT_THROW(build_state_matrix(trajs, 6), ConfigError);
  EXPECT_THROW(build_state_matrix(trajs, 0), ConfigError);
}

TEST(Evaluate, SeparableFeaturesScorePerfectly) {
  EnsembleConfig c;
  c.seed = 1;
  const InputEnsemble e = generate_ensemble(c);
  const TaskSet tasks = generate_tasks(5, 20, 8);
  // One column per task holding that task's label: trivially separable.
  Eigen::MatrixXd states(e.samples.size(), 5);
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    for (int k = 0; k < 5; ++k) states(i, k) = tasks.labels[k][e.samples[i].template_index];
  }
  const AccuracyReport r = evaluate_tasks(states, e, tasks, default_alphas());
  EXPECT_EQ(r.mean_accuracy, 1.0);
  EXPECT_EQ(r.std_accuracy, 0.0);
  EXPECT_EQ(r.prefix_length, 5);
}

TEST(Evaluate, InputOnlyBaselineRegression) {
  EnsembleConfig c;
  c.seed = 1;
  const InputEnsemble e = generate_ensemble(c);
  const TaskSet tasks = generate_tasks(100, 20, 2);
  std::vector<NutrientInput> inputs;
  for (const auto& s : e.samples) inputs.push_back(s.input);
  const AccuracyReport r = evaluate_tasks(input_feature_matrix(inputs), e, tasks, default_alphas());
  EXPECT_GE(r.mean_accuracy, 0.53);
  EXPECT_LE(r.mean_accuracy, 0.67);
  EXPECT_NEAR(r.mean_accuracy, 0.6508, 1e-12);
  EXPECT_NEAR(r.std_accuracy, 0.0730161626, 1e-9);
  EXPECT_EQ(r.task_accuracy.size(), 100u);
}
