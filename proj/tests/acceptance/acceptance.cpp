// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rflux/experiment.hpp"
#include "rflux/lp.hpp"

using namespace rflux;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const int kJobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

StudyConfig study_config(bool mutants) {
  StudyConfig c;
  c.models.push_back({"e_coli_core", rflux::testing::data_path("e_coli_core_xyl.json"), "", {}});
  c.ensemble.seed = 1;
  c.task_seed = 2;
  c.ranks.kernel_seed = 3;
  c.ranks.generalisation_seed = 4;
  if (mutants) c.mutants = MutantStudySpec{"e_coli_core", {22.5, 22.5}};
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome kinetics() {
  const KineticParams p;
  const double a = uptake_glucose(0.015, p), b = uptake_xylose(0.01, 0.0, p), c = uptake_xylose(0.01, 0.01, p);
  const bool ok = std::abs(a - 5.0) <= 1e-12 && std::abs(b - 4.5) <= 1e-12 && std::abs(c - 2.25) <= 1e-12;
  return {ok, fmt("V_g=%.15g V_x=%.15g V_x(inhibited)=%.15g", a, b, c)};
}

Outcome catabolite_repression() {
  const double x0 = 10.0;
  const auto t = simulate(rflux::testing::xylose_core_model(), {10.0, x0});
  // Per-step consumption attributed to the phase of the state at the start of the step.
  double pre = 0.0, post = 0.0, pre_h = 0.0, post_h = 0.0;
  double g = 10.0, x = x0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double dx = x - t.xylose[k];
    if (g > 0.1) {
      pre += dx;
      pre_h += 0.1;
    } else if (x > 0.0) {
      post += dx;
      post_h += 0.1;
    }
    g = t.glucose[k];
    x = t.xylose[k];
  }
  const double fraction = pre / x0;
  const double ratio = (post / post_h) / (pre / pre_h);
  const bool ok = fraction < 1e-3 && ratio > 100.0;
  return {ok, fmt("xylose used while glucose > 0.1 mM = %.4g%% of initial (limit 0.1%%); post/pre rate ratio = %.4g "
                  "(limit 100)",
                  100.0 * fraction, ratio)};
}

Outcome grid() {
  const auto t = simulate(rflux::testing::xylose_core_model(), {5.0, 5.0});
  const bool ok = t.size() == 200 && std::abs(t.time.back() - 20.0) < 1e-9 && std::abs(t.time[1] - t.time[0] - 0.1) < 1e-12;
  return {ok, fmt("%.0f points, last t=%.6g h", static_cast<double>(t.size()), t.time.back())};
}

Outcome lp_oracle() {
  std::mt19937_64 rng(20240611);
  int agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = rflux::testing::random_lp(rng);
    const LpSolution s = solve(LinearProgram(p.S.sparseView(), p.c, p.lb, p.ub));
    const auto expected = rflux::testing::brute_force(p.S, p.c, p.lb, p.ub);
    if (!expected) {
      agree += s.status == LpStatus::kInfeasible;
    } else {
      agree += s.status == LpStatus::kOptimal && std::abs(s.objective - *expected) <= 1e-6;
    }
  }
  const auto& m = rflux::testing::toy_chain();
  const LpSolution toy =
      solve(LinearProgram(m.stoichiometric_matrix(), m.objective(), m.lower_bounds(), m.upper_bounds()));
  return {agree == 200 && toy.objective == 10.0, fmt("%.0f/200 random LPs agree; toy chain optimum %.17g", agree, toy.objective)};
}

Outcome baseline() {
  const auto start = Clock::now();
  const StudyConfig c = study_config(false);
  const InputEnsemble e = generate_ensemble(c.ensemble);
  const TaskSet tasks = generate_tasks(c.n_tasks, c.ensemble.n_templates, c.task_seed);
  std::vector<NutrientInput> inputs;
  for (const auto& s : e.samples) inputs.push_back(s.input);
  const AccuracyReport r = evaluate_tasks(input_feature_matrix(inputs), e, tasks, c.alphas);
  const double secs = seconds_since(start);
  return {r.mean_accuracy >= 0.53 && r.mean_accuracy <= 0.67 && secs < 10.0,
          fmt("mean %.4f (std %.4f) in %.3f s", r.mean_accuracy, r.std_accuracy, secs)};
}

Outcome reservoir_gain() {
  StudyConfig c = study_config(false);
  c.prefixes = {200};
  const BenchmarkReport r = run_species_study(c, kJobs, {true, false});
  if (r.models[0].error) return {false, *r.models[0].error};
  const double acc = r.models[0].accuracy[0].mean_accuracy, base = r.baseline.mean_accuracy;
  // frozen seeded regression value
  const bool ok = acc - base >= 0.10 && std::abs(acc - 0.9674) < 1e-9;
  return {ok, fmt("T=200 mean %.4f vs baseline %.4f (gain %.4f; frozen 0.9674)", acc, base, acc - base)};
}

Outcome ranks() {
  const DfbaSimulator sim(rflux::testing::xylose_core_model());
  StudyConfig c = study_config(false);
  std::vector<int> prefixes(200);
  for (int T = 1; T <= 200; ++T) prefixes[T - 1] = T;
  const auto r = rank_difference_trajectory(sim, c.ranks, prefixes, 0.01, kJobs);
  bool bounded = true;
  for (const auto& x : r) {
    bounded = bounded && x.kernel_rank <= std::min(100, x.prefix_length) &&
              x.generalisation_rank <= std::min(100, x.prefix_length);
  }
  RankConfig quiet = c.ranks;
  quiet.noise_std = 0.0;
  const int gen0 = generalisation_rank(sim, quiet, 200, 0.01, kJobs);

  // exact-rank prefix monotonicity on integer fixtures
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> small(-3, 3);
  bool monotone = true;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXi L(6, 3), R(3, 10);
    for (int i = 0; i < L.size(); ++i) L.data()[i] = small(rng);
    for (int i = 0; i < R.size(); ++i) R.data()[i] = small(rng);
    const Eigen::MatrixXd M = (L * R).cast<double>();
    int prev = 0;
    for (int T = 1; T <= 10; ++T) {
      const int k = numerical_rank(M.leftCols(T), 1e-6);
      monotone = monotone && k >= prev && k <= 3;
      prev = k;
    }
  }
  const auto& last = r.back();
  const bool ok = bounded && gen0 <= 5 && monotone && last.kernel_rank > last.generalisation_rank;
  return {ok, fmt("bounded=%g, noise-free gen rank %g, T=200 kernel %g vs gen %g",
                  bounded, gen0, last.kernel_rank, last.generalisation_rank) +
                  (monotone ? ", prefix monotone" : ", NOT monotone")};
}

Outcome deletion_screen() {
  const auto entries = screen_single_deletions(rflux::testing::series_of_routes(), {}, {"EX_M0"});
  std::string kept;
  std::vector<double> retained;
  bool consistent = true;
  for (const auto& e : entries) {
    consistent = consistent && e.retained == (e.growth_ratio >= 0.05 - 1e-9 && e.growth_ratio <= 0.95 + 1e-9);
    if (e.retained) {
      retained.push_back(std::round(e.growth_ratio * 100) / 100);
      kept += (kept.empty() ? "" : ", ") + fmt("%.2f", e.growth_ratio);
    }
  }
  const bool ok = consistent && retained == std::vector<double>{0.05, 0.5, 0.95};
  return {ok, "retained ratios {" + kept + "}"};
}

Outcome determinism() {
  const StudyConfig c = study_config(true);
  const fs::path base = fs::temp_directory_path() / "rflux_acceptance";
  fs::remove_all(base);
  const auto start = Clock::now();
  write_study_outputs(c, run_study(c, kJobs), base / "a");
  write_study_outputs(c, run_study(c, kJobs), base / "b");
  const double secs = seconds_since(start);
  std::string differing;
  for (const char* f : {"accuracy.csv", "ranks.csv", "baseline.csv", "mutants.csv", "pareto.json", "failures.json",
                        "resolved_config.json"}) {
    const std::string a = read_file(base / "a" / f);
    if (a.empty() || a != read_file(base / "b" / f)) differing += std::string(" ") + f;
  }
  fs::remove_all(base);
  return {differing.empty(),
          (differing.empty() ? std::string("all payloads identical") : "differ:" + differing) +
              fmt(" (two full studies incl. mutant panel, %.1f s)", secs)};
}

Outcome ridge() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd F(50, 10);
    for (Eigen::Index i = 0; i < F.size(); ++i) F.data()[i] = 3.0 + 2.0 * g(rng);
    Eigen::VectorXd y(50);
    for (Eigen::Index i = 0; i < 50; ++i) y[i] = i % 2 ? 1.0 : -1.0;
    std::shuffle(y.data(), y.data() + y.size(), rng);
    for (double alpha : default_alphas()) {
      const RidgeReadout r = fit_ridge(F, y, alpha);
      const auto [w, b] = rflux::testing::dense_ridge(F, y, alpha);
      worst = std::max({worst, (r.weights - w).cwiseAbs().maxCoeff(), std::abs(r.intercept - b)});
    }
  }
  return {worst <= 1e-8, fmt("max |w - w_dense| = %.3g over 10 systems x 7 alphas", worst)};
}

}  // namespace

int main() {
  report(1, "kinetics exactness", kinetics);
  report(2, "catabolite repression", catabolite_repression);
  report(3, "grid contract", grid);
  report(4, "LP oracle equivalence", lp_oracle);
  report(5, "baseline accuracy", baseline);
  report(6, "reservoir gain", reservoir_gain);
  report(7, "rank properties", ranks);
  report(8, "deletion screen semantics", deletion_screen);
  report(9, "determinism", determinism);
  report(10, "ridge oracle", ridge);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
