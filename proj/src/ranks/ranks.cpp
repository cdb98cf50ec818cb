#include "rflux/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "rflux/error.hpp"
#include "rflux/parallel.hpp"
#include "rflux/reservoir.hpp"

namespace rflux {

void RankConfig::validate() const {
  if (n_kernel_templates < 1 || n_gen_templates < 1 || n_gen_variants < 1) {
    throw ConfigError("rank ensemble sizes must be positive");
  }
  if (n_gen_templates * n_gen_variants != n_kernel_templates) {
    throw ConfigError("n_gen_templates * n_gen_variants must equal n_kernel_templates");
  }
  if (!(sv_rel_tol > 0.0) || !(sv_rel_tol < 1.0)) throw ConfigError("sv_rel_tol must lie in (0, 1)");
  if (!(range_low >= 0.0) || !(range_high > range_low) || !std::isfinite(range_high)) {
    throw ConfigError("rank input range must satisfy 0 <= low < high < inf");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ConfigError("rank noise_std must be finite and non-negative");
  }
}

int numerical_rank(const Eigen::MatrixXd& m, double sv_rel_tol) {
  if (m.size() == 0) return 0;
  if (!m.allFinite()) throw NumericalError("numerical_rank: non-finite matrix entry");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("numerical_rank: SVD failed");
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = sv_rel_tol * s[0];
  return static_cast<int>((s.array() > cut).count());
}

std::vector<NutrientInput> kernel_inputs(const RankConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.kernel_seed);
  std::uniform_real_distribution<double> uniform(config.range_low, config.range_high);
  std::vector<NutrientInput> out;
  out.reserve(static_cast<std::size_t>(config.n_kernel_templates));
  for (int i = 0; i < config.n_kernel_templates; ++i) {
    const double g = uniform(rng);
    const double x = uniform(rng);
    out.push_back({g, x});
  }
  return out;
}

std::vector<NutrientInput> generalisation_inputs(const RankConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.generalisation_seed);
  std::uniform_real_distribution<double> uniform(config.range_low, config.range_high);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<NutrientInput> templates;
  for (int t = 0; t < config.n_gen_templates; ++t) {
    const double g = uniform(rng);
    const double x = uniform(rng);
    templates.push_back({g, x});
  }
  std::vector<NutrientInput> out;
  out.reserve(static_cast<std::size_t>(config.n_kernel_templates));
  for (const auto& base : templates) {
    for (int v = 0; v < config.n_gen_variants; ++v) {
      NutrientInput in = base;
      if (config.noise_std > 0.0) {
        in.glucose = std::max(0.0, base.glucose + config.noise_std * noise(rng));
        in.xylose = std::max(0.0, base.xylose + config.noise_std * noise(rng));
      }
      out.push_back(in);
    }
  }
  return out;
}

std::vector<GrowthTrajectory> simulate_all(const DfbaSimulator& sim, std::span<const NutrientInput> inputs,
                                           double b0, int jobs) {
  std::vector<GrowthTrajectory> out(inputs.size());
  parallel_for(inputs.size(), jobs, [&](std::size_t i) { out[i] = sim.simulate(inputs[i], b0); });
  return out;
}

std::vector<RankReport> rank_reports(std::span<const GrowthTrajectory> kernel,
                                     std::span<const GrowthTrajectory> generalisation,
                                     std::span<const int> prefixes, double sv_rel_tol, int jobs) {
  for (std::size_t i = 1; i < prefixes.size(); ++i) {
    if (prefixes[i] <= prefixes[i - 1]) throw ConfigError("prefixes must be strictly increasing");
  }
  // Full-length matrices are built once and truncated per prefix.
  const int longest = prefixes.empty() ? 1 : prefixes.back();
  const Eigen::MatrixXd K = build_state_matrix(kernel, longest);
  const Eigen::MatrixXd G = build_state_matrix(generalisation, longest);
  std::vector<RankReport> out(prefixes.size());
  parallel_for(prefixes.size(), jobs, [&](std::size_t i) {
    const int T = prefixes[i];
    if (T < 1) throw ConfigError("prefix length must be >= 1");
    RankReport r;
    r.prefix_length = T;
    r.kernel_rank = numerical_rank(K.leftCols(T), sv_rel_tol);
    r.generalisation_rank = numerical_rank(G.leftCols(T), sv_rel_tol);
    r.rank_difference = r.kernel_rank - r.generalisation_rank;
    out[i] = r;
  });
  return out;
}

namespace {

void check_prefix(const DfbaSimulator& sim, int T) {
  if (T < 1 || T > sim.params().steps()) {
    throw ConfigError("prefix " + std::to_string(T) + " outside 1.." + std::to_string(sim.params().steps()));
  }
}

}  // namespace

int kernel_rank(const DfbaSimulator& sim, const RankConfig& config, int T, double b0, int jobs) {
  check_prefix(sim, T);
  const auto trajectories = simulate_all(sim, kernel_inputs(config), b0, jobs);
  return numerical_rank(build_state_matrix(trajectories, T), config.sv_rel_tol);
}

int generalisation_rank(const DfbaSimulator& sim, const RankConfig& config, int T, double b0, int jobs) {
  check_prefix(sim, T);
  const auto trajectories = simulate_all(sim, generalisation_inputs(config), b0, jobs);
  return numerical_rank(build_state_matrix(trajectories, T), config.sv_rel_tol);
}

std::vector<RankReport> rank_difference_trajectory(const DfbaSimulator& sim, const RankConfig& config,
                                                   std::span<const int> prefixes, double b0, int jobs) {
  for (int T : prefixes) check_prefix(sim, T);
  const auto kernel = simulate_all(sim, kernel_inputs(config), b0, jobs);
  const auto gen = simulate_all(sim, generalisation_inputs(config), b0, jobs);
  return rank_reports(kernel, gen, prefixes, config.sv_rel_tol, jobs);
}

}  // namespace rflux
