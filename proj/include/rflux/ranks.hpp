#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rflux/dfba.hpp"

namespace rflux {

struct RankConfig {
  int n_kernel_templates = 100;
  int n_gen_templates = 5;
  int n_gen_variants = 20;
  double range_low = 0.0;   // mM
  double range_high = 45.0;
  double noise_std = 0.2;   // mM, generalisation variants
  double sv_rel_tol = 1e-6;
  std::uint64_t kernel_seed = 0;
  std::uint64_t generalisation_seed = 0;

  /// Throws ConfigError unless sizes are positive, n_gen_templates *
  /// n_gen_variants == n_kernel_templates, sv_rel_tol in (0, 1) and the
  /// range and noise are valid.
  void validate() const;
};

struct RankReport {
  int prefix_length = 0;
  int kernel_rank = 0;
  int generalisation_rank = 0;
  int rank_difference = 0;  // kernel - generalisation
};

/// Number of singular values above sv_rel_tol * sigma_max; 0 for a zero or
/// empty matrix. Throws NumericalError on non-finite input.
int numerical_rank(const Eigen::MatrixXd& m, double sv_rel_tol);

/// Uniform draws from [range_low, range_high]^2 seeded by kernel_seed.
std::vector<NutrientInput> kernel_inputs(const RankConfig& config);

/// n_gen_templates uniform templates, each followed by its n_gen_variants
/// noisy copies (clamped at 0), seeded by generalisation_seed.
std::vector<NutrientInput> generalisation_inputs(const RankConfig& config);

/// Simulates every input once; trajectories are returned in input order.
std::vector<GrowthTrajectory> simulate_all(const DfbaSimulator& sim, std::span<const NutrientInput> inputs,
                                           double b0, int jobs);

/// Ranks of the two trajectory sets truncated to each prefix.
std::vector<RankReport> rank_reports(std::span<const GrowthTrajectory> kernel,
                                     std::span<const GrowthTrajectory> generalisation,
                                     std::span<const int> prefixes, double sv_rel_tol, int jobs = 1);

int kernel_rank(const DfbaSimulator& sim, const RankConfig& config, int T, double b0 = 0.01, int jobs = 1);
int generalisation_rank(const DfbaSimulator& sim, const RankConfig& config, int T, double b0 = 0.01,
                        int jobs = 1);

/// Simulates both input sets once and reports every prefix (increasing,
/// within 1..steps) from the cached trajectories.
std::vector<RankReport> rank_difference_trajectory(const DfbaSimulator& sim, const RankConfig& config,
                                                   std::span<const int> prefixes, double b0 = 0.01,
                                                   int jobs = 1);

}  // namespace rflux
