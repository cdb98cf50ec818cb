#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rflux/dfba.hpp"
#include "rflux/fba.hpp"
#include "rflux/model.hpp"
#include "rflux/ranks.hpp"
#include "rflux/reservoir.hpp"

namespace rflux {

struct ModelSpec {
  std::string id;
  std::filesystem::path path;   // resolved against the config file's directory
  std::string biomass_reaction;  // empty: use the document's objective
  ExchangeIds exchanges;
};

struct MutantStudySpec {
  std::string base_model;  // id of an entry in StudyConfig::models
  NutrientInput screen_medium{22.5, 22.5};  // mM, converted to bounds by the kinetics
};

/// A full study. Seeds have no defaults; everything else does.
struct StudyConfig {
  std::vector<ModelSpec> models;
  KineticParams kinetics;
  double b0 = 0.01;
  EnsembleConfig ensemble;  // ensemble.seed is the ensemble seed
  int n_tasks = 100;
  std::uint64_t task_seed = 0;
  std::vector<double> alphas = default_alphas();
  RankConfig ranks;  // carries the kernel and generalisation seeds
  std::vector<int> prefixes;  // empty: every step 1..kinetics.steps()
  double pareto_threshold = 0.9;
  std::optional<MutantStudySpec> mutants;
  std::filesystem::path output_dir = "study_out";

  /// Throws ConfigError on any inconsistency (no models, duplicate ids,
  /// prefixes out of range or not increasing, bad sizes...).
  void validate() const;
  /// prefixes, or 1..steps when empty.
  std::vector<int> schedule() const;
};

/// Parses the JSON study document. Unknown keys anywhere are errors and the
/// four seeds are required. Relative paths resolve against `base_dir`.
/// Throws ConfigError.
StudyConfig parse_study_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
StudyConfig load_study_config(const std::filesystem::path& path);

/// Every field materialised, seeds included. Parsing it back yields the same config.
std::string resolved_config_json(const StudyConfig& config);

/// Same schema as the study's "kinetics" block; missing keys keep defaults.
KineticParams parse_kinetic_params(const std::string& json_text);
std::string kinetic_params_json(const KineticParams& params);

struct ModelReport {
  std::string model_id;
  std::vector<AccuracyReport> accuracy;  // one per prefix
  std::vector<RankReport> ranks;         // one per prefix
  std::optional<std::string> error;      // set when the model failed
  int error_exit_code = 0;               // 1 config, 2 model, 3 numerical
  double wall_seconds = 0.0;
};

struct MutantGroup {
  int group_id = 0;
  std::string representative;
  std::vector<std::string> members;
  double growth_ratio = 0.0;
  std::string model_id;  // id of its ModelReport
  /// accuracy_wt(T) >= accuracy_mut(T) - std_mut(T) at every prefix.
  std::optional<bool> wild_type_dominates;
};

struct BenchmarkReport {
  AccuracyReport baseline;  // input-only features
  std::vector<ModelReport> models;
  std::vector<MutantGroup> mutant_groups;
};

struct StudyParts {
  bool accuracy = true;
  bool ranks = true;
};

/// Every configured model. Failures are recorded per model and the study
/// continues.
BenchmarkReport run_species_study(const StudyConfig& config, int jobs = 1, StudyParts parts = {});

/// Screens `base` under the configured medium and benchmarks the wild type
/// plus one representative per retained group. Throws ValidationError when
/// the wild type does not grow.
BenchmarkReport run_mutant_study(const StudyConfig& config, const MetabolicModel& base,
                                 const ExchangeIds& exchanges, int jobs = 1);

/// Species study, followed by the mutant panel when `config.mutants` is set.
/// The base model's species run doubles as the wild type.
BenchmarkReport run_study(const StudyConfig& config, int jobs = 1);

struct ParetoPoint {
  std::string model_id;
  std::optional<double> time_to_threshold;  // h; empty when never reached
  double max_accuracy = 0.0;
};

/// Per model: first prefix whose mean accuracy reaches `threshold` (times
/// dt) and the best mean accuracy. Failed models are skipped.
std::vector<ParetoPoint> pareto_points(const BenchmarkReport& report, double threshold, double dt);

/// Non-dominated ids, input order kept. Minimise time, maximise accuracy;
/// never reaching the threshold counts as infinitely slow.
std::vector<std::string> pareto_front(std::span<const ParetoPoint> points);
std::vector<std::string> pareto_front(const BenchmarkReport& report, double threshold, double dt);

/// Writes accuracy.csv, ranks.csv, baseline.csv, pareto.json, mutants.csv
/// (mutant studies), failures.json, resolved_config.json and run_info.json
/// (wall-clock data) into `dir`. Numbers use 9 significant digits.
void write_study_outputs(const StudyConfig& config, const BenchmarkReport& report,
                         const std::filesystem::path& dir, StudyParts parts = {});

/// 1 for ConfigError, 2 for ModelError, 3 otherwise.
int exit_code_for(const std::exception& e);

/// %.9g
std::string format_number(double v);

}  // namespace rflux
