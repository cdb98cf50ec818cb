#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "rflux/bigg.hpp"
#include "rflux/error.hpp"
#include "rflux/experiment.hpp"
#include "rflux/parallel.hpp"

namespace rflux {

namespace {

using Clock = std::chrono::steady_clock;

// Inputs shared by every model of a study.
struct StudyInputs {
  InputEnsemble ensemble;
  TaskSet tasks;
  std::vector<NutrientInput> samples, kernel, generalisation;
  std::vector<int> schedule;
};

StudyInputs prepare(const StudyConfig& config) {
  config.validate();
  StudyInputs in;
  in.ensemble = generate_ensemble(config.ensemble);
  in.tasks = generate_tasks(config.n_tasks, config.ensemble.n_templates, config.task_seed);
  for (const auto& s : in.ensemble.samples) in.samples.push_back(s.input);
  in.kernel = kernel_inputs(config.ranks);
  in.generalisation = generalisation_inputs(config.ranks);
  in.schedule = config.schedule();
  return in;
}

AccuracyReport baseline(const StudyConfig& config, const StudyInputs& in) {
  AccuracyReport r = evaluate_tasks(input_feature_matrix(in.samples), in.ensemble, in.tasks, config.alphas);
  r.prefix_length = 0;
  return r;
}

ModelReport run_model(const std::string& id, const MetabolicModel& model, const ExchangeIds& exchanges,
                      const StudyConfig& config, const StudyInputs& in, int jobs, StudyParts parts) {
  const auto start = Clock::now();
  ModelReport r;
  r.model_id = id;
  try {
    const DfbaSimulator sim(model, config.kinetics, exchanges);
    // Every trajectory is simulated once; prefixes only truncate.
    if (parts.accuracy) {
      const auto trajectories = simulate_all(sim, in.samples, config.b0, jobs);
      r.accuracy.resize(in.schedule.size());
      parallel_for(in.schedule.size(), jobs, [&](std::size_t i) {
        r.accuracy[i] = evaluate_tasks(build_state_matrix(trajectories, in.schedule[i]), in.ensemble,
                                       in.tasks, config.alphas);
      });
    }
    if (parts.ranks) {
      const auto kernel = simulate_all(sim, in.kernel, config.b0, jobs);
      const auto gen = simulate_all(sim, in.generalisation, config.b0, jobs);
      r.ranks = rank_reports(kernel, gen, in.schedule, config.ranks.sv_rel_tol, jobs);
    }
  } catch (const Error& e) {
    r.accuracy.clear();
    r.ranks.clear();
    r.error = e.what();
    r.error_exit_code = exit_code_for(e);
  }
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

MetabolicModel load(const ModelSpec& spec) {
  IngestOptions opt;
  opt.biomass_reaction_id = spec.biomass_reaction;
  return parse_model(ModelSource::from_file(spec.path), opt);
}

}  // namespace

BenchmarkReport run_species_study(const StudyConfig& config, int jobs, StudyParts parts) {
  const StudyInputs in = prepare(config);
  BenchmarkReport report;
  if (parts.accuracy) report.baseline = baseline(config, in);
  for (const auto& spec : config.models) {
    try {
      const MetabolicModel model = load(spec);
      report.models.push_back(run_model(spec.id, model, spec.exchanges, config, in, jobs, parts));
    } catch (const Error& e) {
      ModelReport failed;
      failed.model_id = spec.id;
      failed.error = e.what();
      failed.error_exit_code = exit_code_for(e);
      report.models.push_back(std::move(failed));
    }
  }
  return report;
}

namespace {

// Screens `base`, then benchmarks one representative per retained group.
// report.models[wt_index] must already hold the wild type.
void append_mutants(BenchmarkReport& report, std::size_t wt_index, const std::string& base_id,
                    const MetabolicModel& base, const ExchangeIds& exchanges, const StudyConfig& config,
                    const StudyInputs& in, int jobs) {
  const NutrientInput medium = config.mutants ? config.mutants->screen_medium : NutrientInput{22.5, 22.5};
  const DfbaSimulator probe(base, config.kinetics, exchanges);
  const auto screen = screen_single_deletions(base, probe.kinetic_medium(medium),
                                              {exchanges.glucose, exchanges.xylose, exchanges.oxygen}, jobs);

  std::map<int, MutantGroup> groups;
  for (const auto& e : screen) {
    if (!e.retained) continue;
    auto& g = groups[e.group_id];
    g.group_id = e.group_id;
    g.representative = e.group_representative;
    g.growth_ratio = e.growth_ratio;
    g.members.push_back(e.gene);
  }
  for (auto& [id, g] : groups) {
    g.model_id = base_id + "__" + g.representative;
    ModelReport r;
    try {
      r = run_model(g.model_id, apply_deletion(base, g.representative), exchanges, config, in, jobs, {});
    } catch (const Error& e) {
      r.model_id = g.model_id;
      r.error = e.what();
      r.error_exit_code = exit_code_for(e);
    }
    const ModelReport& wt = report.models[wt_index];
    if (!wt.error && !r.error) {
      bool dominates = true;
      for (std::size_t i = 0; i < r.accuracy.size(); ++i) {
        if (wt.accuracy[i].mean_accuracy < r.accuracy[i].mean_accuracy - r.accuracy[i].std_accuracy) {
          dominates = false;
        }
      }
      g.wild_type_dominates = dominates;
    }
    report.models.push_back(std::move(r));
    report.mutant_groups.push_back(g);
  }
}

}  // namespace

BenchmarkReport run_mutant_study(const StudyConfig& config, const MetabolicModel& base,
                                 const ExchangeIds& exchanges, int jobs) {
  const StudyInputs in = prepare(config);
  BenchmarkReport report;
  report.baseline = baseline(config, in);
  const std::string base_id = config.mutants ? config.mutants->base_model : base.id();
  report.models.push_back(run_model(base_id, base, exchanges, config, in, jobs, {}));
  append_mutants(report, 0, base_id, base, exchanges, config, in, jobs);
  return report;
}

BenchmarkReport run_study(const StudyConfig& config, int jobs) {
  BenchmarkReport report = run_species_study(config, jobs);
  if (!config.mutants) return report;
  const auto& id = config.mutants->base_model;
  const auto spec = std::find_if(config.models.begin(), config.models.end(), [&](const ModelSpec& m) { return m.id == id; });
  const auto wt_index = static_cast<std::size_t>(spec - config.models.begin());
  if (report.models[wt_index].error) return report;  // already in the failure manifest
  try {
    append_mutants(report, wt_index, id, load(*spec), spec->exchanges, config, prepare(config), jobs);
  } catch (const Error& e) {
    ModelReport failed;
    failed.model_id = id + "__screen";
    failed.error = e.what();
    failed.error_exit_code = exit_code_for(e);
    report.models.push_back(std::move(failed));
  }
  return report;
}

std::vector<ParetoPoint> pareto_points(const BenchmarkReport& report, double threshold, double dt) {
  std::vector<ParetoPoint> out;
  for (const auto& m : report.models) {
    if (m.error || m.accuracy.empty()) continue;
    ParetoPoint p;
    p.model_id = m.model_id;
    p.max_accuracy = -1.0;
    for (const auto& a : m.accuracy) {
      p.max_accuracy = std::max(p.max_accuracy, a.mean_accuracy);
      if (!p.time_to_threshold && a.mean_accuracy >= threshold) p.time_to_threshold = a.prefix_length * dt;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<std::string> pareto_front(std::span<const ParetoPoint> points) {
  constexpr double kNever = std::numeric_limits<double>::infinity();
  auto time = [&](const ParetoPoint& p) { return p.time_to_threshold.value_or(kNever); };
  std::vector<std::string> front;
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : points) {
      const bool no_worse = time(q) <= time(p) && q.max_accuracy >= p.max_accuracy;
      const bool better = time(q) < time(p) || q.max_accuracy > p.max_accuracy;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p.model_id);
  }
  return front;
}

std::vector<std::string> pareto_front(const BenchmarkReport& report, double threshold, double dt) {
  return pareto_front(pareto_points(report, threshold, dt));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const ModelError*>(&e)) return 2;
  return 3;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_study_outputs(const StudyConfig& config, const BenchmarkReport& report,
                         const std::filesystem::path& dir, StudyParts parts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  using nlohmann::json;

  write_file(dir / "resolved_config.json", resolved_config_json(config));

  if (parts.accuracy) {
    std::string acc = "model,T,mean_accuracy,std_accuracy\n";
    for (const auto& m : report.models) {
      for (const auto& a : m.accuracy) {
        acc += m.model_id + "," + std::to_string(a.prefix_length) + "," + format_number(a.mean_accuracy) + "," +
               format_number(a.std_accuracy) + "\n";
      }
    }
    write_file(dir / "accuracy.csv", acc);
    write_file(dir / "baseline.csv", "features,mean_accuracy,std_accuracy\ninput_only," +
                                         format_number(report.baseline.mean_accuracy) + "," +
                                         format_number(report.baseline.std_accuracy) + "\n");

    json points = json::array();
    const auto pts = pareto_points(report, config.pareto_threshold, config.kinetics.dt);
    for (const auto& p : pts) {
      json t = p.time_to_threshold ? json(std::stod(format_number(*p.time_to_threshold))) : json(nullptr);
      points.push_back({{"model", p.model_id},
                        {"time_to_threshold_h", t},
                        {"max_accuracy", std::stod(format_number(p.max_accuracy))}});
    }
    const json pareto = {{"threshold", config.pareto_threshold}, {"models", points}, {"front", pareto_front(pts)}};
    write_file(dir / "pareto.json", pareto.dump(2) + "\n");
  }

  if (parts.ranks) {
    std::string ranks = "model,T,kernel_rank,gen_rank,rank_diff\n";
    for (const auto& m : report.models) {
      for (const auto& r : m.ranks) {
        ranks += m.model_id + "," + std::to_string(r.prefix_length) + "," + std::to_string(r.kernel_rank) + "," +
                 std::to_string(r.generalisation_rank) + "," + std::to_string(r.rank_difference) + "\n";
      }
    }
    write_file(dir / "ranks.csv", ranks);
  }

  if (!report.mutant_groups.empty() || config.mutants) {
    std::string mut = "group_id,representative,members,growth_ratio,model,wild_type_dominates\n";
    for (const auto& g : report.mutant_groups) {
      std::string members;
      for (const auto& m : g.members) members += (members.empty() ? "" : " ") + m;
      const char* dom = !g.wild_type_dominates ? "" : (*g.wild_type_dominates ? "true" : "false");
      mut += std::to_string(g.group_id) + "," + g.representative + "," + members + "," +
             format_number(g.growth_ratio) + "," + g.model_id + "," + dom + "\n";
    }
    write_file(dir / "mutants.csv", mut);
  }

  json failures = json::array();
  for (const auto& m : report.models) {
    if (m.error) failures.push_back({{"model", m.model_id}, {"exit_code", m.error_exit_code}, {"error", *m.error}});
  }
  write_file(dir / "failures.json", failures.dump(2) + "\n");

  json timing = json::object();
  for (const auto& m : report.models) timing[m.model_id] = m.wall_seconds;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  const json info = {{"finished_unix_s", std::chrono::duration_cast<std::chrono::seconds>(now).count()},
                     {"wall_seconds", timing}};
  write_file(dir / "run_info.json", info.dump(2) + "\n");
}

}  // namespace rflux
