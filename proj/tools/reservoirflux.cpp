// reservoirflux command-line driver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rflux/bigg.hpp"
#include "rflux/error.hpp"
#include "rflux/experiment.hpp"
#include "rflux/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rflux;

namespace {

struct ModelFlags {
  std::string path;
  std::string biomass;
  std::string params;
  ExchangeIds exchanges;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--model", f.path, "BiGG JSON model")->required();
  app->add_option("--params", f.params, "kinetic parameter JSON");
  app->add_option("--biomass-reaction", f.biomass, "objective reaction when the model has none");
  app->add_option("--glucose-exchange", f.exchanges.glucose)->capture_default_str();
  app->add_option("--xylose-exchange", f.exchanges.xylose)->capture_default_str();
  app->add_option("--oxygen-exchange", f.exchanges.oxygen)->capture_default_str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KineticParams load_params(const ModelFlags& f) {
  return f.params.empty() ? KineticParams{} : parse_kinetic_params(slurp(f.params));
}

MetabolicModel load_model(const ModelFlags& f) {
  IngestOptions opt;
  opt.biomass_reaction_id = f.biomass;
  return parse_model(ModelSource::from_file(f.path), opt);
}

json model_json(const ModelFlags& f) {
  return {{"path", fs::path(f.path).lexically_normal().generic_string()},
          {"biomass_reaction", f.biomass},
          {"exchanges",
           {{"glucose", f.exchanges.glucose}, {"xylose", f.exchanges.xylose}, {"oxygen", f.exchanges.oxygen}}}};
}

void write_text(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << body;
}

// Resolved configuration lives next to the main output: out.csv -> out.config.json
fs::path config_path_for(const fs::path& out) {
  fs::path p = out;
  return p.replace_extension(".config.json");
}

int run_simulate(const ModelFlags& f, double glucose, double xylose, double b0, const std::string& out) {
  const KineticParams params = load_params(f);
  const MetabolicModel model = load_model(f);
  const GrowthTrajectory t = DfbaSimulator(model, params, f.exchanges).simulate({glucose, xylose}, b0);

  std::string csv = "time_h,biomass_gdw_per_l,glucose_mM,xylose_mM\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    csv += format_number(t.time[k]) + "," + format_number(t.biomass[k]) + "," + format_number(t.glucose[k]) + "," +
           format_number(t.xylose[k]) + "\n";
  }
  write_text(out, csv);
  json resolved = {{"command", "simulate"},
                   {"model", model_json(f)},
                   {"glucose_mM", glucose},
                   {"xylose_mM", xylose},
                   {"b0", b0},
                   {"kinetics", json::parse(kinetic_params_json(params))}};
  write_text(config_path_for(out), resolved.dump(2) + "\n");
  return 0;
}

int run_screen(const ModelFlags& f, double glucose, double xylose, int jobs, const std::string& out) {
  const KineticParams params = load_params(f);
  const MetabolicModel model = load_model(f);
  const DfbaSimulator sim(model, params, f.exchanges);
  const auto entries = screen_single_deletions(
      model, sim.kinetic_medium({glucose, xylose}),
      {f.exchanges.glucose, f.exchanges.xylose, f.exchanges.oxygen}, resolve_jobs(jobs));

  std::string csv = "gene,growth_ratio,retained,group_id\n";
  for (const auto& e : entries) {
    if (e.error) std::cerr << "warning: gene " << e.gene << ": " << *e.error << "\n";
    csv += e.gene + "," + format_number(e.growth_ratio) + "," + (e.retained ? "true" : "false") + "," +
           std::to_string(e.group_id) + "\n";
  }
  write_text(out, csv);
  json resolved = {{"command", "screen"},
                   {"model", model_json(f)},
                   {"screen_medium", {{"glucose_mM", glucose}, {"xylose_mM", xylose}}},
                   {"retain_window", {kRetainMin, kRetainMax}},
                   {"kinetics", json::parse(kinetic_params_json(params))}};
  write_text(config_path_for(out), resolved.dump(2) + "\n");
  return 0;
}

int report_failures(const BenchmarkReport& report) {
  int code = 0;
  for (const auto& m : report.models) {
    if (!m.error) continue;
    std::cerr << "error: model " << m.model_id << ": " << *m.error << "\n";
    if (code == 0) code = m.error_exit_code;
  }
  return code;
}

int run_study_command(const std::string& config_path, const std::string& out_dir, int jobs, StudyParts parts,
                      bool full) {
  StudyConfig config = load_study_config(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  const int workers = resolve_jobs(jobs);
  const BenchmarkReport report = full ? run_study(config, workers) : run_species_study(config, workers, parts);
  write_study_outputs(config, report, config.output_dir, parts);
  return report_failures(report);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

int run_pareto(const std::string& accuracy_csv, double threshold, double dt, const std::string& out) {
  std::istringstream in(slurp(accuracy_csv));
  std::string line;
  if (!std::getline(in, line) || line != "model,T,mean_accuracy,std_accuracy") {
    throw ConfigError("'" + accuracy_csv + "' is not an accuracy.csv file");
  }
  BenchmarkReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw ConfigError("malformed accuracy row: " + line);
    if (report.models.empty() || report.models.back().model_id != cells[0]) {
      report.models.push_back({});
      report.models.back().model_id = cells[0];
    }
    AccuracyReport a;
    try {
      a.prefix_length = std::stoi(cells[1]);
      a.mean_accuracy = std::stod(cells[2]);
      a.std_accuracy = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw ConfigError("malformed accuracy row: " + line);
    }
    report.models.back().accuracy.push_back(a);
  }
  const auto points = pareto_points(report, threshold, dt);
  json models = json::array();
  for (const auto& p : points) {
    models.push_back({{"model", p.model_id},
                      {"time_to_threshold_h", p.time_to_threshold ? json(*p.time_to_threshold) : json(nullptr)},
                      {"max_accuracy", p.max_accuracy}});
  }
  const json doc = {{"threshold", threshold}, {"dt", dt}, {"models", models}, {"front", pareto_front(points)}};
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_text(out, doc.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reservoirflux: metabolic models as physical reservoirs"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs,-j", jobs, "worker threads (default: RESERVOIRFLUX_JOBS or all cores)");

  ModelFlags sim_flags;
  double sim_glucose = 0.0, sim_xylose = 0.0, sim_b0 = 0.01;
  std::string sim_out = "trajectory.csv";
  auto* simulate = app.add_subcommand("simulate", "dFBA growth curve for one input");
  add_model_flags(simulate, sim_flags);
  simulate->add_option("--glucose", sim_glucose, "initial glucose (mM)")->required();
  simulate->add_option("--xylose", sim_xylose, "initial xylose (mM)")->required();
  simulate->add_option("--b0", sim_b0, "initial biomass (gDW/L)")->capture_default_str();
  simulate->add_option("--out,-o", sim_out, "trajectory CSV")->capture_default_str();

  ModelFlags screen_flags;
  double screen_glucose = 22.5, screen_xylose = 22.5;
  std::string screen_out = "screen.csv";
  auto* screen = app.add_subcommand("screen", "single gene deletion screen");
  add_model_flags(screen, screen_flags);
  screen->add_option("--glucose", screen_glucose, "medium glucose (mM)")->capture_default_str();
  screen->add_option("--xylose", screen_xylose, "medium xylose (mM)")->capture_default_str();
  screen->add_option("--out,-o", screen_out, "deletion CSV")->capture_default_str();

  std::string config_path, out_dir;
  auto add_study_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "study JSON")->required();
    sub->add_option("--out-dir", out_dir, "overrides output_dir");
  };
  auto* bench = app.add_subcommand("bench", "readout accuracy per prefix (accuracy.csv, baseline.csv)");
  add_study_flags(bench);
  auto* ranks = app.add_subcommand("ranks", "kernel / generalisation ranks per prefix (ranks.csv)");
  add_study_flags(ranks);
  auto* study = app.add_subcommand("study", "full study including the mutant panel");
  add_study_flags(study);

  std::string accuracy_csv, pareto_out;
  double threshold = 0.9, dt = 0.1;
  auto* pareto = app.add_subcommand("pareto", "Pareto front from an accuracy.csv");
  pareto->add_option("--accuracy", accuracy_csv, "accuracy.csv")->required();
  pareto->add_option("--threshold", threshold)->capture_default_str();
  pareto->add_option("--dt", dt, "hours per time point")->capture_default_str();
  pareto->add_option("--out,-o", pareto_out, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return run_simulate(sim_flags, sim_glucose, sim_xylose, sim_b0, sim_out);
    if (*screen) return run_screen(screen_flags, screen_glucose, screen_xylose, jobs, screen_out);
    if (*bench) return run_study_command(config_path, out_dir, jobs, {true, false}, false);
    if (*ranks) return run_study_command(config_path, out_dir, jobs, {false, true}, false);
    if (*study) return run_study_command(config_path, out_dir, jobs, {}, true);
    if (*pareto) return run_pareto(accuracy_csv, threshold, dt, pareto_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 1;
}
