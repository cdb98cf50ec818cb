#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rflux/bigg.hpp"
#include "rflux/error.hpp"
#include "rflux/experiment.hpp"
#include "rflux/parallel.hpp"

namespace py = pybind11;
using namespace rflux;

namespace {

MetabolicModel load(const std::string& path, const std::string& biomass) {
  IngestOptions opt;
  opt.biomass_reaction_id = biomass;
  return parse_model(ModelSource::from_file(path), opt);
}

BoundOverrides to_overrides(const std::map<std::string, std::pair<double, double>>& in) {
  BoundOverrides out;
  for (const auto& [id, b] : in) out[id] = {b.first, b.second};
  return out;
}

py::dict trajectory_dict(const GrowthTrajectory& t) {
  py::dict d;
  d["time"] = py::array_t<double>(static_cast<py::ssize_t>(t.time.size()), t.time.data());
  d["biomass"] = py::array_t<double>(static_cast<py::ssize_t>(t.biomass.size()), t.biomass.data());
  d["glucose"] = py::array_t<double>(static_cast<py::ssize_t>(t.glucose.size()), t.glucose.data());
  d["xylose"] = py::array_t<double>(static_cast<py::ssize_t>(t.xylose.size()), t.xylose.data());
  d["growth_rate"] = py::array_t<double>(static_cast<py::ssize_t>(t.growth_rate.size()), t.growth_rate.data());
  return d;
}

py::dict accuracy_dict(const AccuracyReport& a) {
  py::dict d;
  d["T"] = a.prefix_length;
  d["mean_accuracy"] = a.mean_accuracy;
  d["std_accuracy"] = a.std_accuracy;
  d["task_accuracy"] = a.task_accuracy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Metabolic models as physical reservoirs: dFBA, readout benchmarks and rank metrics.";

  auto base = py::register_exception<Error>(m, "ReservoirFluxError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  // Translators registered later are tried first, so subclasses map to
  // their own Python type; parse/schema/validation errors arrive as ModelError.
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<MetabolicModel>(m, "MetabolicModel")
      .def_property_readonly("id", &MetabolicModel::id)
      .def_property_readonly("biomass_reaction_id", &MetabolicModel::biomass_reaction_id)
      .def_property_readonly("genes", &MetabolicModel::genes)
      .def_property_readonly("reaction_ids",
                             [](const MetabolicModel& mm) {
                               std::vector<std::string> ids;
                               for (const auto& r : mm.reactions()) ids.push_back(r.id);
                               return ids;
                             })
      .def_property_readonly("n_metabolites", [](const MetabolicModel& mm) { return mm.metabolites().size(); })
      .def_property_readonly("n_reactions", [](const MetabolicModel& mm) { return mm.reactions().size(); })
      .def("__repr__", [](const MetabolicModel& mm) {
        return "<MetabolicModel " + mm.id() + ": " + std::to_string(mm.reactions().size()) + " reactions>";
      });

  py::enum_<BiomassUpdate>(m, "BiomassUpdate")
      .value("EULER", BiomassUpdate::kEuler)
      .value("EXPONENTIAL", BiomassUpdate::kExponential);

  py::class_<KineticParams>(m, "KineticParams")
      .def(py::init<>())
      .def_readwrite("v_glucose_max", &KineticParams::v_glucose_max)
      .def_readwrite("k_glucose", &KineticParams::k_glucose)
      .def_readwrite("v_xylose_max", &KineticParams::v_xylose_max)
      .def_readwrite("k_xylose", &KineticParams::k_xylose)
      .def_readwrite("k_glucose_inhibition", &KineticParams::k_glucose_inhibition)
      .def_readwrite("o2_max_uptake", &KineticParams::o2_max_uptake)
      .def_readwrite("dt", &KineticParams::dt)
      .def_readwrite("duration", &KineticParams::duration)
      .def_readwrite("biomass_update", &KineticParams::biomass_update)
      .def("steps", &KineticParams::steps);

  m.def("parse_model", &load, py::arg("path"), py::arg("biomass_reaction") = "",
        "Read a BiGG JSON model file.");
  m.def(
      "parse_model_text",
      [](const std::string& text, const std::string& biomass) {
        IngestOptions opt;
        opt.biomass_reaction_id = biomass;
        return parse_model(ModelSource::from_bytes(text), opt);
      },
      py::arg("text"), py::arg("biomass_reaction") = "");
  m.def(
      "parse_gpr", [](const std::string& rule) { return parse_gpr(rule).to_string(); }, py::arg("rule"),
      "Parse a GPR rule and return its canonical text.");
  m.def(
      "evaluate_gpr",
      [](const std::string& rule, const std::set<std::string>& deleted) { return evaluate_gpr(parse_gpr(rule), deleted); },
      py::arg("rule"), py::arg("deleted"));
  m.def("apply_deletion", &apply_deletion, py::arg("model"), py::arg("gene"));

  m.def("uptake_glucose", &uptake_glucose, py::arg("glucose"), py::arg("params") = KineticParams{});
  m.def("uptake_xylose", &uptake_xylose, py::arg("xylose"), py::arg("glucose"),
        py::arg("params") = KineticParams{});

  m.def(
      "run_fba",
      [](const MetabolicModel& model, const std::map<std::string, std::pair<double, double>>& overrides,
         const std::vector<std::string>& tracked) {
        const FbaResult r = run_fba(model, to_overrides(overrides), tracked);
        py::dict d;
        d["status"] = std::string(to_string(r.status));
        d["growth_rate"] = r.growth_rate;
        d["uptake_fluxes"] = r.uptake_fluxes;
        return d;
      },
      py::arg("model"), py::arg("overrides") = std::map<std::string, std::pair<double, double>>{},
      py::arg("tracked_exchanges") = std::vector<std::string>{});

  m.def(
      "simulate",
      [](const MetabolicModel& model, double glucose, double xylose, const KineticParams& params, double b0) {
        GrowthTrajectory t;
        {
          py::gil_scoped_release release;
          t = simulate(model, {glucose, xylose}, params, b0);
        }
        return trajectory_dict(t);
      },
      py::arg("model"), py::arg("glucose"), py::arg("xylose"), py::arg("params") = KineticParams{},
      py::arg("b0") = 0.01, "dFBA growth curve; arrays hold the state after each step.");

  m.def(
      "screen_single_deletions",
      [](const MetabolicModel& model, double glucose, double xylose, const KineticParams& params, int jobs) {
        std::vector<DeletionScreenEntry> entries;
        {
          py::gil_scoped_release release;
          const DfbaSimulator sim(model, params);
          const ExchangeIds ex;
          entries = screen_single_deletions(model, sim.kinetic_medium({glucose, xylose}),
                                            {ex.glucose, ex.xylose, ex.oxygen}, resolve_jobs(jobs));
        }
        py::list out;
        for (const auto& e : entries) {
          py::dict d;
          d["gene"] = e.gene;
          d["growth_ratio"] = e.growth_ratio;
          d["retained"] = e.retained;
          d["group_id"] = e.group_id;
          d["group_representative"] = e.group_representative;
          d["error"] = e.error ? py::cast(*e.error) : py::none();
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("glucose") = 22.5, py::arg("xylose") = 22.5, py::arg("params") = KineticParams{},
      py::arg("jobs") = 1);

  m.def("numerical_rank", &numerical_rank, py::arg("matrix"), py::arg("sv_rel_tol") = 1e-6);
  m.def("default_alphas", &default_alphas);
  m.def(
      "fit_ridge_readout",
      [](const Eigen::MatrixXd& F, const Eigen::VectorXd& y, std::optional<std::vector<double>> alphas) {
        const std::vector<double> grid = alphas ? *alphas : default_alphas();
        const RidgeReadout r = fit_ridge_readout(F, y, grid);
        py::dict d;
        d["weights"] = r.weights;
        d["intercept"] = r.intercept;
        d["alpha"] = r.alpha;
        return d;
      },
      py::arg("features"), py::arg("labels"), py::arg("alphas") = py::none(),
      "Ridge readout on +-1 labels; alpha chosen by leave-one-out error.");

  m.def(
      "generate_ensemble",
      [](int n_templates, int samples_per_template, int train_per_template, double noise_std, std::uint64_t seed) {
        EnsembleConfig c;
        c.n_templates = n_templates;
        c.samples_per_template = samples_per_template;
        c.train_per_template = train_per_template;
        c.noise_std = noise_std;
        c.seed = seed;
        const InputEnsemble e = generate_ensemble(c);
        py::list samples;
        for (const auto& s : e.samples) {
          py::dict d;
          d["template"] = s.template_index;
          d["glucose"] = s.input.glucose;
          d["xylose"] = s.input.xylose;
          d["train"] = s.train;
          samples.append(d);
        }
        return samples;
      },
      py::arg("n_templates") = 20, py::arg("samples_per_template") = 25, py::arg("train_per_template") = 20,
      py::arg("noise_std") = 0.2, py::arg("seed") = 0);

  m.def(
      "run_study",
      [](const std::string& config_json, const std::string& base_dir, int jobs, bool write_outputs) {
        const StudyConfig config = parse_study_config(config_json, base_dir);
        BenchmarkReport report;
        {
          py::gil_scoped_release release;
          report = run_study(config, resolve_jobs(jobs));
          if (write_outputs) write_study_outputs(config, report, config.output_dir);
        }
        py::dict d;
        d["baseline"] = accuracy_dict(report.baseline);
        py::list models;
        for (const auto& mr : report.models) {
          py::dict md;
          md["model"] = mr.model_id;
          py::list acc;
          for (const auto& a : mr.accuracy) acc.append(accuracy_dict(a));
          md["accuracy"] = acc;
          py::list ranks;
          for (const auto& r : mr.ranks) {
            py::dict rd;
            rd["T"] = r.prefix_length;
            rd["kernel_rank"] = r.kernel_rank;
            rd["generalisation_rank"] = r.generalisation_rank;
            rd["rank_difference"] = r.rank_difference;
            ranks.append(rd);
          }
          md["ranks"] = ranks;
          md["error"] = mr.error ? py::cast(*mr.error) : py::none();
          models.append(md);
        }
        d["models"] = models;
        d["pareto_front"] = pareto_front(report, config.pareto_threshold, config.kinetics.dt);
        return d;
      },
      py::arg("config_json"), py::arg("base_dir") = "", py::arg("jobs") = 1, py::arg("write_outputs") = false);
}
