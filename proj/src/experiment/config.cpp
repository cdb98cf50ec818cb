#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rflux/error.hpp"
#include "rflux/experiment.hpp"

namespace rflux {

namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects whatever is left unread.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  std::uint64_t seed(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(path(key) + ": seed is required");
    if (!v->is_number_unsigned()) throw ConfigError(path(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  void range(const std::string& key, double& lo, double& hi) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
        throw ConfigError(path(key) + ": expected [low, high]");
      }
      lo = (*v)[0].get<double>();
      hi = (*v)[1].get<double>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown key");
    }
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void read_kinetics(Section& s, KineticParams& p) {
  s.number("v_glucose_max", p.v_glucose_max);
  s.number("k_glucose", p.k_glucose);
  s.number("v_xylose_max", p.v_xylose_max);
  s.number("k_xylose", p.k_xylose);
  s.number("k_glucose_inhibition", p.k_glucose_inhibition);
  s.number("o2_max_uptake", p.o2_max_uptake);
  s.number("dt", p.dt);
  s.number("duration", p.duration);
  std::string update;
  s.text("biomass_update", update);
  if (update == "euler") {
    p.biomass_update = BiomassUpdate::kEuler;
  } else if (update == "exponential") {
    p.biomass_update = BiomassUpdate::kExponential;
  } else if (!update.empty()) {
    throw ConfigError(s.path("biomass_update") + ": expected \"euler\" or \"exponential\"");
  }
  s.finish();
}

json kinetics_to_json(const KineticParams& p) {
  return {{"v_glucose_max", p.v_glucose_max},
          {"k_glucose", p.k_glucose},
          {"v_xylose_max", p.v_xylose_max},
          {"k_xylose", p.k_xylose},
          {"k_glucose_inhibition", p.k_glucose_inhibition},
          {"o2_max_uptake", p.o2_max_uptake},
          {"dt", p.dt},
          {"duration", p.duration},
          {"biomass_update", p.biomass_update == BiomassUpdate::kEuler ? "euler" : "exponential"}};
}

ExchangeIds read_exchanges(const json& j, const std::string& where) {
  ExchangeIds ids;
  Section s(j, where);
  s.text("glucose", ids.glucose);
  s.text("xylose", ids.xylose);
  s.text("oxygen", ids.oxygen);
  s.finish();
  return ids;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.is_absolute() || base.empty()) return p.lexically_normal();
  return (base / p).lexically_normal();
}

}  // namespace

void StudyConfig::validate() const {
  if (models.empty()) throw ConfigError("study needs at least one model");
  std::set<std::string> ids;
  for (const auto& m : models) {
    if (m.id.empty()) throw ConfigError("model id must be non-empty");
    if (m.id.find_first_of(",\"\n\r") != std::string::npos) {
      throw ConfigError("model id '" + m.id + "' contains a comma, quote or newline");
    }
    if (!ids.insert(m.id).second) throw ConfigError("duplicate model id '" + m.id + "'");
    if (m.path.empty()) throw ConfigError("model '" + m.id + "' has no path");
  }
  kinetics.validate();
  if (!(b0 > 0.0) || !std::isfinite(b0)) throw ConfigError("b0 must be positive");
  ensemble.validate();
  if (n_tasks < 1) throw ConfigError("tasks.count must be >= 1");
  if (alphas.empty()) throw ConfigError("readout.alphas must be non-empty");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("readout.alphas must be positive");
  }
  ranks.validate();
  const int steps = kinetics.steps();
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    if (prefixes[i] < 1 || prefixes[i] > steps) {
      throw ConfigError("prefix " + std::to_string(prefixes[i]) + " outside 1.." + std::to_string(steps));
    }
    if (i > 0 && prefixes[i] <= prefixes[i - 1]) throw ConfigError("prefixes must be strictly increasing");
  }
  if (!(pareto_threshold >= 0.0 && pareto_threshold <= 1.0)) {
    throw ConfigError("pareto_threshold must lie in [0, 1]");
  }
  if (mutants) {
    if (!ids.count(mutants->base_model)) {
      throw ConfigError("mutants.base_model '" + mutants->base_model + "' is not a configured model");
    }
    if (!(mutants->screen_medium.glucose >= 0.0) || !(mutants->screen_medium.xylose >= 0.0)) {
      throw ConfigError("mutants.screen_medium must be non-negative");
    }
  }
}

std::vector<int> StudyConfig::schedule() const {
  if (!prefixes.empty()) return prefixes;
  std::vector<int> all(static_cast<std::size_t>(kinetics.steps()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
  return all;
}

StudyConfig parse_study_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  const json doc = parse_json(json_text);
  Section top(doc, "config");
  StudyConfig c;

  const json* models = top.find("models");
  if (!models || !models->is_array()) throw ConfigError("config.models: expected an array");
  for (std::size_t i = 0; i < models->size(); ++i) {
    Section s((*models)[i], "config.models[" + std::to_string(i) + "]");
    ModelSpec m;
    std::string path;
    s.text("id", m.id);
    s.text("path", path);
    s.text("biomass_reaction", m.biomass_reaction);
    if (const json* ex = s.find("exchanges")) m.exchanges = read_exchanges(*ex, s.path("exchanges"));
    s.finish();
    if (path.empty()) throw ConfigError(s.path("path") + ": required");
    m.path = resolve(path, base_dir);
    if (m.id.empty()) m.id = m.path.stem().string();
    c.models.push_back(std::move(m));
  }

  if (const json* k = top.find("kinetics")) {
    Section s(*k, "config.kinetics");
    read_kinetics(s, c.kinetics);
  }
  top.number("b0", c.b0);

  if (const json* e = top.find("ensemble")) {
    Section s(*e, "config.ensemble");
    s.integer("n_templates", c.ensemble.n_templates);
    s.integer("samples_per_template", c.ensemble.samples_per_template);
    s.integer("train_per_template", c.ensemble.train_per_template);
    s.range("range", c.ensemble.range_low, c.ensemble.range_high);
    s.number("noise_std", c.ensemble.noise_std);
    s.finish();
  }
  if (const json* t = top.find("tasks")) {
    Section s(*t, "config.tasks");
    s.integer("count", c.n_tasks);
    s.finish();
  }
  if (const json* r = top.find("readout")) {
    Section s(*r, "config.readout");
    if (const json* a = s.find("alphas")) {
      if (!a->is_array()) throw ConfigError("config.readout.alphas: expected an array");
      c.alphas.clear();
      for (const auto& v : *a) {
        if (!v.is_number()) throw ConfigError("config.readout.alphas: expected numbers");
        c.alphas.push_back(v.get<double>());
      }
    }
    s.finish();
  }
  if (const json* r = top.find("ranks")) {
    Section s(*r, "config.ranks");
    s.integer("n_kernel_templates", c.ranks.n_kernel_templates);
    s.integer("n_gen_templates", c.ranks.n_gen_templates);
    s.integer("n_gen_variants", c.ranks.n_gen_variants);
    s.range("range", c.ranks.range_low, c.ranks.range_high);
    s.number("noise_std", c.ranks.noise_std);
    s.number("sv_rel_tol", c.ranks.sv_rel_tol);
    s.finish();
  }

  const json* seeds = top.find("seeds");
  if (!seeds) throw ConfigError("config.seeds: required");
  {
    Section s(*seeds, "config.seeds");
    c.ensemble.seed = s.seed("ensemble");
    c.task_seed = s.seed("tasks");
    c.ranks.kernel_seed = s.seed("kernel");
    c.ranks.generalisation_seed = s.seed("generalisation");
    s.finish();
  }

  if (const json* p = top.find("prefixes")) {
    if (p->is_string()) {
      if (p->get<std::string>() != "all") throw ConfigError("config.prefixes: expected \"all\" or a list");
    } else if (p->is_array()) {
      for (const auto& v : *p) {
        if (!v.is_number_integer()) throw ConfigError("config.prefixes: expected integers");
        c.prefixes.push_back(v.get<int>());
      }
      if (c.prefixes.empty()) throw ConfigError("config.prefixes: empty list");
    } else {
      throw ConfigError("config.prefixes: expected \"all\" or a list");
    }
  }
  top.number("pareto_threshold", c.pareto_threshold);

  if (const json* m = top.find("mutants"); m && !m->is_null()) {
    Section s(*m, "config.mutants");
    MutantStudySpec spec;
    s.text("base_model", spec.base_model);
    if (const json* med = s.find("screen_medium")) {
      Section ms(*med, "config.mutants.screen_medium");
      ms.number("glucose", spec.screen_medium.glucose);
      ms.number("xylose", spec.screen_medium.xylose);
      ms.finish();
    }
    s.finish();
    if (spec.base_model.empty()) throw ConfigError("config.mutants.base_model: required");
    c.mutants = spec;
  }

  std::string out;
  top.text("output_dir", out);
  if (!out.empty()) c.output_dir = resolve(out, base_dir);
  top.finish();

  c.validate();
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_study_config(ss.str(), path.parent_path());
}

std::string resolved_config_json(const StudyConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) {
    models.push_back({{"id", m.id},
                      {"path", m.path.generic_string()},
                      {"biomass_reaction", m.biomass_reaction},
                      {"exchanges",
                       {{"glucose", m.exchanges.glucose},
                        {"xylose", m.exchanges.xylose},
                        {"oxygen", m.exchanges.oxygen}}}});
  }
  json doc = {
      {"models", models},
      {"kinetics", kinetics_to_json(c.kinetics)},
      {"b0", c.b0},
      {"ensemble",
       {{"n_templates", c.ensemble.n_templates},
        {"samples_per_template", c.ensemble.samples_per_template},
        {"train_per_template", c.ensemble.train_per_template},
        {"range", {c.ensemble.range_low, c.ensemble.range_high}},
        {"noise_std", c.ensemble.noise_std}}},
      {"tasks", {{"count", c.n_tasks}}},
      {"readout", {{"alphas", c.alphas}}},
      {"ranks",
       {{"n_kernel_templates", c.ranks.n_kernel_templates},
        {"n_gen_templates", c.ranks.n_gen_templates},
        {"n_gen_variants", c.ranks.n_gen_variants},
        {"range", {c.ranks.range_low, c.ranks.range_high}},
        {"noise_std", c.ranks.noise_std},
        {"sv_rel_tol", c.ranks.sv_rel_tol}}},
      {"seeds",
       {{"ensemble", c.ensemble.seed},
        {"tasks", c.task_seed},
        {"kernel", c.ranks.kernel_seed},
        {"generalisation", c.ranks.generalisation_seed}}},
      {"prefixes", c.schedule()},
      {"pareto_threshold", c.pareto_threshold},
      {"output_dir", c.output_dir.generic_string()},
  };
  if (c.mutants) {
    doc["mutants"] = {{"base_model", c.mutants->base_model},
                      {"screen_medium",
                       {{"glucose", c.mutants->screen_medium.glucose},
                        {"xylose", c.mutants->screen_medium.xylose}}}};
  } else {
    doc["mutants"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

KineticParams parse_kinetic_params(const std::string& json_text) {
  const json doc = parse_json(json_text);
  KineticParams p;
  Section s(doc, "params");
  read_kinetics(s, p);
  p.validate();
  return p;
}

std::string kinetic_params_json(const KineticParams& params) {
  return kinetics_to_json(params).dump(2) + "\n";
}

}  // namespace rflux
