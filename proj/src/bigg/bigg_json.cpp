#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rflux/bigg.hpp"
#include "rflux/error.hpp"

namespace rflux {

using nlohmann::json;

ModelSource ModelSource::from_file(std::filesystem::path path) {
  ModelSource s;
  s.path_ = std::move(path);
  return s;
}

ModelSource ModelSource::from_bytes(std::string bytes) {
  ModelSource s;
  s.bytes_ = std::move(bytes);
  s.in_memory_ = true;
  return s;
}

std::string ModelSource::read() const {
  if (in_memory_) return bytes_;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw ParseError("cannot open model file '" + path_.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ModelSource::describe() const { return in_memory_ ? "<memory>" : path_.string(); }

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' is not a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' is not a string");
  return v.get<std::string>();
}

const json& require_array(const json& doc, const char* key) {
  const json& v = require(doc, key, "model");
  if (!v.is_array()) throw SchemaError(std::string("model: '") + key + "' is not an array");
  return v;
}

}  // namespace

MetabolicModel parse_model(const ModelSource& source, const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(source.read());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + source.describe() + "': " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("model document is not a JSON object");

  std::vector<Metabolite> metabolites;
  for (const json& m : require_array(doc, "metabolites")) {
    if (!m.is_object()) throw SchemaError("metabolite entry is not an object");
    Metabolite met;
    met.id = require_string(m, "id", "metabolite");
    if (auto it = m.find("compartment"); it != m.end() && it->is_string()) {
      met.compartment = it->get<std::string>();
    }
    metabolites.push_back(std::move(met));
  }

  std::vector<std::string> genes;
  for (const json& g : require_array(doc, "genes")) {
    if (g.is_string()) {
      genes.push_back(g.get<std::string>());
    } else if (g.is_object()) {
      genes.push_back(require_string(g, "id", "gene"));
    } else {
      throw SchemaError("gene entry is neither an object nor a string");
    }
  }

  std::vector<Reaction> reactions;
  for (const json& r : require_array(doc, "reactions")) {
    if (!r.is_object()) throw SchemaError("reaction entry is not an object");
    Reaction rx;
    rx.id = require_string(r, "id", "reaction");
    const std::string where = "reaction '" + rx.id + "'";
    const json& mets = require(r, "metabolites", where);
    if (!mets.is_object()) throw SchemaError(where + ": 'metabolites' is not an object");
    for (const auto& [met, coeff] : mets.items()) {
      if (!coeff.is_number()) throw SchemaError(where + ": coefficient of '" + met + "' is not a number");
      rx.stoichiometry.emplace(met, coeff.get<double>());
    }
    rx.lower_bound = require_number(r, "lower_bound", where);
    rx.upper_bound = require_number(r, "upper_bound", where);
    rx.gpr = parse_gpr(require_string(r, "gene_reaction_rule", where));
    if (auto it = r.find("objective_coefficient"); it != r.end()) {
      if (!it->is_number()) throw SchemaError(where + ": 'objective_coefficient' is not a number");
      rx.objective_coefficient = it->get<double>();
    }
    reactions.push_back(std::move(rx));
  }

  std::string id;
  if (auto it = doc.find("id"); it != doc.end() && it->is_string()) id = it->get<std::string>();
  return MetabolicModel::create(std::move(id), std::move(metabolites), std::move(reactions),
                                std::move(genes), options.biomass_reaction_id);
}

}  // namespace rflux
