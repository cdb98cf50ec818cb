#pragma once

#include <string>
#include <vector>

#include "rflux/bigg.hpp"
#include "rflux/model.hpp"

namespace rflux::testing {

inline std::string data_path(const std::string& name) { return std::string(RFLUX_DATA_DIR) + "/" + name; }

inline const MetabolicModel& core_model() {
  static const MetabolicModel m = parse_model(ModelSource::from_file(data_path("e_coli_core.json")));
  return m;
}

inline const MetabolicModel& xylose_core_model() {
  static const MetabolicModel m = parse_model(ModelSource::from_file(data_path("e_coli_core_xyl.json")));
  return m;
}

inline Reaction reaction(std::string id, std::map<std::string, double> stoich, double lb, double ub,
                         std::string gpr = {}, double objective = 0.0) {
  Reaction r;
  r.id = std::move(id);
  r.stoichiometry = std::move(stoich);
  r.lower_bound = lb;
  r.upper_bound = ub;
  r.objective_coefficient = objective;
  r.gpr = parse_gpr(gpr);
  return r;
}

// EX_A (uptake up to 10) -> A -> B -> biomass. `yield` is biomass per B.
inline MetabolicModel toy_chain(double biomass_per_b = 1.0) {
  return MetabolicModel::create(
      "toy_chain", {{"A", "c"}, {"B", "c"}},
      {reaction("EX_A", {{"A", -1.0}}, -10.0, 0.0), reaction("R1", {{"A", -1.0}, {"B", 1.0}}, 0.0, 1000.0, "g1"),
       reaction("BIO", {{"B", -1.0 / biomass_per_b}}, 0.0, 1000.0, "", 1.0)},
      {"g1"});
}

// Minimal dFBA-ready model: glucose and xylose each feed biomass 1:1,
// oxygen is exchanged but unused. `mu_cap` bounds the biomass flux.
inline MetabolicModel toy_sugars(double mu_cap = 1000.0) {
  return MetabolicModel::create(
      "toy_sugars", {{"glc", "e"}, {"xyl", "e"}, {"o2", "e"}, {"C", "c"}},
      {reaction("EX_glc__D_e", {{"glc", -1.0}}, 0.0, 1000.0), reaction("EX_xyl__D_e", {{"xyl", -1.0}}, 0.0, 1000.0),
       reaction("EX_o2_e", {{"o2", -1.0}}, 0.0, 1000.0), reaction("GLCt", {{"glc", -1.0}, {"C", 1.0}}, 0.0, 1000.0),
       reaction("XYLt", {{"xyl", -1.0}, {"C", 1.0}}, 0.0, 1000.0),
       reaction("O2sink", {{"o2", -1.0}}, 0.0, 1000.0),
       reaction("BIO", {{"C", -1.0}}, 0.0, mu_cap, "", 1.0)},
      {});
}

// Seven steps in series, each with a gene-controlled main route and a
// gene-free bypass of capacity 100 * ratio. Uptake is 100, so knocking out
// gene gK leaves growth ratio ratios[K].
inline const std::vector<double> kDeletionRatios = {0.0, 0.04, 0.05, 0.5, 0.95, 0.96, 1.0};

inline MetabolicModel series_of_routes() {
  std::vector<Metabolite> mets;
  std::vector<Reaction> rxns;
  std::vector<std::string> genes;
  for (std::size_t k = 0; k <= kDeletionRatios.size(); ++k) mets.push_back({"M" + std::to_string(k), "c"});
  rxns.push_back(reaction("EX_M0", {{"M0", -1.0}}, -100.0, 0.0));
  for (std::size_t k = 0; k < kDeletionRatios.size(); ++k) {
    const std::string a = "M" + std::to_string(k), b = "M" + std::to_string(k + 1);
    const std::string gene = "g" + std::to_string(k);
    genes.push_back(gene);
    rxns.push_back(reaction("MAIN" + std::to_string(k), {{a, -1.0}, {b, 1.0}}, 0.0, 1000.0, gene));
    rxns.push_back(reaction("BYPASS" + std::to_string(k), {{a, -1.0}, {b, 1.0}}, 0.0, 100.0 * kDeletionRatios[k]));
  }
  const std::string last = "M" + std::to_string(kDeletionRatios.size());
  rxns.push_back(reaction("BIO", {{last, -1.0}}, 0.0, 1000.0, "", 1.0));
  genes.push_back("g_orphan");  // in no rule
  return MetabolicModel::create("series", mets, rxns, genes);
}

}  // namespace rflux::testing
