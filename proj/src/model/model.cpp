#include "rflux/model.hpp"

#include <algorithm>
#include <cmath>

#include "rflux/error.hpp"

namespace rflux {

namespace {

bool is_boundary_id(std::string_view id) {
  return id.starts_with("EX_") || id.starts_with("SK_") || id.starts_with("DM_") ||
         id.starts_with("sink_");
}

}  // namespace

GprExpression GprExpression::leaf(std::string gene_id) {
  GprExpression e;
  e.kind = Kind::kGene;
  e.gene = std::move(gene_id);
  return e;
}

GprExpression GprExpression::conjunction(std::vector<GprExpression> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  GprExpression e;
  e.kind = Kind::kAnd;
  e.children = std::move(operands);
  return e;
}

GprExpression GprExpression::disjunction(std::vector<GprExpression> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  GprExpression e;
  e.kind = Kind::kOr;
  e.children = std::move(operands);
  return e;
}

void GprExpression::collect_genes(std::set<std::string>& out) const {
  if (kind == Kind::kGene) {
    out.insert(gene);
    return;
  }
  for (const auto& c : children) c.collect_genes(out);
}

std::string GprExpression::to_string() const {
  switch (kind) {
    case Kind::kEmpty:
      return {};
    case Kind::kGene:
      return gene;
    case Kind::kAnd:
    case Kind::kOr: {
      const char* op = kind == Kind::kAnd ? " and " : " or ";
      std::string out;
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += op;
        const auto& c = children[i];
        if (c.kind == Kind::kAnd || c.kind == Kind::kOr) {
          out += "(" + c.to_string() + ")";
        } else {
          out += c.to_string();
        }
      }
      return out;
    }
  }
  return {};
}

bool evaluate_gpr(const GprExpression& gpr, const std::set<std::string>& deleted) {
  using Kind = GprExpression::Kind;
  switch (gpr.kind) {
    case Kind::kEmpty:
      return true;
    case Kind::kGene:
      return !deleted.contains(gpr.gene);
    case Kind::kAnd:
      return std::all_of(gpr.children.begin(), gpr.children.end(),
                         [&](const GprExpression& c) { return evaluate_gpr(c, deleted); });
    case Kind::kOr:
      return std::any_of(gpr.children.begin(), gpr.children.end(),
                         [&](const GprExpression& c) { return evaluate_gpr(c, deleted); });
  }
  return true;
}

MetabolicModel MetabolicModel::create(std::string id, std::vector<Metabolite> metabolites,
                                      std::vector<Reaction> reactions,
                                      std::vector<std::string> genes,
                                      std::string biomass_reaction_id) {
  std::unordered_map<std::string, std::size_t> met_index;
  for (std::size_t i = 0; i < metabolites.size(); ++i) {
    const auto& m = metabolites[i];
    if (m.id.empty()) throw ValidationError("metabolite with empty id");
    if (!met_index.emplace(m.id, i).second) {
      throw ValidationError("duplicate metabolite id '" + m.id + "'");
    }
  }

  auto gene_set = std::make_shared<std::set<std::string, std::less<>>>();
  for (const auto& g : genes) {
    if (g.empty()) throw ValidationError("gene with empty id");
    if (!gene_set->insert(g).second) throw ValidationError("duplicate gene id '" + g + "'");
  }

  auto lookup = std::make_shared<std::unordered_map<std::string, std::size_t>>();
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t j = 0; j < reactions.size(); ++j) {
    const auto& r = reactions[j];
    if (r.id.empty()) throw ValidationError("reaction with empty id");
    if (!lookup->emplace(r.id, j).second) {
      throw ValidationError("duplicate reaction id '" + r.id + "'");
    }
    if (std::isnan(r.lower_bound) || std::isnan(r.upper_bound)) {
      throw ValidationError("reaction '" + r.id + "' has a NaN bound");
    }
    if (r.lower_bound > r.upper_bound) {
      throw ValidationError("reaction '" + r.id + "' has lower_bound > upper_bound");
    }
    if (!std::isfinite(r.objective_coefficient)) {
      throw ValidationError("reaction '" + r.id + "' has a non-finite objective coefficient");
    }
    if (r.stoichiometry.empty() && !is_boundary_id(r.id)) {
      throw ValidationError("reaction '" + r.id + "' has no metabolites");
    }
    for (const auto& [met, coeff] : r.stoichiometry) {
      auto it = met_index.find(met);
      if (it == met_index.end()) {
        throw ValidationError("reaction '" + r.id + "' references undeclared metabolite '" +
                              met + "'");
      }
      if (!std::isfinite(coeff)) {
        throw ValidationError("reaction '" + r.id + "' has a non-finite coefficient");
      }
      if (coeff != 0.0) triplets.emplace_back(static_cast<int>(it->second), static_cast<int>(j), coeff);
    }
    std::set<std::string> gpr_genes;
    r.gpr.collect_genes(gpr_genes);
    for (const auto& g : gpr_genes) {
      if (!gene_set->contains(g)) {
        throw ValidationError("reaction '" + r.id + "' GPR references undeclared gene '" + g +
                              "'");
      }
    }
  }

  std::size_t biomass = reactions.size();
  if (!biomass_reaction_id.empty()) {
    auto it = lookup->find(biomass_reaction_id);
    if (it == lookup->end()) {
      throw ValidationError("biomass reaction '" + biomass_reaction_id + "' not in model");
    }
    biomass = it->second;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      if (j != biomass) reactions[j].objective_coefficient = 0.0;
    }
    if (reactions[biomass].objective_coefficient == 0.0) {
      reactions[biomass].objective_coefficient = 1.0;
    }
  } else {
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      if (reactions[j].objective_coefficient == 0.0) continue;
      if (biomass != reactions.size()) {
        throw ValidationError("multiple objective reactions ('" + reactions[biomass].id +
                              "', '" + reactions[j].id + "'); name the biomass reaction");
      }
      biomass = j;
    }
    if (biomass == reactions.size()) {
      throw ValidationError("no objective reaction; name the biomass reaction explicitly");
    }
  }

  auto s = std::make_shared<Eigen::SparseMatrix<double>>(static_cast<Eigen::Index>(metabolites.size()),
                                                         static_cast<Eigen::Index>(reactions.size()));
  s->setFromTriplets(triplets.begin(), triplets.end());
  s->makeCompressed();

  MetabolicModel model;
  model.id_ = std::move(id);
  model.metabolites_ = std::move(metabolites);
  model.reactions_ = std::move(reactions);
  model.genes_ = std::move(genes);
  model.biomass_index_ = biomass;
  model.stoichiometry_ = std::move(s);
  model.reaction_lookup_ = std::move(lookup);
  model.gene_set_ = std::move(gene_set);
  return model;
}

bool MetabolicModel::has_reaction(std::string_view reaction_id) const {
  return reaction_lookup_->contains(std::string(reaction_id));
}

bool MetabolicModel::has_gene(std::string_view gene_id) const {
  return gene_set_->find(gene_id) != gene_set_->end();
}

std::size_t MetabolicModel::reaction_index(std::string_view reaction_id) const {
  auto it = reaction_lookup_->find(std::string(reaction_id));
  if (it == reaction_lookup_->end()) {
    throw ValidationError("unknown reaction '" + std::string(reaction_id) + "' in model '" +
                          id_ + "'");
  }
  return it->second;
}

Eigen::VectorXd MetabolicModel::lower_bounds() const {
  Eigen::VectorXd v(reactions_.size());
  for (std::size_t j = 0; j < reactions_.size(); ++j) v[j] = reactions_[j].lower_bound;
  return v;
}

Eigen::VectorXd MetabolicModel::upper_bounds() const {
  Eigen::VectorXd v(reactions_.size());
  for (std::size_t j = 0; j < reactions_.size(); ++j) v[j] = reactions_[j].upper_bound;
  return v;
}

Eigen::VectorXd MetabolicModel::objective() const {
  Eigen::VectorXd v(reactions_.size());
  for (std::size_t j = 0; j < reactions_.size(); ++j) v[j] = reactions_[j].objective_coefficient;
  return v;
}

MetabolicModel MetabolicModel::with_bounds(std::size_t reaction, double lb, double ub) const {
  if (reaction >= reactions_.size()) throw ValidationError("reaction index out of range");
  if (!(lb <= ub)) {
    throw ValidationError("bounds for '" + reactions_[reaction].id + "' have lb > ub");
  }
  MetabolicModel copy = *this;
  copy.reactions_[reaction].lower_bound = lb;
  copy.reactions_[reaction].upper_bound = ub;
  return copy;
}

std::vector<std::size_t> MetabolicModel::knocked_out_reactions(
    const std::set<std::string>& deleted) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < reactions_.size(); ++j) {
    if (!evaluate_gpr(reactions_[j].gpr, deleted)) out.push_back(j);
  }
  return out;
}

MetabolicModel apply_deletion(const MetabolicModel& model, const std::string& gene) {
  if (!model.has_gene(gene)) {
    throw ValidationError("unknown gene '" + gene + "' in model '" + model.id() + "'");
  }
  MetabolicModel out = model;
  for (std::size_t j : model.knocked_out_reactions({gene})) out = out.with_bounds(j, 0.0, 0.0);
  return out;
}

}  // namespace rflux
