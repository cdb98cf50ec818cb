#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

namespace rflux {

/// Boolean gene-protein-reaction rule. AND nodes model enzyme complexes,
/// OR nodes model isozymes. The empty rule marks a gene-independent reaction.
struct GprExpression {
  enum class Kind { kEmpty, kGene, kAnd, kOr };

  Kind kind = Kind::kEmpty;
  std::string gene;                     // kGene only
  std::vector<GprExpression> children;  // kAnd / kOr only

  static GprExpression empty() { return {}; }
  static GprExpression leaf(std::string gene_id);
  static GprExpression conjunction(std::vector<GprExpression> operands);
  static GprExpression disjunction(std::vector<GprExpression> operands);

  bool is_empty() const { return kind == Kind::kEmpty; }

  /// Every gene id mentioned anywhere in the tree.
  void collect_genes(std::set<std::string>& out) const;

  /// Canonical text form, fully parenthesised below the root; parses back
  /// to an equivalent tree.
  std::string to_string() const;
};

/// True iff the reaction stays catalysable with `deleted` genes knocked out.
bool evaluate_gpr(const GprExpression& gpr, const std::set<std::string>& deleted);

struct Metabolite {
  std::string id;
  std::string compartment;
};

struct Reaction {
  std::string id;
  std::map<std::string, double> stoichiometry;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double objective_coefficient = 0.0;
  GprExpression gpr;

  /// Single-metabolite reaction crossing the system boundary (exchange, sink or demand).
  bool is_boundary() const { return stoichiometry.size() <= 1; }
};

/// Validated, immutable constraint-based model. Copies share the
/// stoichiometric matrix; only bounds may differ between copies
/// (see apply_deletion and with_bounds).
class MetabolicModel {
 public:
  /// Validates and normalises. If `biomass_reaction_id` is empty the unique
  /// reaction with nonzero objective coefficient is taken; otherwise the named
  /// reaction becomes the sole objective (coefficient 1 unless already set).
  /// Throws ValidationError.
  static MetabolicModel create(std::string id, std::vector<Metabolite> metabolites,
                               std::vector<Reaction> reactions, std::vector<std::string> genes,
                               std::string biomass_reaction_id = {});

  const std::string& id() const { return id_; }
  const std::vector<Metabolite>& metabolites() const { return metabolites_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const std::vector<std::string>& genes() const { return genes_; }
  const std::string& biomass_reaction_id() const { return reactions_[biomass_index_].id; }
  std::size_t biomass_index() const { return biomass_index_; }

  bool has_reaction(std::string_view reaction_id) const;
  bool has_gene(std::string_view gene_id) const;
  /// Throws ValidationError for an unknown id.
  std::size_t reaction_index(std::string_view reaction_id) const;

  /// #metabolites x #reactions, column j holds reaction j's coefficients.
  const Eigen::SparseMatrix<double>& stoichiometric_matrix() const { return *stoichiometry_; }
  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;
  Eigen::VectorXd objective() const;

  /// Copy with one reaction's bounds replaced. Throws ValidationError if lb > ub.
  MetabolicModel with_bounds(std::size_t reaction, double lb, double ub) const;

  /// Indices of reactions whose GPR evaluates false with `deleted` knocked out.
  std::vector<std::size_t> knocked_out_reactions(const std::set<std::string>& deleted) const;

 private:
  MetabolicModel() = default;

  std::string id_;
  std::vector<Metabolite> metabolites_;
  std::vector<Reaction> reactions_;
  std::vector<std::string> genes_;
  std::size_t biomass_index_ = 0;
  std::shared_ptr<const Eigen::SparseMatrix<double>> stoichiometry_;
  std::shared_ptr<const std::unordered_map<std::string, std::size_t>> reaction_lookup_;
  std::shared_ptr<const std::set<std::string, std::less<>>> gene_set_;
};

/// Copy of `model` with every reaction whose GPR fails under {gene deleted}
/// constrained to [0, 0]. Throws ValidationError for a gene not in the model.
MetabolicModel apply_deletion(const MetabolicModel& model, const std::string& gene);

}  // namespace rflux
