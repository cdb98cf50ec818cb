#include "rflux/fba.hpp"

#include <algorithm>
#include <stdexcept>

#include "rflux/error.hpp"
#include "rflux/parallel.hpp"

namespace rflux {

FluxBalance::FluxBalance(MetabolicModel model, std::vector<std::string> tracked_exchanges,
                         SolverOptions options)
    : model_(std::move(model)),
      tracked_(std::move(tracked_exchanges)),
      lp_(model_.stoichiometric_matrix(), model_.objective(), model_.lower_bounds(),
          model_.upper_bounds()),
      options_(options) {
  for (const auto& id : tracked_) {
    tracked_index_.push_back(static_cast<Eigen::Index>(model_.reaction_index(id)));
  }
  primary_form_ = detail::primary_form(lp_);
  if (!tracked_index_.empty()) l1_form_ = detail::min_l1_form(lp_, tracked_index_, 0.0, options_.opt_tol);
}

FbaResult FluxBalance::run(const BoundOverrides& overrides, FbaWarmStart* warm) const {
  // Copies share the constraint matrices; only bounds and the target change.
  detail::StandardForm primary = primary_form_;
  for (const auto& [id, b] : overrides) {
    const auto j = static_cast<Eigen::Index>(model_.reaction_index(id));
    if (!(b.lower <= b.upper)) {
      throw ValidationError("override for '" + id + "' has lower bound > upper bound");
    }
    primary.lower[j] = b.lower;
    primary.upper[j] = b.upper;
  }

  FbaResult out;
  for (const auto& id : tracked_) out.uptake_fluxes[id] = 0.0;

  const detail::StandardResult first =
      detail::minimize(primary, options_, warm ? &warm->primary : nullptr);
  out.status = first.status;
  if (first.status == LpStatus::kUnbounded) {
    throw NumericalError("FBA objective unbounded for model '" + model_.id() + "'");
  }
  if (first.status == LpStatus::kInfeasible) return out;

  const Eigen::Index n = lp_.cols();
  out.growth_rate = first.x[static_cast<Eigen::Index>(model_.biomass_index())];
  Eigen::VectorXd fluxes = first.x;
  if (!tracked_index_.empty()) {
    detail::StandardForm l1 = l1_form_;
    l1.lower.head(n) = primary.lower;
    l1.upper.head(n) = primary.upper;
    l1.b[lp_.rows()] = lp_.c().dot(first.x) - options_.opt_tol;
    const detail::StandardResult second =
        detail::minimize(l1, options_, warm ? &warm->tie_break : nullptr);
    if (second.status == LpStatus::kOptimal) fluxes = second.x.head(n);
  }
  for (std::size_t i = 0; i < tracked_.size(); ++i) {
    out.uptake_fluxes[tracked_[i]] = std::max(0.0, -fluxes[tracked_index_[i]]);
  }
  return out;
}

FbaResult run_fba(const MetabolicModel& model, const BoundOverrides& overrides,
                  const std::vector<std::string>& tracked_exchanges, const SolverOptions& options) {
  return FluxBalance(model, tracked_exchanges, options).run(overrides);
}

bool is_retained(double growth_ratio) {
  return growth_ratio >= kRetainMin - kRetainSlack && growth_ratio <= kRetainMax + kRetainSlack;
}

std::vector<DeletionScreenEntry> screen_single_deletions(const MetabolicModel& model,
                                                         const BoundOverrides& overrides,
                                                         const std::vector<std::string>& tracked_exchanges,
                                                         int jobs, const SolverOptions& options) {
  const double wild_type = FluxBalance(model, tracked_exchanges, options).run(overrides).growth_rate;
  if (!(wild_type > 0.0)) {
    throw ValidationError("wild type of '" + model.id() + "' does not grow under the screen medium");
  }

  std::vector<std::string> genes = model.genes();
  std::sort(genes.begin(), genes.end());

  std::vector<DeletionScreenEntry> entries(genes.size());
  std::map<std::vector<std::size_t>, int> group_of;
  std::vector<std::size_t> group_first;  // entry index of each group's representative
  for (std::size_t i = 0; i < genes.size(); ++i) {
    auto& e = entries[i];
    e.gene = genes[i];
    e.knocked_out = model.knocked_out_reactions({genes[i]});
    auto [it, inserted] = group_of.emplace(e.knocked_out, static_cast<int>(group_first.size()));
    if (inserted) group_first.push_back(i);
    e.group_id = it->second;
    e.group_representative = genes[group_first[static_cast<std::size_t>(e.group_id)]];
  }

  // Members of a group share the same mutant model, so solve once per group.
  std::vector<double> group_ratio(group_first.size(), 0.0);
  std::vector<std::optional<std::string>> group_error(group_first.size());
  parallel_for(group_first.size(), jobs, [&](std::size_t g) {
    const auto& rep = entries[group_first[g]];
    if (rep.knocked_out.empty()) {
      group_ratio[g] = 1.0;
      return;
    }
    try {
      const MetabolicModel mutant = apply_deletion(model, rep.gene);
      group_ratio[g] = FluxBalance(mutant, tracked_exchanges, options).run(overrides).growth_rate / wild_type;
    } catch (const Error& ex) {
      group_error[g] = ex.what();
    }
  });

  for (auto& e : entries) {
    const auto g = static_cast<std::size_t>(e.group_id);
    e.error = group_error[g];
    e.growth_ratio = e.error ? 0.0 : group_ratio[g];
    e.retained = !e.error && is_retained(e.growth_ratio);
  }
  return entries;
}

}  // namespace rflux
