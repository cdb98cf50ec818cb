#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rflux/lp.hpp"
#include "rflux/model.hpp"

namespace rflux {

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Reaction id -> replacement bounds, applied to a copy of the model's bounds.
using BoundOverrides = std::map<std::string, Bounds>;

struct FbaResult {
  LpStatus status = LpStatus::kInfeasible;
  double growth_rate = 0.0;  // 1/h; 0 when the LP is infeasible
  /// Tracked exchange id -> uptake magnitude (mmol/gDW/h, uptake positive).
  std::map<std::string, double> uptake_fluxes;
};

/// Bases carried between consecutive FBA solves of one model.
struct FbaWarmStart {
  LpBasis primary;
  LpBasis tie_break;
};

/// FBA on a fixed model, reusable across many bound scenarios. Growth is
/// maximised first; the tracked exchanges' L1 uptake is then minimised at
/// that growth so the reported uptakes are reproducible. Thread-safe.
class FluxBalance {
 public:
  /// Throws ValidationError when a tracked exchange id is not in the model.
  FluxBalance(MetabolicModel model, std::vector<std::string> tracked_exchanges,
              SolverOptions options = {});

  /// Infeasible LPs yield growth 0 with zero uptakes. Throws ValidationError
  /// for unknown ids or lb > ub, NumericalError on solver failure or an
  /// unbounded objective.
  /// `warm`, if given, seeds both solves and receives their final bases.
  FbaResult run(const BoundOverrides& overrides, FbaWarmStart* warm = nullptr) const;

  const MetabolicModel& model() const { return model_; }
  const std::vector<std::string>& tracked_exchanges() const { return tracked_; }

 private:
  MetabolicModel model_;
  std::vector<std::string> tracked_;
  std::vector<Eigen::Index> tracked_index_;
  LinearProgram lp_;
  SolverOptions options_;
  detail::StandardForm primary_form_, l1_form_;
};

/// One-shot convenience wrapper around FluxBalance.
FbaResult run_fba(const MetabolicModel& model, const BoundOverrides& overrides,
                  const std::vector<std::string>& tracked_exchanges = {},
                  const SolverOptions& options = {});

/// Growth-ratio window for retained deletions, inclusive on both ends. Ratios
/// within kRetainSlack of an endpoint count as on it, absorbing LP round-off.
inline constexpr double kRetainMin = 0.05;
inline constexpr double kRetainMax = 0.95;
inline constexpr double kRetainSlack = 1e-9;

bool is_retained(double growth_ratio);

struct DeletionScreenEntry {
  std::string gene;
  double growth_ratio = 0.0;
  bool retained = false;
  /// Genes knocking out the identical reaction set share a group.
  int group_id = 0;
  std::string group_representative;
  std::vector<std::size_t> knocked_out;
  std::optional<std::string> error;  // set when FBA failed for this gene
};

/// One entry per gene, sorted by gene id. Group ids are assigned in order of
/// each group's first (smallest) gene. Throws ValidationError when the wild
/// type does not grow under `overrides`.
std::vector<DeletionScreenEntry> screen_single_deletions(const MetabolicModel& model,
                                                         const BoundOverrides& overrides,
                                                         const std::vector<std::string>& tracked_exchanges = {},
                                                         int jobs = 1,
                                                         const SolverOptions& options = {});

}  // namespace rflux
