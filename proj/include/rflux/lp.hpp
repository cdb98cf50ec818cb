#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace rflux {

/// maximize c'v  subject to  S v = 0,  lb <= v <= ub.
/// Bounds may be infinite. Construction validates dimensions and bounds.
class LinearProgram {
 public:
  /// Throws std::invalid_argument on inconsistent dimensions, lb > ub,
  /// NaN bounds or non-finite S / c entries.
  LinearProgram(Eigen::SparseMatrix<double> S, Eigen::VectorXd c, Eigen::VectorXd lb,
                Eigen::VectorXd ub);

  const Eigen::SparseMatrix<double>& S() const { return S_; }
  const Eigen::VectorXd& c() const { return c_; }
  const Eigen::VectorXd& lb() const { return lb_; }
  const Eigen::VectorXd& ub() const { return ub_; }
  Eigen::Index rows() const { return S_.rows(); }
  Eigen::Index cols() const { return S_.cols(); }

  /// Replaces the bounds of one variable. Throws std::invalid_argument if lb > ub.
  void set_bounds(Eigen::Index j, double lb, double ub);

 private:
  Eigen::SparseMatrix<double> S_;
  Eigen::VectorXd c_, lb_, ub_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;  // c'v at `fluxes` (when optimal)
  Eigen::VectorXd fluxes;  // empty unless optimal
};

struct SolverOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
};

/// Final basis of a solve, reusable as the starting point of a later solve
/// of an LP with the same shape (only bounds or the target value changed).
/// A basis that is no longer primal feasible is discarded and the solve
/// starts cold, so results never depend on the hint being good.
struct LpBasis {
  std::vector<Eigen::Index> basic;      // variable per row (artificials >= #columns)
  std::vector<unsigned char> nonbasic;  // per-variable state code
  Eigen::MatrixXd inverse;              // basis inverse matching `basic`
  int updates_since_refactor = 0;
  bool empty() const { return basic.empty() && nonbasic.empty(); }
};

/// Bounded-variable primal simplex (two phases, Dantzig pricing with a Bland
/// fallback after a run of degenerate pivots). Deterministic for fixed input.
/// Throws NumericalError when no status can be certified.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {},
                 LpBasis* basis = nullptr);

/// Among fluxes with c'v >= objective_value - opt_tol, returns one minimising
/// the sum of |v_i| over `exchange_indices`. The reported objective is c'v.
/// Infeasible when objective_value exceeds the optimum.
LpSolution solve_with_fixed_objective_min_l1_uptake(const LinearProgram& lp, double objective_value,
                                                   std::span<const Eigen::Index> exchange_indices,
                                                   const SolverOptions& options = {},
                                                   LpBasis* basis = nullptr);

namespace detail {

/// minimize cost'x  subject to  A x = b,  lower <= x <= upper (bounds may be infinite).
/// The matrix is shared so that bound-only variants are cheap to copy.
struct StandardForm {
  std::shared_ptr<const Eigen::SparseMatrix<double>> A;
  Eigen::VectorXd b, cost, lower, upper;
};

/// max c'v, S v = 0 as a minimisation. Columns are the LP's variables.
StandardForm primary_form(const LinearProgram& lp);

/// The min-L1 tie-break LP. Its first lp.cols() columns are the LP's
/// variables (bounds copied from `lp`); row lp.rows() carries the growth
/// target, set to objective_value - opt_tol.
StandardForm min_l1_form(const LinearProgram& lp, std::span<const Eigen::Index> exchange_indices,
                         double objective_value, double opt_tol);

struct StandardResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// `basis`, when non-null, seeds the solve (if non-empty) and receives the final basis.
StandardResult minimize(const StandardForm& problem, const SolverOptions& options,
                        LpBasis* basis = nullptr);

}  // namespace detail

}  // namespace rflux
