#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

#include "rflux/error.hpp"
#include "rflux/lp.hpp"

namespace rflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorInterval = 64;
constexpr int kDegenerateBeforeBland = 50;

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper, kAtZero };

using SparseColumn = Eigen::SparseMatrix<double>::InnerIterator;

// Bounded primal simplex over A x = b with one artificial per row appended
// after the structural columns. Nonbasic variables sit at a bound, or at zero
// when zero lies strictly inside their range. The basis inverse is dense and
// updated by elementary row operations, refactored every kRefactorInterval
// pivots.
class BoundedSimplex {
 public:
  BoundedSimplex(const detail::StandardForm& p, const SolverOptions& opt)
      : p_(p), A_(*p.A), opt_(opt), m_(A_.rows()), n_(A_.cols()), total_(m_ + n_) {
    if (p.b.size() != m_ || p.cost.size() != n_ || p.lower.size() != n_ || p.upper.size() != n_) {
      throw std::invalid_argument("simplex: inconsistent problem dimensions");
    }
    lower_.resize(total_);
    upper_.resize(total_);
    lower_.head(n_) = p.lower;
    upper_.head(n_) = p.upper;
    x_.setZero(total_);
    state_.assign(static_cast<std::size_t>(total_), VarState::kAtLower);
    sign_.setOnes(m_);
    head_.resize(static_cast<std::size_t>(m_));
    max_iterations_ = 50 * (total_ + 10);
  }

  detail::StandardResult run(LpBasis* basis) {
    const bool warm = basis != nullptr && try_warm_start(*basis);
    detail::StandardResult out = warm ? finish() : cold();
    if (basis != nullptr) {
      if (out.status == LpStatus::kOptimal) {
        store(*basis);
      } else {
        *basis = {};
      }
    }
    return out;
  }

 private:
  enum class Outcome { kOptimal, kUnbounded };

  detail::StandardResult cold() {
    initialise();
    const double initial_infeasibility = x_.tail(m_).lpNorm<Eigen::Infinity>();
    if (initial_infeasibility > 0.0) {
      cost_.setZero(total_);
      cost_.tail(m_).setOnes();
      if (iterate() == Outcome::kUnbounded) {
        throw NumericalError("simplex: phase 1 reported unbounded");
      }
      refactor();
      if (x_.tail(m_).sum() > opt_.feas_tol * std::max(1.0, initial_infeasibility)) {
        return {LpStatus::kInfeasible, 0.0, {}};
      }
    }
    for (Eigen::Index i = n_; i < total_; ++i) {
      lower_[i] = 0.0;
      upper_[i] = 0.0;
      if (state_[i] != VarState::kBasic) {
        state_[i] = VarState::kAtLower;
        x_[i] = 0.0;
      }
    }
    return finish();
  }

  // Phase 2 from a primal feasible basis with artificials fixed at zero.
  detail::StandardResult finish() {
    cost_.setZero(total_);
    cost_.head(n_) = p_.cost;
    if (iterate() == Outcome::kUnbounded) return {LpStatus::kUnbounded, 0.0, {}};
    recompute_basic();
    certify();

    detail::StandardResult out;
    out.status = LpStatus::kOptimal;
    out.x = x_.head(n_);
    out.objective = p_.cost.dot(out.x);
    return out;
  }

  // Accepts the hint only if it is structurally valid for this problem and
  // primal feasible under the current bounds.
  bool try_warm_start(const LpBasis& basis) {
    if (static_cast<Eigen::Index>(basis.basic.size()) != m_ ||
        static_cast<Eigen::Index>(basis.nonbasic.size()) != total_) {
      return false;
    }
    for (Eigen::Index i = n_; i < total_; ++i) {
      lower_[i] = 0.0;
      upper_[i] = 0.0;
    }
    for (Eigen::Index j = 0; j < total_; ++j) {
      const auto s = static_cast<VarState>(basis.nonbasic[static_cast<std::size_t>(j)]);
      state_[j] = s;
      switch (s) {
        case VarState::kBasic:
          break;
        case VarState::kAtLower:
          if (!std::isfinite(lower_[j])) return false;
          x_[j] = lower_[j];
          break;
        case VarState::kAtUpper:
          if (!std::isfinite(upper_[j])) return false;
          x_[j] = upper_[j];
          break;
        case VarState::kAtZero:
          if (lower_[j] > 0.0 || upper_[j] < 0.0) return false;
          x_[j] = 0.0;
          break;
        default:
          return false;
      }
    }
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index v = basis.basic[static_cast<std::size_t>(i)];
      if (v < 0 || v >= total_ || state_[v] != VarState::kBasic) return false;
      head_[i] = v;
    }
    if (std::count(state_.begin(), state_.end(), VarState::kBasic) != m_) return false;

    if (basis.inverse.rows() == m_ && basis.inverse.cols() == m_ &&
        basis.updates_since_refactor < kRefactorInterval) {
      binv_ = basis.inverse;
      pivots_since_refactor_ = basis.updates_since_refactor;
      recompute_basic();
    } else {
      try {
        refactor();
      } catch (const NumericalError&) {
        return false;
      }
    }
    const double tol = opt_.feas_tol * std::max(1.0, x_.lpNorm<Eigen::Infinity>());
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index v = head_[i];
      if (x_[v] < lower_[v] - tol || x_[v] > upper_[v] + tol) return false;
    }
    return true;
  }

  void store(LpBasis& basis) const {
    basis.basic.assign(head_.begin(), head_.end());
    basis.nonbasic.resize(static_cast<std::size_t>(total_));
    for (Eigen::Index j = 0; j < total_; ++j) {
      basis.nonbasic[static_cast<std::size_t>(j)] = static_cast<unsigned char>(state_[j]);
    }
    basis.inverse = binv_;
    basis.updates_since_refactor = pivots_since_refactor_;
  }

  // Visits the nonzeros of column j of [A | diag(sign)].
  template <typename F>
  void for_column(Eigen::Index j, F&& f) const {
    if (j < n_) {
      for (SparseColumn it(A_, j); it; ++it) f(it.row(), it.value());
    } else {
      f(j - n_, sign_[j - n_]);
    }
  }

  void initialise() {
    for (Eigen::Index j = 0; j < n_; ++j) {
      const double lo = lower_[j], hi = upper_[j];
      if (lo <= 0.0 && 0.0 <= hi) {
        x_[j] = 0.0;
        state_[j] = lo == 0.0   ? VarState::kAtLower
                    : hi == 0.0 ? VarState::kAtUpper
                                : VarState::kAtZero;
      } else if (lo > 0.0) {
        x_[j] = lo;
        state_[j] = VarState::kAtLower;
      } else {
        x_[j] = hi;
        state_[j] = VarState::kAtUpper;
      }
    }
    const Eigen::VectorXd residual = p_.b - A_ * x_.head(n_);
    binv_.setZero(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
      const Eigen::Index art = n_ + i;
      lower_[art] = 0.0;
      upper_[art] = kInf;
      x_[art] = std::abs(residual[i]);
      state_[art] = VarState::kBasic;
      head_[i] = art;
      binv_(i, i) = sign_[i];
    }
    pivots_since_refactor_ = 0;
  }

  // x_B = B^-1 (b - N x_N)
  void recompute_basic() {
    if (m_ == 0) return;
    Eigen::VectorXd rhs = p_.b;
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](Eigen::Index r, double v) { rhs[r] -= v * xj; });
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (Eigen::Index i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
  }

  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      for_column(head_[i], [&](Eigen::Index r, double v) { basis(r, i) = v; });
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!std::isfinite(lu.rcond()) || lu.rcond() < 1e-14) {
      throw NumericalError("simplex: basis matrix became singular");
    }
    binv_ = lu.inverse();
    pivots_since_refactor_ = 0;
    recompute_basic();
  }

  Outcome iterate() {
    int degenerate_run = 0;
    Eigen::VectorXd cb(m_), y(m_), alpha(m_);
    for (;;) {
      if (++iterations_ > max_iterations_) {
        throw NumericalError("simplex: iteration limit exceeded");
      }
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
      y.noalias() = binv_.transpose() * cb;

      // Pricing: Dantzig, or Bland (first eligible index) during a long
      // degenerate run.
      const bool bland = degenerate_run >= kDegenerateBeforeBland;
      Eigen::Index entering = -1;
      int direction = 0;
      double best = 0.0;
      for (Eigen::Index j = 0; j < total_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::kBasic || lower_[j] == upper_[j]) continue;
        double d = cost_[j];
        for_column(j, [&](Eigen::Index r, double v) { d -= y[r] * v; });
        int dir = 0;
        if (d < -opt_.opt_tol && s != VarState::kAtUpper) dir = 1;
        if (d > opt_.opt_tol && s != VarState::kAtLower) dir = -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return Outcome::kOptimal;

      alpha.setZero();
      for_column(entering, [&](Eigen::Index r, double v) { alpha.noalias() += v * binv_.col(r); });

      // Harris two-pass ratio test; basic i moves by -theta * direction * alpha_i.
      const double delta = opt_.feas_tol;
      double theta_max = kInf;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = direction * alpha[i];
        const Eigen::Index v = head_[i];
        if (a > kPivotTol && std::isfinite(lower_[v])) {
          theta_max = std::min(theta_max, (x_[v] - lower_[v] + delta) / a);
        } else if (a < -kPivotTol && std::isfinite(upper_[v])) {
          theta_max = std::min(theta_max, (upper_[v] - x_[v] + delta) / -a);
        }
      }
      const double span = direction > 0 ? upper_[entering] - x_[entering]
                                        : x_[entering] - lower_[entering];
      if (!std::isfinite(theta_max) && !std::isfinite(span)) return Outcome::kUnbounded;

      Eigen::Index leave_row = -1;
      double theta = kInf;
      double best_pivot = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = direction * alpha[i];
        const Eigen::Index v = head_[i];
        double ratio;
        if (a > kPivotTol && std::isfinite(lower_[v])) {
          ratio = std::max(0.0, (x_[v] - lower_[v]) / a);
        } else if (a < -kPivotTol && std::isfinite(upper_[v])) {
          ratio = std::max(0.0, (upper_[v] - x_[v]) / -a);
        } else {
          continue;
        }
        if (ratio > theta_max) continue;
        const bool take = bland ? (leave_row < 0 || ratio < theta ||
                                   (ratio == theta && head_[i] < head_[leave_row]))
                                : std::abs(a) > best_pivot;
        if (take) {
          leave_row = i;
          theta = ratio;
          best_pivot = std::abs(a);
        }
      }

      if (std::isfinite(span) && (leave_row < 0 || span <= theta)) {
        // Bound flip of the entering variable; basis unchanged.
        for (Eigen::Index i = 0; i < m_; ++i) x_[head_[i]] -= span * direction * alpha[i];
        if (direction > 0) {
          x_[entering] = upper_[entering];
          state_[entering] = VarState::kAtUpper;
        } else {
          x_[entering] = lower_[entering];
          state_[entering] = VarState::kAtLower;
        }
        degenerate_run = span > 0.0 ? 0 : degenerate_run + 1;
        continue;
      }

      for (Eigen::Index i = 0; i < m_; ++i) x_[head_[i]] -= theta * direction * alpha[i];
      x_[entering] += direction * theta;
      const Eigen::Index leaving = head_[leave_row];
      if (direction * alpha[leave_row] > 0) {
        x_[leaving] = lower_[leaving];
        state_[leaving] = VarState::kAtLower;
      } else {
        x_[leaving] = upper_[leaving];
        state_[leaving] = VarState::kAtUpper;
      }
      state_[entering] = VarState::kBasic;
      head_[leave_row] = entering;
      degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;

      binv_.row(leave_row) /= alpha[leave_row];
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (i != leave_row && alpha[i] != 0.0) binv_.row(i) -= alpha[i] * binv_.row(leave_row);
      }
      if (++pivots_since_refactor_ >= kRefactorInterval) refactor();
    }
  }

  // Rejects a basis whose recomputed values leave the bounds by more than
  // the (scaled) feasibility tolerance; snaps smaller drift onto the bounds.
  void certify() {
    const double scale = std::max(1.0, x_.head(n_).lpNorm<Eigen::Infinity>());
    const double tol = 10.0 * opt_.feas_tol * scale;
    for (Eigen::Index j = 0; j < total_; ++j) {
      if (x_[j] < lower_[j] - tol || x_[j] > upper_[j] + tol) {
        throw NumericalError("simplex: optimal basis violates bounds by more than tolerance");
      }
      x_[j] = std::clamp(x_[j], lower_[j], upper_[j]);
    }
  }

  const detail::StandardForm& p_;
  const Eigen::SparseMatrix<double>& A_;
  SolverOptions opt_;
  Eigen::Index m_, n_, total_;
  Eigen::VectorXd lower_, upper_, x_, cost_, sign_;
  std::vector<VarState> state_;
  std::vector<Eigen::Index> head_;
  Eigen::MatrixXd binv_;
  int pivots_since_refactor_ = 0;
  Eigen::Index iterations_ = 0;
  Eigen::Index max_iterations_ = 0;
};

void check_tolerances(const SolverOptions& o) {
  if (!(o.feas_tol > 0.0) || !(o.opt_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
}

LpSolution to_solution(detail::StandardResult r, const LinearProgram& lp) {
  LpSolution out;
  out.status = r.status;
  if (r.status == LpStatus::kOptimal) {
    out.fluxes = r.x.head(lp.cols());
    out.objective = lp.c().dot(out.fluxes);
  }
  return out;
}

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

LinearProgram::LinearProgram(Eigen::SparseMatrix<double> S, Eigen::VectorXd c, Eigen::VectorXd lb,
                             Eigen::VectorXd ub)
    : S_(std::move(S)), c_(std::move(c)), lb_(std::move(lb)), ub_(std::move(ub)) {
  const Eigen::Index n = S_.cols();
  if (c_.size() != n || lb_.size() != n || ub_.size() != n) {
    throw std::invalid_argument("linear program: vector sizes do not match #columns of S");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lb_[j]) || std::isnan(ub_[j]) || lb_[j] > ub_[j]) {
      throw std::invalid_argument("linear program: invalid bounds on variable " + std::to_string(j));
    }
    if (!std::isfinite(c_[j])) throw std::invalid_argument("linear program: non-finite objective");
  }
  for (Eigen::Index k = 0; k < S_.outerSize(); ++k) {
    for (SparseColumn it(S_, k); it; ++it) {
      if (!std::isfinite(it.value())) throw std::invalid_argument("linear program: non-finite S");
    }
  }
  S_.makeCompressed();
}

void LinearProgram::set_bounds(Eigen::Index j, double lb, double ub) {
  if (j < 0 || j >= cols()) throw std::invalid_argument("linear program: variable out of range");
  if (std::isnan(lb) || std::isnan(ub) || lb > ub) {
    throw std::invalid_argument("linear program: invalid bounds on variable " + std::to_string(j));
  }
  lb_[j] = lb;
  ub_[j] = ub;
}

namespace detail {

StandardResult minimize(const StandardForm& problem, const SolverOptions& options,
                        LpBasis* basis) {
  check_tolerances(options);
  if (!problem.A) throw std::invalid_argument("simplex: missing constraint matrix");
  return BoundedSimplex(problem, options).run(basis);
}

StandardForm primary_form(const LinearProgram& lp) {
  return {std::make_shared<const Eigen::SparseMatrix<double>>(lp.S()),
          Eigen::VectorXd::Zero(lp.rows()), -lp.c(), lp.lb(), lp.ub()};
}

StandardForm min_l1_form(const LinearProgram& lp, std::span<const Eigen::Index> exchange_indices,
                         double objective_value, double opt_tol) {
  const Eigen::Index m = lp.rows(), n = lp.cols();
  const auto k = static_cast<Eigen::Index>(exchange_indices.size());
  for (Eigen::Index e : exchange_indices) {
    if (e < 0 || e >= n) throw std::invalid_argument("exchange index out of range");
  }

  // Columns: v (n) | t (k) | s_obj | s_plus (k) | s_minus (k)
  // Rows:    S v = 0 | c'v - s_obj = target | t - v - s_plus = 0 | t + v - s_minus = 0
  const Eigen::Index cols = n + 3 * k + 1, rows = m + 1 + 2 * k;
  const Eigen::Index t0 = n, sobj = n + k, sp0 = n + k + 1, sm0 = n + 2 * k + 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(lp.S().nonZeros() + n + 6 * k + 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (SparseColumn it(lp.S(), j); it; ++it) trip.emplace_back(it.row(), j, it.value());
    if (lp.c()[j] != 0.0) trip.emplace_back(m, j, lp.c()[j]);
  }
  trip.emplace_back(m, sobj, -1.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index v = exchange_indices[static_cast<std::size_t>(i)];
    const Eigen::Index rp = m + 1 + i, rm = m + 1 + k + i;
    trip.emplace_back(rp, t0 + i, 1.0);
    trip.emplace_back(rp, v, -1.0);
    trip.emplace_back(rp, sp0 + i, -1.0);
    trip.emplace_back(rm, t0 + i, 1.0);
    trip.emplace_back(rm, v, 1.0);
    trip.emplace_back(rm, sm0 + i, -1.0);
  }
  auto A = std::make_shared<Eigen::SparseMatrix<double>>(rows, cols);
  A->setFromTriplets(trip.begin(), trip.end());
  A->makeCompressed();

  StandardForm sf;
  sf.A = std::move(A);
  sf.b = Eigen::VectorXd::Zero(rows);
  sf.b[m] = objective_value - opt_tol;
  sf.cost = Eigen::VectorXd::Zero(cols);
  sf.cost.segment(t0, k).setOnes();
  sf.lower = Eigen::VectorXd::Zero(cols);
  sf.upper = Eigen::VectorXd::Constant(cols, kInf);
  sf.lower.head(n) = lp.lb();
  sf.upper.head(n) = lp.ub();
  return sf;
}

}  // namespace detail

LpSolution solve(const LinearProgram& lp, const SolverOptions& options, LpBasis* basis) {
  return to_solution(detail::minimize(detail::primary_form(lp), options, basis), lp);
}

LpSolution solve_with_fixed_objective_min_l1_uptake(const LinearProgram& lp, double objective_value,
                                                   std::span<const Eigen::Index> exchange_indices,
                                                   const SolverOptions& options, LpBasis* basis) {
  check_tolerances(options);
  const detail::StandardForm sf =
      detail::min_l1_form(lp, exchange_indices, objective_value, options.opt_tol);
  return to_solution(detail::minimize(sf, options, basis), lp);
}

}  // namespace rflux
