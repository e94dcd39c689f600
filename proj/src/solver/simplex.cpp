#include "dea/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dea::solver {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kRefactorInterval = 64;
constexpr double kSingularPivot = 1e-13;
constexpr double kDegenerateStep = 1e-12;
constexpr double kTinyAlpha = 1e-11;
constexpr double kZeroAlpha = 1e-14;
// Bound violation left after the final refactor that counts as breakdown.
constexpr double kResidualBreakdown = 1e-6;

struct NumericalBreakdown {};

// Revised simplex over the column set [A | I | artificials] with an explicit
// dense basis inverse. Every column carries its own [lower, upper]; nonbasic
// columns rest at a finite bound (or at zero when free), so box constraints
// never become rows. Row i reads  a_i x + logical_i (+ artificial_i) = b_i.
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const SolverConfig& cfg)
      : lp_(lp), cfg_(cfg), m_(lp.num_constraints()), n_(lp.num_variables()) {
    const std::size_t cols = n_ + m_;
    a_.assign(cols * m_, 0.0);
    lower_.assign(cols, 0.0);
    upper_.assign(cols, 0.0);
    x_.assign(cols, 0.0);
    state_.assign(cols, BasisStatus::AtLower);
    b_.resize(m_);

    for (std::size_t i = 0; i < m_; ++i) {
      const Row& row = lp.rows()[i];
      for (const Term& t : row.terms) at(i, t.var) += t.coeff;
      at(i, n_ + i) = 1.0;
      b_[i] = row.rhs;
      switch (row.relation) {
        case Relation::LessEqual: upper_[n_ + i] = kInfinity; break;
        case Relation::GreaterEqual: lower_[n_ + i] = -kInfinity; break;
        case Relation::Equal: break;
      }
    }
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = lp.lower()[j];
      upper_[j] = lp.upper()[j];
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        state_[j] = BasisStatus::AtLower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        state_[j] = BasisStatus::AtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = BasisStatus::Free;
      }
    }
    first_artificial_ = cols;
    build_initial_basis();
  }

  Solution run() {
    Solution out;
    try {
      out.status = solve();
    } catch (const NumericalBreakdown&) {
      out.status = SolveStatus::IterationLimit;
    }
    out.iterations = iterations_;
    if (out.status == SolveStatus::Optimal && worst_bound_violation() > kResidualBreakdown) {
      // A phase 1 that only reached "zero" within tolerance leaves a residual
      // the basis can amplify; such programs are infeasible for practical use.
      out.status = phase1_residual_ > cfg_.feas_tol ? SolveStatus::Infeasible
                                                    : SolveStatus::IterationLimit;
    }
    if (out.status == SolveStatus::Optimal) {
      out.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
      out.objective_value = lp_.objective_value(out.values);
      out.basis.assign(state_.begin(), state_.begin() + static_cast<std::ptrdiff_t>(n_ + m_));
    }
    return out;
  }

 private:
  double worst_bound_violation() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < num_columns(); ++j) {
      const double scale = 1.0 + std::abs(x_[j]);
      worst = std::max({worst, (lower_[j] - x_[j]) / scale, (x_[j] - upper_[j]) / scale});
    }
    return worst;
  }

  double& at(std::size_t row, std::size_t col) { return a_[col * m_ + row]; }
  double at(std::size_t row, std::size_t col) const { return a_[col * m_ + row]; }
  double& binv(std::size_t row, std::size_t col) { return binv_[row * m_ + col]; }
  std::size_t num_columns() const { return lower_.size(); }

  void build_initial_basis() {
    head_.assign(m_, kNone);
    std::vector<double> residual(b_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) residual[i] -= at(i, j) * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t logical = n_ + i;
      const double r = residual[i];
      if (r >= lower_[logical] && r <= upper_[logical]) {
        head_[i] = logical;
        state_[logical] = BasisStatus::Basic;
        x_[logical] = r;
        continue;
      }
      const double rest = std::clamp(r, lower_[logical], upper_[logical]);
      x_[logical] = rest;
      state_[logical] = rest == lower_[logical] ? BasisStatus::AtLower : BasisStatus::AtUpper;
      const std::size_t art = add_column();
      at(i, art) = r > rest ? 1.0 : -1.0;
      upper_[art] = kInfinity;
      x_[art] = std::abs(r - rest);
      state_[art] = BasisStatus::Basic;
      head_[i] = art;
    }
    refactor();
  }

  std::size_t add_column() {
    a_.resize(a_.size() + m_, 0.0);
    lower_.push_back(0.0);
    upper_.push_back(0.0);
    x_.push_back(0.0);
    state_.push_back(BasisStatus::AtLower);
    return lower_.size() - 1;
  }

  SolveStatus solve() {
    const std::size_t cols = num_columns();
    if (first_artificial_ < cols) {
      std::vector<double> phase1(cols, 0.0);
      for (std::size_t j = first_artificial_; j < cols; ++j) phase1[j] = 1.0;
      const SolveStatus s1 = iterate(phase1);
      if (s1 == SolveStatus::IterationLimit) return s1;
      refactor();
      double infeasibility = 0.0;
      for (std::size_t j = first_artificial_; j < cols; ++j) infeasibility += std::abs(x_[j]);
      double bmax = 0.0;
      for (double v : b_) bmax = std::max(bmax, std::abs(v));
      if (infeasibility > cfg_.feas_tol * (1.0 + bmax)) return SolveStatus::Infeasible;
      phase1_residual_ = infeasibility;
      drive_out_artificials();
      for (std::size_t j = first_artificial_; j < cols; ++j) upper_[j] = 0.0;
    }

    std::vector<double> phase2(cols, 0.0);
    const double sign = lp_.sense() == Sense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = sign * lp_.costs()[j];
    const SolveStatus s2 = iterate(phase2);
    if (s2 == SolveStatus::Optimal) refactor();
    return s2;
  }

  SolveStatus iterate(const std::vector<double>& cost) {
    const std::size_t cols = num_columns();
    std::vector<double> y(m_);
    std::vector<double> alpha(m_);
    bool bland = false;
    std::size_t degenerate_run = 0;

    for (;;) {
      if (iterations_ >= cfg_.max_iterations) return SolveStatus::IterationLimit;
      if (since_refactor_ >= kRefactorInterval) refactor();

      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[head_[i]];
        if (cb == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv(i, k);
      }

      std::size_t entering = kNone;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        if (state_[j] == BasisStatus::Basic || lower_[j] == upper_[j]) continue;
        double d = cost[j];
        const double* col = &a_[j * m_];
        for (std::size_t k = 0; k < m_; ++k) d -= y[k] * col[k];
        int jd = 0;
        if (state_[j] == BasisStatus::AtLower) {
          if (d < -cfg_.pivot_tol) jd = 1;
        } else if (state_[j] == BasisStatus::AtUpper) {
          if (d > cfg_.pivot_tol) jd = -1;
        } else if (std::abs(d) > cfg_.pivot_tol) {
          jd = d < 0.0 ? 1 : -1;
        }
        if (jd == 0) continue;
        if (bland) {
          entering = j;
          dir = jd;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          dir = jd;
        }
      }
      if (entering == kNone) return SolveStatus::Optimal;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      const double* col = &a_[entering * m_];
      for (std::size_t k = 0; k < m_; ++k) {
        if (col[k] == 0.0) continue;
        for (std::size_t i = 0; i < m_; ++i) alpha[i] += binv(i, k) * col[k];
      }

      // Entries below kTinyAlpha are never pivoted on but still bound the
      // step, so that long steps cannot drag their basic variables far out of
      // bounds. When only such entries block, they are treated as noise.
      Leaving lv = ratio_test(alpha, dir, bland, kZeroAlpha);
      if (lv.row == kNone && lv.blocked) lv = ratio_test(alpha, dir, bland, kTinyAlpha);
      const std::size_t leave = lv.row;
      const double ratio = lv.ratio;
      const bool leave_at_upper = lv.to_upper;

      const double flip = upper_[entering] - lower_[entering];
      if (leave == kNone && !std::isfinite(flip)) return SolveStatus::Unbounded;

      const bool bound_flip = std::isfinite(flip) && flip <= ratio;
      const double step = bound_flip ? flip : ratio;
      if (step != 0.0) {
        for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= dir * step * alpha[i];
      }

      if (bound_flip) {
        state_[entering] = dir > 0 ? BasisStatus::AtUpper : BasisStatus::AtLower;
        x_[entering] = dir > 0 ? upper_[entering] : lower_[entering];
      } else {
        x_[entering] += dir * step;
        const std::size_t out = head_[leave];
        x_[out] = leave_at_upper ? upper_[out] : lower_[out];
        state_[out] = leave_at_upper && lower_[out] != upper_[out] ? BasisStatus::AtUpper
                                                                   : BasisStatus::AtLower;
        pivot(leave, entering, alpha);
      }

      degenerate_run = step <= kDegenerateStep ? degenerate_run + 1 : 0;
      if (degenerate_run >= cfg_.bland_after) bland = true;
      ++iterations_;
    }
  }

  struct Leaving {
    std::size_t row = kNone;
    double ratio = kInfinity;
    bool to_upper = false;
    bool blocked = false;  // some entry above `bound_alpha` limits the step
  };

  // Harris ratio test: basic variables move by -dir * alpha * t. Pass one
  // finds the largest step keeping every basic variable within feas_tol of
  // its bounds, counting entries above `bound_alpha`; pass two picks, among
  // rows with entries above kTinyAlpha that block within that step, the
  // largest pivot (the lowest basic index under Bland).
  Leaving ratio_test(const std::vector<double>& alpha, int dir, bool bland,
                     double bound_alpha) const {
    Leaving out;
    double max_step = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= bound_alpha) continue;
      const double rate = dir * alpha[i];
      const std::size_t bj = head_[i];
      if (rate > 0.0 && std::isfinite(lower_[bj])) {
        max_step = std::min(max_step, (x_[bj] - lower_[bj] + cfg_.feas_tol) / rate);
      } else if (rate < 0.0 && std::isfinite(upper_[bj])) {
        max_step = std::min(max_step, (upper_[bj] - x_[bj] + cfg_.feas_tol) / -rate);
      }
    }
    out.blocked = std::isfinite(max_step);
    if (!out.blocked) return out;
    for (std::size_t i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= kTinyAlpha) continue;
      const double rate = dir * alpha[i];
      const std::size_t bj = head_[i];
      double limit;
      bool to_upper;
      if (rate > 0.0 && std::isfinite(lower_[bj])) {
        limit = (x_[bj] - lower_[bj]) / rate;
        to_upper = false;
      } else if (rate < 0.0 && std::isfinite(upper_[bj])) {
        limit = (upper_[bj] - x_[bj]) / -rate;
        to_upper = true;
      } else {
        continue;
      }
      if (limit > max_step) continue;
      const bool take = out.row == kNone ||
                        (bland ? head_[i] < head_[out.row]
                               : std::abs(alpha[i]) > std::abs(alpha[out.row]));
      if (take) {
        out.row = i;
        out.ratio = std::max(limit, 0.0);
        out.to_upper = to_upper;
      }
    }
    return out;
  }

  void pivot(std::size_t row, std::size_t entering, const std::vector<double>& alpha) {
    const double p = alpha[row];
    for (std::size_t k = 0; k < m_; ++k) binv(row, k) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      for (std::size_t k = 0; k < m_; ++k) binv(i, k) -= f * binv(row, k);
    }
    head_[row] = entering;
    state_[entering] = BasisStatus::Basic;
    ++since_refactor_;
  }

  // Gauss-Jordan inversion of the current basis, then basic values from scratch.
  void refactor() {
    std::vector<double> work(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) work[i * m_ + k] = at(i, head_[k]);
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv(i, i) = 1.0;

    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(work[r * m_ + c]) > std::abs(work[piv * m_ + c])) piv = r;
      }
      if (std::abs(work[piv * m_ + c]) < kSingularPivot) throw NumericalBreakdown{};
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(work[piv * m_ + k], work[c * m_ + k]);
          std::swap(binv(piv, k), binv(c, k));
        }
      }
      const double p = work[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        work[c * m_ + k] /= p;
        binv(c, k) /= p;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        const double f = work[r * m_ + c];
        if (r == c || f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          work[r * m_ + k] -= f * work[c * m_ + k];
          binv(r, k) -= f * binv(c, k);
        }
      }
    }
    // work = B^{-1} B = I now; binv holds the inverse with rows ordered by
    // basis position because column k of B is head_[k].
    recompute_basic_values();
    since_refactor_ = 0;
  }

  void recompute_basic_values() {
    std::vector<double> r(b_);
    for (std::size_t j = 0; j < num_columns(); ++j) {
      if (state_[j] == BasisStatus::Basic || x_[j] == 0.0) continue;
      const double* col = &a_[j * m_];
      for (std::size_t i = 0; i < m_; ++i) r[i] -= col[i] * x_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv(i, k) * r[k];
      x_[head_[i]] = v;
    }
  }

  // After a successful phase 1 every artificial is at (numerically) zero.
  // Replace basic ones by a structural or logical column so the final basis
  // is expressed purely in terms of the original program.
  void drive_out_artificials() {
    std::vector<double> alpha(m_);
    for (std::size_t row = 0; row < m_; ++row) {
      if (head_[row] < first_artificial_) continue;
      std::size_t best = kNone;
      double best_abs = cfg_.pivot_tol;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (state_[j] == BasisStatus::Basic) continue;
        double e = 0.0;
        const double* col = &a_[j * m_];
        for (std::size_t k = 0; k < m_; ++k) e += binv(row, k) * col[k];
        if (std::abs(e) > best_abs) {
          best_abs = std::abs(e);
          best = j;
        }
      }
      if (best == kNone) continue;
      const double* col = &a_[best * m_];
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for (std::size_t k = 0; k < m_; ++k) {
        if (col[k] == 0.0) continue;
        for (std::size_t i = 0; i < m_; ++i) alpha[i] += binv(i, k) * col[k];
      }
      const std::size_t art = head_[row];
      x_[art] = 0.0;
      state_[art] = BasisStatus::AtLower;
      pivot(row, best, alpha);
    }
    refactor();
  }

  const LinearProgram& lp_;
  const SolverConfig& cfg_;
  std::size_t m_;
  std::size_t n_;
  std::size_t first_artificial_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<BasisStatus> state_;
  std::vector<std::size_t> head_;
  std::vector<double> binv_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  double phase1_residual_ = 0.0;
};

}  // namespace

namespace detail {

Solution solve_relaxation(const LinearProgram& lp, const SolverConfig& cfg) {
  return BoundedSimplex(lp, cfg).run();
}

}  // namespace detail

Solution solve_lp(const LinearProgram& lp, const SolverConfig& cfg) {
  cfg.validate();
  if (lp.has_binaries()) {
    throw std::invalid_argument("solve_lp called on a program with binary variables");
  }
  return detail::solve_relaxation(lp, cfg);
}

}  // namespace dea::solver
