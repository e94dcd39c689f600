#include "dea/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace dea::solver {
namespace {

struct Node {
  std::vector<double> lower;  // bounds of the binary columns, in mask order
  std::vector<double> upper;
  Solution relaxation;
};

// Depth-first branch-and-bound. Every node is solved when it is created so
// that the two children of a branching can be ordered by bound; the better
// child is explored first (ties favour the down branch).
class BranchAndBound {
 public:
  BranchAndBound(const LinearProgram& lp, const SolverConfig& cfg)
      : lp_(lp), cfg_(cfg), work_(lp) {
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      if (lp.binary_mask()[j]) binaries_.push_back(j);
      work_.set_binary(j, false);
    }
    columns_.resize(lp.num_variables());
    for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
      for (const Term& t : lp.rows()[i].terms) columns_[t.var].push_back({i, t.coeff});
    }
    sign_ = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
  }

  Solution run() {
    Node root;
    for (std::size_t b : binaries_) {
      root.lower.push_back(std::max(0.0, std::ceil(lp_.lower()[b])));
      root.upper.push_back(std::min(1.0, std::floor(lp_.upper()[b])));
    }
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (root.lower[k] > root.upper[k]) return finish(SolveStatus::Infeasible);
    }
    root.relaxation = solve_node(root.lower, root.upper);
    if (root.relaxation.status == SolveStatus::Unbounded ||
        root.relaxation.status == SolveStatus::IterationLimit) {
      return finish(root.relaxation.status);
    }

    std::vector<Node> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (!node.relaxation.optimal()) continue;
      const double bound = sign_ * node.relaxation.objective_value;
      if (pruned(bound)) continue;
      if (all_fixed(node)) {
        offer(std::move(node.relaxation));
        continue;
      }

      if (try_rounding(node, bound)) continue;
      if (limit_) return finish(*limit_);

      const std::size_t k = most_fractional(node);
      if (k == kNoBranch) continue;

      Node down{node.lower, node.upper, {}};
      Node up{node.lower, node.upper, {}};
      down.upper[k] = 0.0;
      up.lower[k] = 1.0;
      down.relaxation = solve_node(down.lower, down.upper);
      up.relaxation = solve_node(up.lower, up.upper);
      if (limit_) return finish(*limit_);

      const double down_bound = child_bound(down);
      const double up_bound = child_bound(up);
      if (down_bound <= up_bound) {
        stack.push_back(std::move(up));
        stack.push_back(std::move(down));
      } else {
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));
      }
    }
    if (!incumbent_) return finish(SolveStatus::Infeasible);
    return finish(SolveStatus::Optimal);
  }

 private:
  static constexpr std::size_t kNoBranch = static_cast<std::size_t>(-1);

  Solution solve_node(const std::vector<double>& lower, const std::vector<double>& upper) {
    if (nodes_ >= cfg_.max_nodes) {
      limit_ = SolveStatus::NodeLimit;
      return {};
    }
    ++nodes_;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      work_.set_bounds(binaries_[k], lower[k], upper[k]);
    }
    Solution s = detail::solve_relaxation(work_, cfg_);
    iterations_ += s.iterations;
    if (s.status == SolveStatus::IterationLimit) limit_ = SolveStatus::IterationLimit;
    return s;
  }

  double child_bound(const Node& n) const {
    return n.relaxation.optimal() ? sign_ * n.relaxation.objective_value : kInfinity;
  }

  double gap() const {
    return cfg_.feas_tol * (1.0 + (incumbent_ ? std::abs(incumbent_value_) : 0.0));
  }

  bool pruned(double bound) const { return incumbent_ && bound >= incumbent_value_ - gap(); }

  void offer(Solution&& s) {
    const double value = sign_ * s.objective_value;
    if (!incumbent_ || value < incumbent_value_ - gap()) {
      incumbent_value_ = value;
      incumbent_ = std::move(s);
    }
  }

  // Rounds every binary to a value that keeps all rows satisfied with the
  // continuous part unchanged (nearest value tried first), then re-solves with
  // the binaries fixed. Returns true when the node needs no branching.
  bool try_rounding(const Node& node, double bound) {
    const std::vector<double>& x = node.relaxation.values;
    std::vector<double> activity(lp_.num_constraints());
    for (std::size_t i = 0; i < activity.size(); ++i) activity[i] = lp_.row_activity(i, x);

    std::vector<double> rounded(binaries_.size());
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      const double v = x[binaries_[k]];
      const double nearest = v < 0.5 ? 0.0 : 1.0;
      bool placed = false;
      for (double candidate : {nearest, 1.0 - nearest}) {
        if (candidate < node.lower[k] || candidate > node.upper[k]) continue;
        if (!shift_keeps_rows(binaries_[k], candidate - v, activity)) continue;
        for (const auto& [row, coeff] : columns_[binaries_[k]]) {
          activity[row] += coeff * (candidate - v);
        }
        rounded[k] = candidate;
        placed = true;
        break;
      }
      if (!placed) return false;
    }

    Solution fixed = solve_node(rounded, rounded);
    if (limit_ || !fixed.optimal()) return false;
    const double value = sign_ * fixed.objective_value;
    offer(std::move(fixed));
    return value <= bound + gap();
  }

  bool shift_keeps_rows(std::size_t var, double delta, const std::vector<double>& activity) const {
    for (const auto& [row, coeff] : columns_[var]) {
      const Row& r = lp_.rows()[row];
      const double a = activity[row] + coeff * delta;
      const double tol = cfg_.feas_tol * (1.0 + std::abs(r.rhs));
      switch (r.relation) {
        case Relation::LessEqual:
          if (a > r.rhs + tol) return false;
          break;
        case Relation::GreaterEqual:
          if (a < r.rhs - tol) return false;
          break;
        case Relation::Equal:
          if (std::abs(a - r.rhs) > tol) return false;
          break;
      }
    }
    return true;
  }

  static bool all_fixed(const Node& node) {
    return std::equal(node.lower.begin(), node.lower.end(), node.upper.begin());
  }

  std::size_t most_fractional(const Node& node) const {
    std::size_t pick = kNoBranch;
    double best = -1.0;
    for (std::size_t k = 0; k < binaries_.size(); ++k) {
      if (node.lower[k] == node.upper[k]) continue;
      const double v = node.relaxation.values[binaries_[k]];
      const double frac = std::min(std::abs(v), std::abs(1.0 - v));
      if (frac > best) {
        best = frac;
        pick = k;
      }
    }
    return pick;
  }

  Solution finish(SolveStatus status) {
    Solution out;
    if (status == SolveStatus::Optimal && incumbent_) out = std::move(*incumbent_);
    out.status = status;
    out.nodes = nodes_;
    out.iterations = iterations_;
    out.basis.clear();
    return out;
  }

  const LinearProgram& lp_;
  const SolverConfig& cfg_;
  LinearProgram work_;
  std::vector<std::size_t> binaries_;
  std::vector<std::vector<std::pair<std::size_t, double>>> columns_;
  double sign_ = 1.0;
  std::optional<Solution> incumbent_;
  double incumbent_value_ = 0.0;
  std::optional<SolveStatus> limit_;
  std::size_t nodes_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace

Solution solve_milp(const LinearProgram& lp, const SolverConfig& cfg) {
  cfg.validate();
  if (!lp.has_binaries()) return solve_lp(lp, cfg);
  return BranchAndBound(lp, cfg).run();
}

}  // namespace dea::solver
