#pragma once

// Dense bounded-variable primal simplex and a depth-first branch-and-bound
// layer for programs with binary variables. Sized for desk-scale models
// (a few hundred columns at most).

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace dea::solver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NodeLimit };
enum class BasisStatus : unsigned char { Basic, AtLower, AtUpper, Free };

std::string_view to_string(SolveStatus status);

struct Term {
  std::size_t var;
  double coeff;
};

struct Row {
  std::vector<Term> terms;
  Relation relation;
  double rhs;
};

class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Minimize);

  /// Builds a program from dense data. Throws std::invalid_argument when the
  /// shapes disagree or a bound pair is inverted.
  static LinearProgram from_dense(Sense sense, std::vector<double> objective,
                                  const std::vector<std::vector<double>>& matrix,
                                  const std::vector<Relation>& relations,
                                  const std::vector<double>& rhs,
                                  const std::vector<double>& lower,
                                  const std::vector<double>& upper);

  std::size_t add_variable(double lower, double upper, double cost = 0.0);
  std::size_t add_binary(double cost = 0.0);
  std::size_t add_constraint(std::vector<Term> terms, Relation relation, double rhs);

  void set_sense(Sense sense) noexcept { sense_ = sense; }
  void set_cost(std::size_t var, double cost);
  void set_bounds(std::size_t var, double lower, double upper);
  void set_binary(std::size_t var, bool binary);

  Sense sense() const noexcept { return sense_; }
  std::size_t num_variables() const noexcept { return cost_.size(); }
  std::size_t num_constraints() const noexcept { return rows_.size(); }
  const std::vector<double>& costs() const noexcept { return cost_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  const std::vector<bool>& binary_mask() const noexcept { return binary_; }
  bool has_binaries() const noexcept;

  double objective_value(std::span<const double> x) const;
  double row_activity(std::size_t row, std::span<const double> x) const;

  /// Largest violation of any row or bound at x (0 when feasible).
  double max_violation(std::span<const double> x) const;

 private:
  void check_var(std::size_t var) const;

  Sense sense_;
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> binary_;
  std::vector<Row> rows_;
};

struct SolverConfig {
  double feas_tol = 1e-9;
  double pivot_tol = 1e-9;
  double int_tol = 1e-6;
  /// Reporting and classification threshold used by the analysis layers.
  double zero_tol = 1e-7;
  double big_m = 1e5;
  std::size_t max_iterations = 50000;
  std::size_t max_nodes = 200000;
  /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t bland_after = 50;

  /// Throws std::invalid_argument on a non-positive tolerance or big_m <= 1.
  void validate() const;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective_value = 0.0;
  std::vector<double> values;
  std::size_t iterations = 0;
  std::size_t nodes = 0;
  /// Final basis of an LP solve: one entry per structural column followed by
  /// one per row logical (slack) column. Empty for MILP results.
  std::vector<BasisStatus> basis;

  bool optimal() const noexcept { return status == SolveStatus::Optimal; }
};

/// Solves a program without binaries. Throws std::invalid_argument when the
/// binary mask is non-empty.
Solution solve_lp(const LinearProgram& lp, const SolverConfig& cfg = {});

/// Exhaustive branch-and-bound over the binary-masked variables. Delegates to
/// solve_lp when there are none.
Solution solve_milp(const LinearProgram& lp, const SolverConfig& cfg = {});

namespace detail {
/// Continuous relaxation: binary mask ignored, bounds honoured.
Solution solve_relaxation(const LinearProgram& lp, const SolverConfig& cfg);
}  // namespace detail

}  // namespace dea::solver
