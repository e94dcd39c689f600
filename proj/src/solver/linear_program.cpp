#include "dea/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dea::solver {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::NodeLimit: return "NodeLimit";
  }
  return "Unknown";
}

LinearProgram::LinearProgram(Sense sense) : sense_(sense) {}

LinearProgram LinearProgram::from_dense(Sense sense, std::vector<double> objective,
                                        const std::vector<std::vector<double>>& matrix,
                                        const std::vector<Relation>& relations,
                                        const std::vector<double>& rhs,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper) {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("bound vectors do not match the objective length");
  }
  if (relations.size() != matrix.size() || rhs.size() != matrix.size()) {
    throw std::invalid_argument("relation/rhs count does not match the row count");
  }
  LinearProgram lp(sense);
  for (std::size_t j = 0; j < n; ++j) lp.add_variable(lower[j], upper[j], objective[j]);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != n) {
      throw std::invalid_argument("row " + std::to_string(i) + " has " +
                                  std::to_string(matrix[i].size()) + " entries, expected " +
                                  std::to_string(n));
    }
    std::vector<Term> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i][j] != 0.0) terms.push_back({j, matrix[i][j]});
    }
    lp.add_constraint(std::move(terms), relations[i], rhs[i]);
  }
  return lp;
}

std::size_t LinearProgram::add_variable(double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("invalid bounds [" + std::to_string(lower) + ", " +
                                std::to_string(upper) + "]");
  }
  if (lower == kInfinity || upper == -kInfinity) {
    throw std::invalid_argument("a variable cannot be fixed at infinity");
  }
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  binary_.push_back(false);
  return cost_.size() - 1;
}

std::size_t LinearProgram::add_binary(double cost) {
  const std::size_t var = add_variable(0.0, 1.0, cost);
  binary_[var] = true;
  return var;
}

std::size_t LinearProgram::add_constraint(std::vector<Term> terms, Relation relation,
                                          double rhs) {
  if (!std::isfinite(rhs)) throw std::invalid_argument("right-hand side must be finite");
  for (const Term& t : terms) {
    check_var(t.var);
    if (!std::isfinite(t.coeff)) throw std::invalid_argument("coefficient must be finite");
  }
  rows_.push_back(Row{std::move(terms), relation, rhs});
  return rows_.size() - 1;
}

void LinearProgram::set_cost(std::size_t var, double cost) {
  check_var(var);
  cost_[var] = cost;
}

void LinearProgram::set_bounds(std::size_t var, double lower, double upper) {
  check_var(var);
  if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInfinity ||
      upper == -kInfinity) {
    throw std::invalid_argument("invalid bounds for variable " + std::to_string(var));
  }
  if (binary_[var] && (lower < 0.0 || upper > 1.0)) {
    throw std::invalid_argument("binary variable bounds must lie within [0, 1]");
  }
  lower_[var] = lower;
  upper_[var] = upper;
}

void LinearProgram::set_binary(std::size_t var, bool binary) {
  check_var(var);
  if (binary && (lower_[var] < 0.0 || upper_[var] > 1.0)) {
    throw std::invalid_argument("binary variable bounds must lie within [0, 1]");
  }
  binary_[var] = binary;
}

bool LinearProgram::has_binaries() const noexcept {
  return std::find(binary_.begin(), binary_.end(), true) != binary_.end();
}

double LinearProgram::objective_value(std::span<const double> x) const {
  double z = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) z += cost_[j] * x[j];
  return z;
}

double LinearProgram::row_activity(std::size_t row, std::span<const double> x) const {
  double a = 0.0;
  for (const Term& t : rows_.at(row).terms) a += t.coeff * x[t.var];
  return a;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) {
    worst = std::max({worst, lower_[j] - x[j], x[j] - upper_[j]});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double gap = row_activity(i, x) - rows_[i].rhs;
    switch (rows_[i].relation) {
      case Relation::LessEqual: worst = std::max(worst, gap); break;
      case Relation::GreaterEqual: worst = std::max(worst, -gap); break;
      case Relation::Equal: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

void LinearProgram::check_var(std::size_t var) const {
  if (var >= cost_.size()) {
    throw std::invalid_argument("variable index " + std::to_string(var) + " out of range");
  }
}

void SolverConfig::validate() const {
  if (!(feas_tol > 0.0) || !(pivot_tol > 0.0) || !(int_tol > 0.0) || !(zero_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be strictly positive");
  }
  if (!(big_m > 1.0)) throw std::invalid_argument("big_M must exceed 1");
  if (max_iterations == 0 || max_nodes == 0) {
    throw std::invalid_argument("iteration and node limits must be positive");
  }
}

}  // namespace dea::solver
