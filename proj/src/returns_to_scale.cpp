#include "dea/returns_to_scale.hpp"

#include <stdexcept>

#include "dea/error.hpp"

namespace dea {

using solver::LinearProgram;
using solver::Relation;
using solver::SolveStatus;
using solver::Term;

std::string_view to_string(RtsLabel label) {
  switch (label) {
    case RtsLabel::Increasing: return "IRS";
    case RtsLabel::Constant: return "CRS";
    case RtsLabel::Decreasing: return "DRS";
  }
  return "?";
}

namespace {

// Objective value of one bound LP, with an unbounded ray mapped to infinity
// in the direction of optimisation.
double bound_value(const LinearProgram& lp, const AnalysisConfig& cfg, double unbounded) {
  const solver::Solution sol = solver::solve_lp(lp, cfg.solver);
  switch (sol.status) {
    case SolveStatus::Optimal: return sol.objective_value;
    case SolveStatus::Unbounded: return unbounded;
    case SolveStatus::Infeasible:
      throw AnalysisError("no supporting hyperplane passes through the point; it is not on the frontier");
    case SolveStatus::IterationLimit:
    case SolveStatus::NodeLimit:
      throw SolverLimitError("returns-to-scale LP hit " + std::string(solver::to_string(sol.status)),
                             "");
  }
  throw AnalysisError("unexpected solver status");
}

}  // namespace

RtsBounds w0_bounds(const Dataset& d, std::span<const double> x, std::span<const double> y,
                    const AnalysisConfig& cfg) {
  const std::size_t m = d.num_inputs(), s = d.num_outputs();
  if (x.size() != m || y.size() != s) {
    throw std::invalid_argument("point dimensions do not match the dataset");
  }
  // Columns: input weights, output weights, intercept.
  LinearProgram lp(solver::Sense::Maximize);
  for (std::size_t k = 0; k < m + s; ++k) lp.add_variable(0.0, solver::kInfinity);
  const std::size_t w0 = lp.add_variable(-solver::kInfinity, solver::kInfinity, 1.0);

  std::vector<Term> norm;
  for (std::size_t i = 0; i < m; ++i) norm.push_back({i, x[i]});
  lp.add_constraint(std::move(norm), Relation::Equal, 1.0);
  auto hyperplane = [&](std::span<const double> xi, std::span<const double> yr) {
    std::vector<Term> row;
    for (std::size_t r = 0; r < s; ++r) row.push_back({m + r, yr[r]});
    for (std::size_t i = 0; i < m; ++i) row.push_back({i, -xi[i]});
    row.push_back({w0, -1.0});
    return row;
  };
  for (const Dmu& u : d.dmus()) {
    lp.add_constraint(hyperplane(u.inputs, u.outputs), Relation::LessEqual, 0.0);
  }
  lp.add_constraint(hyperplane(x, y), Relation::Equal, 0.0);

  RtsBounds out;
  out.w0_upper = bound_value(lp, cfg, solver::kInfinity);
  out.stage_count = 1;
  if (out.w0_upper < -cfg.solver.zero_tol) return out;
  lp.set_sense(solver::Sense::Minimize);
  out.w0_lower = bound_value(lp, cfg, -solver::kInfinity);
  out.stage_count = 2;
  return out;
}

RtsLabel classify(const RtsBounds& bounds, const AnalysisConfig& cfg) {
  const double tol = cfg.solver.zero_tol;
  if (bounds.w0_upper < -tol) return RtsLabel::Increasing;
  if (bounds.w0_lower && *bounds.w0_lower > tol) return RtsLabel::Decreasing;
  return RtsLabel::Constant;
}

CrtsResult crts(const Dataset& d, const Projection& projection, const AnalysisConfig& cfg) {
  CrtsResult out;
  out.dmu = projection.dmu;
  out.projection = projection;
  out.bounds = w0_bounds(d, projection.target_inputs, projection.target_outputs, cfg);
  out.label = classify(out.bounds, cfg);
  return out;
}

CrtsResult crts(const Dataset& d, const EfficientSet& efficient, std::size_t o,
                const PriorityRanking& priority, const AnalysisConfig& cfg) {
  return crts(d, closest_projection(d, efficient, o, priority, cfg), cfg);
}

}  // namespace dea
