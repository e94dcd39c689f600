#include "dea/projection.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "dea/error.hpp"

namespace dea {

using solver::LinearProgram;
using solver::Relation;
using solver::Term;

namespace {

constexpr double kBigMHygiene = 1e-3;
// A polished slack vector further than this many pin windows from the MILP
// one is taken to sit on a different face and is discarded.
constexpr double kPolishGuard = 1e3;

StageLayout layout_for(const Dataset& d, const EfficientSet& e) {
  return {e.size(), d.num_inputs(), d.num_outputs()};
}

// Later stages may spend the pin window of earlier ones, moving each pinned
// slack up to lex_pin_tol off its optimum. On the face chosen by the last
// stage the problem is an LP whose optima are exactly reproducible, so the
// whole sequence is replayed there with each slack pinned to a single value.
// Returns the final LP solution, or nullopt when any LP fails.
std::optional<solver::Solution> polish(const Dataset& d, const EfficientSet& efficient,
                                       std::size_t o, const PriorityRanking& priority,
                                       const std::vector<double>& indicators,
                                       const AnalysisConfig& cfg) {
  const StageLayout at = layout_for(d, efficient);
  AnalysisConfig tight = cfg;
  tight.lex_pin_tol = 0.0;
  std::vector<PinnedSlack> pinned;
  solver::Solution sol;
  for (std::size_t k = 0; k < priority.size(); ++k) {
    LinearProgram lp = build_stage_milp(d, efficient, o, pinned, priority[k], tight);
    for (std::size_t j = 0; j < at.t; ++j) {
      const double v = indicators[j] < 0.5 ? 0.0 : 1.0;
      lp.set_bounds(at.indicator(j), v, v);
    }
    sol = solver::solve_milp(lp, cfg.solver);
    if (!sol.optimal()) return std::nullopt;
    pinned.push_back({priority[k], std::max(0.0, sol.values[at.slack(priority[k])])});
  }
  return sol;
}

}  // namespace

LinearProgram build_stage_milp(const Dataset& d, const EfficientSet& efficient, std::size_t o,
                               std::span<const PinnedSlack> pinned, std::size_t stage_target,
                               const AnalysisConfig& cfg) {
  if (o >= d.size()) throw std::out_of_range("DMU index out of range");
  if (efficient.size() == 0) throw std::invalid_argument("empty efficient set");
  if (stage_target >= d.num_slacks()) throw std::out_of_range("slack index out of range");
  for (const PinnedSlack& p : pinned) {
    if (p.slack == stage_target) throw std::invalid_argument("stage target is already pinned");
  }

  const StageLayout at = layout_for(d, efficient);
  const std::size_t m = at.m, s = at.s, t = at.t;
  const double big_m = cfg.solver.big_m;
  const Dmu& dmu = d[o];

  LinearProgram lp;
  for (std::size_t k = 0; k < t; ++k) lp.add_variable(0.0, 1.0);
  for (std::size_t k = 0; k < m + s; ++k) lp.add_variable(0.0, solver::kInfinity);
  for (std::size_t k = 0; k < m + s; ++k) lp.add_variable(1.0, solver::kInfinity);
  lp.add_variable(-solver::kInfinity, solver::kInfinity);
  for (std::size_t k = 0; k < t; ++k) lp.add_variable(0.0, big_m);
  for (std::size_t k = 0; k < t; ++k) lp.add_binary();
  lp.set_cost(at.slack(stage_target), 1.0);
  for (const PinnedSlack& p : pinned) {
    const double v = std::max(0.0, p.value);
    lp.set_bounds(at.slack(p.slack), v, v + cfg.lex_pin_tol);
  }

  // The target stays in the convex hull of the efficient DMUs.
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < t; ++k) row.push_back({at.lambda(k), d[efficient[k]].inputs[i]});
    row.push_back({at.slack(i), 1.0});
    lp.add_constraint(std::move(row), Relation::Equal, dmu.inputs[i]);
  }
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < t; ++k) row.push_back({at.lambda(k), d[efficient[k]].outputs[r]});
    row.push_back({at.slack(m + r), -1.0});
    lp.add_constraint(std::move(row), Relation::Equal, dmu.outputs[r]);
  }
  std::vector<Term> convexity;
  for (std::size_t k = 0; k < t; ++k) convexity.push_back({at.lambda(k), 1.0});
  lp.add_constraint(std::move(convexity), Relation::Equal, 1.0);

  // Every efficient DMU lies on or below a hyperplane with weights >= 1.
  for (std::size_t k = 0; k < t; ++k) {
    const Dmu& e = d[efficient[k]];
    std::vector<Term> row;
    for (std::size_t r = 0; r < s; ++r) row.push_back({at.weight(m + r), e.outputs[r]});
    for (std::size_t i = 0; i < m; ++i) row.push_back({at.weight(i), -e.inputs[i]});
    row.push_back({at.intercept(), -1.0});
    row.push_back({at.deviation(k), 1.0});
    lp.add_constraint(std::move(row), Relation::Equal, 0.0);
  }

  // lambda_k <= min(1, M(1 - I_k)) reduces to lambda_k + I_k <= 1 because the
  // convexity row already caps lambda at one.
  for (std::size_t k = 0; k < t; ++k) {
    lp.add_constraint({{at.lambda(k), 1.0}, {at.indicator(k), 1.0}}, Relation::LessEqual, 1.0);
  }
  for (std::size_t k = 0; k < t; ++k) {
    lp.add_constraint({{at.deviation(k), 1.0}, {at.indicator(k), -big_m}}, Relation::LessEqual,
                      0.0);
  }
  return lp;
}

Projection closest_projection(const Dataset& d, const EfficientSet& efficient, std::size_t o,
                              const PriorityRanking& priority, const AnalysisConfig& cfg) {
  if (o >= d.size()) throw std::out_of_range("DMU index out of range");
  if (priority.size() != d.num_slacks()) {
    throw ValidationError("priority ranking does not match the dataset's slack count");
  }
  if (efficient.size() == 0) throw AnalysisError("empty efficient set");
  const Dmu& dmu = d[o];
  const StageLayout at = layout_for(d, efficient);
  const std::size_t m = at.m, s = at.s;

  Projection p;
  p.dmu = o;
  p.priority = priority.order();
  p.slacks.assign(m + s, 0.0);

  if (const auto pos = efficient.position(o)) {
    p.target_inputs = dmu.inputs;
    p.target_outputs = dmu.outputs;
    p.reference_lambda.assign(efficient.size(), 0.0);
    p.reference_lambda[*pos] = 1.0;
    return p;
  }

  std::vector<PinnedSlack> pinned;
  solver::Solution last;
  for (std::size_t k = 0; k < priority.size(); ++k) {
    const std::size_t target = priority[k];
    const LinearProgram lp = build_stage_milp(d, efficient, o, pinned, target, cfg);
    solver::Solution sol = solver::solve_milp(lp, cfg.solver);
    if (sol.status == solver::SolveStatus::NodeLimit ||
        sol.status == solver::SolveStatus::IterationLimit) {
      throw SolverLimitError("stage " + std::to_string(k + 1) + " of the closest projection for '" +
                                 dmu.name + "' hit " + std::string(solver::to_string(sol.status)),
                             dmu.name, k + 1);
    }
    if (!sol.optimal()) {
      throw AnalysisError("stage " + std::to_string(k + 1) + " of the closest projection for '" +
                          dmu.name + "' is " + std::string(solver::to_string(sol.status)));
    }

    StageSolution stage;
    stage.stage = k + 1;
    stage.slack = target;
    stage.value = std::max(0.0, sol.values[at.slack(target)]);
    stage.nodes = sol.nodes;
    for (std::size_t j = 0; j < at.t; ++j) {
      stage.lambda.push_back(sol.values[at.lambda(j)]);
      stage.deviations.push_back(sol.values[at.deviation(j)]);
      stage.indicators.push_back(sol.values[at.indicator(j)]);
    }
    for (std::size_t q = 0; q < m + s; ++q) {
      stage.slacks.push_back(sol.values[at.slack(q)]);
      stage.weights.push_back(sol.values[at.weight(q)]);
    }
    stage.intercept = sol.values[at.intercept()];

    const double big_m = cfg.solver.big_m;
    for (std::size_t j = 0; j < at.t; ++j) {
      if (stage.deviations[j] >= big_m * (1.0 - kBigMHygiene)) {
        p.warnings.push_back("stage " + std::to_string(k + 1) + " for '" + dmu.name +
                             "': deviation of '" + d[efficient[j]].name +
                             "' is within 0.1% of big-M; consider a larger big-M");
      }
    }
    pinned.push_back({target, stage.value});
    p.stages.push_back(std::move(stage));
  }

  const StageSolution& final_stage = p.stages.back();
  for (std::size_t q = 0; q < m + s; ++q) p.slacks[q] = std::max(0.0, final_stage.slacks[q]);
  p.reference_lambda = final_stage.lambda;
  if (const auto polished = polish(d, efficient, o, priority, final_stage.indicators, cfg)) {
    std::vector<double> slacks(m + s), lambda(at.t);
    bool close = true;
    for (std::size_t q = 0; q < m + s; ++q) {
      slacks[q] = std::max(0.0, polished->values[at.slack(q)]);
      close = close && std::abs(slacks[q] - p.slacks[q]) <=
                           kPolishGuard * cfg.lex_pin_tol * (1.0 + p.slacks[q]);
    }
    for (std::size_t j = 0; j < at.t; ++j) lambda[j] = polished->values[at.lambda(j)];
    if (close) {
      p.slacks = std::move(slacks);
      p.reference_lambda = std::move(lambda);
    }
  }
  for (std::size_t i = 0; i < m; ++i) p.target_inputs.push_back(dmu.inputs[i] - p.slacks[i]);
  for (std::size_t r = 0; r < s; ++r) p.target_outputs.push_back(dmu.outputs[r] + p.slacks[m + r]);
  return p;
}

}  // namespace dea
