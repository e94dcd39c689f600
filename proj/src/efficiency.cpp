#include "dea/efficiency.hpp"

#include <algorithm>
#include <numeric>

#include "dea/error.hpp"

namespace dea {

using solver::LinearProgram;
using solver::Relation;
using solver::SolveStatus;
using solver::Term;

namespace {

void require_optimal(const solver::Solution& s, const Dataset& d, std::size_t o,
                     const char* what) {
  if (s.status == SolveStatus::IterationLimit || s.status == SolveStatus::NodeLimit) {
    throw SolverLimitError(std::string(what) + " hit a solver limit (" +
                               std::string(solver::to_string(s.status)) + ") for DMU '" +
                               d[o].name + "'",
                           d[o].name);
  }
  if (!s.optimal()) {
    throw AnalysisError(std::string(what) + " returned " + std::string(solver::to_string(s.status)) +
                        " for DMU '" + d[o].name + "'");
  }
}

}  // namespace

EfficientSet::EfficientSet(std::vector<std::size_t> members) : members_(std::move(members)) {}

bool EfficientSet::contains(std::size_t j) const { return position(j).has_value(); }

std::optional<std::size_t> EfficientSet::position(std::size_t j) const {
  const auto it = std::find(members_.begin(), members_.end(), j);
  if (it == members_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

EfficiencyResult evaluate_bcc(const Dataset& d, std::size_t o, const AnalysisConfig& cfg) {
  if (o >= d.size()) throw std::out_of_range("DMU index out of range");
  const std::size_t n = d.size(), m = d.num_inputs(), s = d.num_outputs();
  const Dmu& dmu = d[o];

  LinearProgram lp;
  const std::size_t theta = lp.add_variable(0.0, solver::kInfinity, 1.0);
  std::vector<std::size_t> lambda(n), slack(m + s);
  for (std::size_t j = 0; j < n; ++j) lambda[j] = lp.add_variable(0.0, solver::kInfinity);
  for (std::size_t k = 0; k < m + s; ++k) slack[k] = lp.add_variable(0.0, solver::kInfinity);

  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back({lambda[j], d[j].inputs[i]});
    row.push_back({slack[i], 1.0});
    row.push_back({theta, -dmu.inputs[i]});
    lp.add_constraint(std::move(row), Relation::Equal, 0.0);
  }
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<Term> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back({lambda[j], d[j].outputs[r]});
    row.push_back({slack[m + r], -1.0});
    lp.add_constraint(std::move(row), Relation::Equal, dmu.outputs[r]);
  }
  std::vector<Term> convexity;
  for (std::size_t j = 0; j < n; ++j) convexity.push_back({lambda[j], 1.0});
  lp.add_constraint(std::move(convexity), Relation::Equal, 1.0);

  // Radial contraction is meaningless when every input is zero.
  const bool no_inputs =
      std::all_of(dmu.inputs.begin(), dmu.inputs.end(), [](double v) { return v == 0.0; });
  double theta_star = 1.0;
  if (!no_inputs) {
    const auto phase1 = solver::solve_lp(lp, cfg.solver);
    require_optimal(phase1, d, o, "BCC phase 1");
    theta_star = phase1.values[theta];
  }

  lp.set_bounds(theta, theta_star, theta_star);
  lp.set_cost(theta, 0.0);
  lp.set_sense(solver::Sense::Maximize);
  for (std::size_t k = 0; k < m + s; ++k) lp.set_cost(slack[k], 1.0);
  const auto phase2 = solver::solve_lp(lp, cfg.solver);
  require_optimal(phase2, d, o, "BCC phase 2");

  EfficiencyResult out;
  out.dmu = o;
  out.theta = theta_star;
  for (std::size_t k = 0; k < m + s; ++k) out.slacks.push_back(phase2.values[slack[k]]);
  for (std::size_t j = 0; j < n; ++j) out.lambda.push_back(phase2.values[lambda[j]]);
  const double worst_slack = *std::max_element(out.slacks.begin(), out.slacks.end());
  out.efficient = theta_star >= 1.0 - cfg.solver.zero_tol && worst_slack <= cfg.solver.zero_tol;
  return out;
}

std::vector<EfficiencyResult> evaluate_all(const Dataset& d, const AnalysisConfig& cfg) {
  std::vector<EfficiencyResult> out;
  out.reserve(d.size());
  for (std::size_t o = 0; o < d.size(); ++o) out.push_back(evaluate_bcc(d, o, cfg));
  return out;
}

EfficientSet efficient_set(std::span<const EfficiencyResult> results) {
  std::vector<std::size_t> members;
  for (const auto& r : results) {
    if (r.efficient) members.push_back(r.dmu);
  }
  std::sort(members.begin(), members.end());
  return EfficientSet(std::move(members));
}

EfficientSet efficient_set(const Dataset& d, const AnalysisConfig& cfg) {
  return efficient_set(evaluate_all(d, cfg));
}

double multiplier_score(const Dataset& d, std::size_t o, const AnalysisConfig& cfg) {
  if (o >= d.size()) throw std::out_of_range("DMU index out of range");
  const std::size_t m = d.num_inputs(), s = d.num_outputs();
  LinearProgram lp(solver::Sense::Maximize);
  std::vector<std::size_t> v(m), u(s);
  for (std::size_t i = 0; i < m; ++i) v[i] = lp.add_variable(0.0, solver::kInfinity);
  for (std::size_t r = 0; r < s; ++r) u[r] = lp.add_variable(0.0, solver::kInfinity, d[o].outputs[r]);
  const std::size_t w0 = lp.add_variable(-solver::kInfinity, solver::kInfinity, -1.0);

  std::vector<Term> norm;
  for (std::size_t i = 0; i < m; ++i) norm.push_back({v[i], d[o].inputs[i]});
  lp.add_constraint(std::move(norm), Relation::Equal, 1.0);
  for (std::size_t j = 0; j < d.size(); ++j) {
    std::vector<Term> row;
    for (std::size_t r = 0; r < s; ++r) row.push_back({u[r], d[j].outputs[r]});
    for (std::size_t i = 0; i < m; ++i) row.push_back({v[i], -d[j].inputs[i]});
    row.push_back({w0, -1.0});
    lp.add_constraint(std::move(row), Relation::LessEqual, 0.0);
  }
  const auto sol = solver::solve_lp(lp, cfg.solver);
  require_optimal(sol, d, o, "BCC multiplier form");
  return sol.objective_value;
}

}  // namespace dea
