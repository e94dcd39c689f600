#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dea/config.hpp"
#include "dea/data.hpp"
#include "dea/efficiency.hpp"
#include "dea/solver.hpp"

namespace dea {

/// A slack fixed by an earlier lexicographic stage.
struct PinnedSlack {
  std::size_t slack;
  double value;
};

/// Column layout of the stage MILP for t efficient DMUs, m inputs and s
/// outputs: lambda | slacks | hyperplane weights | intercept | deviations |
/// indicators.
struct StageLayout {
  std::size_t t = 0;
  std::size_t m = 0;
  std::size_t s = 0;

  std::size_t lambda(std::size_t k) const { return k; }
  std::size_t slack(std::size_t k) const { return t + k; }
  std::size_t weight(std::size_t k) const { return t + m + s + k; }
  std::size_t intercept() const { return t + 2 * (m + s); }
  std::size_t deviation(std::size_t k) const { return intercept() + 1 + k; }
  std::size_t indicator(std::size_t k) const { return intercept() + 1 + t + k; }
  std::size_t num_variables() const { return 3 * t + 2 * (m + s) + 1; }
};

struct StageSolution {
  /// 1-based stage number.
  std::size_t stage = 0;
  /// Slack index minimised at this stage and its optimal value.
  std::size_t slack = 0;
  double value = 0.0;
  std::vector<double> lambda;  // over the efficient set
  std::vector<double> slacks;  // m + s
  std::vector<double> weights;  // m + s
  double intercept = 0.0;
  std::vector<double> deviations;
  std::vector<double> indicators;
  std::size_t nodes = 0;
};

/// Unique closest efficient target of one DMU.
struct Projection {
  std::size_t dmu = 0;
  std::vector<double> target_inputs;
  std::vector<double> target_outputs;
  /// Input excesses then output shortfalls; the target is
  /// (x - s_in, y + s_out). Replayed as LPs on the face found by the last
  /// stage so that no pinned slack keeps the slack of its pin window.
  std::vector<double> slacks;
  /// Intensities over the efficient set from the last stage (a unit vector
  /// for an efficient DMU).
  std::vector<double> reference_lambda;
  std::vector<StageSolution> stages;
  std::vector<std::size_t> priority;
  std::vector<std::string> warnings;
};

/// Stage MILP minimising `stage_target` with the earlier slacks held in
/// [value, value + lex_pin_tol]. Binaries link each efficient DMU's weight to
/// its deviation below the supporting hyperplane so that only DMUs on the
/// hyperplane may carry weight.
solver::LinearProgram build_stage_milp(const Dataset& dataset, const EfficientSet& efficient,
                                       std::size_t o, std::span<const PinnedSlack> pinned,
                                       std::size_t stage_target, const AnalysisConfig& cfg = {});

/// Lexicographic slack minimisation in priority order; one MILP per slack.
/// Efficient DMUs return themselves without solving anything.
Projection closest_projection(const Dataset& dataset, const EfficientSet& efficient,
                              std::size_t o, const PriorityRanking& priority,
                              const AnalysisConfig& cfg = {});

}  // namespace dea
