#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dea/config.hpp"
#include "dea/data.hpp"
#include "dea/efficiency.hpp"
#include "dea/projection.hpp"

namespace dea {

/// Optimal (alpha, beta) of the scaled representation LP; index t refers to
/// the target column, indices 0..t-1 to the efficient DMUs.
struct Model15Solution {
  std::vector<double> alpha;
  std::vector<double> beta;
  double objective = 0.0;
};

/// Maximises the number of efficient DMUs carrying weight in a convex
/// representation of the target point. Weights are split into a part capped
/// at one (alpha) and an unbounded part (beta) and the representation is
/// homogenised by a scale column for the target itself.
Model15Solution solve_model15(const Dataset& dataset, const EfficientSet& efficient,
                              std::span<const double> target_inputs,
                              std::span<const double> target_outputs,
                              const AnalysisConfig& cfg = {});

/// (alpha + beta)_k / (alpha + beta)_t over the efficient set. Throws
/// AnalysisError when the scale column is (numerically) zero.
std::vector<double> recover_lambda_max(const Model15Solution& sol, const AnalysisConfig& cfg = {});

struct McrsResult {
  std::size_t dmu = 0;
  /// Over the efficient set; sums to one.
  std::vector<double> lambda_max;
  /// Dataset indices with lambda_max above zero_tol, in dataset order.
  std::vector<std::size_t> members;
  /// Dataset indices with positive weight in the projection's own
  /// representation.
  std::vector<std::size_t> ucrs;
  std::vector<std::string> warnings;
};

McrsResult identify_mcrs(const Dataset& dataset, const EfficientSet& efficient,
                         const Projection& projection, const AnalysisConfig& cfg = {});

}  // namespace dea
