#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "dea/config.hpp"
#include "dea/data.hpp"
#include "dea/efficiency.hpp"
#include "dea/projection.hpp"

namespace dea {

/// Range of the intercept over supporting hyperplanes at a frontier point.
/// Unbounded directions are encoded as +/-infinity.
struct RtsBounds {
  double w0_upper = 0.0;
  /// Not computed when the upper bound already forces the label.
  std::optional<double> w0_lower;
  std::size_t stage_count = 0;
};

enum class RtsLabel { Increasing, Constant, Decreasing };

/// "IRS", "CRS" or "DRS".
std::string_view to_string(RtsLabel label);

/// Maximises, then if needed minimises, the intercept of a hyperplane
/// normalised by the point's inputs that supports every DMU and passes
/// through (x, y). Throws AnalysisError when no such hyperplane exists, that
/// is when the point is not on the frontier.
RtsBounds w0_bounds(const Dataset& dataset, std::span<const double> x, std::span<const double> y,
                    const AnalysisConfig& cfg = {});

RtsLabel classify(const RtsBounds& bounds, const AnalysisConfig& cfg = {});

struct CrtsResult {
  std::size_t dmu = 0;
  Projection projection;
  RtsBounds bounds;
  RtsLabel label = RtsLabel::Constant;
};

/// Returns to scale at the closest projection of DMU o (at the DMU itself
/// when it is efficient).
CrtsResult crts(const Dataset& dataset, const EfficientSet& efficient, std::size_t o,
                const PriorityRanking& priority, const AnalysisConfig& cfg = {});

/// Same, for a projection computed earlier.
CrtsResult crts(const Dataset& dataset, const Projection& projection,
                const AnalysisConfig& cfg = {});

}  // namespace dea
