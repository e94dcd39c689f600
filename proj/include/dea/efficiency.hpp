#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dea/config.hpp"
#include "dea/data.hpp"

namespace dea {

/// Outcome of the input-oriented BCC envelopment model for one DMU.
struct EfficiencyResult {
  std::size_t dmu = 0;
  /// Radial score from the first phase.
  double theta = 1.0;
  /// Max-slack completion at theta: m input slacks then s output slacks.
  std::vector<double> slacks;
  /// Intensities over all DMUs of the dataset; they sum to one.
  std::vector<double> lambda;
  bool efficient = false;
};

/// Indices of the efficient DMUs, in dataset order.
class EfficientSet {
 public:
  EfficientSet() = default;
  explicit EfficientSet(std::vector<std::size_t> members);

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t operator[](std::size_t k) const { return members_[k]; }
  bool contains(std::size_t j) const;
  /// Position of dataset index j inside the set.
  std::optional<std::size_t> position(std::size_t j) const;

 private:
  std::vector<std::size_t> members_;
};

/// Phase 1 minimises theta; phase 2 fixes theta and maximises the slack sum,
/// which realises the non-Archimedean objective exactly.
EfficiencyResult evaluate_bcc(const Dataset& dataset, std::size_t o,
                              const AnalysisConfig& cfg = {});

std::vector<EfficiencyResult> evaluate_all(const Dataset& dataset, const AnalysisConfig& cfg = {});

EfficientSet efficient_set(std::span<const EfficiencyResult> results);
EfficientSet efficient_set(const Dataset& dataset, const AnalysisConfig& cfg = {});

/// Optimal value of the multiplier (dual) form with the infinitesimal taken
/// as zero. Equals theta* of evaluate_bcc; used as a cross-check.
double multiplier_score(const Dataset& dataset, std::size_t o, const AnalysisConfig& cfg = {});

}  // namespace dea
