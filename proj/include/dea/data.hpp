#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dea {

struct Dmu {
  std::string name;
  std::vector<double> inputs;
  std::vector<double> outputs;
};

/// Immutable table of DMUs. Row order is the canonical tie-break order for
/// every downstream computation.
class Dataset {
 public:
  /// Throws ValidationError when any invariant fails (n >= 1, m >= 1, s >= 1,
  /// unique non-empty names, matching vector lengths, finite non-negative
  /// values, no all-zero DMU).
  Dataset(std::vector<std::string> input_names, std::vector<std::string> output_names,
          std::vector<Dmu> dmus);

  std::size_t size() const noexcept { return dmus_.size(); }
  std::size_t num_inputs() const noexcept { return input_names_.size(); }
  std::size_t num_outputs() const noexcept { return output_names_.size(); }
  /// m + s: one slack per input and per output.
  std::size_t num_slacks() const noexcept { return num_inputs() + num_outputs(); }

  const Dmu& operator[](std::size_t j) const { return dmus_[j]; }
  const std::vector<Dmu>& dmus() const noexcept { return dmus_; }
  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::vector<std::string>& output_names() const noexcept { return output_names_; }

  std::optional<std::size_t> find(std::string_view name) const;

  /// "in:<name>" for k < m, "out:<name>" otherwise.
  std::string slack_label(std::size_t k) const;

  Dataset with_appended(Dmu dmu) const;
  /// Rows reordered so that row k of the result is row order[k] of this one.
  Dataset permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
  std::vector<Dmu> dmus_;
};

/// Reads the CSV contract `dmu,in:<name>...,out:<name>...`. Errors carry
/// 1-based line and column numbers.
Dataset load_dataset(std::istream& in);
/// Throws IoError when the file cannot be opened.
Dataset load_dataset(const std::filesystem::path& path);

/// Writes the same CSV contract with shortest round-trip number formatting.
void write_dataset(std::ostream& out, const Dataset& dataset);

/// Order in which the m+s slacks are minimised; entry k is the slack index
/// (inputs first, then outputs) minimised at stage k+1.
class PriorityRanking {
 public:
  /// Throws ValidationError unless `order` is a permutation of 0..size-1.
  explicit PriorityRanking(std::vector<std::size_t> order);

  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  std::size_t operator[](std::size_t stage) const { return order_[stage]; }

  friend bool operator==(const PriorityRanking&, const PriorityRanking&) = default;

 private:
  std::vector<std::size_t> order_;
};

/// Outputs before inputs, each group in declaration order.
PriorityRanking default_priority(std::size_t m, std::size_t s);

/// "default" or a comma-separated list of slack labels such as
/// `out:output,in:input`.
PriorityRanking parse_priority(std::string_view spec, const Dataset& dataset);

}  // namespace dea
