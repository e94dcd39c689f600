#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dea/config.hpp"
#include "dea/data.hpp"
#include "dea/efficiency.hpp"
#include "dea/projection.hpp"
#include "dea/reference_set.hpp"
#include "dea/returns_to_scale.hpp"

namespace dea {

/// efficiency: scores; project: + closest targets; mcrs: + reference sets;
/// rts: + returns-to-scale labels (no reference sets); report: everything.
enum class Command { Efficiency, Project, Mcrs, Rts, Report };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Command command);
/// Throws ValidationError on an unknown name.
Command parse_command(std::string_view name);

struct RunConfig {
  std::filesystem::path input;
  Command command = Command::Report;
  /// "default" or comma-separated slack labels.
  std::string priority = "default";
  AnalysisConfig analysis;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::filesystem::path> plot_data;
  /// Worker threads for the per-DMU analyses; 0 picks the hardware count.
  std::size_t threads = 0;

  /// Throws ValidationError when a path is empty or a tolerance is invalid.
  void validate() const;
};

struct DmuRecord {
  std::string name;
  EfficiencyResult efficiency;
  std::optional<Projection> projection;
  std::optional<McrsResult> mcrs;
  std::optional<RtsBounds> bounds;
  std::optional<RtsLabel> label;
  std::vector<std::string> warnings;
};

struct AnalysisReport {
  RunConfig config;
  Dataset dataset;
  PriorityRanking priority;
  EfficientSet efficient;
  std::vector<DmuRecord> records;
  /// Wall-clock seconds of the analysis; the only non-deterministic field.
  double seconds = 0.0;
};

/// Identifier written into every JSON report; bumped on incompatible changes.
inline constexpr std::string_view kReportSchema = "dea-closest-report/1";

/// Whether `command` computes the results that `stage` introduces.
bool includes(Command command, Command stage);

AnalysisReport analyze(const Dataset& dataset, const RunConfig& config);
/// Loads config.input and analyses it.
AnalysisReport run(const RunConfig& config);

/// 9 significant digits, "+inf"/"-inf" for infinities, "nan" for NaN.
std::string format_number(double value);

void write_json(std::ostream& out, const AnalysisReport& report, bool include_timing = true);
void write_csv(std::ostream& out, const AnalysisReport& report);

/// Frontier vertices, observed points and projection arrows as CSV with
/// columns kind,name,x,y,target_x,target_y. Throws ValidationError unless the
/// dataset has exactly one input and one output.
void write_plot_data(std::ostream& out, const AnalysisReport& report);
/// Throws IoError when the file cannot be written.
void emit_plot_data(const AnalysisReport& report, const std::filesystem::path& path);

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitSolverLimit = 3,
  kExitIo = 4,
};

/// Entry point of the dea-closest executable. Reports go to `out`, JSON
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dea
