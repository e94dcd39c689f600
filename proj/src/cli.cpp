#include <exception>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dea/error.hpp"
#include "dea/report.hpp"

namespace dea {
namespace {

using Json = nlohmann::ordered_json;

int diagnose(std::ostream& err, int code, std::string_view kind, const std::string& message,
             Json extra = Json::object()) {
  Json doc;
  doc["error"] = {{"kind", kind}, {"message", message}};
  for (auto& [key, value] : extra.items()) doc["error"][key] = value;
  err << doc.dump() << '\n';
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closest targets, reference sets and returns to scale for DEA datasets",
               "dea-closest"};
  app.set_version_flag("--version", std::string("dea-closest ") + DEA_VERSION);

  RunConfig config;
  std::string command;
  std::string input;
  std::string plot_data;
  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::Json},
                                                    {"csv", OutputFormat::Csv}};
  auto& solver = config.analysis.solver;

  app.add_option("command", command, "efficiency | project | mcrs | rts | report")
      ->required()
      ->check(CLI::IsMember({"efficiency", "project", "mcrs", "rts", "report"}));
  app.add_option("--input", input, "Dataset CSV: dmu,in:<name>...,out:<name>...")->required();
  app.add_option("--priority", config.priority,
                 "Slack order, e.g. out:output,in:input, or 'default'")
      ->capture_default_str();
  app.add_option("--big-m", solver.big_m, "Big-M bound on hyperplane deviations")
      ->capture_default_str();
  app.add_option("--tol", solver.zero_tol, "Threshold below which values count as zero")
      ->capture_default_str();
  app.add_option("--format", config.format, "json | csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("json");
  app.add_option("--plot-data", plot_data, "Write frontier plot data (1 input, 1 output) here");
  app.add_option("--max-iterations", solver.max_iterations, "Simplex iteration limit per LP")
      ->capture_default_str();
  app.add_option("--max-nodes", solver.max_nodes, "Branch-and-bound node limit per MILP")
      ->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads, 0 for one per core")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return diagnose(err, kExitValidation, "usage", e.what());
  }

  try {
    config.command = parse_command(command);
    config.input = input;
    if (!plot_data.empty()) config.plot_data = plot_data;

    const AnalysisReport report = run(config);
    std::ostringstream text;
    if (config.format == OutputFormat::Json) {
      write_json(text, report);
    } else {
      write_csv(text, report);
    }
    if (config.plot_data) emit_plot_data(report, *config.plot_data);
    out << text.str();
    out.flush();
    return kExitOk;
  } catch (const ValidationError& e) {
    Json extra = Json::object();
    if (e.row() != 0) extra["row"] = e.row();
    if (e.column() != 0) extra["column"] = e.column();
    return diagnose(err, kExitValidation, "validation", e.what(), extra);
  } catch (const SolverLimitError& e) {
    Json extra = {{"dmu", e.dmu()}};
    if (e.stage() != 0) extra["stage"] = e.stage();
    return diagnose(err, kExitSolverLimit, "solver_limit", e.what(), extra);
  } catch (const IoError& e) {
    return diagnose(err, kExitIo, "io", e.what());
  } catch (const std::exception& e) {
    return diagnose(err, kExitInternal, "internal", e.what());
  }
}

}  // namespace dea
