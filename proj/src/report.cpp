#include "dea/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "dea/error.hpp"

namespace dea {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSignificantDigits = 9;

// Numbers go through the 9-digit text form so JSON and CSV carry the same
// values; infinities become strings.
Json number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  const std::string text = format_number(v);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

// Magnitudes at or below zero_tol are reported as exact zeros.
double snap(double v, double zero) { return std::abs(v) <= zero ? 0.0 : v; }

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += sep;
    out += parts[k];
  }
  return out;
}

std::vector<std::string> slack_labels(const Dataset& d) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < d.num_slacks(); ++k) out.push_back(d.slack_label(k));
  return out;
}

std::vector<double> targets(const Projection& p) {
  std::vector<double> out(p.target_inputs);
  out.insert(out.end(), p.target_outputs.begin(), p.target_outputs.end());
  return out;
}

double weight_of(const AnalysisReport& r, const McrsResult& mcrs, std::size_t j) {
  return mcrs.lambda_max[*r.efficient.position(j)];
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

DmuRecord analyze_one(const Dataset& d, const AnalysisReport& r, const EfficiencyResult& eff,
                      const AnalysisConfig& cfg) {
  const Command command = r.config.command;
  DmuRecord rec;
  rec.name = d[eff.dmu].name;
  rec.efficiency = eff;
  if (!includes(command, Command::Project)) return rec;

  rec.projection = closest_projection(d, r.efficient, eff.dmu, r.priority, cfg);
  rec.warnings = rec.projection->warnings;
  if (includes(command, Command::Mcrs)) {
    rec.mcrs = identify_mcrs(d, r.efficient, *rec.projection, cfg);
    rec.warnings.insert(rec.warnings.end(), rec.mcrs->warnings.begin(), rec.mcrs->warnings.end());
  }
  if (includes(command, Command::Rts)) {
    const CrtsResult c = crts(d, *rec.projection, cfg);
    rec.bounds = c.bounds;
    rec.label = c.label;
  }
  return rec;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Efficiency: return "efficiency";
    case Command::Project: return "project";
    case Command::Mcrs: return "mcrs";
    case Command::Rts: return "rts";
    case Command::Report: return "report";
  }
  return "report";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Efficiency, Command::Project, Command::Mcrs, Command::Rts,
                    Command::Report}) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

bool includes(Command command, Command stage) {
  switch (stage) {
    case Command::Efficiency: return true;
    case Command::Project: return command != Command::Efficiency;
    case Command::Mcrs: return command == Command::Mcrs || command == Command::Report;
    case Command::Rts: return command == Command::Rts || command == Command::Report;
    case Command::Report: return command == Command::Report;
  }
  return false;
}

void RunConfig::validate() const {
  if (input.empty()) throw ValidationError("input path is empty");
  if (plot_data && plot_data->empty()) throw ValidationError("plot-data path is empty");
  if (priority.empty()) throw ValidationError("priority spec is empty");
  try {
    analysis.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (!(analysis.lex_pin_tol >= 0.0)) throw ValidationError("lex_pin_tol must be non-negative");
}

AnalysisReport analyze(const Dataset& dataset, const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const AnalysisConfig& cfg = config.analysis;

  AnalysisReport r{config, dataset, parse_priority(config.priority, dataset), {}, {}, 0.0};
  const std::vector<EfficiencyResult> scores = evaluate_all(dataset, cfg);
  r.efficient = efficient_set(scores);

  const std::size_t n = dataset.size();
  std::vector<DmuRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t o = next++; o < n; o = next++) {
      try {
        records[o] = analyze_one(dataset, r, scores[o], cfg);
      } catch (...) {
        errors[o] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n);
  if (!includes(config.command, Command::Project)) threads = 1;
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();

  // First failure in dataset order, so diagnostics do not depend on scheduling.
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  r.records = std::move(records);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

AnalysisReport run(const RunConfig& config) {
  config.validate();
  return analyze(load_dataset(config.input), config);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                                 kSignificantDigits);
  return std::string(buf, res.ptr);
}

void write_json(std::ostream& out, const AnalysisReport& r, bool include_timing) {
  const Dataset& d = r.dataset;
  const AnalysisConfig& cfg = r.config.analysis;
  const std::vector<std::string> labels = slack_labels(d);

  Json doc;
  doc["schema"] = kReportSchema;
  doc["tool"] = {{"name", "dea-closest"}, {"version", DEA_VERSION}};

  Json priority = Json::array();
  for (std::size_t k : r.priority.order()) priority.push_back(labels[k]);
  doc["config"] = {
      {"command", to_string(r.config.command)},
      {"input", r.config.input.string()},
      {"priority", priority},
      {"format", to_string(r.config.format)},
      {"plot_data", r.config.plot_data ? Json(r.config.plot_data->string()) : Json(nullptr)},
      {"big_m", number(cfg.solver.big_m)},
      {"zero_tol", number(cfg.solver.zero_tol)},
      {"feas_tol", number(cfg.solver.feas_tol)},
      {"pivot_tol", number(cfg.solver.pivot_tol)},
      {"int_tol", number(cfg.solver.int_tol)},
      {"lex_pin_tol", number(cfg.lex_pin_tol)},
      {"max_iterations", cfg.solver.max_iterations},
      {"max_nodes", cfg.solver.max_nodes},
  };
  doc["dataset"] = {{"inputs", d.input_names()}, {"outputs", d.output_names()}, {"dmus", d.size()}};

  Json efficient = Json::array();
  for (std::size_t j : r.efficient.members()) efficient.push_back(d[j].name);
  doc["efficient"] = efficient;

  const double zero = cfg.solver.zero_tol;
  Json dmus = Json::array();
  for (const DmuRecord& rec : r.records) {
    Json item;
    item["name"] = rec.name;

    Json slacks = Json::object();
    for (std::size_t k = 0; k < labels.size(); ++k) {
      slacks[labels[k]] = number(snap(rec.efficiency.slacks[k], zero));
    }
    item["efficiency"] = {{"theta", number(snap(rec.efficiency.theta, zero))},
                          {"efficient", rec.efficiency.efficient},
                          {"slacks", slacks}};

    if (rec.projection) {
      const Projection& p = *rec.projection;
      const std::vector<double> target = targets(p);
      Json tgt = Json::object();
      Json ps = Json::object();
      for (std::size_t k = 0; k < labels.size(); ++k) {
        tgt[labels[k]] = number(snap(target[k], zero));
        ps[labels[k]] = number(snap(p.slacks[k], zero));
      }
      Json reference = Json::array();
      for (std::size_t k = 0; k < r.efficient.size(); ++k) {
        if (p.reference_lambda[k] <= cfg.solver.zero_tol) continue;
        reference.push_back({{"name", d[r.efficient[k]].name},
                             {"lambda", number(snap(p.reference_lambda[k], zero))}});
      }
      item["projection"] = {{"target", tgt}, {"slacks", ps}, {"reference", reference}};
    }

    if (rec.mcrs) {
      Json members = Json::array();
      for (std::size_t j : rec.mcrs->members) {
        members.push_back({{"name", d[j].name}, {"lambda_max", number(snap(weight_of(r, *rec.mcrs, j), zero))}});
      }
      Json ucrs = Json::array();
      for (std::size_t j : rec.mcrs->ucrs) ucrs.push_back(d[j].name);
      item["mcrs"] = {{"members", members}, {"ucrs", ucrs}};
    }

    if (rec.label) {
      item["rts"] = {
          {"label", to_string(*rec.label)},
          {"w0_upper", number(snap(rec.bounds->w0_upper, zero))},
          {"w0_lower", rec.bounds->w0_lower ? number(snap(*rec.bounds->w0_lower, zero)) : Json(nullptr)},
      };
    }
    item["warnings"] = rec.warnings;
    dmus.push_back(std::move(item));
  }
  doc["dmus"] = std::move(dmus);
  if (include_timing) doc["timing"] = {{"seconds", r.seconds}};
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const AnalysisReport& r) {
  const Dataset& d = r.dataset;
  const Command command = r.config.command;
  const std::vector<std::string> labels = slack_labels(d);
  const double zero = r.config.analysis.solver.zero_tol;

  std::vector<std::string> header{"dmu", "theta", "efficient"};
  for (const std::string& l : labels) header.push_back("bcc_slack:" + l);
  if (includes(command, Command::Project)) {
    for (const std::string& l : labels) header.push_back("target:" + l);
    for (const std::string& l : labels) header.push_back("slack:" + l);
    header.push_back("reference");
  }
  if (includes(command, Command::Mcrs)) {
    header.push_back("mcrs");
    header.push_back("ucrs");
  }
  if (includes(command, Command::Rts)) {
    header.insert(header.end(), {"rts", "w0_upper", "w0_lower"});
  }
  header.push_back("warnings");
  for (std::string& h : header) h = csv_field(h);
  out << join(header, ",") << '\n';

  for (const DmuRecord& rec : r.records) {
    std::vector<std::string> row{rec.name, format_number(snap(rec.efficiency.theta, zero)),
                                 rec.efficiency.efficient ? "true" : "false"};
    for (double v : rec.efficiency.slacks) row.push_back(format_number(snap(v, zero)));
    if (rec.projection) {
      const Projection& p = *rec.projection;
      for (double v : targets(p)) row.push_back(format_number(snap(v, zero)));
      for (double v : p.slacks) row.push_back(format_number(snap(v, zero)));
      std::vector<std::string> reference;
      for (std::size_t k = 0; k < r.efficient.size(); ++k) {
        if (p.reference_lambda[k] <= zero) continue;
        reference.push_back(d[r.efficient[k]].name + "=" + format_number(snap(p.reference_lambda[k], zero)));
      }
      row.push_back(join(reference, ";"));
    }
    if (rec.mcrs) {
      std::vector<std::string> members;
      for (std::size_t j : rec.mcrs->members) {
        members.push_back(d[j].name + "=" + format_number(snap(weight_of(r, *rec.mcrs, j), zero)));
      }
      std::vector<std::string> ucrs;
      for (std::size_t j : rec.mcrs->ucrs) ucrs.push_back(d[j].name);
      row.push_back(join(members, ";"));
      row.push_back(join(ucrs, ";"));
    }
    if (rec.label) {
      row.emplace_back(to_string(*rec.label));
      row.push_back(format_number(snap(rec.bounds->w0_upper, zero)));
      row.push_back(rec.bounds->w0_lower ? format_number(snap(*rec.bounds->w0_lower, zero)) : "");
    }
    row.push_back(join(rec.warnings, " | "));
    for (std::string& f : row) f = csv_field(f);
    out << join(row, ",") << '\n';
  }
}

void write_plot_data(std::ostream& out, const AnalysisReport& r) {
  const Dataset& d = r.dataset;
  if (d.num_inputs() != 1 || d.num_outputs() != 1) {
    throw ValidationError("plot data needs exactly one input and one output, got " +
                          std::to_string(d.num_inputs()) + " and " +
                          std::to_string(d.num_outputs()));
  }
  auto x = [&](std::size_t j) { return d[j].inputs[0]; };
  auto y = [&](std::size_t j) { return d[j].outputs[0]; };

  std::vector<std::size_t> frontier(r.efficient.members());
  std::stable_sort(frontier.begin(), frontier.end(), [&](std::size_t a, std::size_t b) {
    return x(a) != x(b) ? x(a) < x(b) : y(a) < y(b);
  });

  out << "kind,name,x,y,target_x,target_y\n";
  for (std::size_t j : frontier) {
    out << "frontier," << csv_field(d[j].name) << ',' << format_number(x(j)) << ','
        << format_number(y(j)) << ",,\n";
  }
  for (std::size_t j = 0; j < d.size(); ++j) {
    out << "observed," << csv_field(d[j].name) << ',' << format_number(x(j)) << ','
        << format_number(y(j)) << ",,\n";
  }
  for (const DmuRecord& rec : r.records) {
    if (!rec.projection || rec.efficiency.efficient) continue;
    const std::size_t j = rec.efficiency.dmu;
    out << "projection," << csv_field(rec.name) << ',' << format_number(x(j)) << ','
        << format_number(y(j)) << ',' << format_number(rec.projection->target_inputs[0]) << ','
        << format_number(rec.projection->target_outputs[0]) << '\n';
  }
}

void emit_plot_data(const AnalysisReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_plot_data(out, report);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace dea
