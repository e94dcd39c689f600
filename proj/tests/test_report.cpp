#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dea/error.hpp"
#include "dea/report.hpp"
#include "support/fixtures.hpp"
#include "support/random_data.hpp"

using namespace dea;
using Json = nlohmann::json;

namespace {

RunConfig config_for(const std::string& file, Command command) {
  RunConfig cfg;
  cfg.input = testing::data_path(file);
  cfg.command = command;
  return cfg;
}

std::string json_text(const AnalysisReport& r) {
  std::ostringstream out;
  write_json(out, r, false);
  return out.str();
}

std::string csv_text(const AnalysisReport& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) rows.push_back(split(line, ','));
  return rows;
}

double as_number(const Json& v) {
  if (v.is_string()) {
    return v.get<std::string>() == "+inf" ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
  }
  return v.get<double>();
}

double parse_cell(const std::string& s) {
  if (s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

const Json& dmu_entry(const Json& doc, const std::string& name) {
  for (const Json& item : doc["dmus"]) {
    if (item["name"] == name) return item;
  }
  FAIL("no entry for " << name);
  return doc;
}

}  // namespace

TEST_CASE("numbers are rendered with nine significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0 / 3.0) == "0.666666667");
  CHECK(format_number(8.0 / 3.0) == "2.66666667");
  CHECK(format_number(-1.0 / 3.0) == "-0.333333333");
  CHECK(format_number(1e5) == "100000");
  CHECK(format_number(1.5e-12) == "1.5e-12");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "+inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("exact ties round half to even") {
  // Both values are exact in binary and sit halfway between 9-digit neighbours.
  CHECK(format_number(1234567885.0) == "1.23456788e+09");
  CHECK(format_number(1234567895.0) == "1.2345679e+09");
  CHECK(format_number(1234567875.0) == "1.23456788e+09");
}

TEST_CASE("command coverage") {
  CHECK(parse_command("rts") == Command::Rts);
  CHECK_THROWS_AS(parse_command("frontier"), ValidationError);
  CHECK(includes(Command::Efficiency, Command::Efficiency));
  CHECK_FALSE(includes(Command::Efficiency, Command::Project));
  CHECK(includes(Command::Rts, Command::Project));
  CHECK_FALSE(includes(Command::Rts, Command::Mcrs));
  CHECK_FALSE(includes(Command::Mcrs, Command::Rts));
  CHECK(includes(Command::Report, Command::Mcrs));
  CHECK(includes(Command::Report, Command::Rts));
}

TEST_CASE("report on the eight-DMU example reproduces targets, weights and labels") {
  const AnalysisReport r = run(config_for("eight_units.csv", Command::Report));
  const Json doc = Json::parse(json_text(r));
  CHECK(doc["schema"] == std::string(kReportSchema));
  CHECK(doc["efficient"] == Json({"DMU1", "DMU2", "DMU3", "DMU4"}));
  CHECK(doc["config"]["priority"] == Json({"out:output", "in:input"}));

  struct Expected {
    std::string name;
    double x, y;
    std::vector<std::pair<std::string, double>> mcrs;
    std::string label;
  };
  const std::vector<Expected> cases{
      {"DMU5", 5, 8, {{"DMU4", 1.0}}, "DRS"},
      {"DMU6", 1, 2, {{"DMU1", 1.0}}, "IRS"},
      {"DMU7", 4.0 / 3.0, 3, {{"DMU1", 2.0 / 3.0}, {"DMU2", 1.0 / 3.0}}, "IRS"},
      {"DMU8", 5.0 / 3.0, 4, {{"DMU1", 1.0 / 3.0}, {"DMU2", 2.0 / 3.0}}, "IRS"},
  };
  for (const Expected& e : cases) {
    CAPTURE(e.name);
    const Json& item = dmu_entry(doc, e.name);
    CHECK(item["efficiency"]["efficient"] == false);
    CHECK(as_number(item["projection"]["target"]["in:input"]) == doctest::Approx(e.x).epsilon(1e-8));
    CHECK(as_number(item["projection"]["target"]["out:output"]) == doctest::Approx(e.y).epsilon(1e-8));
    const Json& members = item["mcrs"]["members"];
    REQUIRE(members.size() == e.mcrs.size());
    for (std::size_t k = 0; k < e.mcrs.size(); ++k) {
      CHECK(members[k]["name"] == e.mcrs[k].first);
      CHECK(as_number(members[k]["lambda_max"]) == doctest::Approx(e.mcrs[k].second).epsilon(1e-8));
    }
    CHECK(item["rts"]["label"] == e.label);
  }
}

TEST_CASE("every inefficient DMU has a projection and reference set, every DMU a label") {
  const AnalysisReport r = run(config_for("eight_units.csv", Command::Report));
  REQUIRE(r.records.size() == r.dataset.size());
  for (std::size_t j = 0; j < r.records.size(); ++j) {
    const DmuRecord& rec = r.records[j];
    CHECK(rec.name == r.dataset[j].name);
    CHECK(rec.projection.has_value());
    CHECK(rec.mcrs.has_value());
    CHECK(rec.label.has_value());
  }
}

TEST_CASE("efficiency command on the four-DMU example") {
  const AnalysisReport r = run(config_for("four_units.csv", Command::Efficiency));
  const Json doc = Json::parse(json_text(r));
  CHECK(doc["efficient"] == Json({"A", "B", "C"}));
  CHECK(dmu_entry(doc, "D")["efficiency"]["efficient"] == false);
  CHECK(as_number(dmu_entry(doc, "D")["efficiency"]["theta"]) == doctest::Approx(2.0 / 3.0));
  for (const Json& item : doc["dmus"]) {
    CHECK_FALSE(item.contains("projection"));
    CHECK_FALSE(item.contains("mcrs"));
    CHECK_FALSE(item.contains("rts"));
  }
}

TEST_CASE("each command emits exactly its sections") {
  struct Case {
    Command command;
    bool projection, mcrs, rts;
  };
  for (const Case& c : {Case{Command::Project, true, false, false},
                        Case{Command::Mcrs, true, true, false},
                        Case{Command::Rts, true, false, true},
                        Case{Command::Report, true, true, true}}) {
    CAPTURE(to_string(c.command));
    const Json doc = Json::parse(json_text(run(config_for("four_units.csv", c.command))));
    for (const Json& item : doc["dmus"]) {
      CHECK(item.contains("projection") == c.projection);
      CHECK(item.contains("mcrs") == c.mcrs);
      CHECK(item.contains("rts") == c.rts);
    }
  }
}

TEST_CASE("reports are reproducible and independent of the thread count") {
  RunConfig cfg = config_for("eight_units.csv", Command::Report);
  cfg.threads = 1;
  const std::string serial = json_text(run(cfg));
  CHECK(json_text(run(cfg)) == serial);
  cfg.threads = 4;
  CHECK(json_text(run(cfg)) == serial);
  CHECK(csv_text(run(cfg)) == csv_text(run(cfg)));

  // Timing is the only field that may differ and it lives in one place.
  std::ostringstream with_timing;
  write_json(with_timing, run(cfg));
  Json doc = Json::parse(with_timing.str());
  REQUIRE(doc.contains("timing"));
  doc.erase("timing");
  CHECK(doc == Json::parse(serial));
}

TEST_CASE("random datasets give byte-identical reports across runs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset d = testing::random_dataset(rng, 8, 2, 2);
    RunConfig cfg;
    cfg.input = "random.csv";
    cfg.command = Command::Report;
    cfg.threads = 3;
    const std::string first = json_text(analyze(d, cfg));
    cfg.threads = 1;
    CHECK(json_text(analyze(d, cfg)) == first);
  }
}

TEST_CASE("CSV and JSON carry the same numbers") {
  const AnalysisReport r = run(config_for("eight_units.csv", Command::Report));
  const Json doc = Json::parse(json_text(r));
  const auto rows = csv_rows(csv_text(r));
  REQUIRE(rows.size() == r.dataset.size() + 1);
  const std::vector<std::string>& header = rows[0];
  auto column = [&](const std::string& name) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    FAIL("missing column " << name);
    return std::size_t{0};
  };

  for (std::size_t j = 0; j < r.dataset.size(); ++j) {
    const auto& row = rows[j + 1];
    const Json& item = doc["dmus"][j];
    CAPTURE(row[0]);
    CHECK(row[0] == item["name"]);
    CHECK(parse_cell(row[column("theta")]) == as_number(item["efficiency"]["theta"]));
    for (const std::string label : {"in:input", "out:output"}) {
      CHECK(parse_cell(row[column("bcc_slack:" + label)]) ==
            as_number(item["efficiency"]["slacks"][label]));
      CHECK(parse_cell(row[column("target:" + label)]) ==
            as_number(item["projection"]["target"][label]));
      CHECK(parse_cell(row[column("slack:" + label)]) ==
            as_number(item["projection"]["slacks"][label]));
    }
    const std::vector<std::string> members = split(row[column("mcrs")], ';');
    REQUIRE(members.size() == item["mcrs"]["members"].size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto eq = members[k].find('=');
      CHECK(members[k].substr(0, eq) == item["mcrs"]["members"][k]["name"]);
      CHECK(parse_cell(members[k].substr(eq + 1)) ==
            as_number(item["mcrs"]["members"][k]["lambda_max"]));
    }
    CHECK(row[column("rts")] == item["rts"]["label"]);
    CHECK(parse_cell(row[column("w0_upper")]) == as_number(item["rts"]["w0_upper"]));
    const std::string lower = row[column("w0_lower")];
    if (item["rts"]["w0_lower"].is_null()) {
      CHECK(lower.empty());
    } else {
      CHECK(parse_cell(lower) == as_number(item["rts"]["w0_lower"]));
    }
  }
}

TEST_CASE("plot data for the eight-DMU example") {
  const AnalysisReport r = run(config_for("eight_units.csv", Command::Project));
  std::ostringstream out;
  write_plot_data(out, r);
  const auto rows = csv_rows(out.str());
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == std::vector<std::string>{"kind", "name", "x", "y", "target_x", "target_y"});

  std::vector<std::pair<double, double>> frontier;
  std::size_t observed = 0, arrows = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k][0] == "frontier") frontier.emplace_back(parse_cell(rows[k][2]), parse_cell(rows[k][3]));
    if (rows[k][0] == "observed") ++observed;
    if (rows[k][0] == "projection") ++arrows;
  }
  CHECK(frontier == std::vector<std::pair<double, double>>{{1, 2}, {2, 5}, {3, 6}, {5, 8}});
  CHECK(observed == 8);
  CHECK(arrows == 4);
}

TEST_CASE("plot data for the four-DMU example draws D to (8/3, 4)") {
  const AnalysisReport r = run(config_for("four_units.csv", Command::Project));
  std::ostringstream out;
  write_plot_data(out, r);
  const auto rows = csv_rows(out.str());
  std::vector<std::string> frontier;
  bool arrow = false;
  for (const auto& row : rows) {
    if (row[0] == "frontier") frontier.push_back(row[1]);
    if (row[0] == "projection") {
      arrow = true;
      CHECK(row[1] == "D");
      CHECK(parse_cell(row[4]) == doctest::Approx(8.0 / 3.0).epsilon(1e-8));
      CHECK(parse_cell(row[5]) == doctest::Approx(4.0).epsilon(1e-8));
    }
  }
  CHECK(frontier == std::vector<std::string>{"A", "B", "C"});
  CHECK(arrow);
}

TEST_CASE("plot data for a single efficient DMU is a one-point frontier") {
  const Dataset d({"x"}, {"y"}, {Dmu{"solo", {2.0}, {3.0}}});
  RunConfig cfg;
  cfg.input = "solo.csv";
  cfg.command = Command::Project;
  std::ostringstream out;
  write_plot_data(out, analyze(d, cfg));
  CHECK(out.str() == "kind,name,x,y,target_x,target_y\nfrontier,solo,2,3,,\nobserved,solo,2,3,,\n");
}

TEST_CASE("plot data needs one input and one output") {
  const AnalysisReport r = run(config_for("single.csv", Command::Efficiency));
  std::ostringstream out;
  CHECK_THROWS_AS(write_plot_data(out, r), ValidationError);
}

TEST_CASE("plot data is written to a file") {
  const auto path = std::filesystem::temp_directory_path() / "dea_report_plot_test.csv";
  const AnalysisReport r = run(config_for("four_units.csv", Command::Project));
  emit_plot_data(r, path);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "kind,name,x,y,target_x,target_y");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit_plot_data(r, "/nonexistent-dir/plot.csv"), IoError);
}

TEST_CASE("invalid configurations are rejected") {
  RunConfig cfg = config_for("eight_units.csv", Command::Report);
  cfg.priority = "out:output";
  CHECK_THROWS_AS(run(cfg), ValidationError);
  cfg.priority = "in:input,out:output";
  CHECK_NOTHROW(run(cfg));
  cfg.analysis.solver.big_m = 0.5;
  CHECK_THROWS_AS(run(cfg), ValidationError);
  cfg = config_for("", Command::Report);
  cfg.input.clear();
  CHECK_THROWS_AS(run(cfg), ValidationError);
  CHECK_THROWS_AS(run(config_for("malformed/empty.csv", Command::Report)), ValidationError);
  CHECK_THROWS_AS(run(config_for("missing.csv", Command::Report)), IoError);
}
