#include "dea/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

#include "dea/error.hpp"

namespace dea {
namespace {

constexpr std::string_view kInputPrefix = "in:";
constexpr std::string_view kOutputPrefix = "out:";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  std::string_view text = cell;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ValidationError("non-numeric cell '" + std::string(cell) + "' at line " +
                              std::to_string(row) + ", column " + std::to_string(col),
                          row, col);
  }
  if (value < 0.0) {
    throw ValidationError("negative value " + std::string(cell) + " at line " +
                              std::to_string(row) + ", column " + std::to_string(col),
                          row, col);
  }
  return value == 0.0 ? 0.0 : value;
}

bool all_zero(const Dmu& d) {
  auto zero = [](double v) { return v == 0.0; };
  return std::all_of(d.inputs.begin(), d.inputs.end(), zero) &&
         std::all_of(d.outputs.begin(), d.outputs.end(), zero);
}

void write_number(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

Dataset::Dataset(std::vector<std::string> input_names, std::vector<std::string> output_names,
                 std::vector<Dmu> dmus)
    : input_names_(std::move(input_names)),
      output_names_(std::move(output_names)),
      dmus_(std::move(dmus)) {
  if (input_names_.empty() || output_names_.empty()) {
    throw ValidationError("a dataset needs at least one input and one output");
  }
  if (dmus_.empty()) throw ValidationError("a dataset needs at least one DMU");
  std::unordered_set<std::string> names;
  for (std::size_t j = 0; j < dmus_.size(); ++j) {
    const Dmu& d = dmus_[j];
    if (d.name.empty()) throw ValidationError("DMU " + std::to_string(j + 1) + " has no name");
    if (!names.insert(d.name).second) throw ValidationError("duplicate DMU name '" + d.name + "'");
    if (d.inputs.size() != num_inputs() || d.outputs.size() != num_outputs()) {
      throw ValidationError("DMU '" + d.name + "' does not match the dataset dimensions");
    }
    for (double v : d.inputs) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("DMU '" + d.name + "' has an invalid input");
    }
    for (double v : d.outputs) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("DMU '" + d.name + "' has an invalid output");
    }
    if (all_zero(d)) throw ValidationError("DMU '" + d.name + "' has only zero entries");
  }
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t j = 0; j < dmus_.size(); ++j) {
    if (dmus_[j].name == name) return j;
  }
  return std::nullopt;
}

std::string Dataset::slack_label(std::size_t k) const {
  if (k < num_inputs()) return std::string(kInputPrefix) + input_names_[k];
  return std::string(kOutputPrefix) + output_names_.at(k - num_inputs());
}

Dataset Dataset::with_appended(Dmu dmu) const {
  std::vector<Dmu> rows = dmus_;
  rows.push_back(std::move(dmu));
  return Dataset(input_names_, output_names_, std::move(rows));
}

Dataset Dataset::permuted(std::span<const std::size_t> order) const {
  std::vector<std::size_t> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  std::vector<std::size_t> identity(size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  if (check != identity) throw ValidationError("row order is not a permutation");
  std::vector<Dmu> rows;
  rows.reserve(size());
  for (std::size_t k : order) rows.push_back(dmus_[k]);
  return Dataset(input_names_, output_names_, std::move(rows));
}

Dataset load_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> inputs, outputs;
  std::size_t columns = 0;
  bool have_header = false;
  std::vector<Dmu> dmus;
  std::unordered_set<std::string> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto cells = split(view);

    if (!have_header) {
      if (cells[0] != "dmu") {
        throw ValidationError("malformed header: first column must be 'dmu'", line_no, 1);
      }
      std::set<std::string_view> in_names, out_names;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        const std::string_view cell = cells[c];
        const bool is_in = cell.starts_with(kInputPrefix);
        const bool is_out = cell.starts_with(kOutputPrefix);
        const std::string_view name = is_in    ? cell.substr(kInputPrefix.size())
                                      : is_out ? cell.substr(kOutputPrefix.size())
                                               : std::string_view{};
        if ((!is_in && !is_out) || trim(name).empty()) {
          throw ValidationError("malformed header cell '" + std::string(cell) +
                                    "': expected in:<name> or out:<name>",
                                line_no, c + 1);
        }
        if (is_in && !outputs.empty()) {
          throw ValidationError("malformed header: input columns must precede output columns",
                                line_no, c + 1);
        }
        auto& names = is_in ? in_names : out_names;
        if (!names.insert(name).second) {
          throw ValidationError("malformed header: duplicate column '" + std::string(cell) + "'",
                                line_no, c + 1);
        }
        (is_in ? inputs : outputs).emplace_back(name);
      }
      if (inputs.empty() || outputs.empty()) {
        throw ValidationError("malformed header: need at least one in: and one out: column",
                              line_no, 1);
      }
      columns = cells.size();
      have_header = true;
      continue;
    }

    if (cells.size() != columns) {
      throw ValidationError("ragged row: expected " + std::to_string(columns) + " cells, found " +
                                std::to_string(cells.size()),
                            line_no, std::min(cells.size(), columns) + 1);
    }
    Dmu dmu;
    dmu.name = std::string(cells[0]);
    if (dmu.name.empty()) throw ValidationError("empty DMU name", line_no, 1);
    if (!seen.insert(dmu.name).second) {
      throw ValidationError("duplicate DMU name '" + dmu.name + "'", line_no, 1);
    }
    for (std::size_t c = 1; c < columns; ++c) {
      const double v = parse_cell(cells[c], line_no, c + 1);
      (c <= inputs.size() ? dmu.inputs : dmu.outputs).push_back(v);
    }
    if (all_zero(dmu)) {
      throw ValidationError("DMU '" + dmu.name + "' has only zero entries", line_no, 2);
    }
    dmus.push_back(std::move(dmu));
  }
  if (in.bad()) throw IoError("read error while loading the dataset");
  if (!have_header) throw ValidationError("empty input: no header line", line_no + 1, 1);
  if (dmus.empty()) throw ValidationError("no DMU rows after the header", line_no + 1, 1);
  return Dataset(std::move(inputs), std::move(outputs), std::move(dmus));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return load_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "dmu";
  for (const auto& n : dataset.input_names()) out << ',' << kInputPrefix << n;
  for (const auto& n : dataset.output_names()) out << ',' << kOutputPrefix << n;
  out << '\n';
  for (const Dmu& d : dataset.dmus()) {
    out << d.name;
    for (double v : d.inputs) {
      out << ',';
      write_number(out, v);
    }
    for (double v : d.outputs) {
      out << ',';
      write_number(out, v);
    }
    out << '\n';
  }
}

PriorityRanking::PriorityRanking(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t k : order_) {
    if (k >= order_.size() || seen[k]) {
      throw ValidationError("priority ranking is not a permutation of the slack labels");
    }
    seen[k] = true;
  }
}

PriorityRanking default_priority(std::size_t m, std::size_t s) {
  if (m == 0 || s == 0) throw ValidationError("priority needs at least one input and one output");
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < s; ++r) order.push_back(m + r);
  for (std::size_t i = 0; i < m; ++i) order.push_back(i);
  return PriorityRanking(std::move(order));
}

PriorityRanking parse_priority(std::string_view spec, const Dataset& dataset) {
  if (trim(spec) == "default") {
    return default_priority(dataset.num_inputs(), dataset.num_outputs());
  }
  std::vector<std::size_t> order;
  std::vector<bool> used(dataset.num_slacks(), false);
  for (std::string_view label : split(spec)) {
    std::optional<std::size_t> index;
    for (std::size_t k = 0; k < dataset.num_slacks(); ++k) {
      if (dataset.slack_label(k) == label) index = k;
    }
    if (!index) throw ValidationError("unknown slack label '" + std::string(label) + "' in priority");
    if (used[*index]) {
      throw ValidationError("slack label '" + std::string(label) + "' repeated in priority");
    }
    used[*index] = true;
    order.push_back(*index);
  }
  if (order.size() != dataset.num_slacks()) {
    throw ValidationError("priority must rank all " + std::to_string(dataset.num_slacks()) +
                          " slack labels");
  }
  return PriorityRanking(std::move(order));
}

}  // namespace dea
