#include "tokenfcm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

std::string FormatValue(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string EmitTraceCsv(const SimulationTrace& trace, std::span<const std::string> labels) {
  if (labels.size() != trace.columns()) throw ArityError("one label per trace column required");
  std::ostringstream out;
  out << "time";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t k = 0; k < trace.rows(); ++k) {
    out << FormatValue(trace.times[k]);
    for (double v : trace.values[k]) out << ',' << FormatValue(v);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

SimulationTrace ParseTraceCsv(std::string_view text) {
  std::vector<ParseIssue> issues;
  SimulationTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = SplitCsvLine(line);
    if (line_no == 1) {
      if (cells.empty() || cells[0] != "time") {
        issues.push_back({1, "trace CSV must start with a 'time' column"});
        break;
      }
      width = cells.size();
      for (std::size_t j = 1; j < width; ++j) trace.node_ids.push_back(static_cast<NodeId>(j));
      continue;
    }
    if (cells.size() != width) {
      issues.push_back({line_no, "expected " + std::to_string(width) + " cells"});
      continue;
    }
    std::vector<double> numbers;
    for (const auto& cell : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        issues.push_back({line_no, "invalid number '" + cell + "'"});
        break;
      }
      numbers.push_back(v);
    }
    if (numbers.size() != width) continue;
    trace.times.push_back(numbers[0]);
    trace.values.emplace_back(numbers.begin() + 1, numbers.end());
    trace.activations.emplace_back();
  }
  if (line_no == 0) issues.push_back({0, "empty trace CSV"});
  if (!issues.empty()) throw ParseError(std::move(issues));
  return trace;
}

std::string FormatPlt(const Plt& plt) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : plt.terms()) {
    if (!first) out += ", ";
    first = false;
    out += "s_" + FormatValue(t.index) + "(" + FormatValue(t.probability) + ")";
  }
  return out + "}";
}

namespace {

using Table = std::vector<std::vector<std::string>>;

void WriteTable(std::ostream& out, const Table& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  auto write_row = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += " | ";
      line += row[j];
      if (j + 1 < row.size()) line.append(width[j] - row[j].size(), ' ');
    }
    out << line << '\n';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    write_row(rows[i]);
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      total += 3 * (width.empty() ? 0 : width.size() - 1);
      out << std::string(total, '-') << '\n';
    }
  }
}

}  // namespace

std::string RenderInitialization(const ModelDocument& doc,
                                 std::span<const NodeInitialization> inits) {
  std::ostringstream out;
  out << "Linguistic scale: s_-" << doc.half_range << " .. s_" << doc.half_range << "\n";
  if (doc.weights) {
    out << "Index weights: O=" << FormatValue(doc.weights->occurrence)
        << " S=" << FormatValue(doc.weights->severity)
        << " D=" << FormatValue(doc.weights->detection) << "\n";
  }
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const auto& spec = doc.nodes.at(i);
    const auto& init = inits[i];
    const std::string label = spec.label.empty() ? DefaultLabel(spec.id) : spec.label;
    out << "\n" << label;
    if (!spec.name.empty()) out << " (" << spec.name << ")";
    out << "\n";
    if (init.index_plts) {
      out << "  C_O = " << FormatPlt((*init.index_plts)[0]) << "\n"
          << "  C_S = " << FormatPlt((*init.index_plts)[1]) << "\n"
          << "  C_D = " << FormatPlt((*init.index_plts)[2]) << "\n"
          << "  RPN PLT = " << FormatPlt(*init.rpn_plt) << "\n";
    } else {
      out << "  direct initial value\n";
    }
    out << "  RPN = " << FormatValue(init.rpn) << "\n";
  }
  return out.str();
}

std::string RenderReport(const std::optional<DecisionTable>& table,
                         const std::optional<FmeaSection>& fmea,
                         const std::optional<DelayComparison>& comparison) {
  std::ostringstream out;
  bool need_gap = false;
  auto gap = [&] {
    if (need_gap) out << '\n';
    need_gap = true;
  };

  if (table) {
    gap();
    std::map<NodeId, std::string> label_of;
    for (const auto& row : table->rows) label_of[row.id] = row.label;

    out << "Design risk analysis\n";
    Table rows = {{"No.", "Design risk", "RPN", "DRPN", "Most impacted"}};
    for (const auto& row : table->rows) {
      rows.push_back({row.label, row.name, FormatValue(row.rpn), FormatValue(row.drpn),
                      row.most_impacted ? label_of[*row.most_impacted] : "-"});
    }
    WriteTable(out, rows);

    auto ranking = [&](const std::vector<NodeId>& ids) {
      std::string s;
      for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " > " : "") + label_of[ids[i]];
      return s;
    };
    out << "\nRPN ranking:  " << ranking(table->rpn_ranking) << '\n';
    out << "DRPN ranking: " << ranking(table->drpn_ranking) << '\n';
  }

  if (fmea && !fmea->result.entries.empty()) {
    gap();
    out << "FMEA hazard indices\n";
    Table rows = {{"No.", "Function", "Design risk", "O", "S", "D", "DRH", "DRH*"}};
    for (std::size_t i = 0; i < fmea->result.entries.size(); ++i) {
      const auto& e = fmea->result.entries[i];
      rows.push_back({fmea->labels.at(i), e.group, fmea->names.at(i), FormatValue(e.occurrence),
                      FormatValue(e.severity), FormatValue(e.detection), FormatValue(e.drh),
                      FormatValue(e.drh_star)});
    }
    WriteTable(out, rows);
    out << '\n';
    Table groups = {{"Function", "PH"}};
    for (const auto& g : fmea->result.groups) groups.push_back({g.group, FormatValue(g.ph)});
    WriteTable(out, groups);
  }

  if (comparison) {
    gap();
    out << "Steady state with and without time delays\n";
    Table rows = {{"No.", "With delays", "Without delays"}};
    for (std::size_t i = 0; i < comparison->labels.size(); ++i) {
      rows.push_back({comparison->labels[i], FormatValue(comparison->with_delay.at(i)),
                      FormatValue(comparison->without_delay.at(i))});
    }
    WriteTable(out, rows);
  }
  return out.str();
}

}  // namespace tokenfcm
