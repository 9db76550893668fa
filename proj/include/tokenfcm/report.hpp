// Text outputs: trace CSV, initialization listing, and the plain-text report.
#ifndef TOKENFCM_REPORT_HPP_
#define TOKENFCM_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokenfcm/analysis.hpp"
#include "tokenfcm/engine.hpp"
#include "tokenfcm/linguistic.hpp"
#include "tokenfcm/model_file.hpp"

namespace tokenfcm {

/// Six significant digits, shortest form ("-0.1118", "0.5", "50").
std::string FormatValue(double v);

/// Header "time,<labels>", then one row per trace row.
std::string EmitTraceCsv(const SimulationTrace& trace, std::span<const std::string> labels);

/// Inverse of EmitTraceCsv() up to print precision. Node ids are assigned
/// 1..n in column order. Throws ParseError on malformed input.
SimulationTrace ParseTraceCsv(std::string_view text);

/// "{s_-2(0.15), s_0(0.5)}" with six-digit indices and probabilities.
std::string FormatPlt(const Plt& plt);

std::string RenderInitialization(const ModelDocument& doc,
                                 std::span<const NodeInitialization> inits);

/// Steady values of the same nodes with and without arc delays.
struct DelayComparison {
  std::vector<std::string> labels;
  std::vector<double> with_delay;
  std::vector<double> without_delay;
};

struct FmeaSection {
  FmeaResult result;
  std::vector<std::string> labels;  ///< parallel to result.entries
  std::vector<std::string> names;   ///< parallel to result.entries
};

/// Aligned plain-text tables. Sections whose input is absent or empty are
/// left out.
std::string RenderReport(const std::optional<DecisionTable>& table,
                         const std::optional<FmeaSection>& fmea,
                         const std::optional<DelayComparison>& comparison);

}  // namespace tokenfcm

#endif  // TOKENFCM_REPORT_HPP_
