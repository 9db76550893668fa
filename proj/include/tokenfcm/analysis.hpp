// Post-processing of simulation traces and the comparison baselines.
#ifndef TOKENFCM_ANALYSIS_HPP_
#define TOKENFCM_ANALYSIS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tokenfcm/engine.hpp"
#include "tokenfcm/model.hpp"

namespace tokenfcm {

enum class SteadyKind { kFixed, kCycle, kNone };

std::string_view SteadyKindName(SteadyKind kind);

struct SteadyStateStatus {
  SteadyKind kind = SteadyKind::kNone;
  int period = 0;             ///< 1 for fixed, >= 2 for cycle, 0 for none
  std::size_t onset_row = 0;  ///< first row from which the pattern holds
  double onset = 0.0;         ///< time of onset_row
};

struct SteadyStateOptions {
  double epsilon = 1e-6;
  int max_period = 20;
  /// Trailing rows that must agree for a fixed point.
  int fixed_window = 3;
};

/// Largest max_period that DetectSteadyState() accepts for `rows` rows.
int MaxPeriodFor(std::size_t rows);

/// Classifies the tail of the full trace vector.
///
/// Fixed when the last fixed_window rows lie within epsilon (max-norm) of the
/// final row. Otherwise a cycle with the smallest period p in
/// [2, max_period] whose final 2p rows satisfy row(k) ~ row(k + p). Otherwise
/// none. Throws ConfigError for an empty trace, epsilon <= 0, or
/// max_period > rows / 2.
SteadyStateStatus DetectSteadyState(const SimulationTrace& trace,
                                    const SteadyStateOptions& options = {});

/// Same classification applied to each column separately.
std::vector<SteadyStateStatus> DetectNodeSteadyStates(const SimulationTrace& trace,
                                                      const SteadyStateOptions& options = {});

/// Final row for a fixed point; per-node mean over the last full period for
/// a cycle. Throws NotConvergedError for SteadyKind::kNone.
std::vector<double> ComputeDrpn(const SimulationTrace& trace, const SteadyStateStatus& status);

/// Simulates from (0, ..., rpns[focus], ..., 0) and returns the DRPN vector.
std::vector<double> IndependentActivation(const RiskModel& model, std::span<const double> rpns,
                                          NodeId focus, const SimulationConfig& config,
                                          const SteadyStateOptions& options = {});

/// One IndependentActivation() row per node in id order. Runs are executed
/// concurrently; the result does not depend on completion order.
std::vector<std::vector<double>> ImpactMatrix(const RiskModel& model,
                                              std::span<const double> rpns,
                                              const SimulationConfig& config,
                                              const SteadyStateOptions& options = {});

/// For each focus row i, the id j != i with the largest entry; ties go to
/// the smaller id. Empty for a one-node model.
std::vector<std::optional<NodeId>> MostImpacted(const std::vector<std::vector<double>>& matrix,
                                                std::span<const NodeId> ids);

/// Synchronous FCM iteration C(k+1) = f(C(k) + W^T C(k)) ignoring delays.
/// Influences are summed in source-id order.
SimulationTrace ClassicFcmIterate(const RiskModel& model, std::vector<double> initial,
                                  const SimulationConfig& config);

struct FmeaInput {
  NodeId id = 0;
  std::string group;
  double occurrence = 0.0;
  double severity = 0.0;
  double detection = 0.0;
};

/// Propagation of `source`'s hazard into `target`.
struct FmeaInfluence {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 0.0;
};

struct FmeaEntry {
  NodeId id = 0;
  std::string group;
  double occurrence = 0.0;
  double severity = 0.0;
  double detection = 0.0;
  double drh = 0.0;       ///< e^(O + S + D)
  double drh_star = 0.0;  ///< drh + sum of weight * incoming drh
};

struct FmeaGroupHazard {
  std::string group;
  double ph = 0.0;  ///< sum of member drh_star
};

struct FmeaResult {
  std::vector<FmeaEntry> entries;      ///< input order
  std::vector<FmeaGroupHazard> groups; ///< order of first appearance
};

/// Throws MissingNodeError when an influence names an unknown node.
FmeaResult FmeaHazards(std::span<const FmeaInput> inputs,
                       std::span<const FmeaInfluence> influences);

struct DecisionRow {
  NodeId id = 0;
  std::string label;
  std::string name;
  double rpn = 0.0;
  double drpn = 0.0;
  std::optional<NodeId> most_impacted;
};

struct DecisionTable {
  std::vector<DecisionRow> rows;     ///< ascending id
  std::vector<NodeId> rpn_ranking;   ///< descending rpn, ties by id
  std::vector<NodeId> drpn_ranking;  ///< descending drpn, ties by id
};

/// `most_impacted` may be empty when no impact matrix was computed.
/// Throws ArityError when the vectors disagree in length.
DecisionTable BuildReport(std::span<const RiskNode> nodes, std::span<const double> rpns,
                          std::span<const double> drpns,
                          std::span<const std::optional<NodeId>> most_impacted);

}  // namespace tokenfcm

#endif  // TOKENFCM_ANALYSIS_HPP_
