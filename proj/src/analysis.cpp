#include "tokenfcm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <sstream>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

std::string_view SteadyKindName(SteadyKind kind) {
  switch (kind) {
    case SteadyKind::kFixed:
      return "fixed";
    case SteadyKind::kCycle:
      return "cycle";
    case SteadyKind::kNone:
      return "none";
  }
  return "none";
}

int MaxPeriodFor(std::size_t rows) { return static_cast<int>(rows / 2); }

namespace {

using Rows = std::vector<std::vector<double>>;

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void CheckOptions(std::size_t rows, const SteadyStateOptions& options) {
  if (rows == 0) throw ConfigError("steady-state detection needs a non-empty trace");
  if (!(options.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (options.fixed_window < 1) throw ConfigError("fixed window must be at least 1 row");
  if (options.max_period > MaxPeriodFor(rows)) {
    std::ostringstream msg;
    msg << "max period " << options.max_period << " exceeds half the trace length ("
        << rows << " rows)";
    throw ConfigError(msg.str());
  }
}

SteadyStateStatus Classify(const Rows& rows, const std::vector<double>& times,
                           const SteadyStateOptions& options) {
  const std::size_t n = rows.size();
  const double eps = options.epsilon;
  SteadyStateStatus status;

  auto finish = [&](SteadyKind kind, int period, std::size_t onset_row) {
    status.kind = kind;
    status.period = period;
    status.onset_row = onset_row;
    status.onset = times.empty() ? 0.0 : times[onset_row];
    return status;
  };

  const auto window = std::min<std::size_t>(n, static_cast<std::size_t>(options.fixed_window));
  const auto& last = rows.back();
  bool fixed = true;
  for (std::size_t k = n - window; k < n && fixed; ++k) fixed = MaxAbsDiff(rows[k], last) <= eps;
  if (fixed) {
    std::size_t onset = n - 1;
    while (onset > 0 && MaxAbsDiff(rows[onset - 1], last) <= eps) --onset;
    return finish(SteadyKind::kFixed, 1, onset);
  }

  for (int p = 2; p <= options.max_period; ++p) {
    const auto period = static_cast<std::size_t>(p);
    bool holds = true;
    for (std::size_t k = n - 2 * period; k < n - period && holds; ++k)
      holds = MaxAbsDiff(rows[k], rows[k + period]) <= eps;
    if (!holds) continue;
    std::size_t onset = n - 2 * period;
    while (onset > 0 && MaxAbsDiff(rows[onset - 1], rows[onset - 1 + period]) <= eps) --onset;
    return finish(SteadyKind::kCycle, p, onset);
  }
  return finish(SteadyKind::kNone, 0, n - 1);
}

}  // namespace

SteadyStateStatus DetectSteadyState(const SimulationTrace& trace,
                                    const SteadyStateOptions& options) {
  CheckOptions(trace.rows(), options);
  return Classify(trace.values, trace.times, options);
}

std::vector<SteadyStateStatus> DetectNodeSteadyStates(const SimulationTrace& trace,
                                                      const SteadyStateOptions& options) {
  CheckOptions(trace.rows(), options);
  std::vector<SteadyStateStatus> out;
  for (std::size_t j = 0; j < trace.columns(); ++j) {
    Rows column;
    column.reserve(trace.rows());
    for (const auto& row : trace.values) column.push_back({row.at(j)});
    out.push_back(Classify(column, trace.times, options));
  }
  return out;
}

std::vector<double> ComputeDrpn(const SimulationTrace& trace, const SteadyStateStatus& status) {
  if (trace.rows() == 0) throw ConfigError("cannot compute DRPN of an empty trace");
  switch (status.kind) {
    case SteadyKind::kNone:
      throw NotConvergedError("trace reached neither a fixed point nor a cycle");
    case SteadyKind::kFixed:
      return trace.values.back();
    case SteadyKind::kCycle:
      break;
  }
  const auto period = static_cast<std::size_t>(status.period);
  if (period < 2 || period > trace.rows())
    throw ConfigError("cycle period does not fit the trace");
  std::vector<double> mean(trace.columns(), 0.0);
  for (std::size_t k = trace.rows() - period; k < trace.rows(); ++k) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += trace.values[k][j];
  }
  for (auto& m : mean) m /= static_cast<double>(period);
  return mean;
}

std::vector<double> IndependentActivation(const RiskModel& model, std::span<const double> rpns,
                                          NodeId focus, const SimulationConfig& config,
                                          const SteadyStateOptions& options) {
  if (rpns.size() != model.size()) throw ArityError("one RPN per node required");
  const std::size_t idx = model.require_index(focus);
  std::vector<double> initial(model.size(), 0.0);
  initial[idx] = rpns[idx];
  const auto trace = Simulate(model, std::move(initial), config);
  const auto status = DetectSteadyState(trace, options);
  if (status.kind == SteadyKind::kNone) {
    throw NotConvergedError("independent activation of node " + std::to_string(focus) +
                            " did not converge");
  }
  return ComputeDrpn(trace, status);
}

std::vector<std::vector<double>> ImpactMatrix(const RiskModel& model,
                                              std::span<const double> rpns,
                                              const SimulationConfig& config,
                                              const SteadyStateOptions& options) {
  if (rpns.size() != model.size()) throw ArityError("one RPN per node required");
  std::vector<std::future<std::vector<double>>> runs;
  runs.reserve(model.size());
  for (const auto& node : model.nodes()) {
    runs.push_back(std::async(std::launch::async, [&, focus = node.id] {
      return IndependentActivation(model, rpns, focus, config, options);
    }));
  }
  std::vector<std::vector<double>> matrix;
  matrix.reserve(runs.size());
  for (auto& run : runs) matrix.push_back(run.get());
  return matrix;
}

std::vector<std::optional<NodeId>> MostImpacted(const std::vector<std::vector<double>>& matrix,
                                                std::span<const NodeId> ids) {
  if (matrix.size() != ids.size()) throw ArityError("impact matrix must have one row per node");
  std::vector<std::optional<NodeId>> out;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != ids.size()) throw ArityError("impact matrix must be square");
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (j == i) continue;
      if (!best || matrix[i][j] > matrix[i][*best] ||
          (matrix[i][j] == matrix[i][*best] && ids[j] < ids[*best]))
        best = j;
    }
    out.push_back(best ? std::optional<NodeId>(ids[*best]) : std::nullopt);
  }
  return out;
}

SimulationTrace ClassicFcmIterate(const RiskModel& model, std::vector<double> initial,
                                  const SimulationConfig& config) {
  config.validate();
  // Delays play no role here; validate the structure with every delay = step.
  std::vector<CausalArc> arcs = model.arcs();
  for (auto& arc : arcs) arc.delay = config.step;
  RequireValid(RiskModel(model.nodes(), arcs), config.step);
  if (initial.size() != model.size()) throw ArityError("one initial value per node required");

  struct Incoming {
    std::size_t source;
    double weight;
  };
  std::vector<std::vector<Incoming>> incoming(model.size());
  std::vector<NodeId> ids;
  for (const auto& node : model.nodes()) ids.push_back(node.id);
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (const auto& arc : AdjacencyOf(model, ids[i]).incoming)
      incoming[i].push_back({model.require_index(arc.source), arc.weight});
  }

  SimulationTrace trace;
  trace.node_ids = ids;
  trace.times.push_back(0.0);
  trace.values.push_back(std::move(initial));
  trace.activations.emplace_back();
  const long steps = config.step_count();
  for (long k = 1; k <= steps; ++k) {
    const auto& prev = trace.values.back();
    std::vector<double> next(prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      double influence = 0.0;
      for (const auto& in : incoming[i]) influence += in.weight * prev[in.source];
      next[i] = Threshold(prev[i] + influence, config.threshold);
    }
    trace.times.push_back(static_cast<double>(k) * config.step);
    trace.values.push_back(std::move(next));
    trace.activations.push_back(ids);
  }
  return trace;
}

FmeaResult FmeaHazards(std::span<const FmeaInput> inputs,
                       std::span<const FmeaInfluence> influences) {
  std::map<NodeId, std::size_t> position;
  FmeaResult result;
  for (const auto& in : inputs) {
    position[in.id] = result.entries.size();
    const double drh = std::exp(in.occurrence + in.severity + in.detection);
    result.entries.push_back(
        {in.id, in.group, in.occurrence, in.severity, in.detection, drh, drh});
  }
  for (const auto& inf : influences) {
    const auto src = position.find(inf.source);
    const auto dst = position.find(inf.target);
    if (src == position.end() || dst == position.end()) {
      std::ostringstream msg;
      msg << "FMEA influence " << inf.source << "->" << inf.target
          << " references an unknown node";
      throw MissingNodeError(msg.str());
    }
    result.entries[dst->second].drh_star += inf.weight * result.entries[src->second].drh;
  }
  for (const auto& entry : result.entries) {
    auto it = std::find_if(result.groups.begin(), result.groups.end(),
                           [&](const auto& g) { return g.group == entry.group; });
    if (it == result.groups.end()) {
      result.groups.push_back({entry.group, entry.drh_star});
    } else {
      it->ph += entry.drh_star;
    }
  }
  return result;
}

namespace {

std::vector<NodeId> RankDescending(std::span<const RiskNode> nodes, std::span<const double> v) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return nodes[a].id < nodes[b].id;
  });
  std::vector<NodeId> out;
  for (auto i : order) out.push_back(nodes[i].id);
  return out;
}

}  // namespace

DecisionTable BuildReport(std::span<const RiskNode> nodes, std::span<const double> rpns,
                          std::span<const double> drpns,
                          std::span<const std::optional<NodeId>> most_impacted) {
  if (rpns.size() != nodes.size() || drpns.size() != nodes.size() ||
      (!most_impacted.empty() && most_impacted.size() != nodes.size()))
    throw ArityError("decision table inputs disagree in length");

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });

  DecisionTable table;
  for (auto i : order) {
    table.rows.push_back({nodes[i].id, nodes[i].label, nodes[i].name, rpns[i], drpns[i],
                          most_impacted.empty() ? std::nullopt : most_impacted[i]});
  }
  table.rpn_ranking = RankDescending(nodes, rpns);
  table.drpn_ranking = RankDescending(nodes, drpns);
  return table;
}

}  // namespace tokenfcm
