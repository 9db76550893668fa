#include "tokenfcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

namespace {

std::string JoinViolations(const std::vector<std::string>& violations) {
  std::string msg = "invalid model";
  for (const auto& v : violations) msg += "\n  " + v;
  return msg;
}

std::string ArcName(const CausalArc& arc) {
  std::ostringstream out;
  out << "arc " << arc.source << "->" << arc.target;
  return out.str();
}

}  // namespace

InvalidModelError::InvalidModelError(std::vector<std::string> violations)
    : Error(JoinViolations(violations)), violations_(std::move(violations)) {}

std::string DefaultLabel(NodeId id) { return "C" + std::to_string(id); }

RiskModel::RiskModel(std::vector<RiskNode> nodes, std::vector<CausalArc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
  for (auto& node : nodes_) {
    if (node.label.empty()) node.label = DefaultLabel(node.id);
  }
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const RiskNode& a, const RiskNode& b) { return a.id < b.id; });
}

std::optional<std::size_t> RiskModel::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const RiskNode& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t RiskModel::require_index(NodeId id) const {
  if (auto idx = index_of(id)) return *idx;
  throw MissingNodeError("unknown node id " + std::to_string(id));
}

std::vector<double> RiskModel::initial_values() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.initial_value);
  return out;
}

std::optional<long> WholeSteps(double duration, double step) {
  if (!(duration > 0.0) || !(step > 0.0) || !std::isfinite(duration)) return std::nullopt;
  const double ratio = duration / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    return std::nullopt;
  return static_cast<long>(rounded);
}

ValidationReport ValidateModel(const RiskModel& model, double step) {
  ValidationReport report;
  auto& v = report.violations;

  if (!(step > 0.0) || !std::isfinite(step)) v.push_back("step must be positive");

  for (std::size_t i = 1; i < model.nodes().size(); ++i) {
    if (model.nodes()[i].id == model.nodes()[i - 1].id)
      v.push_back("duplicate node id " + std::to_string(model.nodes()[i].id));
  }
  for (const auto& node : model.nodes()) {
    if (!std::isfinite(node.initial_value))
      v.push_back("node " + std::to_string(node.id) + ": initial value is not finite");
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& arc : model.arcs()) {
    const std::string name = ArcName(arc);
    if (!model.index_of(arc.source))
      v.push_back(name + ": unknown source node " + std::to_string(arc.source));
    if (!model.index_of(arc.target))
      v.push_back(name + ": unknown target node " + std::to_string(arc.target));
    if (arc.source == arc.target) v.push_back(name + ": self-loop");
    if (!seen.insert({arc.source, arc.target}).second)
      v.push_back(name + ": duplicate arc");
    if (!(arc.weight >= -1.0 && arc.weight <= 1.0))
      v.push_back(name + ": weight outside [-1, 1]");
    if (!(arc.delay > 0.0)) {
      v.push_back(name + ": delay must be positive");
    } else if (step > 0.0 && !WholeSteps(arc.delay, step)) {
      v.push_back(name + ": delay not multiple of step");
    }
  }
  return report;
}

void RequireValid(const RiskModel& model, double step) {
  auto report = ValidateModel(model, step);
  if (!report.ok()) throw InvalidModelError(std::move(report.violations));
}

Adjacency AdjacencyOf(const RiskModel& model, NodeId id) {
  model.require_index(id);
  Adjacency adj;
  for (const auto& arc : model.arcs()) {
    if (arc.target == id) adj.incoming.push_back(arc);
    if (arc.source == id) adj.outgoing.push_back(arc);
  }
  std::stable_sort(adj.incoming.begin(), adj.incoming.end(),
                   [](const auto& a, const auto& b) { return a.source < b.source; });
  std::stable_sort(adj.outgoing.begin(), adj.outgoing.end(),
                   [](const auto& a, const auto& b) { return a.target < b.target; });
  return adj;
}

}  // namespace tokenfcm
