// Risk graph: nodes with initial risk values and weighted, delayed causal arcs.
#ifndef TOKENFCM_MODEL_HPP_
#define TOKENFCM_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tokenfcm {

using NodeId = int;

struct RiskNode {
  NodeId id = 0;
  std::string label;  ///< short tag such as "DR2"; DefaultLabel(id) if empty
  std::string name;
  double initial_value = 0.0;
};

/// "C<id>", the conventional concept tag.
std::string DefaultLabel(NodeId id);

/// Causal influence of `source` on `target`; delay is in minutes.
struct CausalArc {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 0.0;
  double delay = 0.0;
};

/// Immutable risk graph. Nodes are kept sorted by id; node positions in the
/// sorted order index every value vector and trace column.
///
/// Construction never rejects a structurally broken graph; ValidateModel()
/// reports the problems and the simulators refuse to run such a model.
class RiskModel {
 public:
  RiskModel() = default;
  RiskModel(std::vector<RiskNode> nodes, std::vector<CausalArc> arcs);

  const std::vector<RiskNode>& nodes() const { return nodes_; }
  const std::vector<CausalArc>& arcs() const { return arcs_; }
  std::size_t size() const { return nodes_.size(); }

  /// Position of `id` in nodes(), if present.
  std::optional<std::size_t> index_of(NodeId id) const;
  /// Throws MissingNodeError for an unknown id.
  std::size_t require_index(NodeId id) const;

  std::vector<double> initial_values() const;

 private:
  std::vector<RiskNode> nodes_;
  std::vector<CausalArc> arcs_;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks everything the token engine relies on: unique node ids, known arc
/// endpoints, no self-loops or parallel arcs, weights in [-1, 1], and
/// positive delays that are whole multiples of `step`.
ValidationReport ValidateModel(const RiskModel& model, double step);

/// Throws InvalidModelError when ValidateModel() reports anything.
void RequireValid(const RiskModel& model, double step);

struct Adjacency {
  std::vector<CausalArc> incoming;  ///< sorted by source id
  std::vector<CausalArc> outgoing;  ///< sorted by target id
};

/// Throws MissingNodeError for an unknown id.
Adjacency AdjacencyOf(const RiskModel& model, NodeId id);

/// Number of whole steps in `duration`, or nullopt if it is not a positive
/// integer multiple of `step`.
std::optional<long> WholeSteps(double duration, double step);

}  // namespace tokenfcm

#endif  // TOKENFCM_MODEL_HPP_
