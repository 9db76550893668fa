// Model file format and conversion from a parsed document to domain objects.
//
// The file is a YAML document; docs/model-format.md gives the grammar.
#ifndef TOKENFCM_MODEL_FILE_HPP_
#define TOKENFCM_MODEL_FILE_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tokenfcm/analysis.hpp"
#include "tokenfcm/linguistic.hpp"
#include "tokenfcm/model.hpp"

namespace tokenfcm {

struct TallyTriple {
  std::vector<int> occurrence;
  std::vector<int> severity;
  std::vector<int> detection;

  friend bool operator==(const TallyTriple&, const TallyTriple&) = default;
};

/// Exactly one of `initial` and `tallies` is set in a parsed document.
struct NodeSpec {
  NodeId id = 0;
  std::string label;
  std::string name;
  std::optional<double> initial;
  std::optional<TallyTriple> tallies;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct FmeaGroupSpec {
  std::string label;
  std::vector<NodeId> nodes;

  friend bool operator==(const FmeaGroupSpec&, const FmeaGroupSpec&) = default;
};

struct ModelDocument {
  int half_range = 2;
  std::optional<RiskIndexWeights> weights;
  double step = 1.0;
  double horizon = 1.0;
  std::vector<NodeSpec> nodes;
  std::vector<CausalArc> arcs;
  std::vector<FmeaGroupSpec> fmea_groups;
  /// Replaces the graph arcs as the FMEA propagation list when present.
  std::optional<std::vector<FmeaInfluence>> fmea_influences;

  bool operator==(const ModelDocument& other) const;
};

/// Throws ParseError listing every problem found, with 1-based lines.
ModelDocument ParseModelText(std::string_view text);
/// Reads and parses a file; an unreadable file is reported as a ParseError.
ModelDocument LoadModelFile(const std::filesystem::path& path);

/// Canonical text form. Doubles use the shortest representation that
/// reads back to the same value, so parse(serialize(doc)) == doc.
std::string SerializeModel(const ModelDocument& doc);

/// PLTs and scalar RPN of one node.
struct NodeInitialization {
  NodeId id = 0;
  /// Occurrence, severity, detection; absent for direct initial values.
  std::optional<std::array<Plt, 3>> index_plts;
  std::optional<Plt> rpn_plt;
  double rpn = 0.0;
};

/// Resolves every node's initial value in document order.
std::vector<NodeInitialization> InitializeNodes(const ModelDocument& doc);

/// Graph with initial values taken from InitializeNodes().
RiskModel BuildModel(const ModelDocument& doc);

SimulationConfig DefaultConfig(const ModelDocument& doc);

/// Defuzzified O/S/D of each grouped node, in group order. Throws
/// ConfigError when a grouped node has no tallies.
std::vector<FmeaInput> FmeaInputs(const ModelDocument& doc);

/// Document override, or the graph arcs.
std::vector<FmeaInfluence> FmeaInfluences(const ModelDocument& doc);

}  // namespace tokenfcm

#endif  // TOKENFCM_MODEL_FILE_HPP_
