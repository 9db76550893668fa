#include "tokenfcm/model_file.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

namespace {

std::string JoinIssues(const std::vector<ParseIssue>& issues) {
  std::string msg = "model file rejected";
  for (const auto& issue : issues) {
    msg += "\n  ";
    if (issue.line > 0) msg += "line " + std::to_string(issue.line) + ": ";
    msg += issue.message;
  }
  return msg;
}

}  // namespace

ParseError::ParseError(std::vector<ParseIssue> issues)
    : Error(JoinIssues(issues)), issues_(std::move(issues)) {}

bool ModelDocument::operator==(const ModelDocument& other) const {
  auto arc_eq = [](const CausalArc& a, const CausalArc& b) {
    return a.source == b.source && a.target == b.target && a.weight == b.weight &&
           a.delay == b.delay;
  };
  auto inf_eq = [](const FmeaInfluence& a, const FmeaInfluence& b) {
    return a.source == b.source && a.target == b.target && a.weight == b.weight;
  };
  if (half_range != other.half_range || weights != other.weights || step != other.step ||
      horizon != other.horizon || nodes != other.nodes || fmea_groups != other.fmea_groups)
    return false;
  if (!std::equal(arcs.begin(), arcs.end(), other.arcs.begin(), other.arcs.end(), arc_eq))
    return false;
  if (fmea_influences.has_value() != other.fmea_influences.has_value()) return false;
  return !fmea_influences || std::equal(fmea_influences->begin(), fmea_influences->end(),
                                        other.fmea_influences->begin(),
                                        other.fmea_influences->end(), inf_eq);
}

namespace {

class DocumentReader {
 public:
  ModelDocument Read(std::string_view text) {
    YAML::Node root;
    try {
      root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
      Fail(e.mark.line + 1, e.msg);
      throw ParseError(issues_);
    }
    if (!root.IsMap()) {
      Fail(0, "model file must be a mapping of sections");
      throw ParseError(issues_);
    }
    CheckKeys(root, {"scale", "weights", "simulation", "nodes", "arcs", "fmea"});

    ModelDocument doc;
    if (auto scale = root["scale"]) {
      if (auto v = Int(scale, "scale")) {
        if (*v < 1)
          Fail(Line(scale), "scale must be at least 1");
        else
          doc.half_range = *v;
      }
    }
    if (auto weights = root["weights"]) ReadWeights(weights, doc);
    if (auto sim = root["simulation"]) ReadSimulation(sim, doc);
    ReadNodes(root["nodes"], doc, Line(root));
    if (auto arcs = root["arcs"]) ReadArcs(arcs, doc);
    if (auto fmea = root["fmea"]) ReadFmea(fmea, doc);

    if (!issues_.empty()) throw ParseError(issues_);
    return doc;
  }

 private:
  static int Line(const YAML::Node& node) { return node.Mark().line + 1; }

  void Fail(int line, std::string message) { issues_.push_back({line, std::move(message)}); }

  void CheckKeys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        Fail(Line(kv.first), "unknown key '" + key + "'");
    }
  }

  template <typename T>
  std::optional<T> Scalar(const YAML::Node& node, const std::string& what) {
    if (!node || !node.IsScalar()) {
      Fail(node ? Line(node) : 0, what + " must be a scalar");
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      Fail(Line(node), what + " has an invalid value '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  std::optional<int> Int(const YAML::Node& node, const std::string& what) {
    return Scalar<int>(node, what);
  }
  std::optional<double> Real(const YAML::Node& node, const std::string& what) {
    return Scalar<double>(node, what);
  }
  std::optional<std::string> Text(const YAML::Node& node, const std::string& what) {
    return Scalar<std::string>(node, what);
  }

  std::optional<double> Required(const YAML::Node& map, const char* key, const std::string& ctx) {
    if (!map[key]) {
      Fail(Line(map), ctx + ": missing '" + key + "'");
      return std::nullopt;
    }
    return Real(map[key], ctx + " " + key);
  }

  std::optional<int> RequiredInt(const YAML::Node& map, const char* key, const std::string& ctx) {
    if (!map[key]) {
      Fail(Line(map), ctx + ": missing '" + key + "'");
      return std::nullopt;
    }
    return Int(map[key], ctx + " " + key);
  }

  void ReadWeights(const YAML::Node& node, ModelDocument& doc) {
    if (!node.IsMap()) return Fail(Line(node), "weights must be a mapping");
    CheckKeys(node, {"occurrence", "severity", "detection"});
    auto o = Required(node, "occurrence", "weights");
    auto s = Required(node, "severity", "weights");
    auto d = Required(node, "detection", "weights");
    if (!o || !s || !d) return;
    RiskIndexWeights w{*o, *s, *d};
    try {
      w.validate();
      doc.weights = w;
    } catch (const InvalidWeightsError& e) {
      Fail(Line(node), e.what());
    }
  }

  void ReadSimulation(const YAML::Node& node, ModelDocument& doc) {
    if (!node.IsMap()) return Fail(Line(node), "simulation must be a mapping");
    CheckKeys(node, {"step", "horizon"});
    if (node["step"]) {
      if (auto v = Real(node["step"], "simulation step")) doc.step = *v;
    }
    if (node["horizon"]) {
      if (auto v = Real(node["horizon"], "simulation horizon")) doc.horizon = *v;
    }
    if (!(doc.step > 0.0)) Fail(Line(node), "simulation step must be positive");
    if (!(doc.horizon >= doc.step)) Fail(Line(node), "simulation horizon must be at least one step");
  }

  std::optional<std::vector<int>> Counts(const YAML::Node& node, const std::string& what,
                                         int grades) {
    if (!node || !node.IsSequence()) {
      Fail(node ? Line(node) : 0, what + " must be a list of expert counts");
      return std::nullopt;
    }
    std::vector<int> counts;
    for (const auto& item : node) {
      auto v = Int(item, what);
      if (!v) return std::nullopt;
      if (*v < 0) {
        Fail(Line(item), what + " has a negative count");
        return std::nullopt;
      }
      counts.push_back(*v);
    }
    if (static_cast<int>(counts.size()) != grades) {
      Fail(Line(node), what + " needs " + std::to_string(grades) + " counts, got " +
                           std::to_string(counts.size()));
      return std::nullopt;
    }
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) {
      Fail(Line(node), what + " has zero experts");
      return std::nullopt;
    }
    return counts;
  }

  void ReadNodes(const YAML::Node& node, ModelDocument& doc, int root_line) {
    if (!node || (node.IsSequence() && node.size() == 0) || node.IsNull()) {
      return Fail(node ? Line(node) : root_line, "model requires at least one node");
    }
    if (!node.IsSequence()) return Fail(Line(node), "nodes must be a list");
    const int grades = 2 * doc.half_range + 1;
    for (const auto& item : node) {
      if (!item.IsMap()) {
        Fail(Line(item), "node entry must be a mapping");
        continue;
      }
      CheckKeys(item, {"id", "label", "name", "initial", "tallies"});
      NodeSpec spec;
      auto id = RequiredInt(item, "id", "node");
      if (!id) continue;
      spec.id = *id;
      const std::string ctx = "node " + std::to_string(spec.id);
      if (item["label"]) spec.label = Text(item["label"], ctx + " label").value_or("");
      if (item["name"]) spec.name = Text(item["name"], ctx + " name").value_or("");

      const bool has_initial = static_cast<bool>(item["initial"]);
      const bool has_tallies = static_cast<bool>(item["tallies"]);
      if (has_initial && has_tallies) {
        Fail(Line(item), ctx + ": ambiguous initialization (both initial and tallies given)");
        continue;
      }
      if (!has_initial && !has_tallies) {
        Fail(Line(item), ctx + ": needs either an initial value or tallies");
        continue;
      }
      if (has_initial) {
        spec.initial = Real(item["initial"], ctx + " initial");
        if (!spec.initial) continue;
      } else {
        const auto& t = item["tallies"];
        if (!t.IsMap()) {
          Fail(Line(t), ctx + ": tallies must be a mapping");
          continue;
        }
        CheckKeys(t, {"occurrence", "severity", "detection"});
        auto o = Counts(t["occurrence"], ctx + " occurrence tally", grades);
        auto s = Counts(t["severity"], ctx + " severity tally", grades);
        auto d = Counts(t["detection"], ctx + " detection tally", grades);
        if (!o || !s || !d) continue;
        spec.tallies = TallyTriple{*o, *s, *d};
        if (!doc.weights && !weights_reported_) {
          weights_reported_ = true;
          Fail(Line(item), "tallies require a weights section");
        }
      }
      doc.nodes.push_back(std::move(spec));
    }
  }

  void ReadArcs(const YAML::Node& node, ModelDocument& doc) {
    if (node.IsNull()) return;
    if (!node.IsSequence()) return Fail(Line(node), "arcs must be a list");
    for (const auto& item : node) {
      if (!item.IsMap()) {
        Fail(Line(item), "arc entry must be a mapping");
        continue;
      }
      CheckKeys(item, {"source", "target", "weight", "delay"});
      auto src = RequiredInt(item, "source", "arc");
      auto dst = RequiredInt(item, "target", "arc");
      auto w = Required(item, "weight", "arc");
      auto d = Required(item, "delay", "arc");
      if (src && dst && w && d) doc.arcs.push_back({*src, *dst, *w, *d});
    }
  }

  void ReadFmea(const YAML::Node& node, ModelDocument& doc) {
    if (!node.IsMap()) return Fail(Line(node), "fmea must be a mapping");
    CheckKeys(node, {"groups", "influences"});
    std::set<NodeId> known;
    for (const auto& n : doc.nodes) known.insert(n.id);

    if (auto groups = node["groups"]) {
      if (!groups.IsSequence()) return Fail(Line(groups), "fmea groups must be a list");
      for (const auto& g : groups) {
        if (!g.IsMap()) {
          Fail(Line(g), "fmea group must be a mapping");
          continue;
        }
        CheckKeys(g, {"label", "nodes"});
        FmeaGroupSpec spec;
        if (!g["label"]) {
          Fail(Line(g), "fmea group: missing 'label'");
          continue;
        }
        spec.label = Text(g["label"], "fmea group label").value_or("");
        if (!g["nodes"] || !g["nodes"].IsSequence()) {
          Fail(Line(g), "fmea group '" + spec.label + "' needs a node list");
          continue;
        }
        for (const auto& id_node : g["nodes"]) {
          auto id = Int(id_node, "fmea group node");
          if (!id) continue;
          if (!known.contains(*id))
            Fail(Line(id_node), "fmea group '" + spec.label + "' references unknown node " +
                                    std::to_string(*id));
          spec.nodes.push_back(*id);
        }
        doc.fmea_groups.push_back(std::move(spec));
      }
    }
    if (auto influences = node["influences"]) {
      if (!influences.IsSequence()) return Fail(Line(influences), "fmea influences must be a list");
      std::vector<FmeaInfluence> list;
      for (const auto& item : influences) {
        if (!item.IsMap()) {
          Fail(Line(item), "fmea influence must be a mapping");
          continue;
        }
        CheckKeys(item, {"source", "target", "weight"});
        auto src = RequiredInt(item, "source", "fmea influence");
        auto dst = RequiredInt(item, "target", "fmea influence");
        auto w = Required(item, "weight", "fmea influence");
        if (!src || !dst || !w) continue;
        for (NodeId id : {*src, *dst}) {
          if (!known.contains(id))
            Fail(Line(item), "fmea influence references unknown node " + std::to_string(id));
        }
        list.push_back({*src, *dst, *w});
      }
      doc.fmea_influences = std::move(list);
    }
  }

  std::vector<ParseIssue> issues_;
  bool weights_reported_ = false;
};

std::string Num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string Quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string IntList(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "]";
}

}  // namespace

ModelDocument ParseModelText(std::string_view text) { return DocumentReader{}.Read(text); }

ModelDocument LoadModelFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError({{0, "cannot read " + path.string()}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModelText(buffer.str());
}

std::string SerializeModel(const ModelDocument& doc) {
  std::ostringstream out;
  out << "scale: " << doc.half_range << "\n";
  if (doc.weights) {
    out << "weights: {occurrence: " << Num(doc.weights->occurrence)
        << ", severity: " << Num(doc.weights->severity)
        << ", detection: " << Num(doc.weights->detection) << "}\n";
  }
  out << "simulation: {step: " << Num(doc.step) << ", horizon: " << Num(doc.horizon) << "}\n";
  out << "nodes:\n";
  for (const auto& n : doc.nodes) {
    out << "  - id: " << n.id << "\n";
    if (!n.label.empty()) out << "    label: " << Quoted(n.label) << "\n";
    if (!n.name.empty()) out << "    name: " << Quoted(n.name) << "\n";
    if (n.initial) out << "    initial: " << Num(*n.initial) << "\n";
    if (n.tallies) {
      out << "    tallies:\n"
          << "      occurrence: " << IntList(n.tallies->occurrence) << "\n"
          << "      severity: " << IntList(n.tallies->severity) << "\n"
          << "      detection: " << IntList(n.tallies->detection) << "\n";
    }
  }
  if (!doc.arcs.empty()) {
    out << "arcs:\n";
    for (const auto& a : doc.arcs) {
      out << "  - {source: " << a.source << ", target: " << a.target
          << ", weight: " << Num(a.weight) << ", delay: " << Num(a.delay) << "}\n";
    }
  }
  if (!doc.fmea_groups.empty() || doc.fmea_influences) {
    out << "fmea:\n";
    if (!doc.fmea_groups.empty()) {
      out << "  groups:\n";
      for (const auto& g : doc.fmea_groups)
        out << "    - {label: " << Quoted(g.label) << ", nodes: " << IntList(g.nodes) << "}\n";
    }
    if (doc.fmea_influences) {
      out << "  influences:" << (doc.fmea_influences->empty() ? " []" : "") << "\n";
      for (const auto& inf : *doc.fmea_influences) {
        out << "    - {source: " << inf.source << ", target: " << inf.target
            << ", weight: " << Num(inf.weight) << "}\n";
      }
    }
  }
  return out.str();
}

std::vector<NodeInitialization> InitializeNodes(const ModelDocument& doc) {
  const LinguisticScale scale(doc.half_range);
  std::vector<NodeInitialization> out;
  for (const auto& spec : doc.nodes) {
    NodeInitialization init;
    init.id = spec.id;
    if (spec.initial) {
      init.rpn = *spec.initial;
    } else if (spec.tallies) {
      if (!doc.weights) throw ConfigError("tallies require risk-index weights");
      const auto& w = *doc.weights;
      w.validate();
      std::array<Plt, 3> plts = {
          TallyToPlt(ExpertTally(spec.tallies->occurrence, scale), scale),
          TallyToPlt(ExpertTally(spec.tallies->severity, scale), scale),
          TallyToPlt(ExpertTally(spec.tallies->detection, scale), scale)};
      const double weights[] = {w.occurrence, w.severity, w.detection};
      init.rpn_plt = PltWeightedProduct(plts, weights, scale);
      init.rpn = PltDefuzzify(*init.rpn_plt);
      init.index_plts = std::move(plts);
    } else {
      throw ConfigError("node " + std::to_string(spec.id) + " has no initialization");
    }
    out.push_back(std::move(init));
  }
  return out;
}

RiskModel BuildModel(const ModelDocument& doc) {
  const auto inits = InitializeNodes(doc);
  std::vector<RiskNode> nodes;
  for (std::size_t i = 0; i < doc.nodes.size(); ++i)
    nodes.push_back({doc.nodes[i].id, doc.nodes[i].label, doc.nodes[i].name, inits[i].rpn});
  return RiskModel(std::move(nodes), doc.arcs);
}

SimulationConfig DefaultConfig(const ModelDocument& doc) {
  SimulationConfig config;
  config.step = doc.step;
  config.horizon = doc.horizon;
  return config;
}

std::vector<FmeaInput> FmeaInputs(const ModelDocument& doc) {
  const LinguisticScale scale(doc.half_range);
  auto defuzz = [&](const std::vector<int>& counts) {
    return PltDefuzzify(TallyToPlt(ExpertTally(counts, scale), scale));
  };
  std::vector<FmeaInput> out;
  for (const auto& group : doc.fmea_groups) {
    for (NodeId id : group.nodes) {
      auto it = std::find_if(doc.nodes.begin(), doc.nodes.end(),
                             [&](const NodeSpec& n) { return n.id == id; });
      if (it == doc.nodes.end())
        throw MissingNodeError("FMEA group references unknown node " + std::to_string(id));
      if (!it->tallies)
        throw ConfigError("FMEA needs expert tallies for node " + std::to_string(id));
      out.push_back({id, group.label, defuzz(it->tallies->occurrence),
                     defuzz(it->tallies->severity), defuzz(it->tallies->detection)});
    }
  }
  return out;
}

std::vector<FmeaInfluence> FmeaInfluences(const ModelDocument& doc) {
  if (doc.fmea_influences) return *doc.fmea_influences;
  std::vector<FmeaInfluence> out;
  for (const auto& arc : doc.arcs) out.push_back({arc.source, arc.target, arc.weight});
  return out;
}

}  // namespace tokenfcm
