#include "tokenfcm/model_file.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "tokenfcm/error.hpp"

namespace tokenfcm {
namespace {

using testing::DataPath;

std::vector<ParseIssue> IssuesOf(std::string_view text) {
  try {
    ParseModelText(text);
  } catch (const ParseError& e) {
    return e.issues();
  }
  return {};
}

bool HasIssue(const std::vector<ParseIssue>& issues, const std::string& needle, int line = -1) {
  return std::any_of(issues.begin(), issues.end(), [&](const ParseIssue& i) {
    return i.message.find(needle) != std::string::npos && (line < 0 || i.line == line);
  });
}

TEST(ParseModelTextTest, MinimalDocument) {
  const auto doc = ParseModelText(R"(
simulation: {step: 5, horizon: 10}
nodes:
  - {id: 1, initial: 0.5}
  - {id: 2, initial: 0.6, label: "X"}
arcs:
  - {source: 2, target: 1, weight: 0.4, delay: 5}
)");
  EXPECT_EQ(doc.half_range, 2);
  EXPECT_FALSE(doc.weights);
  EXPECT_EQ(doc.step, 5);
  ASSERT_EQ(doc.nodes.size(), 2u);
  EXPECT_EQ(doc.nodes[1].label, "X");
  EXPECT_EQ(doc.nodes[1].initial, 0.6);
  ASSERT_EQ(doc.arcs.size(), 1u);
  EXPECT_EQ(doc.arcs[0].delay, 5);

  const auto model = BuildModel(doc);
  EXPECT_EQ(model.initial_values(), (std::vector<double>{0.5, 0.6}));
  EXPECT_EQ(model.nodes()[0].label, "C1");
}

TEST(ParseModelTextTest, EmptyNodeList) {
  EXPECT_TRUE(HasIssue(IssuesOf("nodes: []\n"), "model requires at least one node"));
  EXPECT_TRUE(HasIssue(IssuesOf("arcs: []\n"), "model requires at least one node"));
}

TEST(ParseModelTextTest, AmbiguousInitialization) {
  const auto issues = IssuesOf(R"(weights: {occurrence: 0.5, severity: 0.3, detection: 0.2}
nodes:
  - id: 1
    initial: 0.3
    tallies:
      occurrence: [1, 0, 0, 0, 0]
      severity: [1, 0, 0, 0, 0]
      detection: [1, 0, 0, 0, 0]
)");
  EXPECT_TRUE(HasIssue(issues, "ambiguous initialization", 3));
}

TEST(ParseModelTextTest, CollectsIssuesWithLines) {
  const auto issues = IssuesOf(R"(scale: 2
colour: red
nodes:
  - {id: 1, initial: abc}
  - id: 2
    tallies:
      occurrence: [1, 2, 3]
      severity: [0, 0, 0, 0, 0]
      detection: [1, 0, 0, 0, 0]
arcs:
  - {source: 1, target: 2, weight: 0.5}
)");
  EXPECT_TRUE(HasIssue(issues, "unknown key 'colour'", 2));
  EXPECT_TRUE(HasIssue(issues, "invalid value 'abc'", 4));
  EXPECT_TRUE(HasIssue(issues, "needs 5 counts, got 3", 7));
  EXPECT_TRUE(HasIssue(issues, "zero experts", 8));
  EXPECT_TRUE(HasIssue(issues, "missing 'delay'", 11));
}

TEST(ParseModelTextTest, SyntaxAndShapeErrors) {
  EXPECT_FALSE(IssuesOf("nodes: [\n").empty());
  EXPECT_TRUE(HasIssue(IssuesOf("- 1\n- 2\n"), "mapping of sections"));
  EXPECT_TRUE(HasIssue(IssuesOf("weights: {occurrence: 0.5, severity: 0.5, detection: 0.5}\n"
                                "nodes: [{id: 1, initial: 0}]\n"),
                       "weights"));
  EXPECT_TRUE(HasIssue(IssuesOf("nodes: [{id: 1, tallies: {occurrence: [1,0,0,0,0], "
                                "severity: [1,0,0,0,0], detection: [1,0,0,0,0]}}]\n"),
                       "tallies require a weights section"));
  EXPECT_TRUE(HasIssue(IssuesOf("nodes: [{id: 1, initial: 0}]\n"
                                "fmea: {groups: [{label: G, nodes: [1, 4]}]}\n"),
                       "unknown node 4"));
}

TEST(LoadModelFileTest, MissingFile) {
  EXPECT_THROW(LoadModelFile(DataPath("does_not_exist.yaml")), ParseError);
}

TEST(LoadModelFileTest, DieselModel) {
  const auto doc = LoadModelFile(DataPath("diesel.yaml"));
  EXPECT_EQ(doc.nodes.size(), 6u);
  EXPECT_EQ(doc.arcs.size(), 12u);
  EXPECT_EQ(doc.step, 2);
  EXPECT_EQ(doc.horizon, 50);
  ASSERT_TRUE(doc.weights);
  EXPECT_EQ(*doc.weights, (RiskIndexWeights{0.5, 0.35, 0.15}));
  ASSERT_EQ(doc.fmea_groups.size(), 2u);
  EXPECT_EQ(doc.fmea_groups[0].nodes, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_TRUE(ValidateModel(BuildModel(doc), doc.step).ok());
}

TEST(InitializeNodesTest, DieselRpnsMatchEnumeration) {
  const auto inits = InitializeNodes(LoadModelFile(DataPath("diesel.yaml")));
  // Frozen from the brute-force enumeration oracle.
  const double expected[] = {-0.20878695451005225, 0.0709126009322788,  -1.5028895526457353,
                             -1.7065464511971993,  -1.2795344334327314, -1.309132873158103};
  ASSERT_EQ(inits.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(inits[i].rpn, expected[i], 1e-12) << "node " << inits[i].id;
    ASSERT_TRUE(inits[i].index_plts);
    ASSERT_TRUE(inits[i].rpn_plt);
  }
}

TEST(FmeaInputsTest, DefuzzifiedIndices) {
  const auto inputs = FmeaInputs(LoadModelFile(DataPath("diesel.yaml")));
  ASSERT_EQ(inputs.size(), 6u);
  EXPECT_EQ(inputs[0].id, 1);
  EXPECT_EQ(inputs[0].group, "Fuel supply");
  EXPECT_NEAR(inputs[0].occurrence, -0.4, 1e-12);
  EXPECT_NEAR(inputs[0].severity, 0.5, 1e-12);
  EXPECT_NEAR(inputs[0].detection, 0.75, 1e-12);
  EXPECT_EQ(inputs[3].id, 5);
  EXPECT_EQ(inputs[3].group, "Transmission");
}

TEST(FmeaInfluencesTest, DefaultsToGraphArcs) {
  auto doc = ParseModelText("nodes: [{id: 1, initial: 0}, {id: 2, initial: 0}]\n"
                            "arcs: [{source: 1, target: 2, weight: 0.3, delay: 1}]\n");
  const auto list = FmeaInfluences(doc);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].weight, 0.3);
  doc.fmea_influences = std::vector<FmeaInfluence>{};
  EXPECT_TRUE(FmeaInfluences(doc).empty());
}

TEST(SerializeModelTest, DieselRoundTrip) {
  for (const char* name : {"diesel.yaml", "diesel_initial_rpn.yaml"}) {
    const auto doc = LoadModelFile(DataPath(name));
    const auto text = SerializeModel(doc);
    EXPECT_EQ(ParseModelText(text), doc) << name;
    EXPECT_EQ(SerializeModel(ParseModelText(text)), text) << name;
  }
}

TEST(SerializeModelTest, RandomRoundTrip) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> value(-2.0, 2.0), weight(-1.0, 1.0);
  std::uniform_int_distribution<int> count(0, 6);
  for (int trial = 0; trial < 100; ++trial) {
    ModelDocument doc;
    doc.half_range = std::uniform_int_distribution<int>(1, 3)(rng);
    const int grades = 2 * doc.half_range + 1;
    doc.weights = RiskIndexWeights{0.2, 0.3, 0.5};
    doc.step = 0.1 * std::uniform_int_distribution<int>(1, 30)(rng);
    doc.horizon = doc.step * 17;
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 1; i <= n; ++i) {
      NodeSpec spec{i, "N" + std::to_string(i), "node \"" + std::to_string(i) + "\"", {}, {}};
      if (i % 2) {
        spec.initial = value(rng);
      } else {
        TallyTriple t;
        for (auto* v : {&t.occurrence, &t.severity, &t.detection}) {
          for (int g = 0; g < grades; ++g) v->push_back(count(rng));
          (*v)[0] += 1;
        }
        spec.tallies = t;
      }
      doc.nodes.push_back(spec);
    }
    for (int s = 1; s <= n; ++s) {
      for (int t = 1; t <= n; ++t) {
        if (s != t && count(rng) < 2) doc.arcs.push_back({s, t, weight(rng), doc.step * 3});
      }
    }
    doc.fmea_groups.push_back({"all", {1}});
    if (trial % 2) doc.fmea_influences = std::vector<FmeaInfluence>{{1, n, weight(rng)}};

    const auto text = SerializeModel(doc);
    EXPECT_EQ(ParseModelText(text), doc) << text;
  }
}

}  // namespace
}  // namespace tokenfcm
