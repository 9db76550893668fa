// tokenfcm: command-line front end for Token-FCM design risk assessment.
//
// Exit codes: 0 success, 1 parse/validation/configuration error,
// 2 non-convergence.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tokenfcm/analysis.hpp"
#include "tokenfcm/engine.hpp"
#include "tokenfcm/error.hpp"
#include "tokenfcm/model_file.hpp"
#include "tokenfcm/report.hpp"

namespace {

using namespace tokenfcm;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct GlobalFlags {
  double epsilon = 1e-6;
  std::optional<int> max_period;
  std::string threshold = "sigmoid";
};

SteadyStateOptions SteadyOptions(const GlobalFlags& flags, const SimulationConfig& config) {
  SteadyStateOptions opts;
  opts.epsilon = flags.epsilon;
  // The default period limit shrinks to fit short traces; an explicit one is
  // checked as given.
  opts.max_period = flags.max_period.value_or(
      std::min(opts.max_period, MaxPeriodFor(static_cast<std::size_t>(config.step_count()) + 1)));
  return opts;
}

SimulationConfig ConfigFor(const ModelDocument& doc, const GlobalFlags& flags) {
  auto config = DefaultConfig(doc);
  auto kind = ParseThresholdKind(flags.threshold);
  if (!kind) throw ConfigError("unknown threshold '" + flags.threshold + "'");
  config.threshold = *kind;
  return config;
}

std::vector<std::string> Labels(const RiskModel& model) {
  std::vector<std::string> out;
  for (const auto& n : model.nodes()) out.push_back(n.label);
  return out;
}

void WriteOutput(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::vector<double> SteadyValues(const SimulationTrace& trace, const SteadyStateOptions& opts,
                                 const char* what) {
  const auto status = DetectSteadyState(trace, opts);
  if (status.kind == SteadyKind::kNone)
    throw NotConvergedError(std::string(what) + " did not reach a fixed point or cycle");
  return ComputeDrpn(trace, status);
}

int RunInit(const std::string& path) {
  const auto doc = LoadModelFile(path);
  const auto inits = InitializeNodes(doc);
  std::cout << RenderInitialization(doc, inits);
  return kExitOk;
}

int RunValidate(const std::string& path) {
  const auto doc = LoadModelFile(path);
  const auto model = BuildModel(doc);
  const auto report = ValidateModel(model, doc.step);
  if (report.ok()) {
    std::cout << "model OK: " << model.size() << " nodes, " << model.arcs().size()
              << " arcs, step " << FormatValue(doc.step) << " min\n";
    return kExitOk;
  }
  for (const auto& v : report.violations) std::cout << v << '\n';
  return kExitInvalid;
}

int RunSimulate(const std::string& path, const GlobalFlags& flags, std::optional<double> step,
                std::optional<double> horizon, const std::string& trace_path) {
  auto doc = LoadModelFile(path);
  if (step) doc.step = *step;
  if (horizon) doc.horizon = *horizon;
  const auto model = BuildModel(doc);
  const auto config = ConfigFor(doc, flags);
  const auto trace = Simulate(model, model.initial_values(), config);
  const auto labels = Labels(model);
  WriteOutput(EmitTraceCsv(trace, labels), trace_path);

  const auto status = DetectSteadyState(trace, SteadyOptions(flags, config));
  std::cerr << "steady state: " << SteadyKindName(status.kind);
  if (status.kind != SteadyKind::kNone)
    std::cerr << " (period " << status.period << ", from minute " << FormatValue(status.onset)
              << ")";
  std::cerr << '\n';
  return status.kind == SteadyKind::kNone ? kExitNotConverged : kExitOk;
}

int RunAnalyze(const std::string& path, const GlobalFlags& flags, bool independent,
               const std::string& report_path) {
  const auto doc = LoadModelFile(path);
  const auto model = BuildModel(doc);
  const auto config = ConfigFor(doc, flags);
  const auto opts = SteadyOptions(flags, config);
  const auto rpns = model.initial_values();

  const auto trace = Simulate(model, rpns, config);
  const auto drpns = SteadyValues(trace, opts, "simulation");

  std::vector<std::optional<NodeId>> most;
  if (independent) {
    std::vector<NodeId> ids;
    for (const auto& n : model.nodes()) ids.push_back(n.id);
    most = MostImpacted(ImpactMatrix(model, rpns, config, opts), ids);
  }
  const auto table = BuildReport(model.nodes(), rpns, drpns, most);
  WriteOutput(RenderReport(table, std::nullopt, std::nullopt), report_path);
  return kExitOk;
}

int RunCompare(const std::string& path, const GlobalFlags& flags, bool no_delay, bool fmea) {
  if (!no_delay && !fmea) no_delay = fmea = true;
  const auto doc = LoadModelFile(path);
  const auto model = BuildModel(doc);
  const auto config = ConfigFor(doc, flags);
  const auto opts = SteadyOptions(flags, config);

  std::optional<DelayComparison> comparison;
  if (no_delay) {
    const auto with = SteadyValues(Simulate(model, model.initial_values(), config), opts,
                                   "delayed simulation");
    const auto without = SteadyValues(ClassicFcmIterate(model, model.initial_values(), config),
                                      opts, "simulation without delays");
    comparison = DelayComparison{Labels(model), with, without};
  }

  std::optional<FmeaSection> fmea_section;
  if (fmea) {
    FmeaSection section;
    section.result = FmeaHazards(FmeaInputs(doc), FmeaInfluences(doc));
    for (const auto& e : section.result.entries) {
      const auto& node = model.nodes()[model.require_index(e.id)];
      section.labels.push_back(node.label);
      section.names.push_back(node.name);
    }
    fmea_section = std::move(section);
  }
  std::cout << RenderReport(std::nullopt, fmea_section, comparison);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-FCM design risk assessment"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--epsilon", flags.epsilon, "Steady-state tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-period", flags.max_period, "Longest cycle (in steps) to detect")
      ->check(CLI::Range(2, 1000000));
  app.add_option("--threshold", flags.threshold, "Threshold function")
      ->check(CLI::IsMember({"sigmoid", "tanh-unit", "clamp"}));

  std::string model_path;
  auto* init = app.add_subcommand("init", "Print per-node PLTs and defuzzified RPNs");
  init->add_option("model-file", model_path)->required();

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("model-file", model_path)->required();

  std::optional<double> step, horizon;
  std::string trace_path;
  auto* simulate = app.add_subcommand("simulate", "Run the token simulation and emit a trace");
  simulate->add_option("model-file", model_path)->required();
  simulate->add_option("--step", step, "Step size in minutes")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", horizon, "Horizon in minutes")->check(CLI::PositiveNumber);
  simulate->add_option("--trace", trace_path, "Write the trace CSV here instead of stdout");

  bool independent = false;
  std::string report_path;
  auto* analyze = app.add_subcommand("analyze", "RPN, simulation, DRPN and decision table");
  analyze->add_option("model-file", model_path)->required();
  analyze->add_flag("--independent", independent, "Run one independent activation per node");
  analyze->add_option("--report", report_path, "Write the report here instead of stdout");

  bool no_delay = false, fmea = false;
  auto* compare = app.add_subcommand("compare", "Baselines: no-delay FCM and FMEA");
  compare->add_option("model-file", model_path)->required();
  compare->add_flag("--no-delay", no_delay, "Compare against synchronous FCM iteration");
  compare->add_flag("--fmea", fmea, "FMEA hazard indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*init) return RunInit(model_path);
    if (*validate) return RunValidate(model_path);
    if (*simulate) return RunSimulate(model_path, flags, step, horizon, trace_path);
    if (*analyze) return RunAnalyze(model_path, flags, independent, report_path);
    if (*compare) return RunCompare(model_path, flags, no_delay, fmea);
  } catch (const NotConvergedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
