#include "tokenfcm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

std::string_view ThresholdName(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::kSigmoid:
      return "sigmoid";
    case ThresholdKind::kTanhUnit:
      return "tanh-unit";
    case ThresholdKind::kClamp:
      return "clamp";
  }
  return "sigmoid";
}

std::optional<ThresholdKind> ParseThresholdKind(std::string_view name) {
  for (auto kind : {ThresholdKind::kSigmoid, ThresholdKind::kTanhUnit, ThresholdKind::kClamp}) {
    if (ThresholdName(kind) == name) return kind;
  }
  return std::nullopt;
}

double Threshold(double x, ThresholdKind kind) {
  if (!std::isfinite(x)) throw NumericDomainError("threshold input is not finite");
  switch (kind) {
    case ThresholdKind::kSigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ThresholdKind::kTanhUnit:
      return 0.5 * (1.0 + std::tanh(x));
    case ThresholdKind::kClamp:
      return std::clamp(x, 0.0, 1.0);
  }
  return x;
}

double ActivateUpdate(double current, std::span<const Token> arrivals, ThresholdKind kind) {
  if (arrivals.empty()) throw ContractViolation("node activated without arriving tokens");
  double influence = 0.0;
  for (const auto& token : arrivals) influence += token.arc_weight * token.node_value;
  return Threshold(current + influence, kind);
}

void SimulationConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step must be positive");
  if (!(horizon >= step) || !WholeSteps(horizon, step)) {
    std::ostringstream msg;
    msg << "horizon " << horizon << " must be a positive multiple of step " << step;
    throw ConfigError(msg.str());
  }
}

long SimulationConfig::step_count() const { return WholeSteps(horizon, step).value_or(0); }

std::vector<double> SimulationTrace::column(std::size_t node_index) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row.at(node_index));
  return out;
}

TokenSimulator::TokenSimulator(const RiskModel& model, std::vector<double> initial,
                               SimulationConfig config)
    : config_(config), values_(std::move(initial)) {
  config_.validate();
  RequireValid(model, config_.step);
  if (values_.size() != model.size()) {
    std::ostringstream msg;
    msg << "initial vector has " << values_.size() << " entries for " << model.size()
        << " nodes";
    throw ArityError(msg.str());
  }

  ids_.reserve(model.size());
  for (const auto& node : model.nodes()) ids_.push_back(node.id);
  outgoing_.resize(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (const auto& arc : AdjacencyOf(model, ids_[i]).outgoing) {
      outgoing_[i].push_back(
          {model.require_index(arc.target), arc.weight, *WholeSteps(arc.delay, config_.step)});
    }
  }
  if (config_.initial_tokens) {
    active_.assign(model.size(), false);
    for (NodeId id : *config_.initial_tokens) active_[model.require_index(id)] = true;
  } else {
    active_.assign(model.size(), true);
  }
}

void TokenSimulator::Step() {
  if (done()) throw ContractViolation("simulation already reached its horizon");
  const std::size_t n = values_.size();

  // Emission.
  for (std::size_t i = 0; i < n; ++i) {
    if (!active_[i]) continue;
    for (const auto& arc : outgoing_[i]) {
      in_flight_.push_back({next_token_id_++, ids_[i], values_[i], arc.steps, arc.weight,
                            ids_[arc.target]});
    }
    active_[i] = false;
  }

  // Delay countdown and arrival.
  std::vector<std::vector<Token>> arrivals(n);
  std::erase_if(in_flight_, [&](Token& token) {
    if (--token.remaining_steps > 0) return false;
    const auto target = std::lower_bound(ids_.begin(), ids_.end(), token.target_id);
    arrivals[static_cast<std::size_t>(target - ids_.begin())].push_back(token);
    return true;
  });

  // Update; arrivals are folded in source-id order.
  last_activated_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (arrivals[i].empty()) continue;
    std::stable_sort(arrivals[i].begin(), arrivals[i].end(),
                     [](const Token& a, const Token& b) { return a.node_id < b.node_id; });
    values_[i] = ActivateUpdate(values_[i], arrivals[i], config_.threshold);
    active_[i] = true;
    last_activated_.push_back(ids_[i]);
  }

  ++steps_taken_;
}

SimulationTrace Simulate(const RiskModel& model, std::vector<double> initial,
                         const SimulationConfig& config) {
  TokenSimulator sim(model, std::move(initial), config);
  SimulationTrace trace;
  for (const auto& node : model.nodes()) trace.node_ids.push_back(node.id);
  const auto rows = static_cast<std::size_t>(config.step_count()) + 1;
  trace.times.reserve(rows);
  trace.values.reserve(rows);
  trace.activations.reserve(rows);

  auto record = [&] {
    trace.times.push_back(sim.time());
    trace.values.emplace_back(sim.values().begin(), sim.values().end());
    trace.activations.emplace_back(sim.last_activated().begin(), sim.last_activated().end());
  };
  record();
  while (!sim.done()) {
    sim.Step();
    record();
  }
  return trace;
}

}  // namespace tokenfcm
