// Fixed-step token scheduler for fuzzy cognitive maps with delayed arcs.
//
// Every step runs four phases in order:
//   1. nodes activated in the previous step emit one token per outgoing arc
//      carrying a snapshot of their value, then go inactive; at step 0 these
//      are the nodes holding the initial tokens (all nodes by default);
//   2. every in-flight token advances by one step; tokens whose delay has
//      elapsed arrive and activate their target;
//   3. every activated node folds all of this step's arrivals into a single
//      update  A <- f(A + sum w * v);
//   4. the clock advances by one step.
// A token emitted at step k on an arc with delay d therefore contributes to
// the row recorded at time (k + d/t) * t.
#ifndef TOKENFCM_ENGINE_HPP_
#define TOKENFCM_ENGINE_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokenfcm/model.hpp"

namespace tokenfcm {

enum class ThresholdKind {
  kSigmoid,   ///< 1 / (1 + e^-x)
  kTanhUnit,  ///< (1 + tanh x) / 2
  kClamp,     ///< min(max(x, 0), 1)
};

std::string_view ThresholdName(ThresholdKind kind);
std::optional<ThresholdKind> ParseThresholdKind(std::string_view name);

/// Bounding function f. Throws NumericDomainError for non-finite input.
double Threshold(double x, ThresholdKind kind = ThresholdKind::kSigmoid);

struct Token {
  long token_id = 0;
  NodeId node_id = 0;        ///< source node
  double node_value = 0.0;   ///< source value at emission; never refreshed
  long remaining_steps = 0;  ///< whole steps until arrival
  double arc_weight = 0.0;
  NodeId target_id = 0;

  double arc_time_delay(double step) const { return static_cast<double>(remaining_steps) * step; }
};

/// f(current + sum of weight * value over `arrivals`), summed in the given
/// order. Throws ContractViolation when `arrivals` is empty.
double ActivateUpdate(double current, std::span<const Token> arrivals,
                      ThresholdKind kind = ThresholdKind::kSigmoid);

struct SimulationConfig {
  double step = 1.0;     ///< minutes
  double horizon = 1.0;  ///< minutes
  ThresholdKind threshold = ThresholdKind::kSigmoid;
  /// Nodes holding a token at time 0; every node when unset.
  std::optional<std::vector<NodeId>> initial_tokens;

  /// Throws ConfigError unless step > 0 and horizon is a whole multiple.
  void validate() const;
  long step_count() const;
};

/// Node values over time. Row k holds the values at time k * step; row 0 is
/// the raw initial vector with no threshold applied.
struct SimulationTrace {
  std::vector<NodeId> node_ids;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  /// Ids of the nodes updated to produce each row; row 0 is empty.
  std::vector<std::vector<NodeId>> activations;

  std::size_t rows() const { return values.size(); }
  std::size_t columns() const { return node_ids.size(); }
  std::vector<double> column(std::size_t node_index) const;
};

/// Step-by-step executor. Holds its own copy of the graph structure, so the
/// source model may be discarded after construction.
class TokenSimulator {
 public:
  /// Throws InvalidModelError, ArityError or ConfigError.
  TokenSimulator(const RiskModel& model, std::vector<double> initial,
                 SimulationConfig config);

  /// Runs one full step. Throws ContractViolation past the horizon.
  void Step();
  bool done() const { return steps_taken_ >= config_.step_count(); }

  long steps_taken() const { return steps_taken_; }
  double time() const { return static_cast<double>(steps_taken_) * config_.step; }
  std::span<const double> values() const { return values_; }
  std::span<const Token> in_flight() const { return in_flight_; }
  /// Nodes updated during the most recent step, ascending id.
  std::span<const NodeId> last_activated() const { return last_activated_; }

 private:
  struct OutArc {
    std::size_t target;
    double weight;
    long steps;
  };

  SimulationConfig config_;
  std::vector<NodeId> ids_;
  std::vector<std::vector<OutArc>> outgoing_;
  std::vector<double> values_;
  std::vector<bool> active_;
  std::vector<Token> in_flight_;
  std::vector<NodeId> last_activated_;
  long steps_taken_ = 0;
  long next_token_id_ = 1;
};

/// Runs the model from `initial` until exactly config.horizon.
SimulationTrace Simulate(const RiskModel& model, std::vector<double> initial,
                         const SimulationConfig& config);

}  // namespace tokenfcm

#endif  // TOKENFCM_ENGINE_HPP_
