#include "chase_escape/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "chase_escape/errors.hpp"
#include "chase_escape/process.hpp"

namespace chase {

void RateParams::validate() const {
  require(std::isfinite(lambda_i) && lambda_i >= 0.0, "lambda_i must be finite and non-negative");
  require(std::isfinite(lambda_w) && lambda_w > 0.0, "lambda_w must be finite and positive");
}

void StopPolicy::validate() const {
  require(!(max_time < 0.0) && !std::isnan(max_time), "max_time must be non-negative");
  const bool any_finite = max_events != std::numeric_limits<std::uint64_t>::max() ||
                          max_infected != std::numeric_limits<std::uint64_t>::max() || std::isfinite(max_time);
  require(any_finite, "stop policy needs at least one finite cap");
}

std::string_view to_string(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::Extinction: return "EXTINCTION";
    case OutcomeClass::LocalSurvival: return "LOCAL_SURVIVAL";
    case OutcomeClass::GlobalProxy: return "GLOBAL_PROXY";
  }
  return "?";
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Absorbed: return "ABSORBED";
    case StopReason::Boundary: return "BOUNDARY";
    case StopReason::Cap: return "CAP";
  }
  return "?";
}

std::string_view to_string(Transition t) { return t == Transition::Infection ? "S->I" : "I->W"; }

OutcomeClass classify(StopReason reason, long long infected_count) {
  if (reason != StopReason::Absorbed) return OutcomeClass::GlobalProxy;
  if (infected_count < 0) throw std::logic_error("classify: negative infected count");
  return infected_count == 0 ? OutcomeClass::Extinction : OutcomeClass::LocalSurvival;
}

namespace {

// Adds the censoring and displacement hooks the engine needs.
struct GilbertView {
  const GilbertGraph& graph;

  std::size_t node_count() const { return graph.node_count(); }
  std::span<const NodeId> neighbors(NodeId v) const { return graph.neighbors(v); }
  bool censors(NodeId v) const { return graph.touches_boundary(v); }
  double displacement(NodeId v) const {
    const auto& c = graph.config();
    return box_distance(c.box(), c.position(v), c.position(c.origin()));
  }
};

}  // namespace

std::vector<NodeState> initial_states(const GilbertGraph& graph) {
  const auto& config = graph.config();
  std::vector<NodeState> states(graph.node_count());
  for (NodeId v = 0; v < states.size(); ++v) {
    states[v] = config.mark(v) == Mark::WhiteKnight ? NodeState::WhiteKnight : NodeState::Susceptible;
  }
  states[config.origin()] = NodeState::Infected;
  return states;
}

DynamicState init_state(const GilbertGraph& graph, RateParams params) {
  GilbertView view{graph};
  return process::initialize(view, initial_states(graph), params);
}

EventRecord step(DynamicState& state, const GilbertGraph& graph, Rng& rng) {
  GilbertView view{graph};
  return process::step(state, view, rng);
}

bool verify_state(const DynamicState& state, const GilbertGraph& graph) {
  return process::verify(state, GilbertView{graph});
}

SimOutcome run(const GilbertGraph& graph, RateParams params, StopPolicy policy, Rng& rng,
               std::vector<EventRecord>* trajectory, DynamicState* final_state) {
  GilbertView view{graph};
  DynamicState state = process::initialize(view, initial_states(graph), params);
  SimOutcome out = process::run(view, state, policy, rng, trajectory);
  if (final_state) *final_state = std::move(state);
  return out;
}

SimOutcome run(const GilbertGraph& graph, RateParams params, StopPolicy policy, Rng& rng,
               std::vector<EventRecord>* trajectory) {
  return run(graph, params, policy, rng, trajectory, nullptr);
}

}  // namespace chase
