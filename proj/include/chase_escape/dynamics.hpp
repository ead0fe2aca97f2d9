#pragma once

// Chase-escape dynamics: susceptible nodes are infected at rate
// lambda_i * #(infected neighbours), infected nodes are patched at rate
// lambda_w * #(white-knight neighbours). Simulated by the direct Gillespie
// method with per-node reaction counts kept incrementally.

#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chase_escape/geometry.hpp"
#include "chase_escape/random.hpp"

namespace chase {

enum class NodeState : std::uint8_t { Susceptible, Infected, WhiteKnight };

struct RateParams {
  double lambda_i = 1.0;
  double lambda_w = 1.0;

  void validate() const;
};

struct StopPolicy {
  std::uint64_t max_events = 100'000'000;
  std::uint64_t max_infected = std::numeric_limits<std::uint64_t>::max();
  double max_time = std::numeric_limits<double>::infinity();
  bool boundary_censoring = true;

  void validate() const;
};

enum class OutcomeClass { Extinction, LocalSurvival, GlobalProxy };
enum class StopReason { Absorbed, Boundary, Cap };
enum class Transition { Infection, Patch };

std::string_view to_string(OutcomeClass c);
std::string_view to_string(StopReason r);
std::string_view to_string(Transition t);

struct SimOutcome {
  OutcomeClass outcome = OutcomeClass::Extinction;
  std::uint64_t total_ever_infected = 0;
  std::optional<double> extinction_time;
  double max_displacement = 0.0;
  std::uint64_t events = 0;
  StopReason stop_reason = StopReason::Absorbed;
};

struct EventRecord {
  NodeId node = 0;
  Transition transition = Transition::Infection;
  double dt = 0.0;
  double time = 0.0;
};

// (ABSORBED, 0) -> extinction, (ABSORBED, >0) -> local survival, anything
// censored -> global proxy.
OutcomeClass classify(StopReason reason, long long infected_count);

// Swap-remove set of node ids with O(1) insert/erase.
class ActiveList {
 public:
  void resize(std::size_t nodes) { slot_.resize(nodes, kAbsent); }
  bool contains(NodeId v) const { return slot_[v] != kAbsent; }
  void insert(NodeId v) {
    slot_[v] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(v);
  }
  void erase(NodeId v) {
    const std::uint32_t at = slot_[v];
    const NodeId last = items_.back();
    items_[at] = last;
    slot_[last] = at;
    items_.pop_back();
    slot_[v] = kAbsent;
  }
  std::span<const NodeId> items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<NodeId> items_;
  std::vector<std::uint32_t> slot_;
};

// Full state of one trajectory. Invariants (checked by verify_state):
//   infected_nbrs[v] / knight_nbrs[v] equal the current counts over the adjacency;
//   infect_candidates = {v : S, infected_nbrs > 0}, patch_candidates = {v : I, knight_nbrs > 0};
//   infect_weight / patch_weight are the sums of those counts over the candidates.
struct DynamicState {
  RateParams params;
  std::vector<NodeState> state;
  std::vector<std::uint32_t> infected_nbrs;
  std::vector<std::uint32_t> knight_nbrs;
  ActiveList infect_candidates;
  ActiveList patch_candidates;
  std::uint64_t infect_weight = 0;
  std::uint64_t patch_weight = 0;
  double clock = 0.0;
  std::vector<NodeId> ever_infected;
  std::uint64_t infected_now = 0;
  std::uint64_t knights_now = 0;
  std::uint64_t initial_knights = 0;
  bool budget_exhausted = false;

  double infection_rate() const { return params.lambda_i * static_cast<double>(infect_weight); }
  double patch_rate() const { return params.lambda_w * static_cast<double>(patch_weight); }
  double total_rate() const { return infection_rate() + patch_rate(); }
  bool absorbed() const { return total_rate() == 0.0; }
  std::size_t node_count() const { return state.size(); }
};

// Graph interface for the engine. Lazily grown graphs (trees, chains)
// additionally expose `bool materialize(NodeId)` which is called when a node
// becomes infected and may append new susceptible nodes adjacent to it.
template <class G>
concept ContactGraph = requires(const G& g, NodeId v) {
  { g.node_count() } -> std::convertible_to<std::size_t>;
  { g.neighbors(v) } -> std::convertible_to<std::span<const NodeId>>;
};

// Gilbert-graph initial condition: origin infected, marks give S / W.
std::vector<NodeState> initial_states(const GilbertGraph& graph);

DynamicState init_state(const GilbertGraph& graph, RateParams params);
EventRecord step(DynamicState& state, const GilbertGraph& graph, Rng& rng);

// Recount from scratch and compare with the incremental bookkeeping.
bool verify_state(const DynamicState& state, const GilbertGraph& graph);

// Runs on a Gilbert graph until absorption, boundary censoring (an infected
// node within r of a face) or a cap. If `trajectory` is non-null every event is appended.
SimOutcome run(const GilbertGraph& graph, RateParams params, StopPolicy policy, Rng& rng,
               std::vector<EventRecord>* trajectory = nullptr);

// Same as run(), but also returns the final state for inspection.
SimOutcome run(const GilbertGraph& graph, RateParams params, StopPolicy policy, Rng& rng,
               std::vector<EventRecord>* trajectory, DynamicState* final_state);

}  // namespace chase
