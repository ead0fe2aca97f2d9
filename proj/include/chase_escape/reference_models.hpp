#pragma once

// Chase-escape on fixed graphs: the nearest-neighbour chain with a knight
// behind the root, and the rooted k-ary tree. Both run on the same Gillespie
// engine as the Gilbert-graph simulator and grow lazily as the infection spreads.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chase_escape/dynamics.hpp"
#include "chase_escape/geometry.hpp"
#include "chase_escape/random.hpp"

namespace chase::reference {

enum class ChainSite : std::uint8_t { Susceptible, Infected, WhiteKnight, Absent };

// Sites are positions 0, 1, 2, ...; pattern[p] fixes the initial state of
// position p, every later position up to length_cap is susceptible. An
// Absent site is missing together with its two edges.
struct ChainConfig {
  std::vector<ChainSite> pattern;
  double lambda_i = 1.0;
  double lambda_w = 1.0;
  std::int64_t length_cap = 10'000;

  void validate() const;
};

// Knight at position 0 followed by `gap` infected sites: W, I, ..., I, S, S, ...
ChainConfig chain_gap_config(int gap, double lambda_i, std::int64_t length_cap = 10'000);

class ChainGraph {
 public:
  explicit ChainGraph(const ChainConfig& config, bool lazy = true);

  std::size_t node_count() const { return position_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return {adjacency_[v].data(), degree_[v]}; }
  bool materialize(NodeId v);
  bool censors(NodeId v) const { return position_[v] >= cap_; }
  double displacement(NodeId v) const;
  std::int64_t position(NodeId v) const { return position_[v]; }
  const std::vector<NodeState>& initial_states() const { return initial_; }

 private:
  void append(std::int64_t pos, NodeState state);

  std::vector<std::int64_t> position_;
  std::vector<std::array<NodeId, 2>> adjacency_;
  std::vector<std::uint8_t> degree_;
  std::vector<NodeState> initial_;
  std::int64_t cap_ = 0;
  std::int64_t pattern_end_ = 0;
  std::int64_t origin_position_ = 0;
};

// GLOBAL_PROXY when the infection reaches position length_cap.
SimOutcome simulate_chain(const ChainConfig& config, Rng& rng, std::vector<EventRecord>* trajectory = nullptr);

// Survival probability of the front-gap walk (up at rate lambda_i, down at
// rate 1, absorbed at 0) started at `gap`: 1 - lambda_i^-gap above 1, else 0.
double chain_survival_oracle(int gap, double lambda_i);

// The same chain as a 1-D Gilbert graph (unit spacing, r = 1.5, box sized so
// that exactly position length_cap lies in the boundary shell). Requires a
// single infected site, which becomes the origin.
GilbertGraph embed_chain(const ChainConfig& config);
inline constexpr double kChainEmbeddingRadius = 1.5;

struct ReachEstimate {
  int n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

// Monte Carlo estimate of P'(o infects site n) for the pattern W(o'), I(o), S, S, ...
ReachEstimate chain_reach_prob(int n, double lambda_i, std::size_t replications, std::uint64_t master_seed,
                               unsigned threads = 0);

struct TreeConfig {
  int k = 2;
  int depth_cap = 30;
  double lambda_i = 1.0;
  double lambda_w = 1.0;
  bool root_knight = true;
  std::size_t node_budget = 20'000'000;

  void validate() const;
};

// Rooted k-ary tree with an optional knight o' attached above the root.
// Children are created when their parent is first infected unless lazy = false.
class TreeGraph {
 public:
  explicit TreeGraph(const TreeConfig& config, bool lazy = true);

  std::size_t node_count() const { return depth_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + static_cast<std::size_t>(v) * stride_, degree_[v]};
  }
  bool materialize(NodeId v);
  bool censors(NodeId v) const { return depth_[v] >= depth_cap_; }
  double displacement(NodeId v) const { return depth_[v] < 0 ? 1.0 : static_cast<double>(depth_[v]); }
  const std::vector<NodeState>& initial_states() const { return initial_; }
  bool budget_exceeded() const { return budget_exceeded_; }

 private:
  NodeId add_node(int depth, NodeState state);
  void link(NodeId a, NodeId b);
  void expand(NodeId v);

  int k_;
  int depth_cap_;
  std::size_t budget_;
  std::size_t stride_;
  std::vector<int> depth_;  // -1 for the knight above the root
  std::vector<NodeId> adjacency_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint8_t> expanded_;
  std::vector<NodeState> initial_;
  bool budget_exceeded_ = false;
};

struct TreeOutcome {
  SimOutcome outcome;
  bool budget_exceeded = false;
  std::size_t nodes_materialized = 0;
};

// GLOBAL_PROXY when a node at depth_cap is infected; CAP with
// budget_exceeded when the node budget runs out.
TreeOutcome simulate_tree(const TreeConfig& config, Rng& rng, bool lazy = true);

}  // namespace chase::reference
