#include "chase_escape/reference_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "chase_escape/errors.hpp"
#include "chase_escape/parallel.hpp"
#include "chase_escape/process.hpp"

namespace chase::reference {

void ChainConfig::validate() const {
  require(!pattern.empty(), "chain: empty initial pattern");
  require(std::count(pattern.begin(), pattern.end(), ChainSite::Infected) >= 1, "chain: needs an infected site");
  require(pattern.front() != ChainSite::Absent && pattern.back() != ChainSite::Absent,
          "chain: absent sites are only allowed in the interior");
  require(length_cap >= static_cast<std::int64_t>(pattern.size()) - 1 && length_cap >= 1,
          "chain: length_cap must cover the initial pattern");
  RateParams{lambda_i, lambda_w}.validate();
}

ChainConfig chain_gap_config(int gap, double lambda_i, std::int64_t length_cap) {
  require(gap >= 1, "chain: gap must be at least 1");
  ChainConfig c;
  c.pattern.push_back(ChainSite::WhiteKnight);
  c.pattern.insert(c.pattern.end(), static_cast<std::size_t>(gap), ChainSite::Infected);
  c.lambda_i = lambda_i;
  c.length_cap = length_cap;
  return c;
}

namespace {

NodeState to_state(ChainSite s) {
  switch (s) {
    case ChainSite::Infected: return NodeState::Infected;
    case ChainSite::WhiteKnight: return NodeState::WhiteKnight;
    default: return NodeState::Susceptible;
  }
}

}  // namespace

ChainGraph::ChainGraph(const ChainConfig& config, bool lazy) {
  config.validate();
  cap_ = config.length_cap;
  pattern_end_ = static_cast<std::int64_t>(config.pattern.size());
  origin_position_ = std::find(config.pattern.begin(), config.pattern.end(), ChainSite::Infected) -
                     config.pattern.begin();
  for (std::int64_t p = 0; p < pattern_end_; ++p) {
    const ChainSite site = config.pattern[static_cast<std::size_t>(p)];
    if (site != ChainSite::Absent) append(p, to_state(site));
  }
  if (!lazy && config.pattern.back() != ChainSite::Absent) {
    for (std::int64_t p = pattern_end_; p <= cap_; ++p) append(p, NodeState::Susceptible);
  }
}

void ChainGraph::append(std::int64_t pos, NodeState state) {
  const auto id = static_cast<NodeId>(position_.size());
  position_.push_back(pos);
  adjacency_.push_back({0, 0});
  degree_.push_back(0);
  initial_.push_back(state);
  if (id > 0 && position_[id - 1] == pos - 1) {
    adjacency_[id - 1][degree_[id - 1]++] = id;
    adjacency_[id][degree_[id]++] = id - 1;
  }
}

bool ChainGraph::materialize(NodeId v) {
  const auto last = static_cast<NodeId>(position_.size() - 1);
  if (v == last && position_[v] + 1 >= pattern_end_ && position_[v] < cap_) {
    append(position_[v] + 1, NodeState::Susceptible);
  }
  return true;
}

double ChainGraph::displacement(NodeId v) const {
  return static_cast<double>(std::llabs(position_[v] - origin_position_));
}

SimOutcome simulate_chain(const ChainConfig& config, Rng& rng, std::vector<EventRecord>* trajectory) {
  ChainGraph graph(config);
  DynamicState state =
      process::initialize(graph, graph.initial_states(), RateParams{config.lambda_i, config.lambda_w});
  StopPolicy policy;
  policy.boundary_censoring = true;
  return process::run(graph, state, policy, rng, trajectory);
}

double chain_survival_oracle(int gap, double lambda_i) {
  if (gap < 1) throw DomainError("chain_survival_oracle: gap must be at least 1");
  if (!(lambda_i >= 0.0)) throw DomainError("chain_survival_oracle: lambda_i must be non-negative");
  if (lambda_i <= 1.0) return 0.0;
  return 1.0 - std::min(1.0, std::pow(1.0 / lambda_i, gap));
}

GilbertGraph embed_chain(const ChainConfig& config) {
  config.validate();
  require(std::count(config.pattern.begin(), config.pattern.end(), ChainSite::Infected) == 1,
          "embed_chain: needs exactly one infected site");
  const auto origin = static_cast<std::int64_t>(
      std::find(config.pattern.begin(), config.pattern.end(), ChainSite::Infected) - config.pattern.begin());
  require(config.length_cap >= 2 * origin + 2, "embed_chain: length_cap too small for the left margin");
  std::vector<double> coords;
  std::vector<Mark> marks;
  NodeId origin_index = 0;
  for (std::int64_t p = 0; p <= config.length_cap; ++p) {
    const ChainSite site =
        p < static_cast<std::int64_t>(config.pattern.size()) ? config.pattern[static_cast<std::size_t>(p)]
                                                              : ChainSite::Susceptible;
    if (site == ChainSite::Absent) continue;
    if (p == origin) origin_index = static_cast<NodeId>(marks.size());
    coords.push_back(static_cast<double>(p - origin));
    marks.push_back(site == ChainSite::WhiteKnight ? Mark::WhiteKnight : Mark::Susceptible);
  }
  BoxSpec box{1, 2.0 * static_cast<double>(config.length_cap - origin + 1), Topology::Bounded};
  return GilbertGraph(PointConfiguration(box, std::move(coords), std::move(marks), origin_index),
                      kChainEmbeddingRadius);
}

ReachEstimate chain_reach_prob(int n, double lambda_i, std::size_t replications, std::uint64_t master_seed,
                               unsigned threads) {
  require(n >= 1, "chain_reach_prob: n must be at least 1");
  require(replications >= 1, "chain_reach_prob: replications must be at least 1");
  // Site n sits at position n + 1 behind the knight at position 0.
  const ChainConfig config = chain_gap_config(1, lambda_i, n + 1);
  std::vector<char> reached(replications, 0);
  parallel_for(replications, threads, [&](std::size_t rep) {
    Rng rng = make_stream(master_seed, rep);
    reached[rep] = simulate_chain(config, rng).outcome == OutcomeClass::GlobalProxy ? 1 : 0;
  });
  const double count = static_cast<double>(std::count(reached.begin(), reached.end(), 1));
  const double reps = static_cast<double>(replications);
  const double p = count / reps;
  return {n, p, std::sqrt(p * (1.0 - p) / reps), replications};
}

void TreeConfig::validate() const {
  require(k >= 1, "tree: k must be at least 1");
  require(depth_cap >= 1, "tree: depth_cap must be at least 1");
  require(node_budget >= 2, "tree: node budget too small");
  RateParams{lambda_i, lambda_w}.validate();
}

TreeGraph::TreeGraph(const TreeConfig& config, bool lazy)
    : k_(config.k),
      depth_cap_(config.depth_cap),
      budget_(config.node_budget),
      stride_(static_cast<std::size_t>(config.k) + 1) {
  config.validate();
  NodeId root;
  if (config.root_knight) {
    const NodeId knight = add_node(-1, NodeState::WhiteKnight);
    root = add_node(0, NodeState::Infected);
    link(knight, root);
  } else {
    root = add_node(0, NodeState::Infected);
  }
  if (!lazy) {
    for (NodeId v = root; v < node_count(); ++v) {
      if (depth_[v] < depth_cap_ && node_count() + static_cast<std::size_t>(k_) > budget_) {
        throw ParameterError("tree: eager construction exceeds node budget");
      }
      expand(v);
    }
  }
}

NodeId TreeGraph::add_node(int depth, NodeState state) {
  const auto id = static_cast<NodeId>(depth_.size());
  depth_.push_back(depth);
  adjacency_.resize(adjacency_.size() + stride_, 0);
  degree_.push_back(0);
  expanded_.push_back(0);
  initial_.push_back(state);
  return id;
}

void TreeGraph::link(NodeId a, NodeId b) {
  adjacency_[static_cast<std::size_t>(a) * stride_ + degree_[a]++] = b;
  adjacency_[static_cast<std::size_t>(b) * stride_ + degree_[b]++] = a;
}

void TreeGraph::expand(NodeId v) {
  if (expanded_[v] || depth_[v] < 0 || depth_[v] >= depth_cap_) return;
  expanded_[v] = 1;
  for (int c = 0; c < k_; ++c) link(v, add_node(depth_[v] + 1, NodeState::Susceptible));
}

bool TreeGraph::materialize(NodeId v) {
  if (expanded_[v] || depth_[v] < 0 || depth_[v] >= depth_cap_) return true;
  if (node_count() + static_cast<std::size_t>(k_) > budget_) {
    budget_exceeded_ = true;
    return false;
  }
  expand(v);
  return true;
}

TreeOutcome simulate_tree(const TreeConfig& config, Rng& rng, bool lazy) {
  TreeGraph graph(config, lazy);
  DynamicState state =
      process::initialize(graph, graph.initial_states(), RateParams{config.lambda_i, config.lambda_w});
  StopPolicy policy;
  policy.boundary_censoring = true;
  TreeOutcome out;
  out.outcome = process::run(graph, state, policy, rng);
  out.budget_exceeded = graph.budget_exceeded();
  out.nodes_materialized = graph.node_count();
  return out;
}

}  // namespace chase::reference
