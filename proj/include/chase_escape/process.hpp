#pragma once

// Gillespie engine shared by the Gilbert-graph simulator and the fixed-graph
// reference models (chain, k-ary tree). Templated on the graph so lazily grown
// graphs can add nodes as the infection spreads.

#include <algorithm>
#include <cmath>
#include <vector>

#include "chase_escape/dynamics.hpp"
#include "chase_escape/errors.hpp"

namespace chase::process {

template <class G>
concept Materializing = requires(G& g, NodeId v) {
  { g.materialize(v) } -> std::convertible_to<bool>;
};

namespace detail {

inline void grow(DynamicState& s, std::size_t nodes) {
  if (nodes <= s.state.size()) return;
  s.state.resize(nodes, NodeState::Susceptible);
  s.infected_nbrs.resize(nodes, 0);
  s.knight_nbrs.resize(nodes, 0);
  s.infect_candidates.resize(nodes);
  s.patch_candidates.resize(nodes);
}

template <ContactGraph G>
void materialize(DynamicState& s, G& graph, NodeId v) {
  if constexpr (Materializing<G>) {
    if (!graph.materialize(v)) s.budget_exhausted = true;
    grow(s, graph.node_count());
  }
}

// Picks the candidate whose cumulative count first exceeds `target`.
inline NodeId pick_weighted(const ActiveList& list, const std::vector<std::uint32_t>& counts,
                            std::uint64_t target) {
  std::uint64_t acc = 0;
  for (NodeId v : list.items()) {
    acc += counts[v];
    if (target < acc) return v;
  }
  return list.items().back();
}

}  // namespace detail

// Builds the state for the given per-node initial states. Candidate lists are
// filled in node-id order.
template <ContactGraph G>
DynamicState initialize(G& graph, std::vector<NodeState> initial, RateParams params) {
  params.validate();
  DynamicState s;
  s.params = params;
  require(initial.size() == graph.node_count(), "initial state size does not match graph");
  s.state = std::move(initial);
  s.infected_nbrs.assign(s.state.size(), 0);
  s.knight_nbrs.assign(s.state.size(), 0);
  s.infect_candidates.resize(s.state.size());
  s.patch_candidates.resize(s.state.size());
  for (NodeId v = 0; v < s.state.size(); ++v) {
    if (s.state[v] == NodeState::Infected) {
      s.ever_infected.push_back(v);
      detail::materialize(s, graph, v);
    }
  }
  const std::size_t n = graph.node_count();
  detail::grow(s, n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : graph.neighbors(v)) {
      if (s.state[u] == NodeState::Infected) ++s.infected_nbrs[v];
      if (s.state[u] == NodeState::WhiteKnight) ++s.knight_nbrs[v];
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    switch (s.state[v]) {
      case NodeState::Susceptible:
        if (s.infected_nbrs[v] > 0) {
          s.infect_candidates.insert(v);
          s.infect_weight += s.infected_nbrs[v];
        }
        break;
      case NodeState::Infected:
        ++s.infected_now;
        if (s.knight_nbrs[v] > 0) {
          s.patch_candidates.insert(v);
          s.patch_weight += s.knight_nbrs[v];
        }
        break;
      case NodeState::WhiteKnight:
        ++s.knights_now;
        break;
    }
  }
  s.initial_knights = s.knights_now;
  return s;
}

template <ContactGraph G>
void apply_infection(DynamicState& s, G& graph, NodeId v) {
  s.infect_candidates.erase(v);
  s.infect_weight -= s.infected_nbrs[v];
  s.state[v] = NodeState::Infected;
  ++s.infected_now;
  s.ever_infected.push_back(v);
  detail::materialize(s, graph, v);
  for (NodeId u : graph.neighbors(v)) {
    ++s.infected_nbrs[u];
    if (s.state[u] == NodeState::Susceptible) {
      ++s.infect_weight;
      if (s.infected_nbrs[u] == 1) s.infect_candidates.insert(u);
    }
  }
  if (s.knight_nbrs[v] > 0) {
    s.patch_candidates.insert(v);
    s.patch_weight += s.knight_nbrs[v];
  }
}

template <ContactGraph G>
void apply_patch(DynamicState& s, const G& graph, NodeId v) {
  s.patch_candidates.erase(v);
  s.patch_weight -= s.knight_nbrs[v];
  s.state[v] = NodeState::WhiteKnight;
  --s.infected_now;
  ++s.knights_now;
  for (NodeId u : graph.neighbors(v)) {
    --s.infected_nbrs[u];
    ++s.knight_nbrs[u];
    if (s.state[u] == NodeState::Susceptible) {
      --s.infect_weight;
      if (s.infected_nbrs[u] == 0) s.infect_candidates.erase(u);
    } else if (s.state[u] == NodeState::Infected) {
      ++s.patch_weight;
      if (s.knight_nbrs[u] == 1) s.patch_candidates.insert(u);
    }
  }
}

// One Gillespie step: three uniforms (waiting time, category, node).
template <ContactGraph G>
EventRecord step(DynamicState& s, G& graph, Rng& rng) {
  const double infect = s.infection_rate();
  const double total = infect + s.patch_rate();
  if (!(total > 0.0)) throw AbsorbedError("step: no enabled transition");
  const double dt = exponential(rng, total);
  const bool infection = uniform01(rng) * total < infect;
  EventRecord ev;
  ev.dt = dt;
  if (infection) {
    const auto target = std::min(static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(s.infect_weight)),
                                 s.infect_weight - 1);
    ev.node = detail::pick_weighted(s.infect_candidates, s.infected_nbrs, target);
    ev.transition = Transition::Infection;
    apply_infection(s, graph, ev.node);
  } else {
    const auto target = std::min(static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(s.patch_weight)),
                                 s.patch_weight - 1);
    ev.node = detail::pick_weighted(s.patch_candidates, s.knight_nbrs, target);
    ev.transition = Transition::Patch;
    apply_patch(s, graph, ev.node);
  }
  s.clock += dt;
  ev.time = s.clock;
  return ev;
}

template <ContactGraph G>
bool verify(const DynamicState& s, const G& graph) {
  const std::size_t n = graph.node_count();
  if (s.state.size() != n) return false;
  std::uint64_t iw = 0, pw = 0, infected = 0, knights = 0;
  for (NodeId v = 0; v < n; ++v) {
    std::uint32_t ci = 0, ck = 0;
    for (NodeId u : graph.neighbors(v)) {
      if (s.state[u] == NodeState::Infected) ++ci;
      if (s.state[u] == NodeState::WhiteKnight) ++ck;
    }
    if (ci != s.infected_nbrs[v] || ck != s.knight_nbrs[v]) return false;
    const bool want_infect = s.state[v] == NodeState::Susceptible && ci > 0;
    const bool want_patch = s.state[v] == NodeState::Infected && ck > 0;
    if (want_infect != s.infect_candidates.contains(v)) return false;
    if (want_patch != s.patch_candidates.contains(v)) return false;
    if (want_infect) iw += ci;
    if (want_patch) pw += ck;
    if (s.state[v] == NodeState::Infected) ++infected;
    if (s.state[v] == NodeState::WhiteKnight) ++knights;
  }
  return iw == s.infect_weight && pw == s.patch_weight && infected == s.infected_now && knights == s.knights_now &&
         s.ever_infected.size() == s.infected_now + s.knights_now - s.initial_knights;
}

// Hooks a graph supplies to run(): whether an infected node triggers
// censoring, and its distance from the initially infected node.
template <class G>
concept Censorable = ContactGraph<G> && requires(const G& g, NodeId v) {
  { g.censors(v) } -> std::convertible_to<bool>;
  { g.displacement(v) } -> std::convertible_to<double>;
};

template <Censorable G>
SimOutcome run(G& graph, DynamicState& s, const StopPolicy& policy, Rng& rng,
               std::vector<EventRecord>* trajectory = nullptr) {
  policy.validate();
  SimOutcome out;
  auto finish = [&](StopReason reason) {
    out.stop_reason = reason;
    out.total_ever_infected = s.ever_infected.size();
    out.outcome = classify(reason, static_cast<long long>(s.infected_now));
    return out;
  };
  bool censored = false;
  for (NodeId v : s.ever_infected) {
    out.max_displacement = std::max(out.max_displacement, graph.displacement(v));
    if (policy.boundary_censoring && graph.censors(v)) censored = true;
  }
  if (censored) return finish(StopReason::Boundary);
  for (;;) {
    if (s.budget_exhausted) return finish(StopReason::Cap);
    if (s.absorbed()) return finish(StopReason::Absorbed);
    if (out.events >= policy.max_events) return finish(StopReason::Cap);
    const EventRecord ev = step(s, graph, rng);
    ++out.events;
    if (trajectory) trajectory->push_back(ev);
    if (ev.transition == Transition::Infection) {
      out.max_displacement = std::max(out.max_displacement, graph.displacement(ev.node));
      if (policy.boundary_censoring && graph.censors(ev.node)) return finish(StopReason::Boundary);
      if (s.ever_infected.size() >= policy.max_infected) return finish(StopReason::Cap);
    } else if (s.infected_now == 0) {
      out.extinction_time = s.clock;
    }
    if (s.clock >= policy.max_time) return finish(StopReason::Cap);
  }
}

}  // namespace chase::process
