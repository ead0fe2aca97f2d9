#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "chase_escape/geometry.hpp"
#include "chase_escape/random.hpp"

namespace testing {

// Uniform points in the box plus the origin at index 0; marks drawn with P(W) = p_w.
inline chase::PointConfiguration random_configuration(const chase::BoxSpec& box, std::size_t n, double p_w,
                                                      chase::Rng& rng) {
  const auto d = static_cast<std::size_t>(box.dim);
  std::vector<double> coords(d, 0.0);
  std::vector<chase::Mark> marks{chase::Mark::Susceptible};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) coords.push_back(-box.side / 2 + box.side * chase::uniform01(rng));
    marks.push_back(chase::uniform01(rng) < p_w ? chase::Mark::WhiteKnight : chase::Mark::Susceptible);
  }
  return {box, std::move(coords), std::move(marks), 0};
}

// Pairwise distance check, no grid.
inline std::set<std::pair<chase::NodeId, chase::NodeId>> brute_edges(const chase::PointConfiguration& c, double r) {
  std::set<std::pair<chase::NodeId, chase::NodeId>> edges;
  const auto n = static_cast<chase::NodeId>(c.size());
  for (chase::NodeId i = 0; i < n; ++i) {
    for (chase::NodeId j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (int k = 0; k < c.dim(); ++k) {
        double diff = c.position(i)[k] - c.position(j)[k];
        if (c.box().topology == chase::Topology::Torus) {
          diff = std::fmod(std::abs(diff), c.box().side);
          diff = std::min(diff, c.box().side - diff);
        }
        sum += diff * diff;
      }
      if (std::sqrt(sum) <= r) edges.insert({i, j});
    }
  }
  return edges;
}

inline std::set<std::pair<chase::NodeId, chase::NodeId>> graph_edges(const chase::GilbertGraph& g) {
  std::set<std::pair<chase::NodeId, chase::NodeId>> edges;
  for (chase::NodeId v = 0; v < g.node_count(); ++v) {
    for (chase::NodeId u : g.neighbors(v)) {
      if (v < u) edges.insert({v, u});
    }
  }
  return edges;
}

}  // namespace testing
