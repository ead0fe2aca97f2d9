#pragma once

// Poisson point configurations, Gilbert graphs over them, clusters,
// self-avoiding path counts and finite-box percolation estimates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chase_escape/random.hpp"

namespace chase {

using NodeId = std::uint32_t;

enum class Topology { Bounded, Torus };

// The box [-side/2, side/2]^dim, centred on the origin.
struct BoxSpec {
  int dim = 2;
  double side = 1.0;
  Topology topology = Topology::Bounded;

  void validate() const;
  double volume() const;
};

enum class Mark : std::uint8_t { Susceptible, WhiteKnight };

// Flat list of points: coordinate k of point i is coords[i * dim + k].
struct PointList {
  int dim = 0;
  std::vector<double> coords;

  std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> position(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

// Marked points in a box plus the distinguished origin node o, which sits at
// the zero vector and carries the Susceptible mark (it starts infected in the
// dynamics).
class PointConfiguration {
 public:
  PointConfiguration(BoxSpec box, std::vector<double> coords, std::vector<Mark> marks,
                     NodeId origin_index);

  const BoxSpec& box() const { return box_; }
  int dim() const { return box_.dim; }
  std::size_t size() const { return marks_.size(); }
  NodeId origin() const { return origin_; }
  Mark mark(NodeId i) const { return marks_[i]; }
  std::span<const double> position(NodeId i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(box_.dim),
            static_cast<std::size_t>(box_.dim)};
  }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<Mark>& marks() const { return marks_; }
  std::size_t count(Mark m) const;

 private:
  BoxSpec box_;
  std::vector<double> coords_;
  std::vector<Mark> marks_;
  NodeId origin_;
};

// Euclidean distance under the box topology (minimum image on the torus).
double box_distance(const BoxSpec& box, std::span<const double> a, std::span<const double> b);

// True when x lies within `r` of a face of a bounded box. Always false on the torus.
bool near_boundary(const BoxSpec& box, std::span<const double> x, double r);

// Volume of the d-dimensional ball of radius r: pi^(d/2) r^d / Gamma(d/2 + 1).
double ball_volume(int dim, double r);

// Homogeneous Poisson process of the given intensity in the box.
PointList sample_ppp(double intensity, const BoxSpec& box, Rng& rng);

// Independent thinning: each point becomes a white knight with probability p.
// The origin is prepended at index 0 with the Susceptible mark.
PointConfiguration thin_marks(const PointList& points, const BoxSpec& box, double p, Rng& rng);

// Origin plus independent Poisson processes of susceptibles (mu_s) and
// knights (mu_w), sampled as one process of intensity mu_s + mu_w and thinned.
PointConfiguration sample_configuration(double mu_s, double mu_w, const BoxSpec& box, Rng& rng);

// Closed-ball Gilbert graph g_r over a configuration. Immutable once built.
class GilbertGraph {
 public:
  GilbertGraph(PointConfiguration config, double radius);

  const PointConfiguration& config() const { return config_; }
  double radius() const { return radius_; }
  std::size_t node_count() const { return config_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  std::size_t max_degree() const;
  double mean_degree() const;
  bool touches_boundary(NodeId v) const { return near_boundary(config_.box(), config_.position(v), radius_); }

 private:
  PointConfiguration config_;
  double radius_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;  // each list sorted ascending
};

GilbertGraph build_gilbert(PointConfiguration config, double r);

struct ClusterReport {
  std::vector<NodeId> members;  // sorted ascending
  bool touches_boundary = false;
  std::size_t size() const { return members.size(); }
};

// Breadth-first component of `start`. With restrict_to_susceptible the walk
// only enters Susceptible-marked nodes and the origin (this gives C_o^S).
ClusterReport cluster_of(const GilbertGraph& graph, NodeId start, bool restrict_to_susceptible);

struct SawLimits {
  std::uint64_t max_paths = 100'000'000;
};

struct SawCount {
  std::uint64_t count = 0;
  bool capped = false;
};

// Number of self-avoiding paths with exactly `length` edges that start at
// `origin`. Enumeration stops once max_paths is reached and flags the result.
SawCount count_saws(const GilbertGraph& graph, NodeId origin, int length, bool restrict_to_susceptible,
                    SawLimits limits = {});

struct ThetaEstimate {
  double mu = 0.0;
  double theta = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

// Fraction of replications where the susceptible cluster of the origin
// reaches the boundary shell (within r of a face).
ThetaEstimate estimate_theta(double mu_s, double r, const BoxSpec& box, std::size_t replications,
                             std::uint64_t master_seed, unsigned threads = 0);

// Coupled version over a grid of intensities: each replication samples at the
// largest intensity and keeps a point at intensity mu iff its uniform label is
// below mu / mu_max, so the estimates are monotone in mu replication by replication.
std::vector<ThetaEstimate> estimate_theta_curve(std::span<const double> mus, double r, const BoxSpec& box,
                                                std::size_t replications, std::uint64_t master_seed,
                                                unsigned threads = 0);

}  // namespace chase
