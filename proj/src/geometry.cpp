#include "chase_escape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "chase_escape/errors.hpp"
#include "chase_escape/parallel.hpp"

namespace chase {

void BoxSpec::validate() const {
  require(dim >= 1, "box: dim must be at least 1");
  require(std::isfinite(side) && side > 0.0, "box: side must be finite and positive");
}

double BoxSpec::volume() const { return std::pow(side, dim); }

PointConfiguration::PointConfiguration(BoxSpec box, std::vector<double> coords, std::vector<Mark> marks,
                                       NodeId origin_index)
    : box_(box), coords_(std::move(coords)), marks_(std::move(marks)), origin_(origin_index) {
  box_.validate();
  const auto d = static_cast<std::size_t>(box_.dim);
  require(coords_.size() == marks_.size() * d, "configuration: coordinate count does not match marks");
  require(origin_ < marks_.size(), "configuration: origin index out of range");
  const double half = 0.5 * box_.side;
  for (double x : coords_) {
    require(std::isfinite(x) && std::abs(x) <= half, "configuration: point outside box");
  }
  for (double x : position(origin_)) require(x == 0.0, "configuration: origin must sit at the zero vector");
  require(marks_[origin_] == Mark::Susceptible, "configuration: origin must carry the susceptible mark");
}

std::size_t PointConfiguration::count(Mark m) const {
  return static_cast<std::size_t>(std::count(marks_.begin(), marks_.end(), m));
}

double box_distance(const BoxSpec& box, std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double diff = a[k] - b[k];
    if (box.topology == Topology::Torus) diff -= box.side * std::round(diff / box.side);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

bool near_boundary(const BoxSpec& box, std::span<const double> x, double r) {
  if (box.topology == Topology::Torus) return false;
  const double half = 0.5 * box.side;
  return std::any_of(x.begin(), x.end(), [&](double xk) { return half - std::abs(xk) <= r; });
}

double ball_volume(int dim, double r) {
  require(dim >= 1, "ball_volume: dim must be at least 1");
  // Gamma(dim/2 + 1) by the half-integer recursion from Gamma(1) or Gamma(1/2).
  double gamma = (dim % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int twice = (dim % 2 == 0) ? 2 : 1; twice <= dim; twice += 2) gamma *= 0.5 * twice;
  return std::pow(std::numbers::pi, 0.5 * dim) * std::pow(r, dim) / gamma;
}

PointList sample_ppp(double intensity, const BoxSpec& box, Rng& rng) {
  require(std::isfinite(intensity) && intensity >= 0.0, "sample_ppp: intensity must be finite and non-negative");
  box.validate();
  PointList out{box.dim, {}};
  const double mean = intensity * box.volume();
  if (mean <= 0.0) return out;
  std::poisson_distribution<std::int64_t> count_dist(mean);
  const auto n = static_cast<std::size_t>(count_dist(rng));
  out.coords.resize(n * static_cast<std::size_t>(box.dim));
  const double half = 0.5 * box.side;
  for (double& x : out.coords) x = -half + box.side * uniform01(rng);
  return out;
}

PointConfiguration thin_marks(const PointList& points, const BoxSpec& box, double p, Rng& rng) {
  require(p >= 0.0 && p <= 1.0, "thin_marks: p must lie in [0, 1]");
  require(points.dim == box.dim || points.size() == 0, "thin_marks: dimension mismatch");
  const auto d = static_cast<std::size_t>(box.dim);
  std::vector<double> coords(d, 0.0);
  coords.insert(coords.end(), points.coords.begin(), points.coords.end());
  std::vector<Mark> marks;
  marks.reserve(points.size() + 1);
  marks.push_back(Mark::Susceptible);
  for (std::size_t i = 0; i < points.size(); ++i) {
    marks.push_back(uniform01(rng) < p ? Mark::WhiteKnight : Mark::Susceptible);
  }
  return PointConfiguration(box, std::move(coords), std::move(marks), 0);
}

PointConfiguration sample_configuration(double mu_s, double mu_w, const BoxSpec& box, Rng& rng) {
  require(std::isfinite(mu_s) && mu_s >= 0.0, "mu_s must be finite and non-negative");
  require(std::isfinite(mu_w) && mu_w >= 0.0, "mu_w must be finite and non-negative");
  const double mu = mu_s + mu_w;
  PointList points = sample_ppp(mu, box, rng);
  return thin_marks(points, box, mu > 0.0 ? mu_w / mu : 0.0, rng);
}

namespace {

// Uniform grid with cells of side >= r: all neighbours of a point lie in
// the 3^d block of cells around it.
struct CellGrid {
  int dim = 0;
  int per_dim = 0;
  double cell_side = 0.0;
  std::vector<std::size_t> start;  // CSR offsets, one past per cell
  std::vector<NodeId> items;

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(per_dim);
    return n;
  }
};

int cell_coord(double x, double half, double cell_side, int per_dim) {
  const int c = static_cast<int>(std::floor((x + half) / cell_side));
  return std::clamp(c, 0, per_dim - 1);
}

}  // namespace

GilbertGraph::GilbertGraph(PointConfiguration config, double radius)
    : config_(std::move(config)), radius_(radius) {
  require(std::isfinite(radius) && radius > 0.0, "build_gilbert: radius must be positive");
  const BoxSpec& box = config_.box();
  const std::size_t n = config_.size();
  const int d = box.dim;
  const double r2 = radius * radius;
  const bool torus = box.topology == Topology::Torus;

  auto within = [&](NodeId i, NodeId j) {
    const auto a = config_.position(i);
    const auto b = config_.position(j);
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      double diff = a[k] - b[k];
      if (torus) diff -= box.side * std::round(diff / box.side);
      sum += diff * diff;
    }
    return sum <= r2;
  };

  offsets_.assign(n + 1, 0);
  adjacency_.clear();

  const int per_dim = static_cast<int>(std::min(std::floor(box.side / radius), 1.0e6));
  double cells = 1.0;
  for (int k = 0; k < d; ++k) cells *= std::max(per_dim, 1);
  const bool use_grid = per_dim >= 3 && cells <= static_cast<double>(1u << 24);

  std::vector<NodeId> scratch;
  if (!use_grid) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (j != i && within(i, j)) adjacency_.push_back(j);
      }
      offsets_[i + 1] = adjacency_.size();
    }
    return;
  }

  CellGrid grid;
  grid.dim = d;
  grid.per_dim = per_dim;
  grid.cell_side = box.side / per_dim;
  const double half = 0.5 * box.side;
  std::vector<std::size_t> cell_of(n);
  for (NodeId i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (int k = d - 1; k >= 0; --k) {
      idx = idx * static_cast<std::size_t>(per_dim) +
            static_cast<std::size_t>(cell_coord(config_.position(i)[k], half, grid.cell_side, per_dim));
    }
    cell_of[i] = idx;
  }
  grid.start.assign(grid.cell_count() + 1, 0);
  for (std::size_t c : cell_of) ++grid.start[c + 1];
  for (std::size_t c = 1; c < grid.start.size(); ++c) grid.start[c] += grid.start[c - 1];
  grid.items.resize(n);
  {
    std::vector<std::size_t> fill(grid.start.begin(), grid.start.end() - 1);
    for (NodeId i = 0; i < n; ++i) grid.items[fill[cell_of[i]]++] = i;
  }

  std::size_t offsets3 = 1;
  for (int k = 0; k < d; ++k) offsets3 *= 3;
  std::vector<int> home(static_cast<std::size_t>(d));
  for (NodeId i = 0; i < n; ++i) {
    std::size_t rest = cell_of[i];
    for (int k = 0; k < d; ++k) {
      home[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(per_dim));
      rest /= static_cast<std::size_t>(per_dim);
    }
    scratch.clear();
    for (std::size_t t = 0; t < offsets3; ++t) {
      std::size_t code = t;
      std::size_t idx = 0;
      std::size_t stride = 1;
      bool inside = true;
      for (int k = 0; k < d; ++k) {
        int c = home[static_cast<std::size_t>(k)] + static_cast<int>(code % 3) - 1;
        code /= 3;
        if (c < 0 || c >= per_dim) {
          if (!torus) {
            inside = false;
            break;
          }
          c = (c + per_dim) % per_dim;
        }
        idx += static_cast<std::size_t>(c) * stride;
        stride *= static_cast<std::size_t>(per_dim);
      }
      if (!inside) continue;
      for (std::size_t s = grid.start[idx]; s < grid.start[idx + 1]; ++s) {
        const NodeId j = grid.items[s];
        if (j != i && within(i, j)) scratch.push_back(j);
      }
    }
    std::sort(scratch.begin(), scratch.end());
    adjacency_.insert(adjacency_.end(), scratch.begin(), scratch.end());
    offsets_[i + 1] = adjacency_.size();
  }
}

std::size_t GilbertGraph::max_degree() const {
  std::size_t best = 0;
  for (NodeId v = 0; v < node_count(); ++v) best = std::max(best, degree(v));
  return best;
}

double GilbertGraph::mean_degree() const {
  if (node_count() == 0) return 0.0;
  return static_cast<double>(adjacency_.size()) / static_cast<double>(node_count());
}

GilbertGraph build_gilbert(PointConfiguration config, double r) { return GilbertGraph(std::move(config), r); }

ClusterReport cluster_of(const GilbertGraph& graph, NodeId start, bool restrict_to_susceptible) {
  require(start < graph.node_count(), "cluster_of: start index out of range");
  const auto& config = graph.config();
  auto allowed = [&](NodeId v) {
    return !restrict_to_susceptible || v == config.origin() || config.mark(v) == Mark::Susceptible;
  };
  std::vector<char> seen(graph.node_count(), 0);
  std::deque<NodeId> queue{start};
  seen[start] = 1;
  ClusterReport report;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    report.members.push_back(v);
    if (graph.touches_boundary(v)) report.touches_boundary = true;
    for (NodeId u : graph.neighbors(v)) {
      if (!seen[u] && allowed(u)) {
        seen[u] = 1;
        queue.push_back(u);
      }
    }
  }
  std::sort(report.members.begin(), report.members.end());
  return report;
}

namespace {

struct SawSearch {
  const GilbertGraph& graph;
  bool restrict_to_susceptible;
  std::uint64_t max_paths;
  std::vector<char> on_path;
  SawCount result;

  bool allowed(NodeId v) const {
    const auto& c = graph.config();
    return !restrict_to_susceptible || v == c.origin() || c.mark(v) == Mark::Susceptible;
  }

  void extend(NodeId v, int remaining) {
    if (result.capped) return;
    if (remaining == 0) {
      if (++result.count >= max_paths) result.capped = true;
      return;
    }
    on_path[v] = 1;
    for (NodeId u : graph.neighbors(v)) {
      if (!on_path[u] && allowed(u)) extend(u, remaining - 1);
      if (result.capped) break;
    }
    on_path[v] = 0;
  }
};

}  // namespace

SawCount count_saws(const GilbertGraph& graph, NodeId origin, int length, bool restrict_to_susceptible,
                    SawLimits limits) {
  require(length >= 0, "count_saws: length must be non-negative");
  require(origin < graph.node_count(), "count_saws: origin index out of range");
  require(limits.max_paths >= 1, "count_saws: max_paths must be positive");
  SawSearch search{graph, restrict_to_susceptible, limits.max_paths,
                   std::vector<char>(graph.node_count(), 0), {}};
  search.extend(origin, length);
  return search.result;
}

std::vector<ThetaEstimate> estimate_theta_curve(std::span<const double> mus, double r, const BoxSpec& box,
                                                std::size_t replications, std::uint64_t master_seed,
                                                unsigned threads) {
  box.validate();
  if (box.topology != Topology::Bounded) {
    throw UnsupportedError("estimate_theta: boundary-crossing estimator needs a bounded box");
  }
  require(replications >= 1, "estimate_theta: replications must be at least 1");
  require(std::isfinite(r) && r > 0.0, "estimate_theta: radius must be positive");
  require(!mus.empty(), "estimate_theta: empty intensity grid");
  double mu_max = 0.0;
  for (double mu : mus) {
    require(std::isfinite(mu) && mu >= 0.0, "estimate_theta: intensities must be finite and non-negative");
    mu_max = std::max(mu_max, mu);
  }

  // hits[rep * mus.size() + m]
  std::vector<char> hits(replications * mus.size(), 0);
  const auto d = static_cast<std::size_t>(box.dim);
  parallel_for(replications, threads, [&](std::size_t rep) {
    Rng rng = make_stream(master_seed, rep);
    const PointList all = sample_ppp(mu_max, box, rng);
    std::vector<double> labels(all.size());
    for (double& u : labels) u = uniform01(rng);
    for (std::size_t m = 0; m < mus.size(); ++m) {
      const double keep = mu_max > 0.0 ? mus[m] / mu_max : 0.0;
      std::vector<double> coords(d, 0.0);
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (labels[i] < keep) {
          const auto p = all.position(i);
          coords.insert(coords.end(), p.begin(), p.end());
        }
      }
      std::vector<Mark> marks(coords.size() / d, Mark::Susceptible);
      GilbertGraph graph(PointConfiguration(box, std::move(coords), std::move(marks), 0), r);
      hits[rep * mus.size() + m] = cluster_of(graph, 0, true).touches_boundary ? 1 : 0;
    }
  });

  std::vector<ThetaEstimate> out;
  out.reserve(mus.size());
  for (std::size_t m = 0; m < mus.size(); ++m) {
    std::size_t count = 0;
    for (std::size_t rep = 0; rep < replications; ++rep) count += static_cast<std::size_t>(hits[rep * mus.size() + m]);
    const double n = static_cast<double>(replications);
    const double theta = static_cast<double>(count) / n;
    out.push_back({mus[m], theta, std::sqrt(theta * (1.0 - theta) / n), replications});
  }
  return out;
}

ThetaEstimate estimate_theta(double mu_s, double r, const BoxSpec& box, std::size_t replications,
                             std::uint64_t master_seed, unsigned threads) {
  const double mus[] = {mu_s};
  return estimate_theta_curve(mus, r, box, replications, master_seed, threads).front();
}

}  // namespace chase
