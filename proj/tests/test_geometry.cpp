#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "doctest.h"

#include "chase_escape/errors.hpp"
#include "chase_escape/geometry.hpp"
#include "support.hpp"

using namespace chase;

TEST_CASE("ball volume matches the gamma-function formula") {
  const double pi = std::numbers::pi;
  CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(4.0 / 3.0 * pi * 8.0).epsilon(1e-14));
  CHECK(ball_volume(4, 1.0) == doctest::Approx(pi * pi / 2.0).epsilon(1e-14));
  CHECK(ball_volume(5, 1.0) == doctest::Approx(8.0 * pi * pi / 15.0).epsilon(1e-14));
  for (int d = 1; d <= 10; ++d) {
    const double oracle = std::pow(pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(1.5, d);
    CHECK(ball_volume(d, 1.5) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("box distance uses the minimum image on the torus") {
  const BoxSpec bounded{2, 10.0, Topology::Bounded};
  const BoxSpec torus{2, 10.0, Topology::Torus};
  const std::vector<double> a{-4.5, 0.0}, b{4.5, 0.0};
  CHECK(box_distance(bounded, a, b) == doctest::Approx(9.0));
  CHECK(box_distance(torus, a, b) == doctest::Approx(1.0));
}

TEST_CASE("boundary shell") {
  const BoxSpec box{2, 10.0, Topology::Bounded};
  CHECK(near_boundary(box, std::vector<double>{4.0, 0.0}, 1.0));
  CHECK(near_boundary(box, std::vector<double>{0.0, -4.2}, 1.0));
  CHECK_FALSE(near_boundary(box, std::vector<double>{3.9, 3.9}, 1.0));
  CHECK_FALSE(near_boundary(BoxSpec{2, 10.0, Topology::Torus}, std::vector<double>{4.9, 0.0}, 1.0));
}

TEST_CASE("configuration validation") {
  const BoxSpec box{2, 4.0, Topology::Bounded};
  CHECK_THROWS_AS(PointConfiguration(box, {0, 0, 3, 0}, {Mark::Susceptible, Mark::Susceptible}, 0), ParameterError);
  CHECK_THROWS_AS(PointConfiguration(box, {0.1, 0, 1, 0}, {Mark::Susceptible, Mark::Susceptible}, 0), ParameterError);
  CHECK_THROWS_AS(PointConfiguration(box, {0, 0}, {Mark::WhiteKnight}, 0), ParameterError);
  CHECK_THROWS_AS(PointConfiguration(box, {0, 0}, {Mark::Susceptible}, 1), ParameterError);
  CHECK_THROWS_AS((BoxSpec{0, 1.0, Topology::Bounded}.validate()), ParameterError);
  CHECK_THROWS_AS((BoxSpec{2, -1.0, Topology::Bounded}.validate()), ParameterError);
  CHECK_NOTHROW(PointConfiguration(box, {0, 0, 2, -2}, {Mark::Susceptible, Mark::WhiteKnight}, 0));
}

TEST_CASE("edges use the closed ball") {
  const BoxSpec box{2, 10.0, Topology::Bounded};
  GilbertGraph g(PointConfiguration(box, {0, 0, 1, 0, 0, 1.0000001}, {Mark::Susceptible, Mark::Susceptible,
                                                                    Mark::Susceptible},
                                    0),
                 1.0);
  REQUIRE(g.degree(0) == 1);
  CHECK(g.neighbors(0)[0] == 1);
}

TEST_CASE("grid adjacency equals brute force") {
  Rng rng(7);
  struct Case {
    int dim;
    double side;
    Topology topo;
    double r;
    std::size_t n;
  };
  const std::vector<Case> cases{{1, 20.0, Topology::Bounded, 1.0, 60},  {1, 20.0, Topology::Torus, 1.3, 60},
                                {2, 10.0, Topology::Bounded, 1.0, 300}, {2, 10.0, Topology::Torus, 1.0, 300},
                                {2, 2.5, Topology::Bounded, 1.0, 40},   {2, 2.5, Topology::Torus, 1.0, 40},
                                {3, 6.0, Topology::Bounded, 1.2, 400},  {3, 6.0, Topology::Torus, 1.7, 400},
                                {4, 5.0, Topology::Torus, 1.4, 300},    {2, 9.0, Topology::Torus, 3.0, 200}};
  for (const Case& c : cases) {
    CAPTURE(c.dim);
    CAPTURE(c.side);
    CAPTURE(c.r);
    const BoxSpec box{c.dim, c.side, c.topo};
    for (int trial = 0; trial < 3; ++trial) {
      const auto config = testing::random_configuration(box, c.n, 0.3, rng);
      const GilbertGraph g(config, c.r);
      CHECK(testing::graph_edges(g) == testing::brute_edges(config, c.r));
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto nb = g.neighbors(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        CHECK(std::find(nb.begin(), nb.end(), v) == nb.end());
      }
    }
  }
}

TEST_CASE("graph summaries") {
  const BoxSpec box{2, 10.0, Topology::Bounded};
  GilbertGraph g(PointConfiguration(box, {0, 0, 1, 0, 2, 0, 4, 4},
                                    {Mark::Susceptible, Mark::Susceptible, Mark::Susceptible, Mark::WhiteKnight}, 0),
                 1.0);
  CHECK(g.edge_count() == 2);
  CHECK(g.max_degree() == 2);
  CHECK(g.mean_degree() == doctest::Approx(1.0));
  CHECK(g.touches_boundary(3));
  CHECK_FALSE(g.touches_boundary(0));
}

TEST_CASE("Poisson counts: mean, dispersion and spatial uniformity") {
  Rng rng(2024);
  const BoxSpec box{2, 5.0, Topology::Bounded};
  const double intensity = 2.0;
  const double expected = intensity * box.volume();
  const int samples = 4000;
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> bins(8, 0.0);
  for (int s = 0; s < samples; ++s) {
    const PointList pts = sample_ppp(intensity, box, rng);
    const auto n = static_cast<double>(pts.size());
    sum += n;
    sum_sq += n * n;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double x = pts.position(i)[0];
      CHECK(std::abs(x) <= box.side / 2);
      bins[std::min<std::size_t>(7, static_cast<std::size_t>((x + box.side / 2) / box.side * 8))] += 1;
    }
  }
  const double mean = sum / samples;
  const double var = sum_sq / samples - mean * mean;
  CHECK(std::abs(mean - expected) < 4.0 * std::sqrt(expected / samples));
  CHECK(var / mean == doctest::Approx(1.0).epsilon(0.1));

  const double total = std::accumulate(bins.begin(), bins.end(), 0.0);
  double chi2 = 0.0;
  for (double b : bins) chi2 += (b - total / 8) * (b - total / 8) / (total / 8);
  CHECK(chi2 < 18.475);  // chi-square, 7 degrees of freedom, 1% level
}

TEST_CASE("zero intensity gives the origin alone") {
  Rng rng(1);
  const auto config = sample_configuration(0.0, 0.0, BoxSpec{3, 4.0, Topology::Bounded}, rng);
  CHECK(config.size() == 1);
  CHECK(config.origin() == 0);
}

TEST_CASE("thinning is binomial and keeps the origin susceptible") {
  Rng rng(99);
  const BoxSpec box{2, 20.0, Topology::Bounded};
  const double p = 0.3;
  std::size_t knights = 0, points = 0;
  for (int s = 0; s < 50; ++s) {
    const PointList pts = sample_ppp(3.0, box, rng);
    const PointConfiguration c = thin_marks(pts, box, p, rng);
    REQUIRE(c.size() == pts.size() + 1);
    CHECK(c.origin() == 0);
    CHECK(c.mark(0) == Mark::Susceptible);
    CHECK(c.position(0)[0] == 0.0);
    knights += c.count(Mark::WhiteKnight);
    points += pts.size();
  }
  const double frac = static_cast<double>(knights) / static_cast<double>(points);
  CHECK(std::abs(frac - p) < 4.0 * std::sqrt(p * (1 - p) / static_cast<double>(points)));
}

TEST_CASE("torus graphs are translation invariant") {
  Rng rng(5);
  const BoxSpec box{2, 8.0, Topology::Torus};
  const auto config = testing::random_configuration(box, 150, 0.0, rng);
  const GilbertGraph g(config, 1.1);
  // Re-centre on point 17 and wrap.
  const NodeId pivot = 17;
  const auto n = static_cast<NodeId>(config.size());
  std::vector<double> coords;
  std::vector<Mark> marks(n, Mark::Susceptible);
  for (NodeId i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      double x = config.position(i)[k] - config.position(pivot)[k];
      x -= box.side * std::round(x / box.side);
      coords.push_back(i == pivot ? 0.0 : x);
    }
  }
  const GilbertGraph shifted(PointConfiguration(box, coords, marks, pivot), 1.1);
  CHECK(testing::graph_edges(shifted) == testing::graph_edges(g));
}

TEST_CASE("clusters do not depend on point order and C_o^S lies inside C_o") {
  Rng rng(11);
  const BoxSpec box{2, 12.0, Topology::Bounded};
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = testing::random_configuration(box, 250, 0.25, rng);
    const GilbertGraph g(config, 1.0);
    const ClusterReport full = cluster_of(g, 0, false);
    const ClusterReport sus = cluster_of(g, 0, true);
    CHECK(std::includes(full.members.begin(), full.members.end(), sus.members.begin(), sus.members.end()));
    for (NodeId v : sus.members) CHECK(config.mark(v) == Mark::Susceptible);
    CHECK(std::is_sorted(full.members.begin(), full.members.end()));

    // Reverse the non-origin points.
    const auto n = static_cast<NodeId>(config.size());
    std::vector<NodeId> perm(n);
    perm[0] = 0;
    for (NodeId i = 1; i < n; ++i) perm[i] = n - i;
    std::vector<double> coords;
    std::vector<Mark> marks;
    for (NodeId i = 0; i < n; ++i) {
      coords.insert(coords.end(), config.position(perm[i]).begin(), config.position(perm[i]).end());
      marks.push_back(config.mark(perm[i]));
    }
    const GilbertGraph h(PointConfiguration(box, coords, marks, 0), 1.0);
    const ClusterReport again = cluster_of(h, 0, true);
    std::vector<NodeId> mapped;
    for (NodeId v : again.members) mapped.push_back(perm[v]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == sus.members);
    CHECK(again.touches_boundary == sus.touches_boundary);
  }
}

namespace {

// Independent path enumeration over a distance matrix.
std::uint64_t brute_saws(const PointConfiguration& c, double r, int length, bool susceptible_only) {
  const std::size_t n = c.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : testing::brute_edges(c, r)) adj[a][b] = adj[b][a] = 1;
  std::vector<std::vector<NodeId>> paths{{c.origin()}};
  for (int step = 0; step < length; ++step) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& p : paths) {
      for (NodeId u = 0; u < n; ++u) {
        if (!adj[p.back()][u] || std::find(p.begin(), p.end(), u) != p.end()) continue;
        if (susceptible_only && c.mark(u) != Mark::Susceptible) continue;
        auto q = p;
        q.push_back(u);
        next.push_back(std::move(q));
      }
    }
    paths = std::move(next);
  }
  return paths.size();
}

}  // namespace

TEST_CASE("self-avoiding path counts equal brute-force enumeration") {
  Rng rng(3);
  const BoxSpec box{2, 3.0, Topology::Bounded};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 8);  // at most 12 nodes
    const auto config = testing::random_configuration(box, n - 1, 0.2, rng);
    const GilbertGraph g(config, 1.2);
    for (int len = 0; len <= 5; ++len) {
      for (bool restrict_s : {false, true}) {
        CAPTURE(trial);
        CAPTURE(len);
        const SawCount got = count_saws(g, 0, len, restrict_s);
        CHECK_FALSE(got.capped);
        CHECK(got.count == brute_saws(config, 1.2, len, restrict_s));
      }
    }
  }
}

TEST_CASE("self-avoiding paths on a complete graph") {
  // Six points within r of each other: paths of length n number 5 * 4 * ... * (6 - n).
  const BoxSpec box{2, 4.0, Topology::Bounded};
  std::vector<double> coords{0, 0};
  for (int i = 1; i < 6; ++i) {
    coords.push_back(0.1 * i);
    coords.push_back(-0.05 * i);
  }
  const GilbertGraph g(PointConfiguration(box, coords, std::vector<Mark>(6, Mark::Susceptible), 0), 1.0);
  const std::uint64_t expected[] = {1, 5, 20, 60, 120, 120, 0};
  for (int len = 0; len <= 6; ++len) CHECK(count_saws(g, 0, len, false).count == expected[len]);
  const SawCount capped = count_saws(g, 0, 4, false, SawLimits{10});
  CHECK(capped.capped);
}

TEST_CASE("theta estimator edge cases") {
  // No points: the origin's cluster is itself and sits far from the faces.
  CHECK(estimate_theta(0.0, 1.0, BoxSpec{2, 10.0, Topology::Bounded}, 20, 1, 1).theta == 0.0);
  // Box so small that the origin is already in the boundary shell.
  CHECK(estimate_theta(0.0, 1.0, BoxSpec{2, 1.5, Topology::Bounded}, 20, 1, 1).theta == 1.0);
  CHECK_THROWS_AS(estimate_theta(1.0, 1.0, BoxSpec{2, 10.0, Topology::Torus}, 20, 1, 1), UnsupportedError);
}

TEST_CASE("coupled theta curve is monotone and thread independent") {
  const BoxSpec box{2, 12.0, Topology::Bounded};
  const std::vector<double> mus{0.5, 1.0, 1.5, 2.0};
  const auto curve = estimate_theta_curve(mus, 1.0, box, 200, 8, 1);
  const auto again = estimate_theta_curve(mus, 1.0, box, 200, 8, 3);
  REQUIRE(curve.size() == mus.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].mu == mus[i]);
    CHECK(curve[i].theta == again[i].theta);
    if (i > 0) CHECK(curve[i].theta >= curve[i - 1].theta);
  }
  CHECK(curve.front().theta < curve.back().theta);
}

TEST_CASE("mean self-avoiding path count matches (mu kappa)^n") {
  // Oracle: Mecke formula, E = (mu_s * pi r^2)^2 for two steps in the plane.
  const double expected = std::pow(std::numbers::pi, 2);
  const BoxSpec box{2, 8.0, Topology::Bounded};
  const int samples = 3000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = make_stream(77, static_cast<std::uint64_t>(s));
    const GilbertGraph g(sample_configuration(1.0, 0.0, box, rng), 1.0);
    const auto c = static_cast<double>(count_saws(g, 0, 2, true).count);
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  CHECK(std::abs(mean - expected) < 3.0 * se);
}
