#include <cmath>
#include <numbers>

#include "doctest.h"

#include "chase_escape/errors.hpp"
#include "chase_escape/experiments.hpp"

using namespace chase;
using namespace chase::experiments;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.base.box = BoxSpec{2, 14.0, Topology::Bounded};
  spec.base.mu_s = 3.0;
  spec.lambda_grid = {0.05, 0.5, 3.0};
  spec.mu_w_grid = {0.1, 0.8};
  spec.replications = 30;
  spec.master_seed = 2718;
  return spec;
}

bool same_row(const SweepRow& a, const SweepRow& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.lambda_i == b.lambda_i && a.mu_w == b.mu_w && a.reps == b.reps && a.n_extinct == b.n_extinct &&
         a.n_local == b.n_local && a.n_global_proxy == b.n_global_proxy && a.n_boundary == b.n_boundary &&
         a.n_cap == b.n_cap && same(a.mean_total_infected, b.mean_total_infected) &&
         same(a.mean_extinction_time, b.mean_extinction_time);
}

}  // namespace

TEST_CASE("sweep rows partition the replications") {
  const SweepTable t = run_sweep(small_spec(), 1);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].lambda_i == 0.05);
  CHECK(t.rows[0].mu_w == 0.1);
  CHECK(t.rows[1].mu_w == 0.8);
  CHECK(t.rows[2].lambda_i == 0.5);
  for (const SweepRow& r : t.rows) {
    CHECK(r.n_extinct + r.n_local + r.n_global_proxy == r.reps);
    CHECK(r.n_boundary + r.n_cap == r.n_global_proxy);
    CHECK(r.frac_global == doctest::Approx(r.n_global_proxy / 30.0));
    CHECK(r.stderr_global == doctest::Approx(std::sqrt(r.frac_global * (1 - r.frac_global) / 30.0)));
    if (r.n_extinct == 0) CHECK(std::isnan(r.mean_extinction_time));
    CHECK(r.mean_total_infected >= 1.0);
  }
  // Fast infection against sparse knights escapes more often than the reverse.
  CHECK(t.rows[4].frac_global > t.rows[1].frac_global);
}

TEST_CASE("sweep results do not depend on thread count or grid layout") {
  const SweepSpec spec = small_spec();
  const SweepTable one = run_sweep(spec, 1);
  const SweepTable many = run_sweep(spec, 4);
  for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(same_row(one.rows[i], many.rows[i]));

  SweepSpec half = spec;
  half.lambda_grid = {3.0, 0.05};
  half.mu_w_grid = {0.8};
  const SweepTable sub = run_sweep(half, 2);
  CHECK(same_row(sub.rows[0], one.rows[5]));
  CHECK(same_row(sub.rows[1], one.rows[1]));

  SweepSpec other = spec;
  other.master_seed = 2719;
  const SweepTable different = run_sweep(other, 1);
  bool any_diff = false;
  for (std::size_t i = 0; i < one.rows.size(); ++i) any_diff |= !same_row(one.rows[i], different.rows[i]);
  CHECK(any_diff);
}

TEST_CASE("sweep validation") {
  SweepSpec spec = small_spec();
  spec.lambda_grid.clear();
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec = small_spec();
  spec.replications = 0;
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec = small_spec();
  spec.mu_w_grid = {-1.0};
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
}

TEST_CASE("cell keys depend on both parameters") {
  CHECK(cell_key(1.0, 0.5) == cell_key(1.0, 0.5));
  CHECK(cell_key(1.0, 0.5) != cell_key(0.5, 1.0));
  CHECK(cell_key(1.0, 0.5) != cell_key(1.0, 0.6));
}

TEST_CASE("self-avoiding path experiment") {
  const auto rows = connective_constant_experiment(1.0, 1.0, 2, 2, 1500, 5, SawLimits{}, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].mean == 1.0);
  CHECK(rows[0].std_error == 0.0);
  CHECK(std::isnan(rows[0].growth_rate));
  for (const SawRow& r : rows) {
    CHECK(r.samples_used + r.excluded == 1500);
    CHECK(r.analytic == doctest::Approx(std::pow(std::numbers::pi, r.n)));
    if (r.n > 0) CHECK(std::abs(r.mean - r.analytic) < 4.0 * r.std_error);
  }
  const auto again = connective_constant_experiment(1.0, 1.0, 2, 2, 1500, 5, SawLimits{}, 3);
  CHECK(again[2].mean == rows[2].mean);
}

TEST_CASE("union-of-balls volume") {
  const BoxSpec box{2, 20.0, Topology::Bounded};
  const double pi = std::numbers::pi;
  Rng rng(6);
  const PointConfiguration one(box, {0, 0}, {Mark::Susceptible}, 0);
  const std::vector<NodeId> just_origin{0};
  VolumeEstimate v = union_of_balls_volume(one, just_origin, 1.0, 200000, rng);
  CHECK(std::abs(v.volume - pi) < 4.0 * v.std_error);

  // Two discs at distance 1: union = 2 pi - lens, lens = 2 acos(1/2) - (1/2) sqrt(3).
  const PointConfiguration two(box, {0, 0, 1, 0}, {Mark::Susceptible, Mark::Susceptible}, 0);
  const std::vector<NodeId> both{0, 1};
  const double lens = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  v = union_of_balls_volume(two, both, 1.0, 200000, rng);
  CHECK(std::abs(v.volume - (2 * pi - lens)) < 4.0 * v.std_error);

  // Far apart: twice the single disc.
  const PointConfiguration apart(box, {0, 0, 5, 5}, {Mark::Susceptible, Mark::Susceptible}, 0);
  v = union_of_balls_volume(apart, both, 1.0, 200000, rng);
  CHECK(std::abs(v.volume - 2 * pi) < 4.0 * v.std_error);

  // Three dimensions, single ball.
  const PointConfiguration ball(BoxSpec{3, 20.0, Topology::Bounded}, {0, 0, 0}, {Mark::Susceptible}, 0);
  v = union_of_balls_volume(ball, just_origin, 2.0, 200000, rng);
  CHECK(std::abs(v.volume - 4.0 / 3.0 * pi * 8.0) < 4.0 * v.std_error);
}

TEST_CASE("local survival estimators on a small box") {
  const BoxSpec box{2, 12.0, Topology::Bounded};
  const LocalSurvivalResult r = local_survival_experiment(0.5, 0.5, 1.0, box, 1500, 10, 20000, 1);
  CHECK(r.replications == 1500);
  CHECK(r.theta_hat == doctest::Approx(r.boundary_clusters / 1500.0));
  const double se = std::sqrt(r.dynamic_std_error * r.dynamic_std_error + r.void_std_error * r.void_std_error);
  CHECK(std::abs(r.dynamic_estimate - r.void_estimate) < 4.0 * se);
  CHECK(r.dynamic_estimate >= r.bounds.lower - 4.0 * r.dynamic_std_error);
  CHECK(r.dynamic_estimate <= r.bounds.upper + 4.0 * r.dynamic_std_error);
  CHECK_THROWS_AS(local_survival_experiment(0.5, 0.5, 1.0, BoxSpec{2, 12.0, Topology::Torus}, 10, 1), ParameterError);
}

TEST_CASE("percolation consistency on a coarse grid") {
  const std::vector<double> mus{0.5, 1.0, 1.5, 2.0, 2.5};
  const PercolationResult p = percolation_consistency(1.0, BoxSpec{2, 16.0, Topology::Bounded}, mus, 150, 4, 1);
  REQUIRE(p.curve.size() == mus.size());
  for (std::size_t i = 1; i < p.curve.size(); ++i) CHECK(p.curve[i].theta >= p.curve[i - 1].theta);
  REQUIRE(p.mu_c_hat.has_value());
  CHECK(*p.mu_c_hat * std::numbers::pi >= 1.0);
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(percolation_consistency(1.0, BoxSpec{2, 16.0, Topology::Bounded}, unsorted, 10, 4, 1),
                  ParameterError);
}
