#include "chase_escape/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "chase_escape/errors.hpp"
#include "chase_escape/parallel.hpp"

namespace chase::experiments {

void SimulationBase::validate() const {
  box.validate();
  require(std::isfinite(radius) && radius > 0.0, "radius must be positive");
  require(std::isfinite(mu_s) && mu_s >= 0.0, "mu_s must be non-negative");
  require(std::isfinite(lambda_w) && lambda_w > 0.0, "lambda_w must be positive");
  policy.validate();
}

SimOutcome run_replication(const SimulationBase& base, double lambda_i, double mu_w, Rng& rng,
                           std::vector<EventRecord>* trajectory, DynamicState* final_state,
                           std::optional<GilbertGraph>* graph_out) {
  GilbertGraph graph(sample_configuration(base.mu_s, mu_w, base.box, rng), base.radius);
  SimOutcome out = run(graph, RateParams{lambda_i, base.lambda_w}, base.policy, rng, trajectory, final_state);
  if (graph_out) graph_out->emplace(std::move(graph));
  return out;
}

void SweepSpec::validate() const {
  base.validate();
  require(!lambda_grid.empty() && !mu_w_grid.empty(), "sweep: grids must be non-empty");
  require(replications >= 1, "sweep: replications must be at least 1");
  for (double l : lambda_grid) require(std::isfinite(l) && l >= 0.0, "sweep: lambda_i values must be >= 0");
  for (double m : mu_w_grid) require(std::isfinite(m) && m >= 0.0, "sweep: mu_w values must be >= 0");
}

std::uint64_t cell_key(double lambda_i, double mu_w) {
  return splitmix64(std::bit_cast<std::uint64_t>(lambda_i)) ^
         splitmix64(std::bit_cast<std::uint64_t>(mu_w) ^ 0x5851f42d4c957f2dULL);
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::size_t cells = spec.lambda_grid.size() * spec.mu_w_grid.size();
  const std::size_t reps = spec.replications;
  std::vector<SimOutcome> outcomes(cells * reps);
  parallel_for(cells * reps, threads, [&](std::size_t task) {
    const std::size_t cell = task / reps;
    const std::size_t rep = task % reps;
    const double lambda_i = spec.lambda_grid[cell / spec.mu_w_grid.size()];
    const double mu_w = spec.mu_w_grid[cell % spec.mu_w_grid.size()];
    Rng rng = make_stream(spec.master_seed, cell_key(lambda_i, mu_w), rep);
    outcomes[task] = run_replication(spec.base, lambda_i, mu_w, rng);
  });

  SweepTable table{spec, {}};
  table.rows.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    SweepRow row;
    row.lambda_i = spec.lambda_grid[cell / spec.mu_w_grid.size()];
    row.mu_w = spec.mu_w_grid[cell % spec.mu_w_grid.size()];
    row.reps = reps;
    double infected_sum = 0.0;
    double extinction_sum = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const SimOutcome& o = outcomes[cell * reps + rep];
      switch (o.outcome) {
        case OutcomeClass::Extinction:
          ++row.n_extinct;
          extinction_sum += o.extinction_time.value_or(0.0);
          break;
        case OutcomeClass::LocalSurvival: ++row.n_local; break;
        case OutcomeClass::GlobalProxy:
          ++row.n_global_proxy;
          if (o.stop_reason == StopReason::Boundary) ++row.n_boundary;
          else ++row.n_cap;
          break;
      }
      infected_sum += static_cast<double>(o.total_ever_infected);
    }
    const double n = static_cast<double>(reps);
    row.frac_global = static_cast<double>(row.n_global_proxy) / n;
    row.stderr_global = std::sqrt(row.frac_global * (1.0 - row.frac_global) / n);
    row.mean_total_infected = infected_sum / n;
    row.mean_extinction_time = row.n_extinct > 0 ? extinction_sum / static_cast<double>(row.n_extinct)
                                                 : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  return table;
}

std::vector<SawRow> connective_constant_experiment(double mu_s, double r, int dim, int n_max, std::size_t samples,
                                                   std::uint64_t master_seed, SawLimits limits, unsigned threads) {
  require(n_max >= 0, "connective_constant_experiment: n_max must be >= 0");
  require(samples >= 1, "connective_constant_experiment: samples must be >= 1");
  require(std::isfinite(r) && r > 0.0, "connective_constant_experiment: radius must be positive");
  // Paths of n_max edges stay within n_max * r of the origin.
  const BoxSpec box{dim, 2.0 * r * (n_max + 1), Topology::Bounded};
  const auto lengths = static_cast<std::size_t>(n_max) + 1;
  std::vector<SawCount> counts(samples * lengths);
  parallel_for(samples, threads, [&](std::size_t s) {
    Rng rng = make_stream(master_seed, s);
    GilbertGraph graph(sample_configuration(mu_s, 0.0, box, rng), r);
    for (int n = 0; n <= n_max; ++n) {
      counts[s * lengths + static_cast<std::size_t>(n)] = count_saws(graph, graph.config().origin(), n, true, limits);
    }
  });

  std::vector<SawRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    SawRow row;
    row.n = n;
    row.analytic = analytics::expected_saw_count(mu_s, r, dim, n);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const SawCount& c = counts[s * lengths + static_cast<std::size_t>(n)];
      if (c.capped) {
        ++row.excluded;
        continue;
      }
      const auto x = static_cast<double>(c.count);
      sum += x;
      sum_sq += x * x;
      ++row.samples_used;
    }
    if (row.samples_used > 0) {
      const double m = static_cast<double>(row.samples_used);
      row.mean = sum / m;
      const double var = row.samples_used > 1 ? std::max(0.0, (sum_sq - m * row.mean * row.mean) / (m - 1.0)) : 0.0;
      row.std_error = std::sqrt(var / m);
    }
    row.growth_rate = n > 0 ? std::log(row.mean) / n : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

VolumeEstimate union_of_balls_volume(const PointConfiguration& config, std::span<const NodeId> members, double r,
                                     std::size_t samples, Rng& rng) {
  require(!members.empty(), "union_of_balls_volume: no members");
  require(samples >= 1, "union_of_balls_volume: samples must be >= 1");
  const int d = config.dim();
  const auto du = static_cast<std::size_t>(d);
  std::vector<double> lo(du, std::numeric_limits<double>::infinity());
  std::vector<double> hi(du, -std::numeric_limits<double>::infinity());
  for (NodeId v : members) {
    const auto p = config.position(v);
    for (std::size_t k = 0; k < du; ++k) {
      lo[k] = std::min(lo[k], p[k] - r);
      hi[k] = std::max(hi[k], p[k] + r);
    }
  }
  // Hash the members into cells of side r so each sample checks 3^d cells.
  std::vector<std::int64_t> cell(du);
  auto key_of = [&](std::span<const std::int64_t> c) {
    std::uint64_t h = 0;
    for (std::int64_t x : c) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return h;
  };
  std::unordered_map<std::uint64_t, std::vector<NodeId>> buckets;
  for (NodeId v : members) {
    const auto p = config.position(v);
    for (std::size_t k = 0; k < du; ++k) cell[k] = static_cast<std::int64_t>(std::floor((p[k] - lo[k]) / r));
    buckets[key_of(cell)].push_back(v);
  }
  std::size_t neighbourhood = 1;
  for (int k = 0; k < d; ++k) neighbourhood *= 3;

  double box_volume = 1.0;
  for (std::size_t k = 0; k < du; ++k) box_volume *= hi[k] - lo[k];
  const double r2 = r * r;
  std::vector<double> x(du);
  std::vector<std::int64_t> probe(du);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < du; ++k) {
      x[k] = lo[k] + (hi[k] - lo[k]) * uniform01(rng);
      cell[k] = static_cast<std::int64_t>(std::floor((x[k] - lo[k]) / r));
    }
    bool inside = false;
    for (std::size_t t = 0; t < neighbourhood && !inside; ++t) {
      std::size_t code = t;
      for (std::size_t k = 0; k < du; ++k) {
        probe[k] = cell[k] + static_cast<std::int64_t>(code % 3) - 1;
        code /= 3;
      }
      const auto it = buckets.find(key_of(probe));
      if (it == buckets.end()) continue;
      for (NodeId v : it->second) {
        const auto p = config.position(v);
        double dist2 = 0.0;
        for (std::size_t k = 0; k < du; ++k) dist2 += (x[k] - p[k]) * (x[k] - p[k]);
        if (dist2 <= r2) {
          inside = true;
          break;
        }
      }
    }
    if (inside) ++hits;
  }
  const double n = static_cast<double>(samples);
  const double frac = static_cast<double>(hits) / n;
  return {box_volume * frac, box_volume * std::sqrt(frac * (1.0 - frac) / n)};
}

LocalSurvivalResult local_survival_experiment(double mu_s, double mu_w, double r, const BoxSpec& box,
                                              std::size_t replications, std::uint64_t master_seed,
                                              std::size_t volume_samples, unsigned threads) {
  box.validate();
  require(replications >= 1, "local_survival_experiment: replications must be >= 1");
  require(box.topology == Topology::Bounded, "local_survival_experiment: needs a bounded box");
  struct Sample {
    bool local = false;
    bool boundary = false;
    double void_term = 0.0;
  };
  std::vector<Sample> samples(replications);
  SimulationBase base;
  base.radius = r;
  base.mu_s = mu_s;
  base.box = box;
  parallel_for(replications, threads, [&](std::size_t rep) {
    Rng rng = make_stream(master_seed, rep);
    std::optional<GilbertGraph> graph;
    const SimOutcome o = run_replication(base, 1.0, mu_w, rng, nullptr, nullptr, &graph);
    Sample& s = samples[rep];
    s.local = o.outcome == OutcomeClass::LocalSurvival;
    const ClusterReport cluster = cluster_of(*graph, graph->config().origin(), true);
    s.boundary = cluster.touches_boundary;
    if (!s.boundary) {
      Rng volume_rng = make_stream(master_seed, rep, 1);
      const VolumeEstimate vol = union_of_balls_volume(graph->config(), cluster.members, r, volume_samples, volume_rng);
      s.void_term = std::exp(-mu_w * vol.volume);
    }
  });

  LocalSurvivalResult res;
  res.replications = replications;
  const double n = static_cast<double>(replications);
  double local = 0.0, sum = 0.0, sum_sq = 0.0;
  for (const Sample& s : samples) {
    local += s.local ? 1.0 : 0.0;
    sum += s.void_term;
    sum_sq += s.void_term * s.void_term;
    if (s.boundary) ++res.boundary_clusters;
  }
  res.dynamic_estimate = local / n;
  res.dynamic_std_error = std::sqrt(res.dynamic_estimate * (1.0 - res.dynamic_estimate) / n);
  res.void_estimate = sum / n;
  const double var = replications > 1 ? std::max(0.0, (sum_sq - n * res.void_estimate * res.void_estimate) / (n - 1.0)) : 0.0;
  res.void_std_error = std::sqrt(var / n);
  res.theta_hat = static_cast<double>(res.boundary_clusters) / n;
  res.bounds = analytics::local_survival_bounds(mu_s, mu_w, r, box.dim, res.theta_hat);
  return res;
}

PercolationResult percolation_consistency(double r, const BoxSpec& box, std::span<const double> mus,
                                          std::size_t replications, std::uint64_t master_seed, unsigned threads) {
  require(std::is_sorted(mus.begin(), mus.end()), "percolation_consistency: intensity grid must be increasing");
  PercolationResult res;
  res.curve = estimate_theta_curve(mus, r, box, replications, master_seed, threads);
  for (const ThetaEstimate& e : res.curve) {
    if (e.theta > kCrossingThreshold) {
      res.mu_c_hat = e.mu;
      break;
    }
  }
  return res;
}

}  // namespace chase::experiments
