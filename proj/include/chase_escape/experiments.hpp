#pragma once

// Replicated simulations behind the phase diagram, the self-avoiding path
// growth check, the two local-survival estimators and the percolation check.
// Every replication owns a stream derived from (master seed, cell key,
// replication index), so results do not depend on thread count or grid layout.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chase_escape/analytics.hpp"
#include "chase_escape/dynamics.hpp"
#include "chase_escape/geometry.hpp"

namespace chase::experiments {

struct SimulationBase {
  double radius = 1.0;
  double mu_s = 3.0;
  BoxSpec box{2, 30.0, Topology::Bounded};
  double lambda_w = 1.0;
  StopPolicy policy{};

  void validate() const;
};

// Fresh configuration and one trajectory for a single replication.
SimOutcome run_replication(const SimulationBase& base, double lambda_i, double mu_w, Rng& rng,
                           std::vector<EventRecord>* trajectory = nullptr, DynamicState* final_state = nullptr,
                           std::optional<GilbertGraph>* graph_out = nullptr);

struct SweepSpec {
  SimulationBase base;
  std::vector<double> lambda_grid;
  std::vector<double> mu_w_grid;
  std::size_t replications = 100;
  std::uint64_t master_seed = 1;

  void validate() const;
};

struct SweepRow {
  double lambda_i = 0.0;
  double mu_w = 0.0;
  std::size_t reps = 0;
  std::size_t n_extinct = 0;
  std::size_t n_local = 0;
  std::size_t n_global_proxy = 0;
  std::size_t n_boundary = 0;  // global-proxy runs stopped by the boundary shell
  std::size_t n_cap = 0;       // global-proxy runs stopped by a resource cap
  double frac_global = 0.0;
  double stderr_global = 0.0;
  double mean_total_infected = 0.0;
  double mean_extinction_time = 0.0;  // NaN when no replication went extinct
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // lambda-major, in grid order
};

// Stream key of a grid cell, a hash of the parameter values themselves.
std::uint64_t cell_key(double lambda_i, double mu_w);

SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

struct SawRow {
  int n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double analytic = 0.0;     // (mu_s kappa_r)^n
  double growth_rate = 0.0;  // log(mean) / n, NaN at n = 0
  std::size_t samples_used = 0;
  std::size_t excluded = 0;  // capped enumerations left out of the mean
};

std::vector<SawRow> connective_constant_experiment(double mu_s, double r, int dim, int n_max, std::size_t samples,
                                                   std::uint64_t master_seed, SawLimits limits = {},
                                                   unsigned threads = 0);

struct LocalSurvivalResult {
  double dynamic_estimate = 0.0;
  double dynamic_std_error = 0.0;
  double void_estimate = 0.0;
  double void_std_error = 0.0;
  double theta_hat = 0.0;  // fraction of replications whose C_o^S reached the boundary shell
  analytics::SurvivalBounds bounds;
  std::size_t replications = 0;
  std::size_t boundary_clusters = 0;
};

// Dynamic estimate: fraction of runs classified local survival. Void-space
// estimate: mean over replications of exp(-mu_w |B_r(C_o^S)|) for finite
// clusters (0 for clusters in the boundary shell), with the union-of-balls
// volume from `volume_samples` uniform points over the cluster's bounding box.
// Trajectories use lambda_i = 1: whether the infection survives locally does
// not depend on the infection rate once it is positive.
LocalSurvivalResult local_survival_experiment(double mu_s, double mu_w, double r, const BoxSpec& box,
                                              std::size_t replications, std::uint64_t master_seed,
                                              std::size_t volume_samples = 100'000, unsigned threads = 0);

// Monte Carlo volume of the union of radius-r balls around the given points.
struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
};
VolumeEstimate union_of_balls_volume(const PointConfiguration& config, std::span<const NodeId> members, double r,
                                     std::size_t samples, Rng& rng);

struct PercolationResult {
  std::vector<ThetaEstimate> curve;
  std::optional<double> mu_c_hat;  // smallest grid intensity with theta_hat > 0.5
};

inline constexpr double kCrossingThreshold = 0.5;

PercolationResult percolation_consistency(double r, const BoxSpec& box, std::span<const double> mus,
                                          std::size_t replications, std::uint64_t master_seed,
                                          unsigned threads = 0);

}  // namespace chase::experiments
