#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "chase_escape/dynamics.hpp"
#include "chase_escape/experiments.hpp"
#include "chase_escape/geometry.hpp"

namespace chase::io {

using json = nlohmann::json;

// {box:{dim,side,topology}, radius, points:[{x:[...], mark:"S"|"W"}], origin_index}
json configuration_to_json(const PointConfiguration& config, double radius);

struct LoadedConfiguration {
  PointConfiguration config;
  double radius;
};
LoadedConfiguration configuration_from_json(const json& doc);

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

// {class, total_ever_infected, extinction_time, max_displacement, events, stop_reason, seed, replication_index}
json outcome_record(const SimOutcome& outcome, std::uint64_t seed, std::size_t replication_index);

// [{time, node, transition}, ...]
json trajectory_json(const std::vector<EventRecord>& events);

inline constexpr const char* kSweepCsvHeader =
    "lambda_i,mu_w,reps,n_extinct,n_local,n_global_proxy,frac_global,stderr_global,mean_total_infected,"
    "mean_extinction_time";

void write_sweep_csv(std::ostream& out, const experiments::SweepTable& table);

json sweep_spec_json(const experiments::SweepSpec& spec);

// Heatmap of frac_global over (lambda_i, mu_w) with the rho(mu_s kappa_r)
// threshold drawn as a vertical line when mu_s kappa_r >= 1.
std::string sweep_heatmap_svg(const experiments::SweepTable& table);

// Nodes coloured by state (susceptible blue, infected red, knight green)
// with graph edges in grey. Two-dimensional configurations only.
std::string snapshot_svg(const GilbertGraph& graph, const std::vector<NodeState>& states, double max_displacement);

// Shortest decimal form that round-trips.
std::string format_number(double x);

}  // namespace chase::io
