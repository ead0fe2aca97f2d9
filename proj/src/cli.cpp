#include "chase_escape/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "chase_escape/analytics.hpp"
#include "chase_escape/errors.hpp"
#include "chase_escape/experiments.hpp"
#include "chase_escape/io.hpp"
#include "chase_escape/parallel.hpp"
#include "chase_escape/reference_models.hpp"

namespace chase::cli {

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = CHASE_ESCAPE_VERSION;

// Every option that can appear in a config file or manifest.
struct Flags {
  int dim = 2;
  double radius = 1.0;
  double mu_s = 3.0;
  double mu_w = 0.5;
  double lambda_i = 1.0;
  double lambda_w = 1.0;
  double box = 30.0;
  std::string topology = "bounded";
  std::uint64_t seed = 1;
  std::size_t reps = 1;
  std::optional<std::uint64_t> max_infected;
  std::uint64_t max_events = 100'000'000;
  std::optional<double> max_time;
  unsigned threads = 0;
  std::string out;
  std::string manifest;
  std::string config;
  bool trajectory = false;
  std::string snapshot;
  std::string svg;
  std::vector<double> lambda_grid;
  std::vector<double> mu_w_grid;
  std::vector<double> mu_grid;
  int n_max = 3;
  std::uint64_t max_paths = 100'000'000;
  std::size_t volume_samples = 100'000;
};

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_manifest(const std::string& subcommand, const json& parameters, std::uint64_t seed, double wall_seconds) {
  return {{"subcommand", subcommand},
          {"parameters", parameters},
          {"master_seed", seed},
          {"version", kVersion},
          {"rng_algorithm", std::string(kRngAlgorithm)},
          {"timestamp", iso8601_now()},
          {"wall_time_seconds", wall_seconds}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

void write_text(const std::string& path, const std::string& text) {
  auto f = open_output(path);
  f << text;
}

// Manifest path: --manifest if given, otherwise <out>.manifest.json when --out is set.
std::optional<std::string> manifest_path(const Flags& f) {
  if (!f.manifest.empty()) return f.manifest;
  if (!f.out.empty()) return f.out + ".manifest.json";
  return std::nullopt;
}

// Writes the payload to --out (or the output stream) and the manifest next to it.
void emit(const Flags& f, const std::string& subcommand, const json& parameters, const std::string& payload,
          double wall_seconds, std::ostream& out) {
  if (f.out.empty()) {
    out << payload;
  } else {
    write_text(f.out, payload);
  }
  if (auto path = manifest_path(f)) {
    write_text(*path, make_manifest(subcommand, parameters, f.seed, wall_seconds).dump(2) + "\n");
  }
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON file of option values (flag names as keys), or a manifest");
  app->add_option("--out", f.out, "Output file (default: output stream)");
  app->add_option("--manifest", f.manifest, "Manifest path (default: <out>.manifest.json)");
  app->add_option("--threads", f.threads, "Worker threads, 0 = all cores")->capture_default_str();
  app->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  app->add_option("--reps", f.reps, "Replications")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_geometry(CLI::App* app, Flags& f, bool with_topology) {
  app->add_option("--dim", f.dim, "Dimension")->capture_default_str();
  app->add_option("--radius", f.radius, "Connection radius r")->capture_default_str();
  app->add_option("--mu-s", f.mu_s, "Intensity of susceptible points")->capture_default_str();
  app->add_option("--box", f.box, "Side length of the simulation box")->capture_default_str();
  if (with_topology) {
    app->add_option("--topology", f.topology, "bounded or torus")
        ->capture_default_str()
        ->check(CLI::IsMember({"bounded", "torus"}, CLI::ignore_case));
  }
}

void add_dynamics(CLI::App* app, Flags& f) {
  app->add_option("--lambda-w", f.lambda_w, "Patch rate per knight neighbour")->capture_default_str();
  app->add_option("--max-infected", f.max_infected, "Stop once this many nodes were ever infected");
  app->add_option("--max-events", f.max_events, "Stop after this many events")->capture_default_str();
  app->add_option("--max-time", f.max_time, "Stop once the clock passes this time");
}

json geometry_parameters(const Flags& f, bool with_topology) {
  json p = {{"dim", f.dim}, {"radius", f.radius}, {"mu-s", f.mu_s}, {"box", f.box}, {"seed", f.seed},
            {"reps", f.reps}};
  if (with_topology) p["topology"] = f.topology;
  return p;
}

void add_dynamics_parameters(json& p, const Flags& f) {
  p["lambda-w"] = f.lambda_w;
  p["max-events"] = f.max_events;
  if (f.max_infected) p["max-infected"] = *f.max_infected;
  if (f.max_time) p["max-time"] = *f.max_time;
}

experiments::SimulationBase simulation_base(const Flags& f) {
  experiments::SimulationBase base;
  base.radius = f.radius;
  base.mu_s = f.mu_s;
  base.box = BoxSpec{f.dim, f.box, io::topology_from_string(f.topology)};
  base.lambda_w = f.lambda_w;
  base.policy.max_events = f.max_events;
  if (f.max_infected) base.policy.max_infected = *f.max_infected;
  if (f.max_time) base.policy.max_time = *f.max_time;
  base.validate();
  return base;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_simulate(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const experiments::SimulationBase base = simulation_base(f);
  require(std::isfinite(f.lambda_i) && f.lambda_i >= 0.0, "lambda_i must be non-negative");
  require(std::isfinite(f.mu_w) && f.mu_w >= 0.0, "mu_w must be non-negative");
  require(f.snapshot.empty() || f.dim == 2, "--snapshot needs --dim 2");

  // Same streams as the sweep cell with these parameters.
  const std::uint64_t key = experiments::cell_key(f.lambda_i, f.mu_w);
  std::vector<std::string> lines(f.reps);
  std::string snapshot;
  parallel_for(f.reps, f.threads, [&](std::size_t rep) {
    Rng rng = make_stream(f.seed, key, rep);
    std::vector<EventRecord> events;
    DynamicState final_state;
    std::optional<GilbertGraph> graph;
    const bool want_snapshot = rep == 0 && !f.snapshot.empty();
    const SimOutcome o = experiments::run_replication(base, f.lambda_i, f.mu_w, rng, f.trajectory ? &events : nullptr,
                                                      want_snapshot ? &final_state : nullptr,
                                                      want_snapshot ? &graph : nullptr);
    json record = io::outcome_record(o, f.seed, rep);
    if (f.trajectory) record["trajectory"] = io::trajectory_json(events);
    lines[rep] = record.dump();
    if (want_snapshot) snapshot = io::snapshot_svg(*graph, final_state.state, o.max_displacement);
  });

  std::string payload;
  for (const auto& line : lines) payload += line + "\n";
  json params = geometry_parameters(f, true);
  params["mu-w"] = f.mu_w;
  params["lambda-i"] = f.lambda_i;
  add_dynamics_parameters(params, f);
  if (f.trajectory) params["trajectory"] = true;
  if (!f.snapshot.empty()) write_text(f.snapshot, snapshot);
  emit(f, "simulate", params, payload, seconds_since(start), out);
  return kExitOk;
}

int run_sweep_command(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  experiments::SweepSpec spec;
  spec.base = simulation_base(f);
  spec.lambda_grid = f.lambda_grid;
  spec.mu_w_grid = f.mu_w_grid;
  spec.replications = f.reps;
  spec.master_seed = f.seed;
  const experiments::SweepTable table = experiments::run_sweep(spec, f.threads);

  std::ostringstream csv;
  io::write_sweep_csv(csv, table);
  json params = geometry_parameters(f, true);
  add_dynamics_parameters(params, f);
  params["lambda-grid"] = f.lambda_grid;
  params["mu-w-grid"] = f.mu_w_grid;
  if (!f.svg.empty()) write_text(f.svg, io::sweep_heatmap_svg(table));
  emit(f, "sweep", params, csv.str(), seconds_since(start), out);
  return kExitOk;
}

json theta_json(const ThetaEstimate& t) {
  return {{"mu", t.mu}, {"theta", t.theta}, {"std_error", t.std_error}, {"replications", t.replications}};
}

int run_theta(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const BoxSpec box{f.dim, f.box, io::topology_from_string(f.topology)};
  const std::vector<double> mus = f.mu_grid.empty() ? std::vector<double>{f.mu_s} : f.mu_grid;
  const auto result = experiments::percolation_consistency(f.radius, box, mus, f.reps, f.seed, f.threads);
  json curve = json::array();
  for (const auto& t : result.curve) curve.push_back(theta_json(t));
  const json doc = {{"curve", curve},
                    {"crossing_threshold", experiments::kCrossingThreshold},
                    {"mu_c_hat", result.mu_c_hat ? json(*result.mu_c_hat) : json(nullptr)},
                    {"kappa_r", analytics::kappa(f.radius, f.dim)}};
  json params = geometry_parameters(f, true);
  params["mu-grid"] = mus;
  params.erase("mu-s");
  emit(f, "theta", params, doc.dump() + "\n", seconds_since(start), out);
  return kExitOk;
}

int run_saw(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  require(f.n_max >= 0, "--n-max must be non-negative");
  const auto rows = experiments::connective_constant_experiment(f.mu_s, f.radius, f.dim, f.n_max, f.reps, f.seed,
                                                                SawLimits{f.max_paths}, f.threads);
  std::string payload;
  for (const auto& row : rows) {
    payload += json{{"n", row.n},
                    {"mean", row.mean},
                    {"std_error", row.std_error},
                    {"analytic", row.analytic},
                    {"growth_rate", std::isfinite(row.growth_rate) ? json(row.growth_rate) : json(nullptr)},
                    {"samples_used", row.samples_used},
                    {"excluded", row.excluded}}
                   .dump() +
               "\n";
  }
  json params = {{"dim", f.dim},   {"radius", f.radius},       {"mu-s", f.mu_s},          {"seed", f.seed},
                 {"reps", f.reps}, {"n-max", f.n_max},         {"max-paths", f.max_paths}};
  emit(f, "saw", params, payload, seconds_since(start), out);
  return kExitOk;
}

int run_local_survival(const Flags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const BoxSpec box{f.dim, f.box, Topology::Bounded};
  const auto r = experiments::local_survival_experiment(f.mu_s, f.mu_w, f.radius, box, f.reps, f.seed,
                                                        f.volume_samples, f.threads);
  const json doc = {{"dynamic_estimate", r.dynamic_estimate},
                    {"dynamic_std_error", r.dynamic_std_error},
                    {"void_estimate", r.void_estimate},
                    {"void_std_error", r.void_std_error},
                    {"theta_hat", r.theta_hat},
                    {"lower_bound", r.bounds.lower},
                    {"upper_bound", r.bounds.upper},
                    {"replications", r.replications},
                    {"boundary_clusters", r.boundary_clusters}};
  json params = geometry_parameters(f, false);
  params["mu-w"] = f.mu_w;
  params["volume-samples"] = f.volume_samples;
  emit(f, "local-survival", params, doc.dump() + "\n", seconds_since(start), out);
  return kExitOk;
}

// Closed-form quantities: each registers its own inputs and computes a value.
struct Quantity {
  CLI::App* app = nullptr;
  std::function<json()> inputs;
  std::function<json()> value;
};

struct CalcInputs {
  double x = 1.0;
  int k = 2;
  int n = 1;
  int m = 0;
  double lambda_i = 1.0;
  double mu_s = 1.0;
  double mu_w = 1.0;
  double radius = 1.0;
  int dim = 2;
  double theta = 0.0;
  double gamma = std::exp(1.0);
  double alpha = 1.0;
  int gap = 1;
  std::string config;
};

std::vector<Quantity> register_calc(CLI::App* calc, CalcInputs& c) {
  std::vector<Quantity> q;
  auto sub = [&](const char* name, const char* about) {
    CLI::App* a = calc->add_subcommand(name, about);
    a->add_option("--config", c.config, "JSON file of option values");
    return a;
  };

  CLI::App* a = sub("rho", "(sqrt(x) - sqrt(x - 1))^2 for x >= 1");
  a->add_option("--x", c.x, "Argument, typically mu_s * kappa_r")->required();
  q.push_back({a, [&] { return json{{"x", c.x}}; }, [&] { return json(analytics::rho(c.x)); }});

  a = sub("tree-critical", "Critical infection rate on the rooted k-ary tree");
  a->add_option("--k", c.k, "Branching number")->required();
  q.push_back({a, [&] { return json{{"k", c.k}}; }, [&] { return json(analytics::tree_critical_rate(c.k)); }});

  a = sub("local-bounds", "Lower and upper bounds on the local survival probability");
  a->add_option("--mu-s", c.mu_s)->required();
  a->add_option("--mu-w", c.mu_w)->required();
  a->add_option("--radius", c.radius)->required();
  a->add_option("--dim", c.dim)->required();
  a->add_option("--theta", c.theta, "Percolation probability")->required();
  q.push_back({a,
               [&] {
                 return json{{"mu_s", c.mu_s}, {"mu_w", c.mu_w}, {"radius", c.radius}, {"dim", c.dim},
                             {"theta", c.theta}};
               },
               [&] {
                 const auto b = analytics::local_survival_bounds(c.mu_s, c.mu_w, c.radius, c.dim, c.theta);
                 return json{{"lower", b.lower}, {"upper", b.upper}};
               }});

  a = sub("closed-node", "Probability that a node is patched before it transmits");
  a->add_option("--k", c.k, "Knight neighbours")->required();
  a->add_option("--n", c.n, "Susceptible neighbours")->required();
  a->add_option("--lambda-i", c.lambda_i)->required();
  q.push_back({a, [&] { return json{{"k", c.k}, {"n", c.n}, {"lambda_i", c.lambda_i}}; },
               [&] { return json(analytics::closed_node_prob(c.k, c.n, c.lambda_i)); }});

  a = sub("open-node", "Lower bound on a node infecting all of its n susceptible neighbours");
  a->add_option("--n", c.n)->required();
  a->add_option("--m", c.m)->required();
  a->add_option("--lambda-i", c.lambda_i)->required();
  q.push_back({a, [&] { return json{{"n", c.n}, {"m", c.m}, {"lambda_i", c.lambda_i}}; },
               [&] { return json(analytics::open_node_lower_bound(c.n, c.m, c.lambda_i)); }});

  a = sub("reflection", "Per-site decay 4 lambda / (1 + lambda)^2 on the chain");
  a->add_option("--lambda-i", c.lambda_i)->required();
  q.push_back({a, [&] { return json{{"lambda_i", c.lambda_i}}; },
               [&] { return json(analytics::reflection_decay(c.lambda_i)); }});

  a = sub("speed-constant", "t - 1 - log t - log gamma with t = lambda_i r / alpha");
  a->add_option("--gamma", c.gamma)->required();
  a->add_option("--lambda-i", c.lambda_i)->required();
  a->add_option("--radius", c.radius)->required();
  a->add_option("--alpha", c.alpha)->required();
  q.push_back({a,
               [&] {
                 return json{{"gamma", c.gamma}, {"lambda_i", c.lambda_i}, {"radius", c.radius}, {"alpha", c.alpha}};
               },
               [&] { return json(analytics::speed_constant(c.gamma, c.lambda_i, c.radius, c.alpha)); }});

  a = sub("critical-speed", "Speed above which the speed constant is positive");
  a->add_option("--gamma", c.gamma)->required();
  a->add_option("--lambda-i", c.lambda_i)->required();
  a->add_option("--radius", c.radius)->required();
  q.push_back({a, [&] { return json{{"gamma", c.gamma}, {"lambda_i", c.lambda_i}, {"radius", c.radius}}; },
               [&] {
                 const auto s = analytics::critical_speed(c.gamma, c.lambda_i, c.radius);
                 return json{{"alpha_c", s.alpha_c}, {"t_star", s.t_star}, {"iterations", s.iterations}};
               }});

  a = sub("expected-saw", "Expected number of self-avoiding paths of n edges, (mu_s kappa_r)^n");
  a->add_option("--mu-s", c.mu_s)->required();
  a->add_option("--radius", c.radius)->required();
  a->add_option("--dim", c.dim)->required();
  a->add_option("--n", c.n)->required();
  q.push_back({a, [&] { return json{{"mu_s", c.mu_s}, {"radius", c.radius}, {"dim", c.dim}, {"n", c.n}}; },
               [&] { return json(analytics::expected_saw_count(c.mu_s, c.radius, c.dim, c.n)); }});

  a = sub("kappa", "Volume of the radius-r ball");
  a->add_option("--radius", c.radius)->required();
  a->add_option("--dim", c.dim)->required();
  q.push_back({a, [&] { return json{{"radius", c.radius}, {"dim", c.dim}}; },
               [&] { return json(analytics::kappa(c.radius, c.dim)); }});
  return q;
}

std::vector<Quantity> register_oracle(CLI::App* oracle, CalcInputs& c) {
  std::vector<Quantity> q;
  CLI::App* a = oracle->add_subcommand("chain", "Survival probability of the chain with a front gap");
  a->add_option("--config", c.config, "JSON file of option values");
  a->add_option("--gap", c.gap, "Infected sites between the knight and the first susceptible site")->required();
  a->add_option("--lambda-i", c.lambda_i)->required();
  q.push_back({a, [&] { return json{{"gap", c.gap}, {"lambda_i", c.lambda_i}}; },
               [&] { return json(reference::chain_survival_oracle(c.gap, c.lambda_i)); }});

  a = oracle->add_subcommand("tree-critical", "Critical infection rate on the rooted k-ary tree");
  a->add_option("--config", c.config, "JSON file of option values");
  a->add_option("--k", c.k, "Branching number")->required();
  q.push_back({a, [&] { return json{{"k", c.k}}; }, [&] { return json(analytics::tree_critical_rate(c.k)); }});
  return q;
}

const CLI::App* deepest_selected(const CLI::App* app) {
  for (const CLI::App* sub : app->get_subcommands()) return deepest_selected(sub);
  return app;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string token_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw ParameterError("cannot read config file '" + *path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError("config file '" + *path + "': " + e.what());
  }
  if (doc.is_object() && doc.contains("parameters") && doc["parameters"].is_object()) doc = doc["parameters"];
  if (!doc.is_object()) throw ParameterError("config file '" + *path + "' must hold a JSON object");

  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin() + 1, args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> expanded = args;
  for (const auto& [raw_key, value] : doc.items()) {
    const std::string key = normalize_key(raw_key);
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (given(flag) || value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) expanded.push_back(flag);
    } else if (value.is_array()) {
      if (value.empty()) continue;
      expanded.push_back(flag);
      for (const json& v : value) expanded.push_back(token_of(v));
    } else if (value.is_object()) {
      throw ParameterError("config key '" + raw_key + "' holds an object");
    } else {
      expanded.push_back(flag);
      expanded.push_back(token_of(value));
    }
  }
  return expanded;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chase-escape on random geometric graphs", "chase-escape"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Flags f;
  CalcInputs c;

  CLI::App* simulate = app.add_subcommand("simulate", "Replicated runs, one JSON record per line");
  add_common(simulate, f);
  add_geometry(simulate, f, true);
  add_dynamics(simulate, f);
  simulate->add_option("--mu-w", f.mu_w, "Intensity of knight points")->capture_default_str();
  simulate->add_option("--lambda-i", f.lambda_i, "Infection rate per infected neighbour")->capture_default_str();
  simulate->add_flag("--trajectory", f.trajectory, "Include the event list in each record");
  simulate->add_option("--snapshot", f.snapshot, "SVG of the final state of replication 0 (dim 2)");

  CLI::App* sweep = app.add_subcommand("sweep", "Phase-diagram grid over (lambda_i, mu_w), CSV output");
  add_common(sweep, f);
  add_geometry(sweep, f, true);
  add_dynamics(sweep, f);
  sweep->add_option("--lambda-grid", f.lambda_grid, "Infection rates")->required()->delimiter(',');
  sweep->add_option("--mu-w-grid", f.mu_w_grid, "Knight intensities")->required()->delimiter(',');
  sweep->add_option("--svg", f.svg, "Heatmap output path");

  CLI::App* theta = app.add_subcommand("theta", "Fraction of susceptible clusters reaching the boundary");
  add_common(theta, f);
  add_geometry(theta, f, true);
  theta->add_option("--mu-grid", f.mu_grid, "Intensities for a coupled curve (default: --mu-s)")->delimiter(',');

  CLI::App* saw = app.add_subcommand("saw", "Self-avoiding path counts from the origin");
  add_common(saw, f);
  saw->add_option("--dim", f.dim, "Dimension")->capture_default_str();
  saw->add_option("--radius", f.radius, "Connection radius r")->capture_default_str();
  saw->add_option("--mu-s", f.mu_s, "Intensity of susceptible points")->capture_default_str();
  saw->add_option("--n-max", f.n_max, "Longest path length")->capture_default_str();
  saw->add_option("--max-paths", f.max_paths, "Enumeration cap per configuration")->capture_default_str();

  CLI::App* local = app.add_subcommand("local-survival", "Dynamic and void-space local survival estimates");
  add_common(local, f);
  add_geometry(local, f, false);
  local->add_option("--mu-w", f.mu_w, "Intensity of knight points")->capture_default_str();
  local->add_option("--volume-samples", f.volume_samples, "Monte Carlo samples per union-of-balls volume")
      ->capture_default_str();

  CLI::App* calc = app.add_subcommand("calc", "Closed-form quantities as JSON");
  calc->require_subcommand(1);
  const auto quantities = register_calc(calc, c);

  CLI::App* oracle = app.add_subcommand("oracle", "Exact values for the comparison models");
  oracle->require_subcommand(1);
  const auto oracles = register_oracle(oracle, c);

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend() - (expanded.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << deepest_selected(&app)->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << deepest_selected(&app)->help();
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(f, out);
    if (sweep->parsed()) return run_sweep_command(f, out);
    if (theta->parsed()) return run_theta(f, out);
    if (saw->parsed()) return run_saw(f, out);
    if (local->parsed()) return run_local_survival(f, out);
    for (const auto* list : {&quantities, &oracles}) {
      for (const Quantity& q : *list) {
        if (!q.app->parsed()) continue;
        const json value = q.value();
        json doc = {{"quantity", q.app->get_name()}, {"inputs", q.inputs()}, {"value", value}};
        if (list == &oracles) {
          doc = {{"model", q.app->get_name()}, {"inputs", q.inputs()}};
          doc[q.app->get_name() == "chain" ? "survival" : "value"] = value;
        }
        out << doc.dump() << "\n";
        return kExitOk;
      }
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << deepest_selected(&app)->help();
  return kExitUsage;
}

}  // namespace chase::cli
