#include <sstream>

#include "doctest.h"

#include "chase_escape/errors.hpp"
#include "chase_escape/io.hpp"

using namespace chase;
using json = nlohmann::json;

TEST_CASE("configuration JSON round trip") {
  Rng rng(3);
  const PointConfiguration c = sample_configuration(1.0, 0.5, BoxSpec{2, 6.0, Topology::Torus}, rng);
  const json doc = io::configuration_to_json(c, 1.25);
  CHECK(doc["box"]["topology"] == "torus");
  CHECK(doc["radius"] == 1.25);
  CHECK(doc["origin_index"] == 0);
  CHECK(doc["points"].size() == c.size());

  const auto back = io::configuration_from_json(json::parse(doc.dump()));
  CHECK(back.radius == 1.25);
  CHECK(back.config.coords() == c.coords());
  CHECK(back.config.marks() == c.marks());
  CHECK(back.config.box().topology == Topology::Torus);
}

TEST_CASE("malformed configuration JSON is a parameter error") {
  CHECK_THROWS_AS(io::configuration_from_json(json::parse(R"({"box":{"dim":2}})")), ParameterError);
  const auto bad_mark = json::parse(
      R"({"box":{"dim":1,"side":4,"topology":"bounded"},"radius":1,"points":[{"x":[0],"mark":"Q"}],"origin_index":0})");
  CHECK_THROWS_AS(io::configuration_from_json(bad_mark), ParameterError);
  const auto bad_dim = json::parse(
      R"({"box":{"dim":2,"side":4},"radius":1,"points":[{"x":[0],"mark":"S"}],"origin_index":0})");
  CHECK_THROWS_AS(io::configuration_from_json(bad_dim), ParameterError);
  CHECK_THROWS_AS(io::topology_from_string("klein"), ParameterError);
  CHECK(io::topology_from_string("Torus") == Topology::Torus);
}

TEST_CASE("run records and trajectories") {
  SimOutcome o;
  o.outcome = OutcomeClass::Extinction;
  o.total_ever_infected = 3;
  o.extinction_time = 1.5;
  o.max_displacement = 0.75;
  o.events = 5;
  const json rec = io::outcome_record(o, 42, 7);
  CHECK(rec["class"] == "EXTINCTION");
  CHECK(rec["stop_reason"] == "ABSORBED");
  CHECK(rec["extinction_time"] == 1.5);
  CHECK(rec["seed"] == 42);
  CHECK(rec["replication_index"] == 7);
  o.extinction_time.reset();
  CHECK(io::outcome_record(o, 1, 0)["extinction_time"].is_null());

  const json traj = io::trajectory_json({{2, Transition::Infection, 0.5, 0.5}, {0, Transition::Patch, 0.25, 0.75}});
  REQUIRE(traj.size() == 2);
  CHECK(traj[0]["transition"] == "S->I");
  CHECK(traj[1]["transition"] == "I->W");
  CHECK(traj[1]["time"] == 0.75);
}

TEST_CASE("numbers round-trip through text") {
  for (double x : {0.1, 1.0 / 3.0, 6.305395279272309, 1e-300, 12345678.9}) {
    CHECK(std::stod(io::format_number(x)) == x);
  }
  CHECK(io::format_number(std::nan("")) == "nan");
  CHECK(io::format_number(2.0) == "2");
}

TEST_CASE("sweep CSV and heatmap") {
  experiments::SweepSpec spec;
  spec.base.box = BoxSpec{2, 10.0, Topology::Bounded};
  spec.lambda_grid = {0.01, 0.5};
  spec.mu_w_grid = {0.2, 0.4};
  spec.replications = 5;
  const auto table = experiments::run_sweep(spec, 1);
  std::ostringstream csv;
  io::write_sweep_csv(csv, table);
  std::istringstream lines(csv.str());
  std::string header, line;
  std::getline(lines, header);
  CHECK(header ==
        "lambda_i,mu_w,reps,n_extinct,n_local,n_global_proxy,frac_global,stderr_global,mean_total_infected,"
        "mean_extinction_time");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == 4);

  // mu_s kappa_r = 3 pi puts rho at about 0.028, inside the lambda grid.
  const std::string svg = io::sweep_heatmap_svg(table);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 4);

  const json s = io::sweep_spec_json(spec);
  CHECK(s["lambda_grid"].size() == 2);
  CHECK(s["policy"]["max_infected"].is_null());
}

TEST_CASE("state snapshot") {
  Rng rng(1);
  const GilbertGraph g(sample_configuration(1.0, 0.3, BoxSpec{2, 8.0, Topology::Bounded}, rng), 1.0);
  DynamicState final_state;
  run(g, RateParams{}, StopPolicy{}, rng, nullptr, &final_state);
  const std::string svg = io::snapshot_svg(g, final_state.state, 2.0);
  CHECK(svg.find("<circle") != std::string::npos);
  const GilbertGraph line(PointConfiguration(BoxSpec{1, 4.0, Topology::Bounded}, {0.0}, {Mark::Susceptible}, 0), 1.0);
  CHECK_THROWS_AS(io::snapshot_svg(line, {NodeState::Infected}, 0.0), ParameterError);
}
