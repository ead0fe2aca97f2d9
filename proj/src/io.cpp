#include "chase_escape/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "chase_escape/analytics.hpp"
#include "chase_escape/errors.hpp"

namespace chase::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_string(Topology t) { return t == Topology::Torus ? "torus" : "bounded"; }

Topology topology_from_string(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "bounded") return Topology::Bounded;
  if (lower == "torus") return Topology::Torus;
  throw ParameterError("unknown topology '" + s + "' (expected bounded or torus)");
}

json configuration_to_json(const PointConfiguration& config, double radius) {
  json points = json::array();
  for (NodeId i = 0; i < config.size(); ++i) {
    const auto p = config.position(i);
    points.push_back({{"x", std::vector<double>(p.begin(), p.end())},
                      {"mark", config.mark(i) == Mark::WhiteKnight ? "W" : "S"}});
  }
  const BoxSpec& box = config.box();
  return {{"box", {{"dim", box.dim}, {"side", box.side}, {"topology", to_string(box.topology)}}},
          {"radius", radius},
          {"points", std::move(points)},
          {"origin_index", config.origin()}};
}

LoadedConfiguration configuration_from_json(const json& doc) {
  try {
    const json& b = doc.at("box");
    BoxSpec box{b.at("dim").get<int>(), b.at("side").get<double>(),
                topology_from_string(b.value("topology", std::string("bounded")))};
    box.validate();
    std::vector<double> coords;
    std::vector<Mark> marks;
    for (const json& p : doc.at("points")) {
      const auto x = p.at("x").get<std::vector<double>>();
      require(static_cast<int>(x.size()) == box.dim, "configuration: point dimension mismatch");
      coords.insert(coords.end(), x.begin(), x.end());
      const auto mark = p.at("mark").get<std::string>();
      require(mark == "S" || mark == "W", "configuration: mark must be \"S\" or \"W\"");
      marks.push_back(mark == "W" ? Mark::WhiteKnight : Mark::Susceptible);
    }
    return {PointConfiguration(box, std::move(coords), std::move(marks), doc.at("origin_index").get<NodeId>()),
            doc.at("radius").get<double>()};
  } catch (const json::exception& e) {
    throw ParameterError(std::string("configuration JSON: ") + e.what());
  }
}

json outcome_record(const SimOutcome& o, std::uint64_t seed, std::size_t replication_index) {
  return {{"class", std::string(to_string(o.outcome))},
          {"total_ever_infected", o.total_ever_infected},
          {"extinction_time", o.extinction_time ? json(*o.extinction_time) : json(nullptr)},
          {"max_displacement", o.max_displacement},
          {"events", o.events},
          {"stop_reason", std::string(to_string(o.stop_reason))},
          {"seed", seed},
          {"replication_index", replication_index}};
}

json trajectory_json(const std::vector<EventRecord>& events) {
  json out = json::array();
  for (const EventRecord& e : events) {
    out.push_back({{"time", e.time}, {"node", e.node}, {"transition", std::string(to_string(e.transition))}});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const experiments::SweepTable& table) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : table.rows) {
    out << format_number(row.lambda_i) << ',' << format_number(row.mu_w) << ',' << row.reps << ',' << row.n_extinct
        << ',' << row.n_local << ',' << row.n_global_proxy << ',' << format_number(row.frac_global) << ','
        << format_number(row.stderr_global) << ',' << format_number(row.mean_total_infected) << ','
        << format_number(row.mean_extinction_time) << '\n';
  }
}

json sweep_spec_json(const experiments::SweepSpec& spec) {
  const auto& b = spec.base;
  auto cap = [](std::uint64_t v) {
    return v == std::numeric_limits<std::uint64_t>::max() ? json(nullptr) : json(v);
  };
  return {{"dim", b.box.dim},
          {"radius", b.radius},
          {"mu_s", b.mu_s},
          {"box", b.box.side},
          {"topology", to_string(b.box.topology)},
          {"lambda_w", b.lambda_w},
          {"policy",
           {{"max_events", cap(b.policy.max_events)},
            {"max_infected", cap(b.policy.max_infected)},
            {"max_time", std::isfinite(b.policy.max_time) ? json(b.policy.max_time) : json(nullptr)},
            {"boundary_censoring", b.policy.boundary_censoring}}},
          {"lambda_grid", spec.lambda_grid},
          {"mu_w_grid", spec.mu_w_grid},
          {"replications", spec.replications},
          {"master_seed", spec.master_seed}};
}

namespace {

// Green (extinction) to red (survival).
std::string heat_colour(double f) {
  f = std::clamp(f, 0.0, 1.0);
  const int red = static_cast<int>(std::lround(40 + 200 * f));
  const int green = static_cast<int>(std::lround(170 - 130 * f));
  const int blue = 60;
  std::ostringstream s;
  s << "rgb(" << red << ',' << green << ',' << blue << ')';
  return s.str();
}

}  // namespace

std::string sweep_heatmap_svg(const experiments::SweepTable& table) {
  const auto& spec = table.spec;
  const std::size_t nx = spec.lambda_grid.size();
  const std::size_t ny = spec.mu_w_grid.size();
  const double margin = 60.0, cell = 40.0;
  const double width = 2 * margin + cell * static_cast<double>(nx);
  const double height = 2 * margin + cell * static_cast<double>(ny);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& row : table.rows) {
    const auto ix = static_cast<std::size_t>(
        std::find(spec.lambda_grid.begin(), spec.lambda_grid.end(), row.lambda_i) - spec.lambda_grid.begin());
    const auto iy = static_cast<std::size_t>(
        std::find(spec.mu_w_grid.begin(), spec.mu_w_grid.end(), row.mu_w) - spec.mu_w_grid.begin());
    const double x = margin + cell * static_cast<double>(ix);
    const double y = margin + cell * static_cast<double>(ny - 1 - iy);
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
        << heat_colour(row.frac_global) << "\"><title>lambda_i=" << format_number(row.lambda_i)
        << " mu_w=" << format_number(row.mu_w) << " frac_global=" << format_number(row.frac_global)
        << "</title></rect>\n";
  }
  for (std::size_t ix = 0; ix < nx; ++ix) {
    svg << "<text x=\"" << margin + cell * (static_cast<double>(ix) + 0.5) << "\" y=\""
        << height - margin + 15 << "\" font-size=\"9\" text-anchor=\"middle\">"
        << format_number(spec.lambda_grid[ix]) << "</text>\n";
  }
  for (std::size_t iy = 0; iy < ny; ++iy) {
    svg << "<text x=\"" << margin - 5 << "\" y=\"" << margin + cell * (static_cast<double>(ny - 1 - iy) + 0.6)
        << "\" font-size=\"9\" text-anchor=\"end\">" << format_number(spec.mu_w_grid[iy]) << "</text>\n";
  }
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">lambda_I</text>\n";
  svg << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
      << ")\" text-anchor=\"middle\">mu_W</text>\n";

  // rho line, interpolated linearly between grid columns (grid assumed increasing).
  const double x_kappa = spec.base.mu_s * analytics::kappa(spec.base.radius, spec.base.box.dim);
  if (x_kappa >= 1.0 && nx >= 2) {
    const double rho = analytics::rho(x_kappa);
    const auto& g = spec.lambda_grid;
    std::optional<double> column;
    if (rho <= g.front()) column = 0.0;
    for (std::size_t i = 0; i + 1 < nx && !column; ++i) {
      if (rho >= g[i] && rho <= g[i + 1]) column = static_cast<double>(i) + (rho - g[i]) / (g[i + 1] - g[i]);
    }
    if (column) {
      const double x = margin + cell * (*column + 0.5);
      svg << "<line x1=\"" << x << "\" y1=\"" << margin << "\" x2=\"" << x << "\" y2=\"" << height - margin
          << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
      svg << "<text x=\"" << x + 3 << "\" y=\"" << margin - 5 << "\" font-size=\"10\">rho="
          << format_number(rho) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string snapshot_svg(const GilbertGraph& graph, const std::vector<NodeState>& states, double max_displacement) {
  const auto& config = graph.config();
  require(config.dim() == 2, "snapshot_svg: needs a two-dimensional configuration");
  require(states.size() == graph.node_count(), "snapshot_svg: state vector size mismatch");
  const double side = config.box().side;
  const double px = 600.0;
  const double scale = px / side;
  auto sx = [&](double x) { return (x + side / 2) * scale; };
  auto sy = [&](double y) { return px - (y + side / 2) * scale; };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    for (NodeId u : graph.neighbors(v)) {
      if (u <= v) continue;
      const auto a = config.position(v);
      const auto b = config.position(u);
      if (std::abs(a[0] - b[0]) > side / 2 || std::abs(a[1] - b[1]) > side / 2) continue;  // wrapped torus edge
      svg << "<line x1=\"" << sx(a[0]) << "\" y1=\"" << sy(a[1]) << "\" x2=\"" << sx(b[0]) << "\" y2=\""
          << sy(b[1]) << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
    }
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const auto p = config.position(v);
    const char* colour = states[v] == NodeState::Infected      ? "red"
                         : states[v] == NodeState::WhiteKnight ? "green"
                                                               : "blue";
    svg << "<circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1]) << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
  }
  if (max_displacement > 0.0) {
    svg << "<circle cx=\"" << sx(0) << "\" cy=\"" << sy(0) << "\" r=\"" << max_displacement * scale
        << "\" fill=\"none\" stroke=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace chase::io
