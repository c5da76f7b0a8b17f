#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hbsurf/errors.hpp"
#include "hbsurf/geodesics.hpp"
#include "hbsurf/harness.hpp"
#include "hbsurf/interpolant.hpp"
#include "hbsurf/pointsets.hpp"

using namespace hbsurf;

namespace {

Vec2 parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidConfig("expected v1,v2 but got '" + text + "'");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidConfig("expected v1,v2 but got '" + text + "'");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

struct GenPointsArgs {
  std::string surface = "sphere";
  std::size_t n = 500;
  std::uint64_t seed = 1;
  std::size_t skip = 0;
  std::string kind = "nodes";
  std::string function = "f1";
  std::string order = "T2";
  std::string out;
};

int gen_points(const GenPointsArgs& a) {
  const Chart chart = Chart::by_name(a.surface);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file = open_out(a.out);
    out = &file;
  }
  if (a.kind == "eval") {
    write_points_csv(eval_points(chart, a.n, a.seed), *out);
  } else {
    const auto nodes = nodes_on_surface(chart, a.n, a.skip);
    if (a.kind == "samples") {
      write_samples_csv(
          build_samples(chart, nodes, a.function, parse_taylor_order(a.order), Lacunary::None),
          *out);
    } else {
      write_points_csv(nodes, *out);
    }
  }
  return 0;
}

struct GeodesicArgs {
  std::string surface = "sphere";
  std::string from;
  std::string to;
  std::string trace;
  int segments = 64;
};

int geodesic(const GeodesicArgs& a) {
  const Chart chart = Chart::by_name(a.surface);
  BvpSettings settings;
  settings.segments = a.segments;
  const Vec2 p = parse_pair(a.from);
  const Vec2 q = parse_pair(a.to);
  const GeodesicPath path = geodesic_bvp(chart, p, q, settings);
  std::cout << "bvp_length," << format_double(path.total_length) << '\n';
  std::cout << "iterations," << path.iterations << '\n';
  if (has_analytic_distance(chart)) {
    std::cout << "analytic_length," << format_double(analytic_distance(chart, p, q)) << '\n';
  }
  if (!a.trace.empty()) {
    auto out = open_out(a.trace);
    write_path_csv(chart, path, out);
  }
  return 0;
}

struct InterpArgs {
  std::string surface = "sphere";
  std::string samples;
  std::string eval;
  std::string order = "T2";
  double mu = 0.0;
  std::string delta = "auto";
  int neighbors = 12;
  std::string tau = "wendland";
  std::string alpha = "power";
  std::string out;
};

int interp(const InterpArgs& a) {
  const Chart chart = Chart::by_name(a.surface);
  const int order = parse_taylor_order(a.order);
  auto in_samples = open_in(a.samples);
  auto samples = read_samples_csv(in_samples);
  for (auto& s : samples) {
    if (!chart.contains(s.v)) throw OutOfChart("sample " + std::to_string(s.id) + " is off the chart");
    s.ambient = chart.forward(s.v);
    std::erase_if(s.data, [&](const auto& kv) { return kv.first.order() > order; });
  }
  auto in_eval = open_in(a.eval);
  const auto eval = read_points_csv(in_eval);

  const DistanceFn distance = distance_function(chart);
  int k = 0;
  for (const auto& s : samples) k = std::max(k, s.max_order());
  BasisConfig basis = BasisConfig::defaults(k, 1.0);
  basis.tau_kind = parse_tau_kind(a.tau);
  basis.alpha_kind = parse_alpha_kind(a.alpha);
  if (a.mu > 0.0) basis.mu = a.mu;
  if (a.delta == "auto") {
    std::vector<Vec2> nodes;
    for (const auto& s : samples) nodes.push_back(s.v);
    const CellIndex index(chart, nodes, distance);
    basis.delta = adaptive_delta(index, local_coordinates(eval), a.neighbors);
  } else {
    basis.delta = std::stod(a.delta);
  }
  const HermiteInterpolant h(chart, std::move(samples), basis, distance);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file = open_out(a.out);
    out = &file;
  }
  *out << "id,v1,v2,h\n";
  for (const auto& p : eval) {
    *out << p.id << ',' << format_double(p.v.x()) << ',' << format_double(p.v.y()) << ','
         << format_double(h(p.v)) << '\n';
  }
  return 0;
}

struct RunTableArgs {
  std::string config;
  std::string out;
  std::string format;
};

int run_table(const RunTableArgs& a) {
  auto in = open_in(a.config);
  std::stringstream text;
  text << in.rdbuf();
  ExperimentConfig config = config_from_json(text.str());
  if (!a.out.empty()) config.output = a.out;

  const ErrorReport report = run_experiment(config);
  std::string format = a.format;
  if (format.empty()) {
    format = config.output.size() >= 5 && config.output.ends_with(".json") ? "json" : "csv";
  }
  const EmitFormat fmt = format == "json" ? EmitFormat::Json : EmitFormat::Csv;
  if (config.output.empty()) {
    fmt == EmitFormat::Json ? write_report_json(report, std::cout)
                            : write_report_csv(report, std::cout);
  } else {
    emit(report, fmt, config.output);
  }
  for (const auto& r : report.rows) {
    if (!r.error.empty()) {
      std::cerr << "row n=" << r.n << ' ' << taylor_label(r.order) << " failed: " << r.error << '\n';
    }
  }
  try {
    for (const auto& [order, fit] : convergence_slope(report)) {
      std::cerr << "slope " << taylor_label(order) << ' ' << format_double(fit.slope) << '\n';
    }
  } catch (const InsufficientRows&) {
    // short ladders have no slope
  }
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-Birkhoff interpolation on parametric surfaces"};
  app.require_subcommand(1);

  GenPointsArgs gp;
  auto* gen = app.add_subcommand("gen-points", "write nodes, evaluation points or samples as CSV");
  gen->add_option("--surface", gp.surface, "sphere, cylinder or cone")->capture_default_str();
  gen->add_option("--n", gp.n, "number of points")->required();
  gen->add_option("--seed", gp.seed, "seed for evaluation points")->capture_default_str();
  gen->add_option("--skip", gp.skip, "Halton indices to skip")->capture_default_str();
  gen->add_option("--kind", gp.kind, "nodes, eval or samples")
      ->check(CLI::IsMember({"nodes", "eval", "samples"}))
      ->capture_default_str();
  gen->add_option("--function", gp.function, "f1 or f2 (samples only)")->capture_default_str();
  gen->add_option("--order", gp.order, "T0, T1 or T2 (samples only)")->capture_default_str();
  gen->add_option("--out", gp.out, "output file (stdout if omitted)");

  GeodesicArgs ga;
  auto* geo = app.add_subcommand("geodesic", "geodesic distance between two chart points");
  geo->add_option("--surface", ga.surface, "sphere, sphere-spherical, cylinder, cone or torus")
      ->capture_default_str();
  geo->add_option("--from", ga.from, "v1,v2")->required();
  geo->add_option("--to", ga.to, "v1,v2")->required();
  geo->add_option("--trace", ga.trace, "write the path as CSV");
  geo->add_option("--segments", ga.segments, "BVP segments")->capture_default_str();

  InterpArgs ia;
  auto* itp = app.add_subcommand("interp", "evaluate the interpolant of a sample file");
  itp->add_option("--surface", ia.surface)->capture_default_str();
  itp->add_option("--samples", ia.samples, "sample CSV")->required();
  itp->add_option("--eval", ia.eval, "evaluation point CSV")->required();
  itp->add_option("--order", ia.order, "Taylor order T0, T1 or T2")->capture_default_str();
  itp->add_option("--mu", ia.mu, "distance exponent (default order + 1)");
  itp->add_option("--delta", ia.delta, "localization radius or auto")->capture_default_str();
  itp->add_option("--neighbors", ia.neighbors, "nodes covered by the auto radius")
      ->capture_default_str();
  itp->add_option("--tau", ia.tau, "wendland, indicator or none")->capture_default_str();
  itp->add_option("--alpha", ia.alpha, "power, exp_over_power or pure_exp")->capture_default_str();
  itp->add_option("--out", ia.out, "output CSV (stdout if omitted)");

  RunTableArgs ra;
  auto* run = app.add_subcommand("run-table", "run an error table experiment");
  run->add_option("--config", ra.config, "experiment JSON")->required();
  run->add_option("--out", ra.out, "override the config's output path");
  run->add_option("--format", ra.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return gen_points(gp);
    if (*geo) return geodesic(ga);
    if (*itp) return interp(ia);
    if (*run) return run_table(ra);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
