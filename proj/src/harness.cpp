#include "hbsurf/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hbsurf/errors.hpp"

namespace hbsurf {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("not a number: '" + s + "'");
  return x;
}

long long parse_int(const std::string& s) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("not an integer: '" + s + "'");
  return x;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw IoError("expected header '" + std::string(header) + "'");
  }
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<int> orders_from(const json& j) {
  auto one = [](const json& e) {
    if (e.is_string()) return parse_taylor_order(e.get<std::string>());
    if (e.is_number_integer()) return parse_taylor_order(std::to_string(e.get<int>()));
    throw InvalidConfig("taylor_order entries are T0..T2 or 0..2");
  };
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(one(e));
  } else {
    out.push_back(one(j));
  }
  return out;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["surface"] = c.surface;
  j["function"] = c.function;
  json orders = json::array();
  for (int t : c.taylor_order) orders.push_back(taylor_label(t));
  j["taylor_order"] = orders;
  j["n"] = c.n;
  j["n_eval"] = c.n_eval;
  j["alpha"] = std::string(to_string(c.alpha));
  j["mu"] = c.mu ? json(*c.mu) : json(nullptr);
  j["gamma"] = c.gamma;
  j["delta_exp"] = c.delta_exp;
  j["tau"] = std::string(to_string(c.tau));
  j["delta"] = c.delta ? json(*c.delta) : json("auto");
  j["neighbors"] = c.neighbors;
  j["lacunary"] = std::string(to_string(c.lacunary));
  j["seed"] = c.seed;
  j["halton_skip"] = c.halton_skip;
  j["output"] = c.output;
  j["timing"] = c.timing;
  return j;
}

ExperimentConfig config_from(const json& j) {
  if (!j.is_object()) throw InvalidConfig("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "surface") {
        c.surface = value.get<std::string>();
      } else if (key == "function") {
        c.function = value.get<std::string>();
      } else if (key == "taylor_order") {
        c.taylor_order = orders_from(value);
      } else if (key == "n") {
        c.n = value.is_array() ? value.get<std::vector<std::size_t>>()
                               : std::vector<std::size_t>{value.get<std::size_t>()};
      } else if (key == "n_eval") {
        c.n_eval = value.get<std::size_t>();
      } else if (key == "alpha") {
        c.alpha = parse_alpha_kind(value.get<std::string>());
      } else if (key == "mu") {
        if (!value.is_null()) c.mu = value.get<double>();
      } else if (key == "gamma") {
        c.gamma = value.get<double>();
      } else if (key == "delta_exp") {
        c.delta_exp = value.get<double>();
      } else if (key == "tau") {
        c.tau = parse_tau_kind(value.get<std::string>());
      } else if (key == "delta") {
        if (value.is_string()) {
          if (value.get<std::string>() != "auto") throw InvalidConfig("delta is a number or \"auto\"");
        } else if (!value.is_null()) {
          c.delta = value.get<double>();
        }
      } else if (key == "neighbors") {
        c.neighbors = value.get<int>();
      } else if (key == "lacunary") {
        c.lacunary = parse_lacunary(value.get<std::string>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "halton_skip") {
        c.halton_skip = value.get<std::size_t>();
      } else if (key == "output") {
        c.output = value.get<std::string>();
      } else if (key == "timing") {
        c.timing = value.get<bool>();
      } else {
        throw InvalidConfig("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ErrorMetrics evaluate_row(const HermiteInterpolant& interp, std::span<const SurfacePoint> eval,
                          std::string_view function) {
  std::vector<double> residuals;
  residuals.reserve(eval.size());
  for (const auto& p : eval) {
    residuals.push_back(interp(p.v) - test_function(function, p.x).value);
  }
  return error_metrics(residuals);
}

}  // namespace

FunctionJet test_function(std::string_view id, const Vec3& x) {
  FunctionJet f;
  if (id == "f1") {
    const double ex = std::exp(x.x());
    const double eyz = std::exp(x.y() + x.z());
    f.value = 0.1 * (ex + 2.0 * eyz);
    f.gradient = {0.1 * ex, 0.2 * eyz, 0.2 * eyz};
    f.hessian << 0.1 * ex, 0.0, 0.0,
                 0.0, 0.2 * eyz, 0.2 * eyz,
                 0.0, 0.2 * eyz, 0.2 * eyz;
    return f;
  }
  if (id == "f2") {
    const double sx = std::sin(x.x()), sy = std::sin(x.y()), sz = std::sin(x.z());
    const double cx = std::cos(x.x()), cy = std::cos(x.y()), cz = std::cos(x.z());
    f.value = sx * sy * sz;
    f.gradient = {cx * sy * sz, sx * cy * sz, sx * sy * cz};
    f.hessian << -f.value, cx * cy * sz, cx * sy * cz,
                 cx * cy * sz, -f.value, sx * cy * cz,
                 cx * sy * cz, sx * cy * cz, -f.value;
    return f;
  }
  throw UnknownFunction("unknown test function: " + std::string(id));
}

Lacunary parse_lacunary(std::string_view name) {
  if (name == "none") return Lacunary::None;
  if (name == "half-first-derivatives") return Lacunary::HalfFirst;
  if (name == "half-second-derivatives") return Lacunary::HalfSecond;
  throw InvalidConfig("unknown lacunary mode: " + std::string(name));
}

std::string_view to_string(Lacunary lacunary) {
  switch (lacunary) {
    case Lacunary::None:
      return "none";
    case Lacunary::HalfFirst:
      return "half-first-derivatives";
    case Lacunary::HalfSecond:
      return "half-second-derivatives";
  }
  return "none";
}

int parse_taylor_order(std::string_view name) {
  if (!name.empty() && (name.front() == 'T' || name.front() == 't')) name.remove_prefix(1);
  if (name == "0") return 0;
  if (name == "1") return 1;
  if (name == "2") return 2;
  throw InvalidConfig("taylor order must be T0, T1 or T2");
}

std::string taylor_label(int order) { return "T" + std::to_string(order); }

void ExperimentConfig::validate() const {
  Chart::by_name(surface);
  test_function(function, Vec3::Zero());
  if (taylor_order.empty()) throw InvalidConfig("taylor_order is empty");
  for (int t : taylor_order) {
    if (t < 0 || t > 2) throw InvalidConfig("taylor_order must lie in 0..2");
  }
  if (n.empty()) throw InvalidConfig("n list is empty");
  for (std::size_t v : n) {
    if (v < 2) throw InvalidConfig("n values must be at least 2");
  }
  if (n_eval == 0) throw InvalidConfig("n_eval must be positive");
  if (delta && !(*delta > 0.0)) throw InvalidConfig("delta must be positive");
  if (neighbors < 1) throw InvalidConfig("neighbors must be positive");
  for (int t : taylor_order) basis_for(t, delta.value_or(1.0)).validate();
}

BasisConfig ExperimentConfig::basis_for(int order, double delta_value) const {
  BasisConfig b = BasisConfig::defaults(order, delta_value);
  b.alpha_kind = alpha;
  if (mu) b.mu = *mu;
  b.gamma = gamma;
  b.delta_exp = delta_exp;
  b.tau_kind = tau;
  return b;
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from(j);
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

bool ErrorReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ErrorRow& r) { return r.error.empty(); });
}

std::vector<const ErrorRow*> ErrorReport::series(int order) const {
  std::vector<const ErrorRow*> out;
  for (const auto& r : rows) {
    if (r.order == order) out.push_back(&r);
  }
  std::sort(out.begin(), out.end(), [](const ErrorRow* a, const ErrorRow* b) { return a->n < b->n; });
  return out;
}

ErrorMetrics error_metrics(std::span<const double> residuals) {
  if (residuals.empty()) throw InvalidConfig("no residuals");
  ErrorMetrics m;
  double squares = 0.0;
  for (double r : residuals) {
    m.mae = std::max(m.mae, std::abs(r));
    squares += r * r;
  }
  m.rmse = std::sqrt(squares / static_cast<double>(residuals.size()));
  return m;
}

std::vector<SampleSite> build_samples(const Chart& chart, std::span<const SurfacePoint> nodes,
                                      std::string_view function, int order, Lacunary lacunary) {
  if (order < 0 || order > 2) throw InvalidConfig("taylor order must lie in 0..2");
  std::vector<SampleSite> samples;
  samples.reserve(nodes.size());
  for (const auto& node : nodes) {
    const FunctionJet f = test_function(function, node.x);
    const LocalJet jet = pushforward_derivatives(f.value, f.gradient, f.hessian, chart, node.v);
    SampleSite site;
    site.id = node.id;
    site.v = node.v;
    site.ambient = node.x;
    const bool even = node.id % 2 == 0;
    for (int b = 0; b < 6; ++b) {
      const MultiIndex beta = kOrderTwoIndices[b];
      if (beta.order() > order) continue;
      if (even && lacunary == Lacunary::HalfFirst && beta.order() == 1) continue;
      if (even && lacunary == Lacunary::HalfSecond && beta.order() == 2) continue;
      site.data[beta] = jet[b];
    }
    samples.push_back(std::move(site));
  }
  return samples;
}

std::vector<SampleSite> build_samples(const ExperimentConfig& config, std::size_t n, int order) {
  const Chart chart = Chart::by_name(config.surface);
  const auto nodes = nodes_on_surface(chart, n, config.halton_skip);
  return build_samples(chart, nodes, config.function, order, config.lacunary);
}

double adaptive_delta(const CellIndex& index, std::span<const Vec2> eval, int count) {
  double radius = 0.0;
  for (const Vec2& u : eval) {
    const auto hits = index.nearest(u, static_cast<std::size_t>(count));
    if (!hits.empty()) radius = std::max(radius, hits.back().second);
  }
  return radius * (1.0 + 1e-9);
}

ErrorReport run_experiment(const ExperimentConfig& config) {
  using Clock = std::chrono::steady_clock;
  config.validate();
  const auto run_start = Clock::now();
  const Chart chart = Chart::by_name(config.surface);
  const DistanceFn distance = distance_function(chart);
  const auto eval = eval_points(chart, config.n_eval, config.seed);
  const auto eval_v = local_coordinates(eval);
  const auto probes = probe_grid(chart, 200);

  ErrorReport report;
  report.config = config;
  for (std::size_t n : config.n) {
    const auto nodes = nodes_on_surface(chart, n, config.halton_skip);
    const CellIndex index(chart, local_coordinates(nodes), distance);
    const PointSetStats stats = point_set_stats(index, probes);
    const double base_delta =
        config.delta ? *config.delta : adaptive_delta(index, eval_v, config.neighbors);
    for (int order : config.taylor_order) {
      const auto row_start = Clock::now();
      ErrorRow row;
      row.n = n;
      row.order = order;
      row.fill = stats.fill;
      row.sep = stats.separation;
      auto samples = build_samples(chart, nodes, config.function, order, config.lacunary);
      for (int attempt = 0; attempt < 2; ++attempt) {
        row.delta = base_delta * (attempt == 0 ? 1.0 : 2.0);
        try {
          const HermiteInterpolant interp(chart, samples, config.basis_for(order, row.delta),
                                          distance);
          const ErrorMetrics m = evaluate_row(interp, eval, config.function);
          row.mae = m.mae;
          row.rmse = m.rmse;
          row.error.clear();
          break;
        } catch (const EmptyStencil& e) {
          row.mae = row.rmse = kNaN;
          row.error = e.what();
        }
      }
      if (config.timing) {
        row.seconds = std::chrono::duration<double>(Clock::now() - row_start).count();
      }
      report.rows.push_back(std::move(row));
    }
  }
  if (config.timing) {
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - run_start).count();
  }
  return report;
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidConfig("fit needs matching x and y");
  if (x.size() < 4) throw InsufficientRows("slope fit needs at least 4 rows");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientRows("slope fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rows = x.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::map<int, SlopeFit> convergence_slope(const ErrorReport& report) {
  std::map<int, SlopeFit> fits;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> data;
  for (const auto& r : report.rows) {
    data[r.order];  // every order gets a fit attempt
    if (!r.error.empty() || !(r.rmse > 0.0) || !(r.fill > 0.0)) continue;
    data[r.order].first.push_back(std::log(r.fill));
    data[r.order].second.push_back(std::log(r.rmse));
  }
  for (const auto& [order, xy] : data) {
    fits[order] = fit_slope(xy.first, xy.second);
  }
  return fits;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

void write_report_csv(const ErrorReport& report, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.n << ',' << taylor_label(r.order) << ',' << format_double(r.mae) << ','
        << format_double(r.rmse) << ',' << format_double(r.fill) << ',' << format_double(r.sep)
        << ',' << format_double(r.seconds) << '\n';
  }
}

void write_report_json(const ErrorReport& report, std::ostream& out) {
  json j;
  j["config"] = config_json(report.config);
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["n"] = r.n;
    row["order"] = taylor_label(r.order);
    row["mae"] = number_or_null(r.mae);
    row["rmse"] = number_or_null(r.rmse);
    row["fill"] = number_or_null(r.fill);
    row["sep"] = number_or_null(r.sep);
    row["seconds"] = r.seconds;
    row["delta"] = number_or_null(r.delta);
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["wall_seconds"] = report.wall_seconds;
  out << j.dump(2) << '\n';
}

ErrorReport report_from_json(std::string_view text) {
  ErrorReport report;
  try {
    const json j = json::parse(text);
    report.config = config_from(j.at("config"));
    for (const auto& row : j.at("rows")) {
      ErrorRow r;
      r.n = row.at("n").get<std::size_t>();
      r.order = parse_taylor_order(row.at("order").get<std::string>());
      r.mae = number_from(row.at("mae"));
      r.rmse = number_from(row.at("rmse"));
      r.fill = number_from(row.at("fill"));
      r.sep = number_from(row.at("sep"));
      r.seconds = row.at("seconds").get<double>();
      r.delta = number_from(row.at("delta"));
      r.error = row.value("error", std::string());
      report.rows.push_back(std::move(r));
    }
    report.wall_seconds = j.at("wall_seconds").get<double>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
  return report;
}

void emit(const ErrorReport& report, EmitFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  if (format == EmitFormat::Csv) {
    write_report_csv(report, out);
  } else {
    write_report_json(report, out);
  }
  if (!out) throw IoError("write to " + path + " failed");
}

void write_points_csv(std::span<const SurfacePoint> points, std::ostream& out) {
  out << kPointsCsvHeader << '\n';
  for (const auto& p : points) {
    out << p.id << ',' << format_double(p.v.x()) << ',' << format_double(p.v.y()) << ','
        << format_double(p.x.x()) << ',' << format_double(p.x.y()) << ','
        << format_double(p.x.z()) << '\n';
  }
}

std::vector<SurfacePoint> read_points_csv(std::istream& in) {
  expect_header(in, kPointsCsvHeader);
  std::vector<SurfacePoint> points;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw IoError("point row needs 6 fields: " + line);
    SurfacePoint p;
    p.id = static_cast<int>(parse_int(f[0]));
    p.v = {parse_double(f[1]), parse_double(f[2])};
    p.x = {parse_double(f[3]), parse_double(f[4]), parse_double(f[5])};
    points.push_back(p);
  }
  return points;
}

void write_samples_csv(std::span<const SampleSite> samples, std::ostream& out) {
  out << kSamplesCsvHeader << '\n';
  for (const auto& s : samples) {
    unsigned mask = 0;
    out << s.id << ',' << format_double(s.v.x()) << ',' << format_double(s.v.y());
    for (int b = 0; b < 6; ++b) {
      const auto it = s.data.find(kOrderTwoIndices[b]);
      out << ',' << format_double(it == s.data.end() ? 0.0 : it->second);
      if (it != s.data.end()) mask |= 1u << b;
    }
    for (const auto& [beta, value] : s.data) {
      if (beta.order() > 2) throw IoError("sample CSV holds derivatives up to order 2");
    }
    out << ',' << mask << '\n';
  }
}

std::vector<SampleSite> read_samples_csv(std::istream& in) {
  expect_header(in, kSamplesCsvHeader);
  std::vector<SampleSite> samples;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) throw IoError("sample row needs 10 fields: " + line);
    SampleSite s;
    s.id = static_cast<int>(parse_int(f[0]));
    s.v = {parse_double(f[1]), parse_double(f[2])};
    const long long mask = parse_int(f[9]);
    if (mask < 0 || mask > 63) throw IoError("mask must be a 6-bit value: " + f[9]);
    for (int b = 0; b < 6; ++b) {
      if (mask & (1LL << b)) s.data[kOrderTwoIndices[b]] = parse_double(f[3 + b]);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace hbsurf
