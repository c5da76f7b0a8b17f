#ifndef HBSURF_HARNESS_HPP
#define HBSURF_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbsurf/basis.hpp"
#include "hbsurf/geometry.hpp"
#include "hbsurf/interpolant.hpp"
#include "hbsurf/pointsets.hpp"

namespace hbsurf {

struct FunctionJet {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  Mat3 hessian = Mat3::Zero();
};

/// f1 = (e^x + 2 e^(y+z)) / 10, f2 = sin x sin y sin z.
FunctionJet test_function(std::string_view id, const Vec3& x);

/// Which derivative data is dropped at even-id nodes.
enum class Lacunary { None, HalfFirst, HalfSecond };
Lacunary parse_lacunary(std::string_view name);
std::string_view to_string(Lacunary lacunary);

/// "T0".."T2" or "0".."2".
int parse_taylor_order(std::string_view name);
std::string taylor_label(int order);

struct ExperimentConfig {
  std::string surface = "sphere";
  std::string function = "f1";
  std::vector<int> taylor_order = {0, 1, 2};
  std::vector<std::size_t> n = {500, 1000, 2000, 4000, 8000, 16000};
  std::size_t n_eval = 50;

  AlphaKind alpha = AlphaKind::Power;
  std::optional<double> mu;     // default k + 1
  double gamma = 1.0;
  double delta_exp = 0.0;
  TauKind tau = TauKind::Wendland;
  std::optional<double> delta;  // default adaptive
  int neighbors = 12;           // adaptive delta covers this many nodes around every eval point

  Lacunary lacunary = Lacunary::None;
  std::uint64_t seed = 1;
  std::size_t halton_skip = 0;
  std::string output;
  bool timing = false;

  bool operator==(const ExperimentConfig&) const = default;
  void validate() const;
  BasisConfig basis_for(int order, double delta_value) const;
};

ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

struct ErrorRow {
  std::size_t n = 0;
  int order = 0;
  double mae = 0.0;
  double rmse = 0.0;
  double fill = 0.0;
  double sep = 0.0;
  double seconds = 0.0;
  double delta = 0.0;
  std::string error;  // non-empty when the row failed

  bool operator==(const ErrorRow&) const = default;
};

struct ErrorReport {
  ExperimentConfig config;
  std::vector<ErrorRow> rows;
  double wall_seconds = 0.0;

  bool operator==(const ErrorReport&) const = default;
  bool ok() const;
  /// RMSE series for one order, ordered by n.
  std::vector<const ErrorRow*> series(int order) const;
};

struct ErrorMetrics {
  double mae = 0.0;
  double rmse = 0.0;
};
ErrorMetrics error_metrics(std::span<const double> residuals);

/// Samples at the given nodes with complete data through `order`, then the lacunary
/// removal applied at even ids.
std::vector<SampleSite> build_samples(const Chart& chart, std::span<const SurfacePoint> nodes,
                                      std::string_view function, int order, Lacunary lacunary);
std::vector<SampleSite> build_samples(const ExperimentConfig& config, std::size_t n, int order);

/// Smallest radius, slightly enlarged, reaching `count` nodes from every eval point.
double adaptive_delta(const CellIndex& index, std::span<const Vec2> eval, int count);

ErrorReport run_experiment(const ExperimentConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual of the fit
  std::size_t rows = 0;
};

/// Least squares fit of y on x. Throws InsufficientRows below 4 points.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);

/// Per-order slope of log RMSE against log fill distance.
std::map<int, SlopeFit> convergence_slope(const ErrorReport& report);

enum class EmitFormat { Csv, Json };
inline constexpr std::string_view kReportCsvHeader = "n,order,mae,rmse,fill,sep,seconds";

void write_report_csv(const ErrorReport& report, std::ostream& out);
void write_report_json(const ErrorReport& report, std::ostream& out);
ErrorReport report_from_json(std::string_view text);
void emit(const ErrorReport& report, EmitFormat format, const std::string& path);

inline constexpr std::string_view kPointsCsvHeader = "id,v1,v2,x,y,z";
inline constexpr std::string_view kSamplesCsvHeader =
    "id,v1,v2,f,f_v1,f_v2,f_v1v1,f_v1v2,f_v2v2,mask";

void write_points_csv(std::span<const SurfacePoint> points, std::ostream& out);
std::vector<SurfacePoint> read_points_csv(std::istream& in);

/// Bit b of mask marks kOrderTwoIndices[b] as present; absent values are written as 0.
void write_samples_csv(std::span<const SampleSite> samples, std::ostream& out);
std::vector<SampleSite> read_samples_csv(std::istream& in);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

}  // namespace hbsurf

#endif  // HBSURF_HARNESS_HPP
