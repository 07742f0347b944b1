#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perfwall/core_model.hpp"

namespace perfwall {

enum class Benchmark { hpl, hpcg };
enum class Accelerator { none, gpu, coprocessor };

std::string_view to_string(Benchmark b);
std::string_view to_string(Accelerator a);
std::optional<Benchmark> parse_benchmark(std::string_view s);
std::optional<Accelerator> parse_accelerator(std::string_view s);

// One measured machine / benchmark row. Performance in Gflop/s.
struct BenchmarkRecord {
  std::string name;
  int year = 0;
  std::optional<int> rank;
  std::uint64_t cores = 1;
  double r_peak = 0.0;
  double r_max = 0.0;
  Benchmark benchmark = Benchmark::hpl;
  Accelerator accelerator = Accelerator::none;
};

inline constexpr std::string_view kRecordCsvHeader =
    "name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark,accelerator";

struct RowDiagnostic {
  std::size_t line;  // 1-based, header is line 1
  std::string message;
};

struct IngestResult {
  std::vector<BenchmarkRecord> records;
  std::vector<RowDiagnostic> errors;  // rejected rows
  std::vector<std::string> warnings;
};

// Missing file throws InputError; a wrong header throws ParseError. Bad rows
// are skipped and reported in `errors`.
IngestResult ingest(const std::filesystem::path& path);
IngestResult ingest(std::istream& in, const std::string& source = "<input>");

struct DerivedMetrics {
  Efficiency efficiency;
  AlphaFraction alpha;
  Gain gain;
  double p_single;  // Gflop/s per core
};

// E = R_Max / R_Peak, (1 - alpha) from (E, cores), G = 1 / (1 - alpha).
// cores = 1 throws UndefinedQuantity; E = 1 throws UnboundedGain.
DerivedMetrics derive(const BenchmarkRecord& record);

void write_derived_csv(std::ostream& out, std::span<const BenchmarkRecord> records);

enum class Transform { linear, log_y, log_x, log_log };
std::string_view to_string(Transform t);

struct Point {
  double x;
  double y;
};

// Ordinary least squares in the transformed (log10) coordinates.
struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Transform transform = Transform::linear;
  std::size_t n = 0;

  // Fitted value back in the original coordinates.
  double predict(double x) const;
};

RegressionFit fit_regression(std::span<const Point> points, Transform transform);

struct ScalingPoint {
  double k;
  double efficiency;
};

struct AlphaDeltaResult {
  RegressionFit fit;  // 1/E = intercept + slope k
  // (1 - alpha_delta) = slope; nullopt for a negative slope.
  std::optional<AlphaFraction> alpha_delta;
  std::vector<std::string> warnings;
};

AlphaDeltaResult alpha_delta(std::span<const ScalingPoint> points);

struct YearValue {
  int year;
  double one_minus_alpha;
};

struct YearBest {
  int year;
  std::string name;
  std::uint64_t cores;
  double one_minus_alpha;
};

struct TrendResult {
  std::vector<YearBest> best_per_year;
  RegressionFit fit;  // log10(1 - alpha) vs year; slope in decades per year
  std::vector<std::string> notes;
};

// log10(1 - alpha) against year.
RegressionFit fit_year_trend(std::span<const YearValue> points);

// Best (smallest) (1 - alpha) per year over HPL records, ties to larger core count.
TrendResult trend_over_years(std::span<const BenchmarkRecord> records);

double median(std::vector<double> values);

struct ClassSample {
  Accelerator accelerator;
  double rank;
  double value;
};

struct ClassStatistic {
  Accelerator accelerator;
  std::size_t count;
  double median;
  std::optional<RegressionFit> vs_rank;
};

// Per-class median and value-vs-rank fit; classes with no samples are left out.
std::vector<ClassStatistic> summarize_by_class(std::span<const ClassSample> samples, Transform fit_transform);

struct AcceleratorSummary {
  Accelerator accelerator;
  std::size_t count;
  double median_p_single;
  double median_gain;
  std::optional<RegressionFit> p_single_vs_rank;  // linear
  std::optional<RegressionFit> gain_vs_rank;      // log_y
};

struct AcceleratorReport {
  std::vector<AcceleratorSummary> classes;
  std::vector<std::string> notes;
};

AcceleratorReport group_by_accelerator(std::span<const BenchmarkRecord> records);

}  // namespace perfwall
