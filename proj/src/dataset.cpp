#include "perfwall/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <fmt/format.h>

#include "perfwall/errors.hpp"
#include "perfwall/text_util.hpp"

namespace perfwall {

std::string_view to_string(Benchmark b) { return b == Benchmark::hpl ? "HPL" : "HPCG"; }

std::string_view to_string(Accelerator a) {
  switch (a) {
    case Accelerator::none: return "none";
    case Accelerator::gpu: return "gpu";
    case Accelerator::coprocessor: return "coprocessor";
  }
  return "none";
}

std::optional<Benchmark> parse_benchmark(std::string_view s) {
  const auto v = to_lower(trim(s));
  if (v == "hpl") return Benchmark::hpl;
  if (v == "hpcg") return Benchmark::hpcg;
  return std::nullopt;
}

std::optional<Accelerator> parse_accelerator(std::string_view s) {
  const auto v = to_lower(trim(s));
  if (v.empty() || v == "none") return Accelerator::none;
  if (v == "gpu") return Accelerator::gpu;
  if (v == "coprocessor") return Accelerator::coprocessor;
  return std::nullopt;
}

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::linear: return "linear";
    case Transform::log_y: return "log_y";
    case Transform::log_x: return "log_x";
    case Transform::log_log: return "log_log";
  }
  return "linear";
}

namespace {

// RFC 4180 style: quoted fields may contain commas and doubled quotes.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(trim(cur));
  return fields;
}

BenchmarkRecord parse_row(const std::vector<std::string>& f, bool has_accelerator) {
  BenchmarkRecord r;
  r.name = f[0];
  if (r.name.empty()) throw InputError("empty name");

  const auto year = parse_int(f[1]);
  if (!year) throw InputError(fmt::format("year '{}' is not an integer", f[1]));
  r.year = static_cast<int>(*year);

  if (!f[2].empty()) {
    const auto rank = parse_int(f[2]);
    if (!rank || *rank < 1) throw InputError(fmt::format("rank '{}' is not a positive integer", f[2]));
    r.rank = static_cast<int>(*rank);
  }

  const auto cores = parse_int(f[3]);
  if (!cores || *cores < 1) throw InputError(fmt::format("cores '{}' is not a positive integer", f[3]));
  r.cores = static_cast<std::uint64_t>(*cores);

  const auto rpeak = parse_double(f[4]);
  const auto rmax = parse_double(f[5]);
  if (!rpeak || !(*rpeak > 0.0) || !std::isfinite(*rpeak)) {
    throw InputError(fmt::format("rpeak_gflops '{}' is not a positive number", f[4]));
  }
  if (!rmax || !(*rmax > 0.0) || !std::isfinite(*rmax)) {
    throw InputError(fmt::format("rmax_gflops '{}' is not a positive number", f[5]));
  }
  if (*rmax > *rpeak) {
    throw InconsistentMeasurement(fmt::format("rmax_gflops {} exceeds rpeak_gflops {}", *rmax, *rpeak));
  }
  r.r_peak = *rpeak;
  r.r_max = *rmax;

  const auto bench = parse_benchmark(f[6]);
  if (!bench) throw InputError(fmt::format("benchmark '{}' is not HPL or HPCG", f[6]));
  r.benchmark = *bench;

  if (has_accelerator) {
    const auto acc = parse_accelerator(f[7]);
    if (!acc) throw InputError(fmt::format("accelerator '{}' is not none, gpu or coprocessor", f[7]));
    r.accelerator = *acc;
  }
  return r;
}

}  // namespace

IngestResult ingest(std::istream& in, const std::string& source) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  bool has_accelerator = true;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    if (!header_seen) {
      header_seen = true;
      const auto fields = split_csv_line(line);
      std::string joined;
      for (const auto& f : fields.value_or(std::vector<std::string>{})) {
        joined += (joined.empty() ? "" : ",") + to_lower(f);
      }
      constexpr std::string_view kWithoutAccelerator = "name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark";
      if (joined == kRecordCsvHeader) {
        has_accelerator = true;
      } else if (joined == kWithoutAccelerator) {
        has_accelerator = false;
        result.warnings.push_back(
            fmt::format("{}: no accelerator column, all records default to 'none'", source));
      } else {
        throw ParseError(fmt::format("{}:{}: unexpected header '{}', expected '{}'", source, line_no,
                                     line, kRecordCsvHeader));
      }
      continue;
    }

    const auto fields = split_csv_line(line);
    const std::size_t expected = has_accelerator ? 8 : 7;
    if (!fields) {
      result.errors.push_back({line_no, "unterminated quoted field"});
      continue;
    }
    if (fields->size() != expected) {
      result.errors.push_back(
          {line_no, fmt::format("expected {} fields, found {}", expected, fields->size())});
      continue;
    }
    try {
      result.records.push_back(parse_row(*fields, has_accelerator));
    } catch (const InputError& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  if (!header_seen) result.warnings.push_back(fmt::format("{}: empty file, no records", source));
  return result;
}

IngestResult ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open data file '{}'", path.string()));
  return ingest(in, path.string());
}

DerivedMetrics derive(const BenchmarkRecord& record) {
  if (record.cores < 2) {
    throw UndefinedQuantity(fmt::format("'{}': alpha is undefined for a single core", record.name));
  }
  if (!(record.r_peak > 0.0) || !(record.r_max > 0.0) || record.r_max > record.r_peak) {
    throw InconsistentMeasurement(fmt::format("'{}': need 0 < R_Max <= R_Peak", record.name));
  }
  const double e = record.r_max / record.r_peak;
  const Efficiency eff{e, record.cores};
  const auto alpha = alpha_from_efficiency(eff);
  return {eff, alpha, gain(alpha), record.r_peak / static_cast<double>(record.cores)};
}

void write_derived_csv(std::ostream& out, std::span<const BenchmarkRecord> records) {
  out << kRecordCsvHeader << ",efficiency,one_minus_alpha,gain,p_single_gflops\n";
  for (const auto& r : records) {
    const double e = r.r_max / r.r_peak;
    const double oma = alpha_from_efficiency(e, static_cast<double>(r.cores)).one_minus_alpha();
    const double g = oma > 0.0 ? 1.0 / oma : std::numeric_limits<double>::infinity();
    out << csv_field(r.name) << ',' << r.year << ',' << (r.rank ? std::to_string(*r.rank) : "") << ',' << r.cores
        << ',' << sci(r.r_peak) << ',' << sci(r.r_max) << ',' << to_string(r.benchmark) << ','
        << to_string(r.accelerator) << ',' << sci(e) << ',' << sci(oma) << ',' << sci(g) << ','
        << sci(r.r_peak / static_cast<double>(r.cores)) << '\n';
  }
}

double RegressionFit::predict(double x) const {
  const bool lx = transform == Transform::log_x || transform == Transform::log_log;
  const bool ly = transform == Transform::log_y || transform == Transform::log_log;
  const double y = intercept + slope * (lx ? std::log10(x) : x);
  return ly ? std::pow(10.0, y) : y;
}

RegressionFit fit_regression(std::span<const Point> points, Transform transform) {
  const bool lx = transform == Transform::log_x || transform == Transform::log_log;
  const bool ly = transform == Transform::log_y || transform == Transform::log_log;
  std::vector<Point> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("regression point is not finite");
    if ((lx && !(p.x > 0.0)) || (ly && !(p.y > 0.0))) {
      throw InputError(fmt::format("regression point ({}, {}) is not positive on a log axis", p.x, p.y));
    }
    pts.push_back({lx ? std::log10(p.x) : p.x, ly ? std::log10(p.y) : p.y});
  }
  if (pts.size() < 2) throw InputError("regression needs at least 2 points");
  // Fixed summation order makes the fit independent of input order.
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  if (pts.front().x == pts.back().x) throw InputError("regression x values are all equal (degenerate)");

  const double n = static_cast<double>(pts.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : pts) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RegressionFit fit;
  fit.transform = transform;
  fit.n = pts.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& p : pts) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

AlphaDeltaResult alpha_delta(std::span<const ScalingPoint> points) {
  std::vector<Point> inv;
  inv.reserve(points.size());
  double k_lo = std::numeric_limits<double>::infinity();
  double k_hi = 0.0;
  for (const auto& p : points) {
    if (!(p.k >= 1.0)) throw InputError(fmt::format("processor count {} is below 1", p.k));
    if (!(p.efficiency > 0.0 && p.efficiency <= 1.0)) {
      throw InconsistentMeasurement(fmt::format("efficiency {} is outside (0, 1]", p.efficiency));
    }
    inv.push_back({p.k, 1.0 / p.efficiency});
    k_lo = std::min(k_lo, p.k);
    k_hi = std::max(k_hi, p.k);
  }
  AlphaDeltaResult result;
  result.fit = fit_regression(inv, Transform::linear);
  const double rise = result.fit.slope * (k_hi - k_lo);
  if (std::abs(rise) <= 1e-12 * std::abs(result.fit.intercept)) {
    result.fit.slope = 0.0;
    result.warnings.push_back("1/E does not change with k: alpha appears to vary with k");
    result.alpha_delta = AlphaFraction::from_one_minus_alpha(0.0);
  } else if (result.fit.slope < 0.0) {
    result.warnings.push_back("negative 1/E slope: super-linear data, alpha_delta undefined");
  } else if (result.fit.slope > 1.0) {
    result.warnings.push_back("1/E slope exceeds 1: inconsistent data, alpha_delta undefined");
  } else {
    result.alpha_delta = AlphaFraction::from_one_minus_alpha(result.fit.slope);
  }
  return result;
}

RegressionFit fit_year_trend(std::span<const YearValue> points) {
  std::vector<Point> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back({static_cast<double>(p.year), p.one_minus_alpha});
  return fit_regression(pts, Transform::log_y);
}

TrendResult trend_over_years(std::span<const BenchmarkRecord> records) {
  TrendResult result;
  std::map<int, YearBest> best;
  for (const auto& r : records) {
    if (r.benchmark != Benchmark::hpl) continue;
    double oma = 0.0;
    try {
      if (r.cores < 2) throw UndefinedQuantity("single core");
      oma = alpha_from_efficiency(r.r_max / r.r_peak, static_cast<double>(r.cores)).one_minus_alpha();
    } catch (const InputError& e) {
      result.notes.push_back(fmt::format("skipped '{}' ({}): {}", r.name, r.year, e.what()));
      continue;
    }
    if (oma == 0.0) {
      result.notes.push_back(fmt::format("skipped '{}' ({}): (1 - alpha) = 0 has no logarithm", r.name, r.year));
      continue;
    }
    const YearBest cand{r.year, r.name, r.cores, oma};
    auto it = best.find(r.year);
    if (it == best.end()) {
      best.emplace(r.year, cand);
    } else if (oma < it->second.one_minus_alpha ||
               (oma == it->second.one_minus_alpha && r.cores > it->second.cores)) {
      it->second = cand;
    }
  }
  if (best.size() < 2) throw InputError("trend needs HPL records from at least 2 years");
  std::vector<YearValue> pts;
  for (const auto& [year, b] : best) {
    result.best_per_year.push_back(b);
    pts.push_back({year, b.one_minus_alpha});
  }
  result.fit = fit_year_trend(pts);
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<ClassStatistic> summarize_by_class(std::span<const ClassSample> samples, Transform fit_transform) {
  std::vector<ClassStatistic> out;
  for (const auto cls : {Accelerator::none, Accelerator::gpu, Accelerator::coprocessor}) {
    std::vector<double> values;
    std::vector<Point> pts;
    for (const auto& s : samples) {
      if (s.accelerator != cls) continue;
      values.push_back(s.value);
      if (std::isfinite(s.rank)) pts.push_back({s.rank, s.value});
    }
    if (values.empty()) continue;
    ClassStatistic stat{cls, values.size(), median(values), std::nullopt};
    const bool distinct = std::any_of(pts.begin(), pts.end(), [&](const Point& p) { return p.x != pts.front().x; });
    if (pts.size() >= 2 && distinct) stat.vs_rank = fit_regression(pts, fit_transform);
    out.push_back(stat);
  }
  return out;
}

AcceleratorReport group_by_accelerator(std::span<const BenchmarkRecord> records) {
  AcceleratorReport report;
  std::vector<ClassSample> p_single;
  std::vector<ClassSample> gains;
  for (const auto& r : records) {
    if (r.benchmark != Benchmark::hpl) continue;
    try {
      const auto m = derive(r);
      const double rank = r.rank ? static_cast<double>(*r.rank) : std::numeric_limits<double>::quiet_NaN();
      p_single.push_back({r.accelerator, rank, m.p_single});
      gains.push_back({r.accelerator, rank, m.gain.value});
    } catch (const InputError& e) {
      report.notes.push_back(fmt::format("skipped '{}': {}", r.name, e.what()));
    }
  }
  const auto perf = summarize_by_class(p_single, Transform::linear);
  const auto gain_stats = summarize_by_class(gains, Transform::log_y);
  for (std::size_t i = 0; i < perf.size(); ++i) {
    report.classes.push_back({perf[i].accelerator, perf[i].count, perf[i].median, gain_stats[i].median,
                              perf[i].vs_rank, gain_stats[i].vs_rank});
  }
  for (const auto cls : {Accelerator::none, Accelerator::gpu, Accelerator::coprocessor}) {
    const bool present = std::any_of(report.classes.begin(), report.classes.end(),
                                     [&](const AcceleratorSummary& s) { return s.accelerator == cls; });
    if (!present) report.notes.push_back(fmt::format("class '{}' has no records, omitted", to_string(cls)));
  }
  return report;
}

}  // namespace perfwall
