#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>
#include <fmt/format.h>

#include "perfwall/analysis.hpp"
#include "perfwall/contrib_model.hpp"
#include "perfwall/core_model.hpp"
#include "perfwall/dataset.hpp"
#include "perfwall/errors.hpp"
#include "perfwall/exec_sim.hpp"
#include "perfwall/text_util.hpp"

namespace perfwall::cli {

namespace {

using nlohmann::json;

enum class Format { text, csv, json };

// Right-aligned text table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width(header_.size());
    for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << (c ? "  " : "") << fmt::format("{:>{}}", cells[c], width[c]);
      }
      out << '\n';
    };
    line(header_);
    for (const auto& row : rows_) line(row);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double v) { return fmt::format("{:.6e}", v); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double parse_count(const std::string& text, const std::string& what) {
  const auto v = parse_double(trim(text));
  if (!v || *v < 1.0 || std::floor(*v) != *v || *v > 9.007199254740992e15) {
    throw InputError(fmt::format("{} must be a positive integer, got '{}'", what, text));
  }
  return *v;
}

struct Range {
  double lo;
  double hi;
  std::size_t n;
};

// "MIN,MAX,N" with optional performance suffixes on MIN and MAX.
Range parse_sweep(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InputError(fmt::format("{} expects MIN,MAX,N, got '{}'", flag, text));
  const auto lo = parse_performance_gflops(parts[0]);
  const auto hi = parse_performance_gflops(parts[1]);
  if (!lo || !hi) throw InputError(fmt::format("{}: cannot read performance values in '{}'", flag, text));
  return {*lo, *hi, static_cast<std::size_t>(parse_count(parts[2], flag + " N"))};
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  std::optional<double> lo;
  std::optional<double> hi;
  if (parts.size() == 2) {
    lo = parse_double(trim(parts[0]));
    hi = parse_double(trim(parts[1]));
  }
  if (!lo || !hi) throw InputError(fmt::format("{} expects LO,HI, got '{}'", flag, text));
  return {*lo, *hi};
}

std::vector<BenchmarkRecord> load_records(const std::string& path, std::ostream& err) {
  auto result = ingest(std::filesystem::path(path));
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  if (!result.errors.empty()) {
    for (const auto& d : result.errors) err << path << ':' << d.line << ": " << d.message << '\n';
    throw InputError(fmt::format("{}: {} invalid row(s)", path, result.errors.size()));
  }
  return std::move(result.records);
}

json fit_json(const RegressionFit& f) {
  return {{"transform", std::string(to_string(f.transform))},
          {"n", f.n},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared}};
}

json breakdown_json(const ContributionBreakdown& b) {
  return {{"alpha_sw", b.sw},
          {"alpha_os", b.os_context},
          {"alpha_addr", b.addressing},
          {"alpha_pd", b.propagation},
          {"one_minus_alpha_total", b.total}};
}

// ---- estimate -------------------------------------------------------------

struct EstimateOptions {
  std::optional<double> speedup;
  std::optional<double> efficiency;
  std::string k;
};

void run_estimate(const EstimateOptions& o, Format fmt_, std::ostream& out) {
  const double k_real = parse_count(o.k, "--k");
  const auto k = static_cast<std::uint64_t>(k_real);
  AlphaFraction alpha = AlphaFraction::from_one_minus_alpha(1.0);
  double s = 0.0;
  double e = 0.0;
  if (o.speedup) {
    s = *o.speedup;
    alpha = alpha_eff_from_speedup({s, k});
    e = s / k_real;
  } else {
    e = *o.efficiency;
    alpha = alpha_from_efficiency({e, k});
    s = e * k_real;
  }
  const double oma = alpha.one_minus_alpha();
  const double g = oma > 0.0 ? gain(alpha).value : std::numeric_limits<double>::infinity();

  switch (fmt_) {
    case Format::csv:
      out << "k,speedup,efficiency,alpha_eff,one_minus_alpha,gain\n"
          << k << ',' << sci(s) << ',' << sci(e) << ',' << sci(alpha.alpha()) << ',' << sci(oma) << ','
          << sci(g) << '\n';
      break;
    case Format::json:
      out << json{{"k", k},
                  {"speedup", s},
                  {"efficiency", e},
                  {"alpha_eff", alpha.alpha()},
                  {"one_minus_alpha", oma},
                  {"gain", json_number(g)}}
                 .dump(2)
          << '\n';
      break;
    case Format::text: {
      Table t({"quantity", "value"});
      t.add({"k", std::to_string(k)});
      t.add({"speedup", sci(s)});
      t.add({"efficiency", sci(e)});
      t.add({"alpha_eff", sci(alpha.alpha())});
      t.add({"1-alpha_eff", sci(oma)});
      t.add({"gain", oma > 0.0 ? sci(g) : std::string("unbounded")});
      t.print(out);
      break;
    }
  }
}

// ---- model ----------------------------------------------------------------

struct ModelOptions {
  std::string config;
  std::string sweep;
  bool log = false;
  std::string output;
};

void run_model(const ModelOptions& o, Format fmt_, std::ostream& out) {
  const auto spec = MachineSpec::load(o.config);
  const auto range = parse_sweep(o.sweep, "--sweep");
  const auto curve = sweep_payload(spec, range.lo, range.hi, range.n, o.log ? Spacing::log : Spacing::linear);
  const auto report = wall_report(spec);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw InputError(fmt::format("cannot write '{}'", o.output));
    write_sweep_csv(f, curve);
  }

  switch (fmt_) {
    case Format::csv:
      write_sweep_csv(out, curve);
      break;
    case Format::json: {
      json samples = json::array();
      for (const auto& s : curve.samples) {
        json j = breakdown_json(s.breakdown);
        j["r_peak_gflops"] = s.r_peak;
        j["efficiency"] = s.efficiency;
        j["r_max_gflops"] = s.r_max;
        samples.push_back(std::move(j));
      }
      json doc{{"samples", samples},
               {"sweep_peak", {{"r_peak_gflops", curve.peak.r_peak}, {"r_max_gflops", curve.peak.r_max},
                               {"interior", curve.peak_interior}}}};
      if (report.peak) {
        doc["wall"] = {{"r_peak_gflops", report.peak->r_peak},
                       {"r_max_gflops", report.peak->r_max},
                       {"limiting_term", std::string(to_string(*report.limiting_at_peak))}};
      } else {
        doc["wall"] = nullptr;
      }
      if (report.crossover_r_peak) doc["crossover_r_peak_gflops"] = *report.crossover_r_peak;
      if (report.gain_ceiling) doc["gain_ceiling"] = *report.gain_ceiling;
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::text: {
      Table t({"r_peak_gflops", "alpha_sw", "alpha_os", "alpha_addr", "alpha_pd", "1-alpha", "efficiency",
               "r_max_gflops"});
      for (const auto& s : curve.samples) {
        const auto& b = s.breakdown;
        t.add({num(s.r_peak), num(b.sw), num(b.os_context), num(b.addressing), num(b.propagation), num(b.total),
               num(s.efficiency), num(s.r_max)});
      }
      t.print(out);
      out << fmt::format("\nSweep maximum: R_Peak = {:.6e} Gflop/s, R_Max = {:.6e} Gflop/s{}\n\n",
                         curve.peak.r_peak, curve.peak.r_max,
                         curve.peak_interior ? "" : " (at sweep end point)");
      write_wall_report(out, report);
      break;
    }
  }
}

// ---- simulate -------------------------------------------------------------

struct SimulateOptions {
  std::optional<double> alpha;
  std::string k;
  double latency = 0.0;
  std::vector<double> skew;
  double total_time = 1.0;
  std::string scenario;
};

void run_simulate(const SimulateOptions& o, Format fmt_, std::ostream& out) {
  SimScenario scn;
  if (!o.scenario.empty()) {
    scn = SimScenario::load(o.scenario);
  } else {
    if (!o.alpha || o.k.empty()) throw InputError("simulate needs --scenario FILE or both --alpha and --k");
    const auto alpha = AlphaFraction::from_alpha(*o.alpha);
    scn.k = static_cast<std::uint64_t>(parse_count(o.k, "--k"));
    scn.seq_time = alpha.one_minus_alpha() * o.total_time;
    scn.par_time = alpha.alpha() * o.total_time;
    scn.addressing_latency = o.latency;
    scn.chunk_skew = o.skew;
  }
  const auto result = simulate(scn);
  const double t1 = scn.single_processor_time();
  const auto alpha_in = AlphaFraction::from_one_minus_alpha(scn.seq_time / t1);
  const double closed = speedup_from_alpha(alpha_in, scn.k).value;
  const double dev = std::abs(result.speedup - closed) / closed;
  const double oma_eff = result.alpha_eff ? result.alpha_eff->one_minus_alpha()
                                          : std::numeric_limits<double>::quiet_NaN();

  switch (fmt_) {
    case Format::csv:
      out << "k,t_parallel,speedup,one_minus_alpha_eff,closed_form_speedup,relative_deviation\n"
          << scn.k << ',' << sci(result.t_parallel) << ',' << sci(result.speedup) << ','
          << (result.alpha_eff ? sci(oma_eff) : std::string()) << ',' << sci(closed) << ',' << sci(dev) << '\n';
      break;
    case Format::json: {
      json finish = json::array();
      for (const double f : result.per_worker_finish) finish.push_back(f);
      out << json{{"k", scn.k},
                  {"t_single", t1},
                  {"t_parallel", result.t_parallel},
                  {"speedup", result.speedup},
                  {"one_minus_alpha_eff", json_number(oma_eff)},
                  {"closed_form_speedup", closed},
                  {"relative_deviation", dev},
                  {"per_worker_finish", finish}}
                 .dump(2)
          << '\n';
      break;
    }
    case Format::text: {
      Table t({"quantity", "value"});
      t.add({"k", std::to_string(scn.k)});
      t.add({"T1", sci(t1)});
      t.add({"t_parallel", sci(result.t_parallel)});
      t.add({"speedup (simulated)", sci(result.speedup)});
      t.add({"1-alpha_eff (simulated)", result.alpha_eff ? sci(oma_eff) : std::string("undefined")});
      t.add({"speedup (closed form)", sci(closed)});
      t.add({"relative deviation", sci(dev)});
      t.print(out);
      break;
    }
  }
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOptions {
  std::string file;
  int top = 0;
};

struct NamedFit {
  std::string series;
  RegressionFit fit;
};

void add_fit(std::vector<NamedFit>& fits, std::vector<std::string>& notes, const std::string& name,
             const std::vector<Point>& pts, Transform t) {
  try {
    fits.push_back({name, fit_regression(pts, t)});
  } catch (const InputError& e) {
    notes.push_back(fmt::format("{}: {}", name, e.what()));
  }
}

void run_analyze(const AnalyzeOptions& o, Format fmt_, std::ostream& out, std::ostream& err) {
  auto records = load_records(o.file, err);
  std::vector<BenchmarkRecord> hpl;
  for (const auto& r : records) {
    if (r.benchmark == Benchmark::hpl && (o.top <= 0 || (r.rank && *r.rank <= o.top))) hpl.push_back(r);
  }

  std::vector<std::string> notes;
  std::vector<NamedFit> fits;
  const auto ranked_series = [&](int limit, const std::string& label) {
    std::vector<Point> rank_cores;
    std::vector<Point> cores_alpha;
    for (const auto& r : hpl) {
      if (!r.rank || (limit > 0 && *r.rank > limit)) continue;
      rank_cores.push_back({static_cast<double>(*r.rank), static_cast<double>(r.cores) / 1e6});
      try {
        cores_alpha.push_back({static_cast<double>(r.cores) / 1e6, derive(r).alpha.one_minus_alpha()});
      } catch (const InputError&) {
      }
    }
    add_fit(fits, notes, "rank_vs_cores_" + label, rank_cores, Transform::log_y);
    add_fit(fits, notes, "cores_vs_one_minus_alpha_" + label, cores_alpha, Transform::log_log);
  };
  ranked_series(o.top, o.top > 0 ? "top" + std::to_string(o.top) : "all");
  if (o.top <= 0 || o.top > 10) ranked_series(10, "top10");

  const auto acc = group_by_accelerator(hpl);
  for (const auto& n : acc.notes) notes.push_back(n);
  for (const auto& c : acc.classes) {
    const std::string cls(to_string(c.accelerator));
    if (c.p_single_vs_rank) fits.push_back({"rank_vs_p_single_" + cls, *c.p_single_vs_rank});
    if (c.gain_vs_rank) fits.push_back({"rank_vs_gain_" + cls, *c.gain_vs_rank});
  }

  // Machines measured in several configurations give an alpha_delta estimate.
  std::map<std::string, std::vector<ScalingPoint>> by_name;
  for (const auto& r : hpl) by_name[r.name].push_back({static_cast<double>(r.cores), r.r_max / r.r_peak});
  struct DeltaRow {
    std::string name;
    AlphaDeltaResult result;
  };
  std::vector<DeltaRow> deltas;
  for (const auto& [name, pts] : by_name) {
    std::set<double> ks;
    for (const auto& p : pts) ks.insert(p.k);
    if (ks.size() < 2) continue;
    deltas.push_back({name, alpha_delta(pts)});
  }

  switch (fmt_) {
    case Format::csv:
      write_derived_csv(out, hpl);
      break;
    case Format::json: {
      json rows = json::array();
      for (const auto& r : hpl) {
        const double e = r.r_max / r.r_peak;
        const double oma = r.cores >= 2 ? alpha_from_efficiency(e, static_cast<double>(r.cores)).one_minus_alpha()
                                        : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({{"name", r.name},
                        {"year", r.year},
                        {"rank", r.rank ? json(*r.rank) : json(nullptr)},
                        {"cores", r.cores},
                        {"accelerator", std::string(to_string(r.accelerator))},
                        {"efficiency", e},
                        {"one_minus_alpha", json_number(oma)},
                        {"gain", json_number(oma > 0.0 ? 1.0 / oma : std::numeric_limits<double>::infinity())},
                        {"p_single_gflops", r.r_peak / static_cast<double>(r.cores)}});
      }
      json fj = json::object();
      for (const auto& f : fits) fj[f.series] = fit_json(f.fit);
      json cj = json::array();
      for (const auto& c : acc.classes) {
        cj.push_back({{"accelerator", std::string(to_string(c.accelerator))},
                      {"count", c.count},
                      {"median_p_single_gflops", c.median_p_single},
                      {"median_gain", c.median_gain}});
      }
      json dj = json::array();
      for (const auto& d : deltas) {
        dj.push_back({{"name", d.name},
                      {"slope", d.result.fit.slope},
                      {"intercept", d.result.fit.intercept},
                      {"one_minus_alpha_delta",
                       d.result.alpha_delta ? json(d.result.alpha_delta->one_minus_alpha()) : json(nullptr)}});
      }
      out << json{{"records", rows}, {"regressions", fj}, {"accelerator_classes", cj}, {"alpha_delta", dj},
                  {"notes", notes}}
                 .dump(2)
          << '\n';
      break;
    }
    case Format::text: {
      Table t({"rank", "name", "cores", "accel", "efficiency", "1-alpha", "gain", "p_single"});
      for (const auto& r : hpl) {
        std::string oma_s = "-";
        std::string gain_s = "-";
        try {
          const auto m = derive(r);
          oma_s = num(m.alpha.one_minus_alpha());
          gain_s = num(m.gain.value);
        } catch (const InputError& e) {
          notes.push_back(fmt::format("'{}': {}", r.name, e.what()));
        }
        t.add({r.rank ? std::to_string(*r.rank) : "-", r.name, std::to_string(r.cores),
               std::string(to_string(r.accelerator)), num(r.r_max / r.r_peak), oma_s, gain_s,
               num(r.r_peak / static_cast<double>(r.cores))});
      }
      t.print(out);
      out << "\nRegressions (log axes fitted on log10 values)\n";
      Table ft({"series", "transform", "n", "slope", "intercept", "r_squared"});
      for (const auto& f : fits) {
        ft.add({f.series, std::string(to_string(f.fit.transform)), std::to_string(f.fit.n), num(f.fit.slope),
                num(f.fit.intercept), fmt::format("{:.4f}", f.fit.r_squared)});
      }
      ft.print(out);
      out << "\nAccelerator classes\n";
      Table ct({"class", "count", "median p_single", "median gain"});
      for (const auto& c : acc.classes) {
        ct.add({std::string(to_string(c.accelerator)), std::to_string(c.count), num(c.median_p_single),
                num(c.median_gain)});
      }
      ct.print(out);
      if (!deltas.empty()) {
        out << "\nalpha_delta (slope of 1/E vs k)\n";
        Table dt({"name", "points", "1-alpha_delta", "intercept"});
        for (const auto& d : deltas) {
          dt.add({d.name, std::to_string(d.result.fit.n),
                  d.result.alpha_delta ? num(d.result.alpha_delta->one_minus_alpha()) : std::string("undefined"),
                  num(d.result.fit.intercept)});
        }
        dt.print(out);
      }
      for (const auto& n : notes) out << "note: " << n << '\n';
      break;
    }
  }
}

// ---- trend ----------------------------------------------------------------

void run_trend(const std::string& file, Format fmt_, std::ostream& out, std::ostream& err) {
  const auto records = load_records(file, err);
  const auto trend = trend_over_years(records);
  switch (fmt_) {
    case Format::csv:
      out << "year,name,cores,one_minus_alpha,fitted_one_minus_alpha\n";
      for (const auto& b : trend.best_per_year) {
        out << b.year << ',' << csv_field(b.name) << ',' << b.cores << ',' << sci(b.one_minus_alpha) << ','
            << sci(trend.fit.predict(b.year)) << '\n';
      }
      break;
    case Format::json: {
      json best = json::array();
      for (const auto& b : trend.best_per_year) {
        best.push_back({{"year", b.year}, {"name", b.name}, {"cores", b.cores}, {"one_minus_alpha", b.one_minus_alpha}});
      }
      out << json{{"best_per_year", best}, {"fit", fit_json(trend.fit)}, {"notes", trend.notes}}.dump(2) << '\n';
      break;
    }
    case Format::text: {
      Table t({"year", "name", "cores", "1-alpha"});
      for (const auto& b : trend.best_per_year) {
        t.add({std::to_string(b.year), b.name, std::to_string(b.cores), num(b.one_minus_alpha)});
      }
      t.print(out);
      out << fmt::format("\nlog10(1-alpha) = {:.6e} + {:.6e} * year   (r^2 = {:.4f})\n", trend.fit.intercept,
                         trend.fit.slope, trend.fit.r_squared);
      out << fmt::format("trend: {:.6f} decades per year\n", trend.fit.slope);
      for (const auto& n : trend.notes) out << "note: " << n << '\n';
      break;
    }
  }
}

// ---- predict --------------------------------------------------------------

struct PredictOptions {
  std::string file;
  std::string row;
  std::string rpeak;
  bool log = false;
};

void run_predict(const PredictOptions& o, Format fmt_, std::ostream& out, std::ostream& err) {
  const auto records = load_records(o.file, err);
  const auto it = std::find_if(records.begin(), records.end(), [&](const BenchmarkRecord& r) { return r.name == o.row; });
  if (it == records.end()) throw InputError(fmt::format("no record named '{}' in {}", o.row, o.file));
  const auto range = parse_sweep(o.rpeak, "--rpeak");
  const auto xs = sample_points(range.lo, range.hi, range.n, o.log ? Spacing::log : Spacing::linear);
  const auto curve = predict(*it, xs);
  for (const auto& n : curve.notes) err << "note: " << n << '\n';

  switch (fmt_) {
    case Format::csv:
      write_prediction_csv(out, curve);
      break;
    case Format::json: {
      json samples = json::array();
      for (const auto& s : curve.samples) samples.push_back({{"r_peak_gflops", s.r_peak}, {"r_max_gflops", s.r_max}});
      out << json{{"base", curve.base_name},
                  {"one_minus_alpha", curve.alpha.one_minus_alpha()},
                  {"p_single_gflops", curve.p_single},
                  {"asymptote_gflops", json_number(curve.asymptote)},
                  {"optimistic", curve.optimistic},
                  {"samples", samples}}
                 .dump(2)
          << '\n';
      break;
    }
    case Format::text: {
      out << fmt::format("Base: {}  1-alpha = {:.6e}  p_single = {:.6e} Gflop/s  asymptote = {:.6e} Gflop/s\n",
                         curve.base_name, curve.alpha.one_minus_alpha(), curve.p_single, curve.asymptote);
      out << "Optimistic: alpha frozen at the base point, growing addressing cost not included\n\n";
      Table t({"r_peak_gflops", "r_max_gflops", "efficiency"});
      for (const auto& s : curve.samples) t.add({num(s.r_peak), num(s.r_max), num(s.r_max / s.r_peak)});
      t.print(out);
      break;
    }
  }
}

// ---- roofline -------------------------------------------------------------

void run_roofline(const std::string& file, double brain_gain, Format fmt_, std::ostream& out, std::ostream& err) {
  const auto records = load_records(file, err);
  const auto levels = roofline(records, brain_gain);
  std::vector<RoofLevel> roofs;
  if (levels.hpl) roofs.push_back(*levels.hpl);
  if (levels.hpcg) roofs.push_back(*levels.hpcg);
  roofs.push_back(levels.brain);

  switch (fmt_) {
    case Format::csv:
      out << "workload,roof_gain,supporting_records,top_record\n";
      for (const auto& r : roofs) {
        out << r.workload << ',' << sci(r.gain) << ',' << r.supporting_records << ',' << csv_field(r.top_record) << '\n';
      }
      break;
    case Format::json: {
      json arr = json::array();
      for (const auto& r : roofs) {
        arr.push_back({{"workload", r.workload},
                       {"roof_gain", r.gain},
                       {"supporting_records", r.supporting_records},
                       {"top_record", r.top_record}});
      }
      out << json{{"roofs", arr}, {"ordered", levels.ordered}, {"notes", levels.notes}}.dump(2) << '\n';
      break;
    }
    case Format::text: {
      Table t({"workload", "roof gain", "log10", "records", "top record"});
      for (const auto& r : roofs) {
        t.add({r.workload, num(r.gain), fmt::format("{:.2f}", std::log10(r.gain)), std::to_string(r.supporting_records),
               r.top_record});
      }
      t.print(out);
      for (std::size_t i = 0; i + 1 < roofs.size(); ++i) {
        out << fmt::format("{} / {}: {:.2f} decades\n", roofs[i].workload, roofs[i + 1].workload,
                           std::log10(roofs[i].gain / roofs[i + 1].gain));
      }
      out << "ordering HPL > HPCG > brain_simulation: " << (levels.ordered ? "yes" : "no") << '\n';
      for (const auto& n : levels.notes) out << "note: " << n << '\n';
      break;
    }
  }
}

// ---- surface --------------------------------------------------------------

struct SurfaceOptions {
  std::string alpha_range;
  std::string k_range;
  std::string grid;
};

void run_surface(const SurfaceOptions& o, Format fmt_, std::ostream& out) {
  const auto [a_lo, a_hi] = parse_pair(o.alpha_range, "--alpha-range");
  const auto [k_lo, k_hi] = parse_pair(o.k_range, "--k-range");
  const auto dims = split(to_lower(o.grid), 'x');
  if (dims.size() != 2) throw InputError(fmt::format("--grid expects N1xN2, got '{}'", o.grid));
  const auto n1 = static_cast<std::size_t>(parse_count(dims[0], "--grid N1"));
  const auto n2 = static_cast<std::size_t>(parse_count(dims[1], "--grid N2"));
  const auto nodes = efficiency_surface(a_lo, a_hi, k_lo, k_hi, n1, n2);

  switch (fmt_) {
    case Format::csv:
      write_surface_csv(out, nodes);
      break;
    case Format::json: {
      json arr = json::array();
      for (const auto& n : nodes) arr.push_back({n.one_minus_alpha, n.k, n.efficiency});
      out << json{{"columns", {"one_minus_alpha", "k", "efficiency"}}, {"nodes", arr}}.dump(2) << '\n';
      break;
    }
    case Format::text: {
      Table t({"1-alpha", "k", "efficiency"});
      for (const auto& n : nodes) t.add({num(n.one_minus_alpha), num(n.k), num(n.efficiency)});
      t.print(out);
      break;
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Performance-wall modeling toolkit for parallelized sequential systems", "perfwall"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_csv = false;
  bool as_json = false;
  auto* csv_flag = app.add_flag("--csv", as_csv, "Emit CSV");
  app.add_flag("--json", as_json, "Emit JSON")->excludes(csv_flag);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "alpha_eff, (1-alpha_eff) and gain from a measurement");
  auto* sp = estimate->add_option("--speedup", est.speedup, "Measured speedup S");
  auto* ef = estimate->add_option("--efficiency", est.efficiency, "Measured efficiency E = R_Max/R_Peak");
  sp->excludes(ef);
  estimate->add_option("--k", est.k, "Processor count")->required();

  ModelOptions mod;
  auto* model = app.add_subcommand("model", "Sweep payload vs nominal performance for a machine config");
  model->add_option("--config", mod.config, "Machine config file (key = value)")->required()->check(CLI::ExistingFile);
  model->add_option("--sweep", mod.sweep, "MIN,MAX,N nominal performance (Gflop/s; Eflops suffix accepted)")
      ->required();
  model->add_flag("--log", mod.log, "Log-spaced samples");
  model->add_option("--output", mod.output, "Also write the sweep CSV to this file");

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Fork/join timeline simulation vs closed form");
  simulate_cmd->add_option("--alpha", sim.alpha, "Parallelizable fraction");
  simulate_cmd->add_option("--k", sim.k, "Worker count");
  simulate_cmd->add_option("--latency", sim.latency, "Per-worker addressing latency (time units)");
  simulate_cmd->add_option("--skew", sim.skew, "Per-worker chunk factors (k values)")->delimiter(',');
  simulate_cmd->add_option("--total-time", sim.total_time, "Single-processor time T1");
  simulate_cmd->add_option("--scenario", sim.scenario, "Scenario file (key = value)")->check(CLI::ExistingFile);

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Derived metrics and ranking regressions for a dataset");
  analyze->add_option("file", ana.file, "Records CSV")->required();
  analyze->add_option("--top", ana.top, "Only records ranked <= N");

  std::string trend_file;
  auto* trend = app.add_subcommand("trend", "Best (1-alpha) per year and its log-linear trend");
  trend->add_option("file", trend_file, "Records CSV")->required();

  PredictOptions pre;
  auto* predict_cmd = app.add_subcommand("predict", "Frozen-alpha payload prediction from one record");
  predict_cmd->add_option("file", pre.file, "Records CSV")->required();
  predict_cmd->add_option("--row", pre.row, "Record name")->required();
  predict_cmd->add_option("--rpeak", pre.rpeak, "MIN,MAX,N nominal performance")->required();
  predict_cmd->add_flag("--log", pre.log, "Log-spaced samples");

  std::string roof_file;
  double brain_gain = kDefaultBrainGain;
  auto* roof = app.add_subcommand("roofline", "Gain roof per workload class");
  roof->add_option("file", roof_file, "Records CSV")->required();
  roof->add_option("--brain-gain", brain_gain, "Brain-simulation roof gain");

  SurfaceOptions sur;
  auto* surface = app.add_subcommand("surface", "Efficiency surface E(1-alpha, k) grid");
  surface->add_option("--alpha-range", sur.alpha_range, "LO,HI of (1-alpha), log-spaced")->required();
  surface->add_option("--k-range", sur.k_range, "LO,HI of k, log-spaced")->required();
  surface->add_option("--grid", sur.grid, "N1xN2 grid size")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Format format = as_json ? Format::json : as_csv ? Format::csv : Format::text;
  try {
    if (*estimate) {
      if (!est.speedup && !est.efficiency) throw InputError("estimate needs --speedup or --efficiency");
      run_estimate(est, format, out);
    } else if (*model) {
      run_model(mod, format, out);
    } else if (*simulate_cmd) {
      run_simulate(sim, format, out);
    } else if (*analyze) {
      run_analyze(ana, format, out, err);
    } else if (*trend) {
      run_trend(trend_file, format, out, err);
    } else if (*predict_cmd) {
      run_predict(pre, format, out, err);
    } else if (*roof) {
      run_roofline(roof_file, brain_gain, format, out, err);
    } else if (*surface) {
      run_surface(sur, format, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace perfwall::cli
