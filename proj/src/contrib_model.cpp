#include "perfwall/contrib_model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "perfwall/errors.hpp"
#include "perfwall/text_util.hpp"

namespace perfwall {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("invalid machine spec: " + what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void MachineSpec::validate() const {
  require(finite_pos(clock_frequency), fmt::format("clock_frequency must be > 0, got {}", clock_frequency));
  require(finite_pos(processor_performance),
          fmt::format("processor_performance must be > 0, got {}", processor_performance));
  require(finite_pos(benchmark_clocks), fmt::format("benchmark_clocks must be > 0, got {}", benchmark_clocks));
  require(finite_nonneg(context_switch_cycles),
          fmt::format("context_switch_cycles must be >= 0, got {}", context_switch_cycles));
  require(finite_nonneg(context_switches_per_run),
          fmt::format("context_switches_per_run must be >= 0, got {}", context_switches_per_run));
  require(finite_nonneg(cable_distance_m), fmt::format("cable_distance_m must be >= 0, got {}", cable_distance_m));
  require(signal_velocity_factor > 0.0 && signal_velocity_factor <= 1.0,
          fmt::format("signal_velocity_factor must lie in (0, 1], got {}", signal_velocity_factor));
  require(clustering_factor >= 1.0, fmt::format("clustering_factor must be >= 1, got {}", clustering_factor));
  require(alpha_sw >= 0.0 && alpha_sw < 1.0, fmt::format("alpha_sw must lie in [0, 1), got {}", alpha_sw));
  require(finite_nonneg(access_time_s), fmt::format("access_time_s must be >= 0, got {}", access_time_s));
  require(benchmark_clocks >= context_switch_cycles * context_switches_per_run,
          "benchmark_clocks is shorter than the run's own context-switch overhead");
}

MachineSpec MachineSpec::from_config(const KeyValueConfig& cfg) {
  cfg.reject_unknown({"clock_frequency", "processor_performance", "benchmark_clocks",
                      "benchmark_seconds", "context_switch_cycles", "context_switches_per_run",
                      "cable_distance_m", "signal_velocity_factor", "clustering_factor", "alpha_sw",
                      "access_time_s"});
  const auto required = [&](const char* key) {
    const auto v = cfg.get_double(key);
    if (!v) throw ParseError(fmt::format("{}: missing required key '{}'", cfg.source(), key));
    return *v;
  };

  MachineSpec spec;
  spec.clock_frequency = required("clock_frequency");
  spec.processor_performance = required("processor_performance");
  const auto clocks = cfg.get_double("benchmark_clocks");
  const auto seconds = cfg.get_double("benchmark_seconds");
  if (clocks && seconds) {
    throw ParseError(fmt::format("{}: give benchmark_clocks or benchmark_seconds, not both", cfg.source()));
  }
  if (clocks) {
    spec.benchmark_clocks = *clocks;
  } else if (seconds) {
    spec.benchmark_clocks = *seconds * spec.clock_frequency * 1e9;
  } else {
    throw ParseError(fmt::format("{}: missing benchmark_clocks (or benchmark_seconds)", cfg.source()));
  }
  spec.context_switch_cycles = cfg.get_double("context_switch_cycles").value_or(spec.context_switch_cycles);
  spec.context_switches_per_run =
      cfg.get_double("context_switches_per_run").value_or(spec.context_switches_per_run);
  spec.cable_distance_m = cfg.get_double("cable_distance_m").value_or(spec.cable_distance_m);
  spec.signal_velocity_factor = cfg.get_double("signal_velocity_factor").value_or(spec.signal_velocity_factor);
  spec.clustering_factor = cfg.get_double("clustering_factor").value_or(spec.clustering_factor);
  spec.alpha_sw = cfg.get_double("alpha_sw").value_or(spec.alpha_sw);
  spec.access_time_s = cfg.get_double("access_time_s").value_or(spec.access_time_s);
  spec.validate();
  return spec;
}

MachineSpec MachineSpec::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

MachineSpec fictive_machine(double alpha_sw) {
  MachineSpec spec;
  spec.clock_frequency = 1.0;
  spec.processor_performance = 100.0;
  spec.benchmark_clocks = 2e13;
  spec.context_switch_cycles = 1e4;
  spec.context_switches_per_run = 1.0;
  spec.alpha_sw = alpha_sw;
  return spec;
}

double contribution_context_switch(const MachineSpec& spec) {
  return spec.context_switch_cycles * spec.context_switches_per_run / spec.benchmark_clocks;
}

double contribution_addressing(const MachineSpec& spec, double k) {
  if (!(k >= 1.0)) throw InputError(fmt::format("processor count must be >= 1, got {}", k));
  return (k / spec.clustering_factor) / spec.benchmark_clocks;
}

double propagation_round_trip_cycles(const MachineSpec& spec) {
  const double seconds = 2.0 * spec.cable_distance_m / (kSpeedOfLight * spec.signal_velocity_factor);
  return seconds * spec.clock_frequency * 1e9;
}

double contribution_propagation(const MachineSpec& spec) {
  return propagation_round_trip_cycles(spec) / spec.benchmark_clocks;
}

ContributionBreakdown total_sequential_fraction(const MachineSpec& spec, double k) {
  ContributionBreakdown b;
  b.sw = spec.alpha_sw;
  b.os_context = contribution_context_switch(spec);
  b.addressing = contribution_addressing(spec, k);
  b.propagation = contribution_propagation(spec);
  b.total = b.sw + b.os_context + b.addressing + b.propagation;
  if (!(b.total < 1.0)) {
    throw OverheadSaturation(fmt::format(
        "machine spends all time on overhead at k = {}: (1 - alpha) = {} >= 1", k, b.total));
  }
  return b;
}

std::vector<double> sample_points(double lo, double hi, std::size_t n, Spacing spacing) {
  if (n < 2) throw InputError("a sweep needs at least 2 samples");
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InputError(fmt::format("sweep range must satisfy 0 < min < max, got [{}, {}]", lo, hi));
  }
  std::vector<double> xs(n);
  const double steps = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / steps;
    xs[i] = spacing == Spacing::log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

SweepSample evaluate_sample(const MachineSpec& spec, double r_peak) {
  SweepSample s;
  s.r_peak = r_peak;
  s.k = std::max(1.0, r_peak / spec.processor_performance);
  s.breakdown = total_sequential_fraction(spec, s.k);
  const auto alpha = AlphaFraction::from_one_minus_alpha(s.breakdown.total);
  if (r_peak >= spec.processor_performance) {
    s.r_max = payload_from_nominal(alpha, {r_peak}, {spec.processor_performance}).gflops;
    s.efficiency = s.r_max / r_peak;
  } else {
    s.efficiency = 1.0;
    s.r_max = r_peak;
  }
  return s;
}

namespace {

// Golden-section maximisation of f on [lo, hi]; works in log space when asked.
template <typename F>
double golden_max(F&& f, double lo, double hi, bool in_log, double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto to_x = [&](double u) { return in_log ? std::exp(u) : u; };
  double a = in_log ? std::log(lo) : lo;
  double b = in_log ? std::log(hi) : hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(to_x(c));
  double fd = f(to_x(d));
  for (int iter = 0; iter < 200; ++iter) {
    const double xa = to_x(a);
    const double xb = to_x(b);
    if (std::abs(xb - xa) <= rel_tol * std::abs(xa + xb) * 0.5) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(to_x(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(to_x(d));
    }
  }
  return to_x((a + b) / 2.0);
}

}  // namespace

SweepCurve sweep_payload(const MachineSpec& spec, double r_peak_min, double r_peak_max,
                         std::size_t n_samples, Spacing spacing) {
  spec.validate();
  SweepCurve curve;
  const auto xs = sample_points(r_peak_min, r_peak_max, n_samples, spacing);
  curve.samples.reserve(xs.size());
  for (const double x : xs) curve.samples.push_back(evaluate_sample(spec, x));

  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    if (curve.samples[i].r_max > curve.samples[best].r_max) best = i;
  }
  curve.peak = {curve.samples[best].r_peak, curve.samples[best].r_max};
  curve.peak_interior = best > 0 && best + 1 < curve.samples.size();
  if (curve.peak_interior) {
    const double lo = curve.samples[best - 1].r_peak;
    const double hi = curve.samples[best + 1].r_peak;
    const auto f = [&](double x) { return evaluate_sample(spec, x).r_max; };
    const double x = golden_max(f, lo, hi, spacing == Spacing::log, 1e-6);
    const double y = f(x);
    if (y >= curve.peak.r_max) curve.peak = {x, y};
  }
  return curve;
}

WallCoefficients wall_coefficients(const MachineSpec& spec) {
  const double p = spec.processor_performance;
  const double per_run = spec.alpha_sw + contribution_context_switch(spec) + contribution_propagation(spec);
  const double per_processor = 1.0 / (spec.clustering_factor * spec.benchmark_clocks);
  return {per_run / p, per_processor / (p * p)};
}

double model_payload(const MachineSpec& spec, double r_peak) {
  const auto [a, b] = wall_coefficients(spec);
  return r_peak / (1.0 + a * r_peak + b * r_peak * r_peak);
}

std::optional<WallPeak> peak_location(const MachineSpec& spec) {
  spec.validate();
  const auto [a, b] = wall_coefficients(spec);
  if (!(b > 0.0)) return std::nullopt;
  const double x = 1.0 / std::sqrt(b);
  return WallPeak{x, x / (2.0 + a * x)};
}

std::vector<SurfaceNode> efficiency_surface(double one_minus_alpha_lo, double one_minus_alpha_hi,
                                            double k_lo, double k_hi, std::size_t n_alpha,
                                            std::size_t n_k) {
  if (one_minus_alpha_hi > 1.0) throw InputError("(1 - alpha) range must not exceed 1");
  if (k_lo < 1.0) throw InputError("processor-count range must start at >= 1");
  const auto omas = sample_points(one_minus_alpha_lo, one_minus_alpha_hi, n_alpha, Spacing::log);
  const auto ks = sample_points(k_lo, k_hi, n_k, Spacing::log);
  std::vector<SurfaceNode> nodes;
  nodes.reserve(omas.size() * ks.size());
  for (const double oma : omas) {
    const auto alpha = AlphaFraction::from_one_minus_alpha(oma);
    for (const double k : ks) nodes.push_back({oma, k, efficiency_value(alpha, k)});
  }
  return nodes;
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "r_peak_gflops,alpha_sw,alpha_os,alpha_addr,alpha_pd,one_minus_alpha_total,efficiency,"
         "r_max_gflops\n";
  for (const auto& s : curve.samples) {
    out << sci(s.r_peak) << ',' << sci(s.breakdown.sw) << ',' << sci(s.breakdown.os_context) << ','
        << sci(s.breakdown.addressing) << ',' << sci(s.breakdown.propagation) << ','
        << sci(s.breakdown.total) << ',' << sci(s.efficiency) << ',' << sci(s.r_max) << '\n';
  }
}

void write_surface_csv(std::ostream& out, const std::vector<SurfaceNode>& nodes) {
  out << "one_minus_alpha,k,efficiency\n";
  for (const auto& n : nodes) out << sci(n.one_minus_alpha) << ',' << sci(n.k) << ',' << sci(n.efficiency) << '\n';
}

}  // namespace perfwall
