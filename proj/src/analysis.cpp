#include "perfwall/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "perfwall/errors.hpp"
#include "perfwall/text_util.hpp"

namespace perfwall {

PredictionCurve predict(AlphaFraction alpha, double p_single, std::span<const double> r_peak_values) {
  if (!(p_single > 0.0)) throw InputError("prediction needs a positive per-processor performance");
  PredictionCurve curve;
  curve.alpha = alpha;
  curve.p_single = p_single;
  curve.asymptote = alpha.one_minus_alpha() > 0.0 ? p_single / alpha.one_minus_alpha()
                                                  : std::numeric_limits<double>::infinity();
  for (const double x : r_peak_values) {
    if (!(x >= p_single)) {
      curve.notes.push_back(fmt::format("skipped R_Peak = {} Gflop/s: below one processor ({} Gflop/s)",
                                        sci(x), sci(p_single)));
      continue;
    }
    curve.samples.push_back({x, payload_from_nominal(alpha, {x}, {p_single}).gflops});
  }
  return curve;
}

PredictionCurve predict(const BenchmarkRecord& base, std::span<const double> r_peak_values) {
  if (base.cores < 2) throw UndefinedQuantity(fmt::format("'{}': alpha is undefined for one core", base.name));
  if (!(base.r_max > 0.0) || base.r_max > base.r_peak) {
    throw InconsistentMeasurement(fmt::format("'{}': need 0 < R_Max <= R_Peak", base.name));
  }
  const auto alpha = alpha_from_efficiency(base.r_max / base.r_peak, static_cast<double>(base.cores));
  auto curve = predict(alpha, base.r_peak / static_cast<double>(base.cores), r_peak_values);
  curve.base_name = base.name;
  return curve;
}

void write_prediction_csv(std::ostream& out, const PredictionCurve& curve) {
  out << "r_peak_gflops,r_max_gflops,efficiency,asymptote_gflops\n";
  for (const auto& s : curve.samples) {
    out << sci(s.r_peak) << ',' << sci(s.r_max) << ',' << sci(s.r_max / s.r_peak) << ','
        << sci(curve.asymptote) << '\n';
  }
}

RooflineLevels roofline(std::span<const BenchmarkRecord> records, double brain_gain) {
  if (!(brain_gain > 0.0)) throw InputError("brain-simulation gain must be positive");
  RooflineLevels levels;
  levels.brain = {"brain_simulation", brain_gain, 0, "configured constant"};
  for (const auto& r : records) {
    double g = 0.0;
    try {
      g = derive(r).gain.value;
    } catch (const InputError& e) {
      levels.notes.push_back(fmt::format("skipped '{}': {}", r.name, e.what()));
      continue;
    }
    auto& slot = r.benchmark == Benchmark::hpl ? levels.hpl : levels.hpcg;
    if (!slot) {
      slot = RoofLevel{std::string(to_string(r.benchmark)), g, 0, r.name};
    } else if (g > slot->gain) {
      slot->gain = g;
      slot->top_record = r.name;
    }
    ++slot->supporting_records;
  }
  if (!levels.hpl) levels.notes.push_back("no HPL records: HPL roof omitted");
  if (!levels.hpcg) levels.notes.push_back("no HPCG records: HPCG roof omitted");
  levels.ordered = levels.hpl && levels.hpcg && levels.hpl->gain > levels.hpcg->gain &&
                   levels.hpcg->gain > levels.brain.gain;
  return levels;
}

std::string_view to_string(ContributionTerm t) {
  switch (t) {
    case ContributionTerm::software: return "software";
    case ContributionTerm::os_context: return "os_context";
    case ContributionTerm::addressing: return "addressing";
    case ContributionTerm::propagation: return "propagation";
  }
  return "software";
}

ContributionTerm limiting_term(const ContributionBreakdown& b) {
  const std::array<std::pair<ContributionTerm, double>, 4> terms{{
      {ContributionTerm::software, b.sw},
      {ContributionTerm::os_context, b.os_context},
      {ContributionTerm::addressing, b.addressing},
      {ContributionTerm::propagation, b.propagation},
  }};
  return std::max_element(terms.begin(), terms.end(),
                          [](const auto& l, const auto& r) { return l.second < r.second; })
      ->first;
}

WallReport wall_report(const MachineSpec& spec) {
  spec.validate();
  WallReport report;
  report.spec = spec;
  report.peak = peak_location(spec);

  const double p = spec.processor_performance;
  const double per_run = spec.alpha_sw + contribution_context_switch(spec) + contribution_propagation(spec);
  const double per_processor = 1.0 / (spec.clustering_factor * spec.benchmark_clocks);

  std::array<double, 3> ks{1e3, 1e6, 1e9};
  if (report.peak) {
    const double k_star = report.peak->r_peak / p;
    ks = {std::max(1.0, k_star / 10.0), std::max(1.0, k_star), std::max(1.0, k_star * 10.0)};
  }
  for (const double k : ks) report.reference.push_back({k, k * p, total_sequential_fraction(spec, k)});

  if (report.peak) {
    report.at_peak = total_sequential_fraction(spec, std::max(1.0, report.peak->r_peak / p));
    report.limiting_at_peak = limiting_term(*report.at_peak);
    report.gain_ceiling = 1.0 / report.at_peak->total;
  } else if (per_run > 0.0) {
    report.gain_ceiling = 1.0 / per_run;
  }
  if (per_run > 0.0 && per_processor > 0.0) report.crossover_r_peak = per_run / per_processor * p;
  return report;
}

void write_wall_report(std::ostream& out, const WallReport& r) {
  constexpr double kE = kGflopsPerEflops;
  out << "Machine: " << r.spec.clock_frequency << " GHz, " << r.spec.processor_performance
      << " Gflop/s per processor, " << sci(r.spec.benchmark_clocks) << " benchmark clocks\n";
  out << fmt::format("{:>14} {:>14} {:>12} {:>12} {:>12} {:>12} {:>12}\n", "k", "R_Peak(Eflop/s)",
                     "sw", "os_context", "addressing", "propagation", "total");
  for (const auto& ref : r.reference) {
    const auto& b = ref.breakdown;
    out << fmt::format("{:>14.6e} {:>14.6e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}\n", ref.k,
                       ref.r_peak / kE, b.sw, b.os_context, b.addressing, b.propagation, b.total);
  }
  if (r.peak) {
    out << fmt::format("Peak: R_Peak = {:.6e} Gflop/s ({:.6g} Eflop/s), R_Max = {:.6e} Gflop/s ({:.6g} Eflop/s)\n",
                       r.peak->r_peak, r.peak->r_peak / kE, r.peak->r_max, r.peak->r_max / kE);
    out << "Limiting term at peak: " << to_string(*r.limiting_at_peak) << '\n';
  } else {
    out << "Peak: no finite wall (no addressing term)\n";
  }
  if (r.crossover_r_peak) {
    out << fmt::format("Addressing overtakes the k-independent terms at R_Peak = {:.6e} Gflop/s ({:.6g} Eflop/s)\n",
                       *r.crossover_r_peak, *r.crossover_r_peak / kE);
  }
  if (r.gain_ceiling) out << fmt::format("Gain ceiling 1/(1-alpha): {:.6e}\n", *r.gain_ceiling);
  if (r.spec.access_time_s > 0.0) {
    out << fmt::format("Access time (not included in 1-alpha): {:.6e} s\n", r.spec.access_time_s);
  }
}

}  // namespace perfwall
