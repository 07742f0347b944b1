#include "perfwall/exec_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "perfwall/errors.hpp"

namespace perfwall {

void SimScenario::validate() const {
  if (k < 1) throw InputError("scenario needs k >= 1");
  if (!(seq_time >= 0.0) || !(par_time >= 0.0) || !(addressing_latency >= 0.0)) {
    throw InputError("scenario times must be >= 0");
  }
  if (!(seq_time + par_time > 0.0)) throw InputError("scenario has no work (seq_time + par_time = 0)");
  if (!chunk_skew.empty() && chunk_skew.size() != k) {
    throw InputError(fmt::format("chunk_skew has {} entries, expected k = {}", chunk_skew.size(), k));
  }
  for (const double f : chunk_skew) {
    if (!(f > 0.0) || !std::isfinite(f)) throw InputError(fmt::format("skew factor must be > 0, got {}", f));
  }
}

SimScenario SimScenario::from_config(const KeyValueConfig& cfg) {
  cfg.reject_unknown({"k", "seq_time", "par_time", "addressing_latency", "chunk_skew"});
  SimScenario s;
  const auto k = cfg.get_double("k");
  if (!k) throw ParseError(fmt::format("{}: missing required key 'k'", cfg.source()));
  if (*k < 1.0 || std::floor(*k) != *k) {
    throw ParseError(fmt::format("{}: k must be a positive integer, got {}", cfg.source(), *k));
  }
  s.k = static_cast<std::uint64_t>(*k);
  s.seq_time = cfg.get_double("seq_time").value_or(0.0);
  s.par_time = cfg.get_double("par_time").value_or(0.0);
  s.addressing_latency = cfg.get_double("addressing_latency").value_or(0.0);
  s.chunk_skew = cfg.get_double_list("chunk_skew").value_or(std::vector<double>{});
  s.validate();
  return s;
}

SimScenario SimScenario::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

SimResult simulate(const SimScenario& scn) {
  scn.validate();
  SimResult r;
  const double chunk = scn.par_time / static_cast<double>(scn.k);
  r.per_worker_finish.resize(scn.k);
  double t_end = scn.seq_time;
  for (std::uint64_t i = 0; i < scn.k; ++i) {
    const double skew = scn.chunk_skew.empty() ? 1.0 : scn.chunk_skew[i];
    const double start = scn.seq_time + static_cast<double>(i + 1) * scn.addressing_latency;
    r.per_worker_finish[i] = start + chunk * skew;
    t_end = std::max(t_end, r.per_worker_finish[i]);
  }
  r.t_parallel = t_end;
  r.speedup = scn.single_processor_time() / r.t_parallel;
  if (scn.k >= 2 && r.speedup >= 1.0 && r.speedup <= static_cast<double>(scn.k)) {
    r.alpha_eff = alpha_eff_from_speedup({r.speedup, scn.k});
  }
  return r;
}

ValidationReport validate_against_closed_form(AlphaFraction alpha,
                                              const std::vector<std::uint64_t>& k_values,
                                              double tolerance, double total_time) {
  if (k_values.empty()) throw InputError("validation needs at least one k");
  ValidationReport report;
  for (const auto k : k_values) {
    SimScenario scn;
    scn.k = k;
    scn.seq_time = alpha.one_minus_alpha() * total_time;
    scn.par_time = alpha.alpha() * total_time;
    const double simulated = simulate(scn).speedup;
    const double closed = speedup_from_alpha(alpha, k).value;
    const double dev = std::abs(simulated - closed) / closed;
    report.checks.push_back({k, simulated, closed, dev});
    if (report.worst_k == 0 || dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_k = k;
    }
    if (dev > tolerance) report.violations.push_back(k);
  }
  return report;
}

}  // namespace perfwall
