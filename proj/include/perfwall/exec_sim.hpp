#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "perfwall/core_model.hpp"
#include "perfwall/kv_config.hpp"

namespace perfwall {

// One fork/join run: a sequential prologue of seq_time, then k workers are
// addressed one after another (addressing_latency each) and each runs
// par_time / k scaled by its skew factor.
struct SimScenario {
  std::uint64_t k = 1;
  double seq_time = 0.0;
  double par_time = 0.0;
  double addressing_latency = 0.0;
  std::vector<double> chunk_skew;  // empty means all 1.0; otherwise exactly k entries

  void validate() const;
  double single_processor_time() const { return seq_time + par_time; }

  // Keys: k, seq_time, par_time, addressing_latency, chunk_skew (comma list).
  static SimScenario from_config(const KeyValueConfig& cfg);
  static SimScenario load(const std::filesystem::path& path);
};

struct SimResult {
  double t_parallel = 0.0;
  double speedup = 0.0;
  // nullopt when alpha_eff is undefined: k = 1, or a speedup outside [1, k]
  // (skew factors below 1 can make a run super-linear).
  std::optional<AlphaFraction> alpha_eff;
  std::vector<double> per_worker_finish;
};

SimResult simulate(const SimScenario& scenario);

struct ClosedFormCheck {
  std::uint64_t k;
  double simulated;
  double closed_form;
  double relative_deviation;
};

struct ValidationReport {
  std::vector<ClosedFormCheck> checks;
  double max_deviation = 0.0;
  std::uint64_t worst_k = 0;
  std::vector<std::uint64_t> violations;
  bool passed() const { return violations.empty(); }
};

// Runs the zero-latency, uniform scenario (seq = (1-alpha) T1, par = alpha T1)
// for each k and compares the simulated speedup with speedup_from_alpha.
ValidationReport validate_against_closed_form(AlphaFraction alpha,
                                              const std::vector<std::uint64_t>& k_values,
                                              double tolerance, double total_time = 1.0);

}  // namespace perfwall
