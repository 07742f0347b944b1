#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "perfwall/core_model.hpp"
#include "perfwall/kv_config.hpp"

namespace perfwall {

inline constexpr double kSpeedOfLight = 3e8;  // m/s

// Physical and architectural description of a modeled machine. Config keys
// are the member names; benchmark_seconds may be given instead of
// benchmark_clocks (converted with clock_frequency).
struct MachineSpec {
  double clock_frequency = 1.0;        // GHz
  double processor_performance = 1.0;  // Gflop/s per processor
  double benchmark_clocks = 1.0;       // clock periods of the whole measurement
  double context_switch_cycles = 0.0;
  double context_switches_per_run = 1.0;
  double cable_distance_m = 0.0;
  double signal_velocity_factor = 2.0 / 3.0;
  double clustering_factor = 1.0;  // +inf removes the addressing term
  double alpha_sw = 0.0;
  double access_time_s = 0.0;  // reported only, never added to (1 - alpha)

  // Throws InputError on any out-of-range field.
  void validate() const;

  static MachineSpec from_config(const KeyValueConfig& cfg);
  static MachineSpec load(const std::filesystem::path& path);
};

// The fictive machine behind the HPL/HPCG contribution curves:
// 1 GHz, 100 Gflop/s per processor, 2e13 benchmark clocks, 1e4-cycle context switch.
MachineSpec fictive_machine(double alpha_sw);

// Sequential-fraction contributions, each a time ratio relative to the
// benchmark duration. total is the plain sum of the four parts.
struct ContributionBreakdown {
  double sw = 0.0;
  double os_context = 0.0;
  double addressing = 0.0;
  double propagation = 0.0;
  double total = 0.0;
};

double contribution_context_switch(const MachineSpec& spec);
// (k / clustering_factor) / benchmark_clocks
double contribution_addressing(const MachineSpec& spec, double k);
// Signal round trip over cable_distance_m, in clock cycles.
double propagation_round_trip_cycles(const MachineSpec& spec);
double contribution_propagation(const MachineSpec& spec);

// Throws OverheadSaturation when the total reaches 1.
ContributionBreakdown total_sequential_fraction(const MachineSpec& spec, double k);

enum class Spacing { linear, log };

// n points from lo to hi inclusive.
std::vector<double> sample_points(double lo, double hi, std::size_t n, Spacing spacing);

struct WallPeak {
  double r_peak;  // Gflop/s
  double r_max;   // Gflop/s
};

struct SweepSample {
  double r_peak;
  double k;
  ContributionBreakdown breakdown;
  double efficiency;
  double r_max;
};

struct SweepCurve {
  std::vector<SweepSample> samples;
  WallPeak peak;
  // False when the maximum sits on a sweep end point (no wall inside the range).
  bool peak_interior = false;
};

// Payload performance of the modeled machine at nominal performance r_peak.
// A nominal performance below one processor is treated as one processor.
SweepSample evaluate_sample(const MachineSpec& spec, double r_peak);

SweepCurve sweep_payload(const MachineSpec& spec, double r_peak_min, double r_peak_max,
                         std::size_t n_samples, Spacing spacing);

// Linear and quadratic coefficients of R_Max(x) = x / (1 + a x + b x^2),
// x in Gflop/s, the large-k form of the model.
struct WallCoefficients {
  double a;
  double b;
};
WallCoefficients wall_coefficients(const MachineSpec& spec);
double model_payload(const MachineSpec& spec, double r_peak);

// Closed-form wall: x* = 1/sqrt(b). nullopt when b = 0 (no finite wall).
std::optional<WallPeak> peak_location(const MachineSpec& spec);

struct SurfaceNode {
  double one_minus_alpha;
  double k;
  double efficiency;
};

// Log-spaced grid of E(alpha, k); n_alpha rows of n_k nodes, row-major.
std::vector<SurfaceNode> efficiency_surface(double one_minus_alpha_lo, double one_minus_alpha_hi,
                                            double k_lo, double k_hi, std::size_t n_alpha,
                                            std::size_t n_k);

void write_sweep_csv(std::ostream& out, const SweepCurve& curve);
void write_surface_csv(std::ostream& out, const std::vector<SurfaceNode>& nodes);

}  // namespace perfwall
