#pragma once

#include <cstdint>

namespace perfwall {

// Parallelizable fraction alpha, stored as its complement (1 - alpha).
//
// Every value of practical interest sits within 1e-5 of alpha = 1, so the
// complement is the quantity that carries the significant digits. A value of
// zero (alpha = 1) is representable, but gain() rejects it.
class AlphaFraction {
 public:
  // alpha in [0, 1].
  static AlphaFraction from_alpha(double alpha);
  // (1 - alpha) in [0, 1].
  static AlphaFraction from_one_minus_alpha(double one_minus_alpha);

  double alpha() const { return 1.0 - one_minus_alpha_; }
  double one_minus_alpha() const { return one_minus_alpha_; }

  friend bool operator==(const AlphaFraction&, const AlphaFraction&) = default;

 private:
  explicit AlphaFraction(double one_minus_alpha) : one_minus_alpha_(one_minus_alpha) {}
  double one_minus_alpha_;
};

// Measured speedup S on k processors.
struct Speedup {
  double value;
  std::uint64_t k;
};

// E = S / k on k processors.
struct Efficiency {
  double value;
  std::uint64_t k;
};

struct Gain {
  double value;
};

// Floating point rate in Gflop/s.
struct Performance {
  double gflops;
};

inline constexpr double kGflopsPerEflops = 1e9;

// S = k / (k (1 - alpha) + alpha). k is real so nominal-performance sweeps can
// use a continuous processor count.
Speedup speedup_from_alpha(AlphaFraction alpha, std::uint64_t k);
double speedup_value(AlphaFraction alpha, double k);

// alpha_eff = k/(k-1) * (S-1)/S, evaluated as (1 - alpha_eff) = (k - S) / ((k - 1) S).
// Throws UndefinedQuantity for k = 1, InconsistentMeasurement for S outside [1, k].
AlphaFraction alpha_eff_from_speedup(Speedup s);

// E = 1 / (k (1 - alpha) + alpha).
Efficiency efficiency(AlphaFraction alpha, std::uint64_t k);
double efficiency_value(AlphaFraction alpha, double k);

// Inverse of efficiency(): (1 - alpha) = (1 - E) / (E (k - 1)).
// Throws UndefinedQuantity for k = 1, InconsistentMeasurement for E outside [1/k, 1].
AlphaFraction alpha_from_efficiency(Efficiency e);
AlphaFraction alpha_from_efficiency(double efficiency, double k);

// G = 1 / (1 - alpha). Throws UnboundedGain when (1 - alpha) = 0.
Gain gain(AlphaFraction alpha);

// P_payload = G * P_single.
//
// Only meaningful when alpha_eff does not depend on k; with a k-dependent
// sequential fraction this is an upper bound, not a prediction.
Performance payload_performance(Gain g, Performance p_single);

// R_Max = R_Peak / (k (1 - alpha) + alpha) with real k = R_Peak / P_single.
// Throws InputError when r_peak < p_single or p_single <= 0.
Performance payload_from_nominal(AlphaFraction alpha, Performance r_peak, Performance p_single);

// Worker count for simulators that need an integer: nearest integer, at least 1.
std::uint64_t integer_processor_count(double k);

}  // namespace perfwall
