#include "perfwall/core_model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "perfwall/errors.hpp"

namespace perfwall {

AlphaFraction AlphaFraction::from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InputError(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  return AlphaFraction(1.0 - alpha);
}

AlphaFraction AlphaFraction::from_one_minus_alpha(double one_minus_alpha) {
  if (!(one_minus_alpha >= 0.0 && one_minus_alpha <= 1.0)) {
    throw InputError(fmt::format("(1 - alpha) must lie in [0, 1], got {}", one_minus_alpha));
  }
  return AlphaFraction(one_minus_alpha);
}

double speedup_value(AlphaFraction alpha, double k) {
  if (!(k >= 1.0)) {
    throw InputError(fmt::format("processor count must be >= 1, got {}", k));
  }
  return k / (k * alpha.one_minus_alpha() + alpha.alpha());
}

Speedup speedup_from_alpha(AlphaFraction alpha, std::uint64_t k) {
  return {speedup_value(alpha, static_cast<double>(k)), k};
}

AlphaFraction alpha_eff_from_speedup(Speedup s) {
  if (s.k < 2) {
    throw UndefinedQuantity("alpha_eff is undefined for a single processor (k = 1)");
  }
  const double k = static_cast<double>(s.k);
  if (!(s.value >= 1.0)) {
    throw InconsistentMeasurement(fmt::format("speedup {} is below 1", s.value));
  }
  if (s.value > k) {
    throw InconsistentMeasurement(
        fmt::format("speedup {} exceeds processor count {} (super-linear)", s.value, s.k));
  }
  // Same expression as the Karp-Flatt serial fraction.
  return AlphaFraction::from_one_minus_alpha((k - s.value) / ((k - 1.0) * s.value));
}

double efficiency_value(AlphaFraction alpha, double k) {
  if (!(k >= 1.0)) {
    throw InputError(fmt::format("processor count must be >= 1, got {}", k));
  }
  return 1.0 / (k * alpha.one_minus_alpha() + alpha.alpha());
}

Efficiency efficiency(AlphaFraction alpha, std::uint64_t k) {
  return {efficiency_value(alpha, static_cast<double>(k)), k};
}

AlphaFraction alpha_from_efficiency(double e, double k) {
  if (!(k >= 2.0)) {
    throw UndefinedQuantity(fmt::format("alpha is undefined for k = {} (need k >= 2)", k));
  }
  if (!(e <= 1.0)) {
    throw InconsistentMeasurement(fmt::format("efficiency {} exceeds 1", e));
  }
  if (!(e * k >= 1.0)) {
    throw InconsistentMeasurement(
        fmt::format("efficiency {} is below 1/k for k = {} (negative alpha)", e, k));
  }
  return AlphaFraction::from_one_minus_alpha(std::fmin(1.0, (1.0 - e) / (e * (k - 1.0))));
}

AlphaFraction alpha_from_efficiency(Efficiency e) {
  return alpha_from_efficiency(e.value, static_cast<double>(e.k));
}

Gain gain(AlphaFraction alpha) {
  if (alpha.one_minus_alpha() == 0.0) {
    throw UnboundedGain("gain is unbounded for (1 - alpha) = 0");
  }
  return {1.0 / alpha.one_minus_alpha()};
}

Performance payload_performance(Gain g, Performance p_single) {
  if (!(g.value > 0.0) || !(p_single.gflops > 0.0)) {
    throw InputError("gain and single-processor performance must be positive");
  }
  return {g.value * p_single.gflops};
}

Performance payload_from_nominal(AlphaFraction alpha, Performance r_peak, Performance p_single) {
  if (!(p_single.gflops > 0.0)) {
    throw InputError(fmt::format("single-processor performance must be positive, got {}",
                                 p_single.gflops));
  }
  if (!(r_peak.gflops >= p_single.gflops)) {
    throw InputError(fmt::format("nominal performance {} Gflop/s is below one processor ({} Gflop/s)",
                                 r_peak.gflops, p_single.gflops));
  }
  const double k = r_peak.gflops / p_single.gflops;
  return {r_peak.gflops / (k * alpha.one_minus_alpha() + alpha.alpha())};
}

std::uint64_t integer_processor_count(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw InputError(fmt::format("invalid processor count {}", k));
  }
  const double r = std::round(k);
  return r < 1.0 ? 1 : static_cast<std::uint64_t>(r);
}

}  // namespace perfwall
