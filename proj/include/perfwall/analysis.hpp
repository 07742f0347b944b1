#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perfwall/contrib_model.hpp"
#include "perfwall/core_model.hpp"
#include "perfwall/dataset.hpp"

namespace perfwall {

struct PredictionSample {
  double r_peak;
  double r_max;
};

// Payload performance predicted with alpha_eff and per-processor performance
// frozen at a measured base point. Optimistic by construction: the growing
// addressing cost of a larger machine is not added.
struct PredictionCurve {
  std::string base_name;
  AlphaFraction alpha = AlphaFraction::from_one_minus_alpha(1.0);
  double p_single = 0.0;
  double asymptote = 0.0;  // p_single * G; +inf when (1 - alpha) = 0
  std::vector<PredictionSample> samples;
  std::vector<std::string> notes;  // skipped samples
  bool optimistic = true;
};

PredictionCurve predict(AlphaFraction alpha, double p_single, std::span<const double> r_peak_values);
PredictionCurve predict(const BenchmarkRecord& base, std::span<const double> r_peak_values);

void write_prediction_csv(std::ostream& out, const PredictionCurve& curve);

inline constexpr double kDefaultBrainGain = 1e3;

struct RoofLevel {
  std::string workload;  // "HPL", "HPCG", "brain_simulation"
  double gain;
  std::size_t supporting_records;  // 0 for the configured brain-simulation constant
  std::string top_record;
};

struct RooflineLevels {
  std::optional<RoofLevel> hpl;
  std::optional<RoofLevel> hpcg;
  RoofLevel brain;
  // HPL > HPCG > brain_simulation. Reported, not enforced.
  bool ordered = false;
  std::vector<std::string> notes;
};

RooflineLevels roofline(std::span<const BenchmarkRecord> records, double brain_gain = kDefaultBrainGain);

enum class ContributionTerm { software, os_context, addressing, propagation };
std::string_view to_string(ContributionTerm t);

// Largest single contribution of a breakdown.
ContributionTerm limiting_term(const ContributionBreakdown& b);

struct ReferencePoint {
  double k;
  double r_peak;
  ContributionBreakdown breakdown;
};

struct WallReport {
  MachineSpec spec;
  std::vector<ReferencePoint> reference;  // three reference processor counts
  std::optional<WallPeak> peak;           // nullopt: no finite wall
  std::optional<ContributionBreakdown> at_peak;
  std::optional<ContributionTerm> limiting_at_peak;
  // Nominal performance where addressing equals the k-independent terms.
  std::optional<double> crossover_r_peak;
  // 1 / (1 - alpha) at the peak, or the k-independent ceiling without a wall.
  std::optional<double> gain_ceiling;
};

WallReport wall_report(const MachineSpec& spec);
void write_wall_report(std::ostream& out, const WallReport& report);

}  // namespace perfwall
