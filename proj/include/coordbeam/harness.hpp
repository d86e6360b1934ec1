#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/channel.hpp"
#include "coordbeam/config.hpp"
#include "coordbeam/selection.hpp"
#include "coordbeam/spectrum.hpp"

namespace coordbeam {

/// Read-only state shared by every trial of one configuration.
class SimulationContext {
 public:
  explicit SimulationContext(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const Codebook& mm_bs() const { return mm_bs_; }
  const Codebook& mm_ue() const { return mm_ue_; }
  const Codebook& sub6_bs() const { return sub6_bs_; }
  const Codebook& sub6_ue() const { return sub6_ue_; }
  const BeamAssociation& association() const { return assoc_; }

  /// Noise variance from the configured SNR: reference LOS gain at the disk
  /// center (median shadowing, aligned beams) over the linear SNR.
  double noise_var() const { return noise_var_; }
  double reference_gain() const { return reference_gain_; }

 private:
  ScenarioConfig config_;
  Codebook mm_bs_;
  Codebook mm_ue_;
  Codebook sub6_bs_;
  Codebook sub6_ue_;
  BeamAssociation assoc_;
  double reference_gain_ = 0.0;
  double noise_var_ = 0.0;
};

/// N_BS N_UE L 10^(-PL_LOS(D)/10) for the mmWave band.
double reference_los_gain(const ScenarioConfig& config);

struct StrategyOutcome {
  Strategy strategy = Strategy::uncoordinated;
  std::vector<BeamDecision> decisions;
  std::vector<double> sinr;
  double sum_rate = 0.0;
  int collisions = 0;  // UE pairs sharing a refined BS beam
  int exchange_messages = 0;
  int exchange_bits = 0;
  bool fallback = false;
  bool pseudo_inverse = false;
};

struct TrialResult {
  std::uint64_t trial = 0;
  std::vector<int> order;
  std::vector<StrategyOutcome> outcomes;  // in config.strategies order

  const StrategyOutcome* find(Strategy s) const;
};

/// Rank order of the UEs for a trial, rotated by the trial index when
/// hierarchy rotation is enabled.
std::vector<int> hierarchy_order(int num_ues, std::uint64_t trial, bool rotate);

/// Everything drawn for one trial before any strategy runs.
struct TrialInputs {
  Geometry geometry;
  BandChannel sub6;
  BandChannel mm;
  std::vector<SpatialSpectrum> spectra;
  std::vector<int> order;
};

TrialInputs draw_trial_inputs(const SimulationContext& ctx, std::uint64_t trial_index);

/// Runs one strategy end to end (selection, refinement, ZF) on given channels.
StrategyOutcome evaluate_strategy(const SimulationContext& ctx, const std::vector<CMatrix>& mm,
                                  const std::vector<SpatialSpectrum>& spectra,
                                  const std::vector<int>& order, Strategy strategy,
                                  double noise_var);

/// One pipeline execution per enabled strategy on a shared channel draw.
TrialResult run_trial(const SimulationContext& ctx, std::uint64_t trial_index);

/// Trials [0, trials) on up to config.workers threads; results in trial order.
std::vector<TrialResult> run_trials(const SimulationContext& ctx);

/// Aggregate of one strategy at one sweep value.
struct StrategySummary {
  Strategy strategy = Strategy::uncoordinated;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;
  double mean_min_rate = 0.0;
  double collision_rate = 0.0;  // fraction of trials with at least one collision
  double exchange_bits = 0.0;   // mean per trial
  std::vector<double> sum_rates;  // per trial, in trial order
};

enum class SweepAxis { snr, radius, distance };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string_view to_string(SweepAxis axis);

struct SweepPoint {
  double value = 0.0;           // axis value as requested
  double reported_value = 0.0;  // dB for snr, mean inter-UE distance otherwise
  double disk_radius_m = 0.0;
  double snr_db = 0.0;
  double noise_var = 0.0;
  std::vector<StrategySummary> strategies;

  const StrategySummary* find(Strategy s) const;
};

StrategySummary summarize(const std::vector<TrialResult>& trials, Strategy strategy);

/// Applies one axis value to a copy of the configuration.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepAxis axis,
                              const std::vector<double>& values);

/// Commented header (full config, seed, noise convention) and one row per
/// (value, strategy).
void write_results_csv(std::ostream& out, const ScenarioConfig& config, SweepAxis axis,
                       const std::vector<SweepPoint>& points);

/// Mean and standard error of the paired per-trial difference a - b.
struct PairedGap {
  double mean = 0.0;
  double stderr_mean = 0.0;
};
PairedGap paired_gap(const std::vector<double>& a, const std::vector<double>& b);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t budget = 1u << 20;
  int dominance_scenarios = 200;
  int identity_samples = 1000;
  int dichotomy_fades = 1000;
  std::uint64_t seed = 2019;
};

/// Runs the analytic and brute-force verifiers.
VerifyReport verify(const VerifyOptions& options = {});

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace coordbeam
