#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coordbeam {

/// Large-scale pathloss PL(d) = alpha + beta*log10(d) + xi, xi ~ N(0, shadow_sigma^2) [dB].
struct PathlossParams {
  double alpha = 0.0;
  double beta = 20.0;
  double shadow_sigma = 0.0;
};

/// Per-band propagation parameters.
struct BandParams {
  double carrier_ghz = 28.0;
  double angular_spread_deg = 2.0;
  PathlossParams los;
  PathlossParams nlos;
};

enum class Strategy { uncoordinated, coordinated, genie };
enum class SpectrumMode { analytic, empirical };

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);
std::string_view to_string(SpectrumMode m);

BandParams default_mmwave_band();
BandParams default_sub6_band();

/// Every physical and algorithmic knob of one experiment.
struct ScenarioConfig {
  int n_bs = 64;
  int n_ue = 16;
  int sub6_n_bs = 8;
  int sub6_n_ue = 4;
  int num_ues = 5;
  int num_clusters = 3;       // C: one LOS cluster + (C - 1) shared scatterers
  int paths_per_cluster = 2;  // L
  double disk_radius_m = 14.36;
  double bs_disk_distance_m = 100.0;
  double snr_db = 1.0;
  int trials = 10000;
  std::uint64_t master_seed = 1;
  double mismatch_probability = 0.1;
  double los_probability = 1.0;
  BandParams mmwave = default_mmwave_band();
  BandParams sub6 = default_sub6_band();
  std::vector<Strategy> strategies{Strategy::uncoordinated, Strategy::coordinated,
                                   Strategy::genie};
  bool hierarchy_rotation = true;
  SpectrumMode spectrum_mode = SpectrumMode::analytic;
  int spectrum_fades = 256;
  int workers = 1;

  /// Throws ConfigError on out-of-domain values.
  void validate() const;
};

/// Mean distance between two independent uniform points in a disk of radius r.
inline constexpr double kMeanPairDistanceFactor = 128.0 / (45.0 * 3.14159265358979323846);

inline double mean_inter_ue_distance(double disk_radius_m) {
  return kMeanPairDistanceFactor * disk_radius_m;
}
inline double radius_for_mean_distance(double distance_m) {
  return distance_m / kMeanPairDistanceFactor;
}

/// JSON round trip. Parsing rejects unknown keys and fills absent keys with
/// defaults.
std::string config_to_json(const ScenarioConfig& config, int indent = 2);
ScenarioConfig config_from_json(std::string_view text);
ScenarioConfig load_config(const std::string& path);

}  // namespace coordbeam
