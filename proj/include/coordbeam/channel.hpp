#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/config.hpp"

namespace coordbeam {

using Rng = std::mt19937_64;

/// Independent stream for one Monte-Carlo trial.
Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

enum class Band { sub6, mmwave };
enum class Visibility { both, mmwave_only, sub6_only };

bool visible_in(Visibility v, Band band);

/// Long-term randomness of one UE-cluster link. Offsets are standard normal
/// draws, scaled per band by the angular spread; the shadowing draw is
/// scaled per band by the shadowing deviation. Sharing them across bands is
/// what makes the two bands spatially congruent.
struct LinkDraws {
  double shadow = 0.0;
  std::vector<double> aoa_offsets;
  std::vector<double> aod_offsets;
};

/// Placement of the BS, the UE disk and the shared scatterers. Cluster 0 of
/// every UE is its LOS cluster; cluster c >= 1 is scatterer c - 1.
struct Geometry {
  Point2 bs;
  Point2 disk_center;
  double disk_radius_m = 0.0;
  std::vector<Point2> ue_positions;
  std::vector<Point2> scatterers;
  std::vector<Visibility> scatterer_visibility;
  std::vector<bool> los;
  std::vector<std::vector<LinkDraws>> draws;  // [ue][cluster]

  int num_ues() const { return static_cast<int>(ue_positions.size()); }
  int num_clusters() const { return static_cast<int>(scatterers.size()) + 1; }
};

struct Path {
  double aod = 0.0;  // UE side, radians in [0, pi]
  double aoa = 0.0;  // BS side, radians in [0, pi]
};

struct Cluster {
  int id = 0;  // 0 = LOS, otherwise scatterer index + 1
  double path_power = 0.0;  // sigma_c^2 of each path
  std::vector<Path> paths;
};

/// Per-UE list of visible clusters for one band.
struct PathSet {
  std::vector<std::vector<Cluster>> ues;

  int num_ues() const { return static_cast<int>(ues.size()); }
  /// Sum over clusters and paths of the per-path power of one UE.
  double total_power(int ue) const;
};

struct BandChannel {
  Band band = Band::mmwave;
  double carrier_ghz = 0.0;
  std::vector<CMatrix> matrices;  // one N_BS x N_UE matrix per UE
  PathSet paths;
};

double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db);

/// Drops UEs uniformly in the disk, scatterers uniformly in the annulus
/// [r, 3r] around the disk center, per-UE LOS flags and per-scatterer band
/// visibility. The BS array axis and every UE array axis point along +y and
/// the disk center sits on the +x axis, so the disk is at BS broadside.
Geometry place_scenario(const ScenarioConfig& config, Rng& rng);

PathSet derive_path_set(const Geometry& geometry, Band band, const ScenarioConfig& config);

/// H = sqrt(N_BS N_UE) sum_c sum_l alpha a_BS(aoa) a_UE(aod)^H with
/// alpha ~ CN(0, path_power) drawn fresh on every call.
BandChannel realize_channel(const PathSet& paths, int n_bs, int n_ue, Rng& rng);

/// Deterministic channel: every path gain set to sqrt(path_power). Used by
/// tests that need a known realization.
CMatrix channel_from_gains(const std::vector<Cluster>& clusters,
                           const std::vector<std::vector<cdouble>>& gains, int n_bs, int n_ue);

std::pair<BandChannel, BandChannel> realize_multiband(const Geometry& geometry,
                                                      const ScenarioConfig& config, Rng& rng);

/// Array angle of a direction vector relative to the +y array axis, folded
/// into [0, pi].
double array_angle(Point2 from, Point2 to);

}  // namespace coordbeam
