#include "coordbeam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coordbeam/errors.hpp"

namespace coordbeam {

Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32), 0x6d6d77u};
  return Rng(seq);
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool visible_in(Visibility v, Band band) {
  switch (v) {
    case Visibility::both: return true;
    case Visibility::mmwave_only: return band == Band::mmwave;
    case Visibility::sub6_only: return band == Band::sub6;
  }
  return false;
}

double PathSet::total_power(int ue) const {
  double total = 0.0;
  for (const Cluster& c : ues.at(ue)) {
    total += c.path_power * static_cast<double>(c.paths.size());
  }
  return total;
}

double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db) {
  if (!(distance_m > 0.0)) {
    throw InvalidParameter("pathloss distance must be positive");
  }
  return params.alpha + params.beta * std::log10(distance_m) + shadow_db;
}

double array_angle(Point2 from, Point2 to) {
  const double d = distance(from, to);
  if (d == 0.0) return std::numbers::pi / 2;
  return std::acos(std::clamp((to.y - from.y) / d, -1.0, 1.0));
}

namespace {

// Uniform point in the annulus [inner, outer] around center.
Point2 uniform_in_annulus(Point2 center, double inner, double outer, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const double rad = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  return {center.x + rad * std::cos(phi), center.y + rad * std::sin(phi)};
}

double fold_angle(double angle) { return std::acos(std::cos(angle)); }

constexpr double kMinScattererClearance = 1.0;

}  // namespace

Geometry place_scenario(const ScenarioConfig& config, Rng& rng) {
  if (!(config.disk_radius_m > 0.0) || config.num_ues < 1 || config.num_clusters < 1) {
    throw InvalidParameter("scenario needs r > 0, K >= 1 and C >= 1");
  }
  const double r = config.disk_radius_m;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Geometry g;
  g.bs = {0.0, 0.0};
  g.disk_center = {config.bs_disk_distance_m, 0.0};
  g.disk_radius_m = r;

  for (int u = 0; u < config.num_ues; ++u) {
    g.ue_positions.push_back(uniform_in_annulus(g.disk_center, 0.0, r, rng));
  }
  for (int c = 1; c < config.num_clusters; ++c) {
    Point2 p;
    do {
      p = uniform_in_annulus(g.disk_center, r, 3.0 * r, rng);
    } while (distance(p, g.bs) < kMinScattererClearance);
    g.scatterers.push_back(p);

    Visibility v = Visibility::both;
    if (unit(rng) < config.mismatch_probability) {
      v = unit(rng) < 0.5 ? Visibility::mmwave_only : Visibility::sub6_only;
    }
    g.scatterer_visibility.push_back(v);
  }
  for (int u = 0; u < config.num_ues; ++u) {
    g.los.push_back(unit(rng) < config.los_probability);
  }

  const int L = config.paths_per_cluster;
  g.draws.assign(config.num_ues, {});
  for (int u = 0; u < config.num_ues; ++u) {
    for (int c = 0; c < config.num_clusters; ++c) {
      LinkDraws d;
      d.shadow = gauss(rng);
      for (int l = 0; l < L; ++l) {
        d.aoa_offsets.push_back(gauss(rng));
        d.aod_offsets.push_back(gauss(rng));
      }
      g.draws[u].push_back(std::move(d));
    }
  }
  return g;
}

PathSet derive_path_set(const Geometry& geometry, Band band, const ScenarioConfig& config) {
  const BandParams& params = band == Band::mmwave ? config.mmwave : config.sub6;
  const double spread = params.angular_spread_deg * std::numbers::pi / 180.0;

  PathSet set;
  set.ues.resize(geometry.ue_positions.size());
  for (int u = 0; u < geometry.num_ues(); ++u) {
    const Point2 ue = geometry.ue_positions[u];
    for (int c = 0; c < geometry.num_clusters(); ++c) {
      double aoa_center = 0.0;
      double aod_center = 0.0;
      double length = 0.0;
      const PathlossParams* pl = nullptr;
      if (c == 0) {
        if (!geometry.los[u]) continue;
        aoa_center = array_angle(geometry.bs, ue);
        aod_center = array_angle(ue, geometry.bs);
        length = distance(ue, geometry.bs);
        pl = &params.los;
      } else {
        const int s = c - 1;
        if (!visible_in(geometry.scatterer_visibility[s], band)) continue;
        const Point2 sc = geometry.scatterers[s];
        aoa_center = array_angle(geometry.bs, sc);
        aod_center = array_angle(ue, sc);
        length = distance(ue, sc) + distance(sc, geometry.bs);
        pl = &params.nlos;
      }
      const LinkDraws& draws = geometry.draws[u][c];
      Cluster cluster;
      cluster.id = c;
      const double loss_db = pathloss_db(length, *pl, pl->shadow_sigma * draws.shadow);
      cluster.path_power = std::pow(10.0, -loss_db / 10.0);
      for (std::size_t l = 0; l < draws.aoa_offsets.size(); ++l) {
        cluster.paths.push_back({fold_angle(aod_center + spread * draws.aod_offsets[l]),
                                 fold_angle(aoa_center + spread * draws.aoa_offsets[l])});
      }
      set.ues[u].push_back(std::move(cluster));
    }
  }
  return set;
}

CMatrix channel_from_gains(const std::vector<Cluster>& clusters,
                           const std::vector<std::vector<cdouble>>& gains, int n_bs, int n_ue) {
  CMatrix h = CMatrix::Zero(n_bs, n_ue);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& paths = clusters[c].paths;
    for (std::size_t l = 0; l < paths.size(); ++l) {
      h.noalias() += gains[c][l] * steering_vector(n_bs, paths[l].aoa) *
                     steering_vector(n_ue, paths[l].aod).adjoint();
    }
  }
  return std::sqrt(static_cast<double>(n_bs) * n_ue) * h;
}

BandChannel realize_channel(const PathSet& paths, int n_bs, int n_ue, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  BandChannel out;
  out.paths = paths;
  out.matrices.reserve(paths.ues.size());
  for (const auto& clusters : paths.ues) {
    std::vector<std::vector<cdouble>> gains;
    for (const Cluster& c : clusters) {
      const double sd = std::sqrt(c.path_power / 2.0);
      std::vector<cdouble> g;
      for (std::size_t l = 0; l < c.paths.size(); ++l) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g.emplace_back(sd * re, sd * im);
      }
      gains.push_back(std::move(g));
    }
    out.matrices.push_back(channel_from_gains(clusters, gains, n_bs, n_ue));
  }
  return out;
}

std::pair<BandChannel, BandChannel> realize_multiband(const Geometry& geometry,
                                                      const ScenarioConfig& config, Rng& rng) {
  BandChannel sub6 = realize_channel(derive_path_set(geometry, Band::sub6, config),
                                     config.sub6_n_bs, config.sub6_n_ue, rng);
  sub6.band = Band::sub6;
  sub6.carrier_ghz = config.sub6.carrier_ghz;
  BandChannel mm = realize_channel(derive_path_set(geometry, Band::mmwave, config), config.n_bs,
                                   config.n_ue, rng);
  mm.band = Band::mmwave;
  mm.carrier_ghz = config.mmwave.carrier_ghz;
  return {std::move(sub6), std::move(mm)};
}

}  // namespace coordbeam
