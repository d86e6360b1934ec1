#include "coordbeam/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coordbeam/errors.hpp"

namespace coordbeam {

using nlohmann::json;

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::uncoordinated: return "uncoordinated";
    case Strategy::coordinated: return "coordinated";
    case Strategy::genie: return "genie";
  }
  return "unknown";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "uncoordinated") return Strategy::uncoordinated;
  if (name == "coordinated") return Strategy::coordinated;
  if (name == "genie") return Strategy::genie;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(SpectrumMode m) {
  return m == SpectrumMode::analytic ? "analytic" : "empirical";
}

BandParams default_mmwave_band() {
  BandParams b;
  b.carrier_ghz = 28.0;
  b.angular_spread_deg = 2.0;
  b.los = {61.4, 20.0, 5.8};
  b.nlos = {72.0, 29.2, 8.7};
  return b;
}

BandParams default_sub6_band() {
  BandParams b;
  b.carrier_ghz = 3.0;
  b.angular_spread_deg = 5.0;
  b.los = {38.0, 20.0, 4.0};
  b.nlos = {38.0, 30.0, 6.0};
  return b;
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(n_bs >= 2 && n_ue >= 2, "mmWave antenna counts must be >= 2");
  require(sub6_n_bs >= 1 && sub6_n_ue >= 1, "sub-6 antenna counts must be positive");
  require(num_ues >= 1, "num_ues must be positive");
  require(num_clusters >= 1, "num_clusters must be positive");
  require(paths_per_cluster >= 1, "paths_per_cluster must be positive");
  require(disk_radius_m > 0.0, "disk_radius_m must be positive");
  require(bs_disk_distance_m > 0.0, "bs_disk_distance_m must be positive");
  require(disk_radius_m < bs_disk_distance_m, "the BS must lie outside the UE disk");
  require(trials >= 1, "trials must be positive");
  require(mismatch_probability >= 0.0 && mismatch_probability <= 1.0,
          "mismatch_probability must lie in [0, 1]");
  require(los_probability >= 0.0 && los_probability <= 1.0,
          "los_probability must lie in [0, 1]");
  for (const BandParams* b : {&mmwave, &sub6}) {
    require(b->carrier_ghz > 0.0, "carrier_ghz must be positive");
    require(b->angular_spread_deg >= 0.0, "angular_spread_deg must be nonnegative");
    for (const PathlossParams* p : {&b->los, &b->nlos}) {
      require(p->beta > 0.0, "pathloss beta must be positive");
      require(p->shadow_sigma >= 0.0, "pathloss shadow_sigma must be nonnegative");
    }
  }
  require(!strategies.empty(), "at least one strategy must be enabled");
  require(spectrum_fades >= 1, "spectrum_fades must be positive");
  require(workers >= 1, "workers must be positive");
}

namespace {

json pathloss_json(const PathlossParams& p) {
  return json{{"alpha", p.alpha}, {"beta", p.beta}, {"shadow_sigma", p.shadow_sigma}};
}

json band_json(const BandParams& b) {
  return json{{"carrier_ghz", b.carrier_ghz},
              {"angular_spread_deg", b.angular_spread_deg},
              {"los", pathloss_json(b.los)},
              {"nlos", pathloss_json(b.nlos)}};
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError(where + " must be a JSON object");
  }
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

void read_pathloss(const json& obj, PathlossParams& p, const std::string& where) {
  reject_unknown(obj, {"alpha", "beta", "shadow_sigma"}, where);
  read(obj, "alpha", p.alpha, where);
  read(obj, "beta", p.beta, where);
  read(obj, "shadow_sigma", p.shadow_sigma, where);
}

void read_band(const json& obj, BandParams& b, const std::string& where) {
  reject_unknown(obj, {"carrier_ghz", "angular_spread_deg", "los", "nlos"}, where);
  read(obj, "carrier_ghz", b.carrier_ghz, where);
  read(obj, "angular_spread_deg", b.angular_spread_deg, where);
  if (obj.contains("los")) read_pathloss(obj["los"], b.los, where + ".los");
  if (obj.contains("nlos")) read_pathloss(obj["nlos"], b.nlos, where + ".nlos");
}

}  // namespace

std::string config_to_json(const ScenarioConfig& c, int indent) {
  json strategies = json::array();
  for (Strategy s : c.strategies) strategies.push_back(std::string(to_string(s)));
  json j{{"n_bs", c.n_bs},
         {"n_ue", c.n_ue},
         {"sub6_n_bs", c.sub6_n_bs},
         {"sub6_n_ue", c.sub6_n_ue},
         {"num_ues", c.num_ues},
         {"num_clusters", c.num_clusters},
         {"paths_per_cluster", c.paths_per_cluster},
         {"disk_radius_m", c.disk_radius_m},
         {"bs_disk_distance_m", c.bs_disk_distance_m},
         {"snr_db", c.snr_db},
         {"trials", c.trials},
         {"master_seed", c.master_seed},
         {"mismatch_probability", c.mismatch_probability},
         {"los_probability", c.los_probability},
         {"mmwave", band_json(c.mmwave)},
         {"sub6", band_json(c.sub6)},
         {"strategies", strategies},
         {"hierarchy_rotation", c.hierarchy_rotation},
         {"spectrum_mode", std::string(to_string(c.spectrum_mode))},
         {"spectrum_fades", c.spectrum_fades},
         {"workers", c.workers}};
  return j.dump(indent);
}

ScenarioConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  reject_unknown(j,
                 {"n_bs", "n_ue", "sub6_n_bs", "sub6_n_ue", "num_ues", "num_clusters",
                  "paths_per_cluster", "disk_radius_m", "bs_disk_distance_m", "snr_db", "trials",
                  "master_seed", "mismatch_probability", "los_probability", "mmwave", "sub6",
                  "strategies", "hierarchy_rotation", "spectrum_mode", "spectrum_fades",
                  "workers"},
                 where);
  ScenarioConfig c;
  read(j, "n_bs", c.n_bs, where);
  read(j, "n_ue", c.n_ue, where);
  read(j, "sub6_n_bs", c.sub6_n_bs, where);
  read(j, "sub6_n_ue", c.sub6_n_ue, where);
  read(j, "num_ues", c.num_ues, where);
  read(j, "num_clusters", c.num_clusters, where);
  read(j, "paths_per_cluster", c.paths_per_cluster, where);
  read(j, "disk_radius_m", c.disk_radius_m, where);
  read(j, "bs_disk_distance_m", c.bs_disk_distance_m, where);
  read(j, "snr_db", c.snr_db, where);
  read(j, "trials", c.trials, where);
  read(j, "master_seed", c.master_seed, where);
  read(j, "mismatch_probability", c.mismatch_probability, where);
  read(j, "los_probability", c.los_probability, where);
  if (j.contains("mmwave")) read_band(j["mmwave"], c.mmwave, "config.mmwave");
  if (j.contains("sub6")) read_band(j["sub6"], c.sub6, "config.sub6");
  if (j.contains("strategies")) {
    const json& s = j["strategies"];
    if (!s.is_array()) throw ConfigError("strategies must be an array of names");
    c.strategies.clear();
    for (const auto& name : s) {
      if (!name.is_string()) throw ConfigError("strategies must be an array of names");
      c.strategies.push_back(strategy_from_string(name.get<std::string>()));
    }
  }
  read(j, "hierarchy_rotation", c.hierarchy_rotation, where);
  if (j.contains("spectrum_mode")) {
    std::string mode;
    read(j, "spectrum_mode", mode, where);
    if (mode == "analytic") {
      c.spectrum_mode = SpectrumMode::analytic;
    } else if (mode == "empirical") {
      c.spectrum_mode = SpectrumMode::empirical;
    } else {
      throw ConfigError("spectrum_mode must be 'analytic' or 'empirical'");
    }
  }
  read(j, "spectrum_fades", c.spectrum_fades, where);
  read(j, "workers", c.workers, where);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace coordbeam
