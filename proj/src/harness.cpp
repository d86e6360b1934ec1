#include "coordbeam/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "coordbeam/errors.hpp"
#include "coordbeam/oracle.hpp"
#include "coordbeam/receiver.hpp"

namespace coordbeam {

double reference_los_gain(const ScenarioConfig& config) {
  const double loss_db = pathloss_db(config.bs_disk_distance_m, config.mmwave.los, 0.0);
  return static_cast<double>(config.n_bs) * config.n_ue * config.paths_per_cluster *
         std::pow(10.0, -loss_db / 10.0);
}

SimulationContext::SimulationContext(ScenarioConfig config)
    : config_((config.validate(), std::move(config))),
      mm_bs_(build_codebook(config_.n_bs, config_.n_bs)),
      mm_ue_(build_codebook(config_.n_ue, config_.n_ue)),
      sub6_bs_(build_codebook(config_.sub6_n_bs, config_.n_bs)),
      sub6_ue_(build_codebook(config_.sub6_n_ue, config_.n_ue)),
      assoc_(build_association(sub6_bs_, sub6_ue_, mm_bs_, mm_ue_)),
      reference_gain_(reference_los_gain(config_)),
      noise_var_(reference_gain_ / std::pow(10.0, config_.snr_db / 10.0)) {}

const StrategyOutcome* TrialResult::find(Strategy s) const {
  for (const auto& o : outcomes) {
    if (o.strategy == s) return &o;
  }
  return nullptr;
}

const StrategySummary* SweepPoint::find(Strategy s) const {
  for (const auto& o : strategies) {
    if (o.strategy == s) return &o;
  }
  return nullptr;
}

std::vector<int> hierarchy_order(int num_ues, std::uint64_t trial, bool rotate) {
  std::vector<int> order(static_cast<std::size_t>(num_ues));
  const int shift = rotate ? static_cast<int>(trial % static_cast<std::uint64_t>(num_ues)) : 0;
  for (int r = 0; r < num_ues; ++r) order[r] = (r + shift) % num_ues;
  return order;
}

TrialInputs draw_trial_inputs(const SimulationContext& ctx, std::uint64_t trial_index) {
  const ScenarioConfig& cfg = ctx.config();
  Rng rng = trial_rng(cfg.master_seed, trial_index);
  TrialInputs in;
  in.geometry = place_scenario(cfg, rng);
  auto [sub6, mm] = realize_multiband(in.geometry, cfg, rng);
  in.sub6 = std::move(sub6);
  in.mm = std::move(mm);
  if (cfg.spectrum_mode == SpectrumMode::analytic) {
    in.spectra = analytic_spectrum(in.sub6.paths, ctx.sub6_bs(), ctx.sub6_ue());
  } else {
    std::vector<BandChannel> fades;
    fades.reserve(static_cast<std::size_t>(cfg.spectrum_fades));
    for (int f = 0; f < cfg.spectrum_fades; ++f) {
      fades.push_back(realize_channel(in.sub6.paths, cfg.sub6_n_bs, cfg.sub6_n_ue, rng));
    }
    in.spectra = empirical_spectrum(fades, ctx.sub6_bs(), ctx.sub6_ue());
  }
  in.order = hierarchy_order(cfg.num_ues, trial_index, cfg.hierarchy_rotation);
  return in;
}

namespace {

int count_collisions(const std::vector<BeamDecision>& decisions) {
  int hits = 0;
  for (std::size_t a = 0; a < decisions.size(); ++a) {
    for (std::size_t b = a + 1; b < decisions.size(); ++b) {
      if (decisions[a].refined.bs_beam == decisions[b].refined.bs_beam) ++hits;
    }
  }
  return hits;
}

}  // namespace

StrategyOutcome evaluate_strategy(const SimulationContext& ctx, const std::vector<CMatrix>& mm,
                                  const std::vector<SpatialSpectrum>& spectra,
                                  const std::vector<int>& order, Strategy strategy,
                                  double noise_var) {
  StrategyOutcome out;
  out.strategy = strategy;
  const int k = static_cast<int>(mm.size());

  if (strategy == Strategy::genie) {
    out.decisions.resize(static_cast<std::size_t>(k));
    out.sinr.resize(static_cast<std::size_t>(k));
    for (int u = 0; u < k; ++u) {
      const GenieChoice g = genie_select(mm[u], ctx.mm_bs(), ctx.mm_ue());
      out.decisions[u].ue = u;
      out.decisions[u].refined = g.pair;
      out.decisions[u].strategy = strategy;
      out.sinr[u] = g.gain / noise_var;
    }
    out.sum_rate = sum_rate(out.sinr);
    out.collisions = count_collisions(out.decisions);
    return out;
  }

  HierarchyOutcome h = run_hierarchy(spectra, ctx.association(), order, strategy, noise_var);
  for (int u = 0; u < k; ++u) {
    BeamDecision& d = h.decisions[u];
    d.refined = refine(mm[u], d.coarse, ctx.mm_bs(), ctx.mm_ue(), ctx.association());
    out.fallback = out.fallback || d.fallback;
  }
  const EffectiveChannel eff = build_effective(std::span<const CMatrix>(mm),
                                               std::span<const BeamDecision>(h.decisions),
                                               ctx.mm_bs(), ctx.mm_ue());
  const CombinerOutput zf = zf_combine(eff.matrix, noise_var);
  out.sinr = zf.sinr;
  out.sum_rate = zf.sum_rate;
  out.pseudo_inverse = zf.pseudo_inverse;
  out.decisions = std::move(h.decisions);
  out.collisions = count_collisions(out.decisions);
  out.exchange_messages = static_cast<int>(h.log.messages.size());
  out.exchange_bits = h.log.total_bits();
  return out;
}

TrialResult run_trial(const SimulationContext& ctx, std::uint64_t trial_index) {
  const TrialInputs in = draw_trial_inputs(ctx, trial_index);
  TrialResult result;
  result.trial = trial_index;
  result.order = in.order;
  for (Strategy s : ctx.config().strategies) {
    result.outcomes.push_back(
        evaluate_strategy(ctx, in.mm.matrices, in.spectra, in.order, s, ctx.noise_var()));
  }
  return result;
}

std::vector<TrialResult> run_trials(const SimulationContext& ctx) {
  const std::size_t trials = static_cast<std::size_t>(ctx.config().trials);
  std::vector<TrialResult> results(trials);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(ctx.config().workers), trials);

  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) results[t] = run_trial(ctx, t);
    return results;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += workers) results[t] = run_trial(ctx, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

StrategySummary summarize(const std::vector<TrialResult>& trials, Strategy strategy) {
  StrategySummary s;
  s.strategy = strategy;
  if (trials.empty()) return s;
  double min_rate_total = 0.0;
  double collided_trials = 0.0;
  double bits = 0.0;
  for (const TrialResult& t : trials) {
    const StrategyOutcome* o = t.find(strategy);
    if (!o) throw InvalidParameter("strategy was not simulated");
    s.sum_rates.push_back(o->sum_rate);
    double min_rate = std::numeric_limits<double>::infinity();
    for (double g : o->sinr) min_rate = std::min(min_rate, std::log2(1.0 + g));
    min_rate_total += min_rate;
    if (o->collisions > 0) collided_trials += 1.0;
    bits += o->exchange_bits;
  }
  const double n = static_cast<double>(trials.size());
  s.mean_sum_rate = std::accumulate(s.sum_rates.begin(), s.sum_rates.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : s.sum_rates) ss += (r - s.mean_sum_rate) * (r - s.mean_sum_rate);
  s.stderr_sum_rate = trials.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  s.mean_min_rate = min_rate_total / n;
  s.collision_rate = collided_trials / n;
  s.exchange_bits = bits / n;
  return s;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "snr") return SweepAxis::snr;
  if (name == "radius") return SweepAxis::radius;
  if (name == "distance") return SweepAxis::distance;
  throw ConfigError("sweep axis must be snr, radius or distance");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::snr: return "snr";
    case SweepAxis::radius: return "radius";
    case SweepAxis::distance: return "distance";
  }
  return "unknown";
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  switch (axis) {
    case SweepAxis::snr: c.snr_db = value; break;
    case SweepAxis::radius: c.disk_radius_m = value; break;
    case SweepAxis::distance: c.disk_radius_m = radius_for_mean_distance(value); break;
  }
  c.validate();
  return c;
}

std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepAxis axis,
                              const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepPoint> points;
  for (double v : values) {
    const SimulationContext ctx(apply_axis(config, axis, v));
    const std::vector<TrialResult> trials = run_trials(ctx);
    SweepPoint p;
    p.value = v;
    p.disk_radius_m = ctx.config().disk_radius_m;
    p.snr_db = ctx.config().snr_db;
    p.noise_var = ctx.noise_var();
    p.reported_value =
        axis == SweepAxis::snr ? v : mean_inter_ue_distance(ctx.config().disk_radius_m);
    for (Strategy s : ctx.config().strategies) p.strategies.push_back(summarize(trials, s));
    points.push_back(std::move(p));
  }
  return points;
}

void write_results_csv(std::ostream& out, const ScenarioConfig& config, SweepAxis axis,
                       const std::vector<SweepPoint>& points) {
  // Worker count does not affect results, so it stays out of the header.
  nlohmann::json header = nlohmann::json::parse(config_to_json(config, -1));
  header.erase("workers");
  std::ostringstream os;
  os << std::setprecision(10);
  os << "# coordbeam results\n";
  os << "# config: " << header.dump() << '\n';
  os << "# seed: " << config.master_seed << '\n';
  os << "# axis: " << to_string(axis)
     << (axis == SweepAxis::snr ? " (value = SNR in dB)"
                                : " (value = mean inter-UE distance in m = 0.9054 * disk radius)")
     << '\n';
  os << "# noise: sigma^2 = N_BS*N_UE*L*10^(-PL_LOS(disk distance, xi=0)/10) / 10^(snr_db/10)\n";
  for (const auto& p : points) {
    os << "# point: value=" << p.reported_value << " disk_radius_m=" << p.disk_radius_m
       << " snr_db=" << p.snr_db << " noise_var=" << p.noise_var << '\n';
  }
  os << "value,strategy,mean_sum_rate,stderr,mean_per_ue_min_rate,collision_rate,exchange_bits,"
        "trials,seed\n";
  for (const auto& p : points) {
    for (const auto& s : p.strategies) {
      os << p.reported_value << ',' << to_string(s.strategy) << ',' << s.mean_sum_rate << ','
         << s.stderr_sum_rate << ',' << s.mean_min_rate << ',' << s.collision_rate << ','
         << s.exchange_bits << ',' << s.sum_rates.size() << ',' << config.master_seed << '\n';
    }
  }
  out << os.str();
}

PairedGap paired_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidParameter("paired gap needs two equally long nonempty samples");
  }
  const double n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  PairedGap g;
  g.mean = mean;
  g.stderr_mean = a.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return g;
}

}  // namespace coordbeam
