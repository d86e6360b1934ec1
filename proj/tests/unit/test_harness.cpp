#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "coordbeam/errors.hpp"
#include "coordbeam/harness.hpp"
#include "coordbeam/receiver.hpp"

using namespace coordbeam;

namespace {

ScenarioConfig quick_config() {
  ScenarioConfig c;
  c.num_ues = 3;
  c.trials = 40;
  c.master_seed = 77;
  return c;
}

std::string csv_for(ScenarioConfig c, int workers) {
  c.workers = workers;
  std::ostringstream os;
  write_results_csv(os, c, SweepAxis::snr, sweep(c, SweepAxis::snr, {-5.0, 5.0}));
  return os.str();
}

bool same_outcomes(const TrialResult& a, const TrialResult& b) {
  if (a.outcomes.size() != b.outcomes.size() || a.order != b.order) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i].sinr != b.outcomes[i].sinr) return false;
    if (a.outcomes[i].sum_rate != b.outcomes[i].sum_rate) return false;
  }
  return true;
}

}  // namespace

TEST(HierarchyOrder, Rotation) {
  EXPECT_EQ(hierarchy_order(4, 0, true), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(hierarchy_order(4, 6, true), (std::vector<int>{2, 3, 0, 1}));
  EXPECT_EQ(hierarchy_order(4, 6, false), (std::vector<int>{0, 1, 2, 3}));
}

TEST(Context, NoiseFromReferenceGain) {
  ScenarioConfig c;
  c.snr_db = 10.0;
  const SimulationContext ctx(c);
  const double pl = 61.4 + 20.0 * std::log10(c.bs_disk_distance_m);
  const double g = 64.0 * 16.0 * c.paths_per_cluster * std::pow(10.0, -pl / 10.0);
  EXPECT_NEAR(ctx.reference_gain() / g, 1.0, 1e-12);
  EXPECT_NEAR(ctx.noise_var() / (g / 10.0), 1.0, 1e-12);
}

TEST(RunTrial, GenieSingleUe) {
  ScenarioConfig c;
  c.num_ues = 1;
  c.strategies = {Strategy::genie};
  const SimulationContext ctx(c);
  const TrialInputs in = draw_trial_inputs(ctx, 3);
  const TrialResult r = run_trial(ctx, 3);
  const GenieChoice g = genie_select(in.mm.matrices[0], ctx.mm_bs(), ctx.mm_ue());
  EXPECT_NEAR(r.outcomes[0].sum_rate, std::log2(1.0 + g.gain / ctx.noise_var()), 1e-12);
}

TEST(RunTrial, SameSeedSameResult) {
  const SimulationContext ctx(quick_config());
  EXPECT_TRUE(same_outcomes(run_trial(ctx, 5), run_trial(ctx, 5)));
  EXPECT_FALSE(same_outcomes(run_trial(ctx, 5), run_trial(ctx, 6)));
}

TEST(RunTrial, ExchangeAccounting) {
  ScenarioConfig c = quick_config();
  c.num_ues = 5;
  const SimulationContext ctx(c);
  const TrialResult r = run_trial(ctx, 0);
  EXPECT_EQ(r.find(Strategy::coordinated)->exchange_messages, 10);
  EXPECT_EQ(r.find(Strategy::coordinated)->exchange_bits, 60);
  EXPECT_EQ(r.find(Strategy::uncoordinated)->exchange_messages, 0);
  EXPECT_EQ(r.find(Strategy::genie)->exchange_bits, 0);
}

TEST(RunTrial, ZfSinrBelowMatchedFilterBound) {
  // Each UE is heard on all K RF beams, so its ZF SINR may exceed the best
  // single-beam gain, but never the energy of its effective column.
  const SimulationContext ctx(quick_config());
  for (std::uint64_t t = 0; t < 20; ++t) {
    const TrialInputs in = draw_trial_inputs(ctx, t);
    for (Strategy s : {Strategy::uncoordinated, Strategy::coordinated}) {
      const StrategyOutcome o =
          evaluate_strategy(ctx, in.mm.matrices, in.spectra, in.order, s, ctx.noise_var());
      const EffectiveChannel e =
          build_effective(std::span<const CMatrix>(in.mm.matrices),
                          std::span<const BeamDecision>(o.decisions), ctx.mm_bs(), ctx.mm_ue());
      for (int u = 0; u < e.matrix.cols(); ++u) {
        EXPECT_LE(o.sinr[u], e.matrix.col(u).squaredNorm() / ctx.noise_var() * (1 + 1e-9));
      }
    }
  }
}

TEST(RunTrials, WorkerCountDoesNotChangeResults) {
  ScenarioConfig c = quick_config();
  const std::vector<TrialResult> one = run_trials(SimulationContext(c));
  c.workers = 4;
  const std::vector<TrialResult> four = run_trials(SimulationContext(c));
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_TRUE(same_outcomes(one[i], four[i]));
}

TEST(Sweep, CsvByteIdenticalAcrossWorkers) {
  const ScenarioConfig c = quick_config();
  const std::string a = csv_for(c, 1);
  EXPECT_EQ(a, csv_for(c, 3));
  EXPECT_EQ(a, csv_for(c, 8));
}

TEST(Sweep, CsvLayout) {
  const std::string csv = csv_for(quick_config(), 1);
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_NE(csv.find("# seed: 77\n"), std::string::npos);
  EXPECT_NE(csv.find("\nvalue,strategy,mean_sum_rate,stderr,mean_per_ue_min_rate,collision_rate,"
                     "exchange_bits,trials,seed\n"),
            std::string::npos);
  EXPECT_NE(csv.find("\n-5,coordinated,"), std::string::npos);
  EXPECT_EQ(csv.find("workers"), std::string::npos);
}

TEST(Sweep, SingleValueEqualsDirectRun) {
  const ScenarioConfig c = quick_config();
  const std::vector<SweepPoint> p = sweep(c, SweepAxis::snr, {c.snr_db});
  const StrategySummary direct = summarize(run_trials(SimulationContext(c)), Strategy::coordinated);
  EXPECT_EQ(p[0].find(Strategy::coordinated)->sum_rates, direct.sum_rates);
  EXPECT_THROW(sweep(c, SweepAxis::snr, {}), ConfigError);
}

TEST(Sweep, AxisMapping) {
  const ScenarioConfig c = quick_config();
  EXPECT_EQ(apply_axis(c, SweepAxis::snr, -3.0).snr_db, -3.0);
  EXPECT_EQ(apply_axis(c, SweepAxis::radius, 20.0).disk_radius_m, 20.0);
  EXPECT_NEAR(mean_inter_ue_distance(apply_axis(c, SweepAxis::distance, 13.0).disk_radius_m), 13.0,
              1e-12);
  EXPECT_THROW(apply_axis(c, SweepAxis::radius, -1.0), ConfigError);
  EXPECT_THROW(sweep_axis_from_string("angle"), ConfigError);
  EXPECT_EQ(sweep_axis_from_string("distance"), SweepAxis::distance);
}

TEST(Summary, Statistics) {
  ScenarioConfig c = quick_config();
  c.trials = 10;
  const std::vector<TrialResult> trials = run_trials(SimulationContext(c));
  const StrategySummary s = summarize(trials, Strategy::genie);
  double mean = 0.0;
  for (const TrialResult& t : trials) mean += t.find(Strategy::genie)->sum_rate;
  EXPECT_NEAR(s.mean_sum_rate, mean / 10.0, 1e-12);
  EXPECT_GT(s.stderr_sum_rate, 0.0);
  EXPECT_LE(s.mean_min_rate * c.num_ues, s.mean_sum_rate + 1e-12);
  EXPECT_EQ(s.exchange_bits, 0.0);
}

TEST(PairedGap, KnownValues) {
  const PairedGap g = paired_gap({3, 4, 5, 6}, {1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(g.mean, 3.5);
  EXPECT_NEAR(g.stderr_mean, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
  EXPECT_THROW(paired_gap({1}, {1, 2}), InvalidParameter);
}

TEST(SharedReflector, CoordinationAvoidsCollisions) {
  // Two UEs with a strong common scatterer (same BS arrival angle) and a
  // weaker LOS path each. Without coordination both pick the scatterer beam.
  ScenarioConfig c;
  c.num_ues = 2;
  const SimulationContext ctx(c);
  Rng rng(99);
  std::uniform_real_distribution<double> angle(0.3, 2.8);
  int coordinated_hits = 0;
  int uncoordinated_hits = 0;
  for (int t = 0; t < 1000; ++t) {
    const double shared_aoa = angle(rng);
    PathSet sub6;
    PathSet mm;
    for (int u = 0; u < 2; ++u) {
      Cluster los;
      los.path_power = 0.3;
      los.paths = {{angle(rng), angle(rng)}};
      Cluster sc;
      sc.id = 1;
      sc.path_power = 1.0;
      sc.paths = {{angle(rng), shared_aoa}};
      sub6.ues.push_back({sc, los});
      mm.ues.push_back({sc, los});
    }
    const std::vector<SpatialSpectrum> spectra =
        analytic_spectrum(sub6, ctx.sub6_bs(), ctx.sub6_ue());
    const BandChannel ch = realize_channel(mm, c.n_bs, c.n_ue, rng);
    const std::vector<int> order{0, 1};
    coordinated_hits += evaluate_strategy(ctx, ch.matrices, spectra, order, Strategy::coordinated,
                                          1.0)
                            .collisions;
    uncoordinated_hits += evaluate_strategy(ctx, ch.matrices, spectra, order,
                                            Strategy::uncoordinated, 1.0)
                              .collisions;
  }
  EXPECT_LE(coordinated_hits, uncoordinated_hits);
  EXPECT_GT(uncoordinated_hits, 0);
}
