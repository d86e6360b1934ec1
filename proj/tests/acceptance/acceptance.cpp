// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs one.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "coordbeam/harness.hpp"
#include "coordbeam/oracle.hpp"

using namespace coordbeam;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

const CheckResult& find_check(const VerifyReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing check " + name);
}

const VerifyReport& verify_report() {
  static const VerifyReport report = verify();
  return report;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome orthogonality() {
  Outcome o{true, ""};
  for (int n : {2, 4, 16, 64}) {
    const double worst = lemma1_audit(n);
    o.passed = o.passed && worst <= 1e-12;
    o.detail += "N=" + std::to_string(n) + " max|v_i^H v_j - 1/N| = " + num(worst) + "; ";
  }
  o.detail += "distinct-angle pairs " + num(lemma1_audit_distinct(build_codebook(64, 64))) +
              " (end points 0 and pi give the same vector)";
  return o;
}

Outcome from_checks(std::initializer_list<const char*> names) {
  Outcome o{true, ""};
  for (const char* name : names) {
    const CheckResult& c = find_check(verify_report(), name);
    o.passed = o.passed && c.passed;
    o.detail += std::string(name) + " " + num(c.measured) + "; ";
  }
  return o;
}

Outcome dichotomy() {
  Outcome o = from_checks({"dichotomy no-collision (256,64)", "dichotomy collision (256,64)",
                           "dichotomy convergence", "dichotomy runtime"});
  o.detail += find_check(verify_report(), "dichotomy convergence").detail;
  return o;
}

Outcome dominance() {
  Outcome o = from_checks({"oracle dominance", "oracle equality on orthogonal paths"});
  o.detail += find_check(verify_report(), "oracle dominance").detail;
  return o;
}

struct Gap {
  PairedGap coordinated_minus_uncoordinated;
  double genie = 0.0;
  double coordinated = 0.0;
  double uncoordinated = 0.0;
};

Gap gap_at(const SweepPoint& p) {
  const StrategySummary* g = p.find(Strategy::genie);
  const StrategySummary* c = p.find(Strategy::coordinated);
  const StrategySummary* u = p.find(Strategy::uncoordinated);
  return {paired_gap(c->sum_rates, u->sum_rates), g->mean_sum_rate, c->mean_sum_rate,
          u->mean_sum_rate};
}

ScenarioConfig figure_config() {
  ScenarioConfig c;
  c.num_ues = 5;
  c.trials = 2000;
  c.master_seed = 2019;
  c.workers = workers();
  return c;
}

Outcome snr_shape() {
  const auto start = Clock::now();
  ScenarioConfig c = figure_config();
  c.disk_radius_m = 14.36;
  const std::vector<double> snrs{-10, -5, 0, 5, 10};
  const std::vector<SweepPoint> pts = sweep(c, SweepAxis::snr, snrs);
  const double elapsed = seconds_since(start);

  bool ordering = true;
  bool significant = true;
  bool nondecreasing = true;
  std::string detail;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Gap g = gap_at(pts[i]);
    const PairedGap& d = g.coordinated_minus_uncoordinated;
    ordering = ordering && g.genie >= g.coordinated && g.coordinated >= g.uncoordinated;
    if (snrs[i] >= 0) significant = significant && d.mean > 3.0 * d.stderr_mean;
    if (i > 0) {
      const PairedGap prev = gap_at(pts[i - 1]).coordinated_minus_uncoordinated;
      const double se = std::max(prev.stderr_mean, d.stderr_mean);
      nondecreasing = nondecreasing && d.mean >= prev.mean - se;
    }
    detail += num(snrs[i]) + "dB g/c/u " + num(g.genie) + "/" + num(g.coordinated) + "/" +
              num(g.uncoordinated) + " gap " + num(d.mean) + "+-" + num(d.stderr_mean, 2) + "; ";
  }
  detail += "ordering " + std::string(ordering ? "ok" : "violated") + ", 3SE " +
            (significant ? "ok" : "violated") + ", gap trend " +
            (nondecreasing ? "ok" : "violated") + ", " + num(elapsed, 3) + " s";
  return {ordering && significant && nondecreasing && elapsed < 600.0, detail};
}

Outcome distance_shape() {
  const auto start = Clock::now();
  ScenarioConfig c = figure_config();
  c.snr_db = 1.0;
  const std::vector<double> distances{5, 13, 30, 60};
  const std::vector<SweepPoint> pts = sweep(c, SweepAxis::distance, distances);
  const double elapsed = seconds_since(start);

  bool positive = true;
  bool decreasing = true;
  std::string detail;
  std::vector<PairedGap> gaps;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Gap g = gap_at(pts[i]);
    gaps.push_back(g.coordinated_minus_uncoordinated);
    const PairedGap& d = gaps.back();
    if (distances[i] <= 13) positive = positive && d.mean > 3.0 * d.stderr_mean;
    if (i > 0) {
      decreasing = decreasing && d.mean <= gaps[i - 1].mean + std::max(d.stderr_mean,
                                                                        gaps[i - 1].stderr_mean);
    }
    detail += num(distances[i]) + "m c/u " + num(g.coordinated) + "/" + num(g.uncoordinated) +
              " gap " + num(d.mean) + "+-" + num(d.stderr_mean, 2) + "; ";
  }
  const double se_ends = std::hypot(gaps.front().stderr_mean, gaps.back().stderr_mean);
  decreasing = decreasing && gaps.front().mean - gaps.back().mean > 3.0 * se_ends;
  detail += "positive gap at 5/13 m " + std::string(positive ? "ok" : "violated") +
            ", decreasing " + (decreasing ? "ok" : "violated") + ", " + num(elapsed, 3) + " s";
  return {positive && decreasing, detail};
}

Outcome exchange() {
  ScenarioConfig c;
  c.num_ues = 5;
  c.strategies = {Strategy::coordinated};
  const SimulationContext ctx(c);
  const TrialInputs in = draw_trial_inputs(ctx, 0);
  const HierarchyOutcome h = run_hierarchy(in.spectra, ctx.association(), in.order,
                                           Strategy::coordinated, ctx.noise_var());
  bool widths = true;
  for (const ExchangeMessage& m : h.log.messages) widths = widths && m.payload_bits == 6;
  const bool count = h.log.messages.size() == 10;
  return {count && widths && h.log.total_bits() == 60,
          std::to_string(h.log.messages.size()) + " messages, " +
              std::to_string(h.log.total_bits()) + " bits, per-message width " +
              std::to_string(index_payload_bits(static_cast<int>(ctx.association().bs_sets.size())))};
}

Outcome determinism() {
  ScenarioConfig c;
  c.trials = 200;
  c.master_seed = 4242;
  std::string reference;
  bool same = true;
  std::string detail = "workers";
  for (int w : {1, 2, 4, 7}) {
    c.workers = w;
    std::ostringstream os;
    write_results_csv(os, c, SweepAxis::snr, sweep(c, SweepAxis::snr, {0.0, 5.0}));
    if (reference.empty()) {
      reference = os.str();
    } else {
      same = same && os.str() == reference;
    }
    detail += " " + std::to_string(w);
  }
  detail += same ? ": identical CSV bytes" : ": CSV differs";
  return {same, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "codebook orthogonality 1/N", orthogonality},
      {2, "three-way SINR identity", [] { return from_checks({"sinr three-way identity"}); }},
      {3, "ZF nulling", [] { return from_checks({"zf nulling"}); }},
      {4, "large-array SINR dichotomy", dichotomy},
      {5, "exhaustive oracle dominance", dominance},
      {6, "sum-rate vs SNR shape", snr_shape},
      {7, "sum-rate vs distance shape", distance_shape},
      {8, "exchange overhead", exchange},
      {9, "determinism across workers", determinism},
  };

  bool all = true;
  bool ran = false;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << o.detail << std::endl;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return all ? 0 : 1;
}
