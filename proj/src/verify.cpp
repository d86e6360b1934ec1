#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "coordbeam/errors.hpp"
#include "coordbeam/harness.hpp"
#include "coordbeam/oracle.hpp"
#include "coordbeam/receiver.hpp"

namespace coordbeam {

namespace {

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = cdouble(g(rng), g(rng));
  }
  return m;
}

CMatrix random_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

void add_lemma1(VerifyReport& report) {
  for (int n : {2, 4, 16, 64}) {
    const Codebook cb = build_codebook(n, n);
    const double worst = lemma1_audit_distinct(cb);
    report.checks.push_back({"orthogonality N=" + std::to_string(n), worst <= 1e-12, worst, 1e-12,
                             "max |v_i^H v_j - 1/N| over i != j, end point pair excluded"});
    const double alias = endpoint_alias_deviation(cb);
    report.checks.push_back({"end point alias N=" + std::to_string(n), alias <= 1e-12, alias,
                             1e-12, "|v_0^H v_last - 1|, angles 0 and pi steer identically"});
  }
}

void add_identity(VerifyReport& report, const VerifyOptions& o) {
  Rng rng(o.seed);
  std::uniform_real_distribution<double> log_noise(-3.0, 1.0);
  double worst = 0.0;
  int drawn = 0;
  while (drawn < o.identity_samples) {
    const CMatrix h = gaussian_matrix(4, 4, rng);
    if (condition_number(h) >= 1e3) continue;
    ++drawn;
    const double noise = std::pow(10.0, log_noise(rng));
    const CombinerOutput zf = zf_combine(h, noise);
    for (int u = 0; u < 4; ++u) {
      const double a = sinr_general(h, zf.combiner, u, noise);
      const double b = sinr_zf_closed_form(h, u, noise);
      const double c = sinr_schur(h, u, noise);
      const double ref = std::max({a, b, c});
      worst = std::max({worst, std::abs(a - b) / ref, std::abs(a - c) / ref,
                        std::abs(b - c) / ref});
    }
  }
  report.checks.push_back({"sinr three-way identity", worst <= 1e-9, worst, 1e-9,
                           std::to_string(drawn) + " K=4 channels, max relative spread"});
}

void add_nulling(VerifyReport& report, const VerifyOptions& o) {
  Rng rng(o.seed + 1);
  std::uniform_real_distribution<double> log_cond(0.0, 6.0);
  double worst = 0.0;
  double worst_cond = 0.0;
  int samples = 0;
  for (int i = 0; i < o.identity_samples; ++i) {
    const int k = 2 + i % 4;
    Eigen::VectorXd s(k);
    const double target = std::min(std::pow(10.0, log_cond(rng)), 0.999e6);
    for (int j = 0; j < k; ++j) s[j] = std::pow(target, -static_cast<double>(j) / (k - 1));
    const CMatrix h = random_unitary(k, rng) * s.cast<cdouble>().asDiagonal() *
                      random_unitary(k, rng).adjoint();
    const CombinerOutput zf = zf_combine(h, 1.0);
    if (zf.pseudo_inverse) continue;
    ++samples;
    const CMatrix prod = zf.combiner * h;
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        if (r == c) continue;
        if (std::abs(prod(r, c)) > worst) {
          worst = std::abs(prod(r, c));
          worst_cond = zf.condition_number;
        }
      }
    }
  }
  report.checks.push_back({"zf nulling", worst <= 1e-9 && samples > 0, worst, 1e-9,
                           std::to_string(samples) + " channels with cond < 1e6, worst at cond " +
                               fmt(worst_cond)});
}

void add_dichotomy(VerifyReport& report, const VerifyOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<DichotomyResult> runs;
  for (auto [nb, nu] : {std::pair{16, 4}, std::pair{64, 16}, std::pair{256, 64}}) {
    runs.push_back(sinr_dichotomy(nb, nu, 4, o.dichotomy_fades, 1.0, o.seed + 2));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const DichotomyResult& big = runs.back();
  const double dev = std::abs(big.no_collision_ratio - 1.0);
  report.checks.push_back({"dichotomy no-collision (256,64)", dev <= 0.05, dev, 0.05,
                           "|mean SINR / (g/sigma^2) - 1|"});
  report.checks.push_back({"dichotomy collision (256,64)", big.collided_ratio < 0.01,
                           big.collided_ratio, 0.01, "mean collided SINR / (g/sigma^2)"});
  bool monotone = true;
  std::string trend;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double gap = std::abs(1.0 - runs[i].no_collision_matched_ratio);
    if (i > 0 && gap >= std::abs(1.0 - runs[i - 1].no_collision_matched_ratio)) monotone = false;
    trend += (i ? " -> " : "") + fmt(gap);
  }
  report.checks.push_back({"dichotomy convergence", monotone, 0.0, 0.0,
                           "|1 - SINR / single-user SNR|: " + trend});
  report.checks.push_back({"dichotomy runtime", seconds < 120.0, seconds, 120.0, "seconds"});
}

void add_dominance(VerifyReport& report, const VerifyOptions& o) {
  ScenarioConfig cfg;
  cfg.n_bs = 8;
  cfg.n_ue = 4;
  cfg.sub6_n_bs = 4;
  cfg.sub6_n_ue = 2;
  cfg.num_ues = 2;
  cfg.master_seed = o.seed + 3;
  cfg.strategies = {Strategy::coordinated};
  const SimulationContext ctx(cfg);

  int violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < o.dominance_scenarios; ++t) {
    const TrialInputs in = draw_trial_inputs(ctx, static_cast<std::uint64_t>(t));
    const StrategyOutcome co = evaluate_strategy(ctx, in.mm.matrices, in.spectra, in.order,
                                                 Strategy::coordinated, ctx.noise_var());
    const ExhaustiveResult ex =
        exhaustive_search(std::span<const CMatrix>(in.mm.matrices), ctx.mm_bs(), ctx.mm_ue(),
                          ctx.noise_var(), o.budget);
    const double tol = 1e-9 * std::max(1.0, ex.sum_rate);
    if (ex.sum_rate + tol < co.sum_rate || co.sum_rate < 0.0) ++violations;
    worst_margin = std::min(worst_margin, ex.sum_rate - co.sum_rate);
  }
  report.checks.push_back({"oracle dominance", violations == 0, static_cast<double>(violations),
                           0.0,
                           std::to_string(o.dominance_scenarios) +
                               " scenarios, min(exhaustive - coordinated) = " + fmt(worst_margin)});

  // Two single-path UEs on distinct interior grid angles.
  const int bins[2] = {1, cfg.n_bs / 2 + 1};
  PathSet sub6_paths;
  std::vector<CMatrix> mm;
  for (int u = 0; u < 2; ++u) {
    Cluster c;
    c.path_power = 1.0;
    c.paths.push_back({ctx.mm_ue().grid()[u == 0 ? 1 : cfg.n_ue / 2], ctx.mm_bs().grid()[bins[u]]});
    sub6_paths.ues.push_back({c});
    mm.push_back(channel_from_gains({c}, {{cdouble(1.0, 0.0)}}, cfg.n_bs, cfg.n_ue));
  }
  const auto spectra = analytic_spectrum(sub6_paths, ctx.sub6_bs(), ctx.sub6_ue());
  const double noise = 1.0;
  const StrategyOutcome co =
      evaluate_strategy(ctx, mm, spectra, {0, 1}, Strategy::coordinated, noise);
  const ExhaustiveResult ex =
      exhaustive_search(std::span<const CMatrix>(mm), ctx.mm_bs(), ctx.mm_ue(), noise, o.budget);
  const double diff = std::abs(ex.sum_rate - co.sum_rate);
  report.checks.push_back({"oracle equality on orthogonal paths", diff <= 1e-9, diff, 1e-9,
                           "exhaustive " + fmt(ex.sum_rate) + " vs coordinated " +
                               fmt(co.sum_rate)});
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport verify(const VerifyOptions& options) {
  if (options.identity_samples < 1 || options.dominance_scenarios < 1 ||
      options.dichotomy_fades < 1) {
    throw InvalidParameter("verify sample counts must be positive");
  }
  VerifyReport report;
  add_lemma1(report);
  add_identity(report, options);
  add_nulling(report, options);
  add_dominance(report, options);
  add_dichotomy(report, options);
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << fmt(c.measured);
    if (c.threshold != 0.0) out << " (limit " << fmt(c.threshold) << ")";
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
  }
  out << (report.passed() ? "all checks passed" : "verification failed") << '\n';
}

}  // namespace coordbeam
