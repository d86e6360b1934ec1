#include "coordbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "coordbeam/errors.hpp"
#include "coordbeam/receiver.hpp"

namespace coordbeam {

std::uint64_t joint_selection_count(int num_ues, int mm_bs_beams, int mm_ue_beams) {
  const std::uint64_t per_ue =
      static_cast<std::uint64_t>(mm_bs_beams) * static_cast<std::uint64_t>(mm_ue_beams);
  std::uint64_t total = 1;
  for (int u = 0; u < num_ues; ++u) {
    if (per_ue != 0 && total > std::numeric_limits<std::uint64_t>::max() / per_ue) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= per_ue;
  }
  return total;
}

ExhaustiveResult exhaustive_search(std::span<const CMatrix> channels, const Codebook& mm_bs,
                                   const Codebook& mm_ue, double noise_var,
                                   std::uint64_t budget) {
  const int k = static_cast<int>(channels.size());
  if (k == 0) throw InvalidParameter("exhaustive search needs at least one UE");
  const int num_bs = mm_bs.size();
  const int num_ue = mm_ue.size();
  const std::uint64_t total = joint_selection_count(k, num_bs, num_ue);
  if (total > budget) {
    throw BudgetExceeded("exhaustive search over " + std::to_string(total) +
                         " joint selections exceeds budget " + std::to_string(budget));
  }

  // beamspace[u](m, n) = w_m^H H^u v_n
  std::vector<CMatrix> beamspace;
  beamspace.reserve(channels.size());
  for (const CMatrix& h : channels) {
    beamspace.push_back(mm_bs.matrix().adjoint() * h * mm_ue.matrix());
  }

  const int per_ue = num_bs * num_ue;
  std::vector<int> digits(static_cast<std::size_t>(k), 0);
  ExhaustiveResult best;
  best.sum_rate = -1.0;
  CMatrix effective(k, k);
  for (std::uint64_t index = 0; index < total; ++index) {
    // digit = m * num_ue + n
    for (int row = 0; row < k; ++row) {
      const int m = digits[row] / num_ue;
      for (int col = 0; col < k; ++col) {
        effective(row, col) = beamspace[col](m, digits[col] % num_ue);
      }
    }
    const double rate = zf_combine(effective, noise_var).sum_rate;
    ++best.evaluated;
    if (rate > best.sum_rate) {
      best.sum_rate = rate;
      best.beams.clear();
      for (int d : digits) best.beams.push_back({d % num_ue, d / num_ue});
    }
    for (int pos = 0; pos < k; ++pos) {
      if (++digits[pos] < per_ue) break;
      digits[pos] = 0;
    }
  }
  return best;
}

VirtualChannel virtual_decompose(const CMatrix& channel, const Codebook& mm_bs,
                                 const Codebook& mm_ue, VirtualProjection projection) {
  if (mm_bs.size() != mm_bs.num_antennas() || mm_ue.size() != mm_ue.num_antennas()) {
    throw InvalidParameter("virtual decomposition needs M = N codebooks");
  }
  if (channel.rows() != mm_bs.num_antennas() || channel.cols() != mm_ue.num_antennas()) {
    throw InvalidParameter("channel dimensions do not match the codebooks");
  }
  const double scale = std::sqrt(static_cast<double>(mm_bs.num_antennas()) * mm_ue.num_antennas());
  const CMatrix& a_bs = mm_bs.matrix();
  const CMatrix& a_ue = mm_ue.matrix();

  VirtualChannel out;
  if (projection == VirtualProjection::matched) {
    out.coefficients = a_bs.adjoint() * channel * a_ue / scale;
  } else {
    // H = scale * A_BS psi A_UE^H, solved in the minimum-norm sense: the end
    // point columns of each basis coincide, so the bases are singular.
    const CMatrix left = a_bs.completeOrthogonalDecomposition().solve(channel);
    out.coefficients =
        a_ue.conjugate().completeOrthogonalDecomposition().solve(left.transpose()).transpose() /
        scale;
  }
  out.reconstruction = scale * a_bs * out.coefficients * a_ue.adjoint();
  const double norm = channel.norm();
  out.relative_error = norm > 0.0 ? (channel - out.reconstruction).norm() / norm : 0.0;
  return out;
}

double lemma1_audit(const Codebook& codebook) {
  const int n = codebook.num_antennas();
  if (n < 2 || codebook.size() != n) {
    throw InvalidParameter("orthogonality audit needs an M = N codebook with N >= 2");
  }
  const CMatrix gram = codebook.matrix().adjoint() * codebook.matrix();
  const cdouble expected(1.0 / n, 0.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) worst = std::max(worst, std::abs(gram(i, j) - expected));
    }
  }
  return worst;
}

double lemma1_audit(int num_antennas) {
  return lemma1_audit(build_codebook(num_antennas, num_antennas));
}

double lemma1_audit_distinct(const Codebook& codebook) {
  const int n = codebook.num_antennas();
  if (n < 2 || codebook.size() != n) {
    throw InvalidParameter("orthogonality audit needs an M = N codebook with N >= 2");
  }
  const CMatrix gram = codebook.matrix().adjoint() * codebook.matrix();
  const cdouble expected(1.0 / n, 0.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || (std::min(i, j) == 0 && std::max(i, j) == n - 1)) continue;
      worst = std::max(worst, std::abs(gram(i, j) - expected));
    }
  }
  return worst;
}

double endpoint_alias_deviation(const Codebook& codebook) {
  const int last = codebook.size() - 1;
  return std::abs(codebook.vector(0).dot(codebook.vector(last)) - cdouble(1.0, 0.0));
}

DichotomyResult sinr_dichotomy(int n_bs, int n_ue, int num_ues, int fades, double noise_var,
                               std::uint64_t seed) {
  if (num_ues < 2 || num_ues > n_bs || fades < 1) {
    throw InvalidParameter("dichotomy experiment needs 2 <= K <= N_BS and fades >= 1");
  }
  const Codebook bs = build_codebook(n_bs, n_bs);
  const Codebook ue = build_codebook(n_ue, n_ue);

  // Distinct BS grid bins spread over the grid; UE bins arbitrary.
  std::vector<BeamPair> spread(static_cast<std::size_t>(num_ues));
  for (int u = 0; u < num_ues; ++u) {
    spread[u].bs_beam = static_cast<int>((2 * u + 1) * static_cast<long>(n_bs) / (2 * num_ues));
    spread[u].ue_beam = static_cast<int>((2 * u + 1) * static_cast<long>(n_ue) / (2 * num_ues));
  }
  std::vector<BeamPair> collided = spread;
  collided[1].bs_beam = collided[0].bs_beam;

  const double array_gain = static_cast<double>(n_bs) * n_ue;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

  auto channels_for = [&](const std::vector<BeamPair>& layout, const std::vector<cdouble>& alpha) {
    std::vector<CMatrix> hs;
    for (int u = 0; u < num_ues; ++u) {
      hs.push_back(std::sqrt(array_gain) * alpha[u] * bs.matrix().col(layout[u].bs_beam) *
                   ue.matrix().col(layout[u].ue_beam).adjoint());
    }
    return hs;
  };

  double sum_sinr = 0.0;
  double sum_single_user = 0.0;
  double sum_collided = 0.0;
  std::vector<cdouble> alpha(static_cast<std::size_t>(num_ues));
  for (int f = 0; f < fades; ++f) {
    for (auto& a : alpha) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a = cdouble(re, im);
    }
    const auto clean = channels_for(spread, alpha);
    const auto eff = build_effective(std::span<const CMatrix>(clean),
                                     std::span<const BeamPair>(spread), bs, ue);
    const CombinerOutput zf = zf_combine(eff.matrix, noise_var);
    for (int u = 0; u < num_ues; ++u) {
      sum_sinr += zf.sinr[u];
      sum_single_user += pair_gain(clean[u], bs, ue, spread[u]) / noise_var;
    }

    const auto hit = channels_for(collided, alpha);
    const auto eff_hit = build_effective(std::span<const CMatrix>(hit),
                                         std::span<const BeamPair>(collided), bs, ue);
    const CombinerOutput zf_hit = zf_combine(eff_hit.matrix, noise_var);
    sum_collided += zf_hit.sinr[0] + zf_hit.sinr[1];
  }

  DichotomyResult r;
  r.n_bs = n_bs;
  r.n_ue = n_ue;
  r.reference_snr = array_gain / noise_var;
  const double samples = static_cast<double>(fades) * num_ues;
  r.no_collision_ratio = (sum_sinr / samples) / r.reference_snr;
  r.no_collision_matched_ratio = sum_sinr / sum_single_user;
  r.collided_ratio = (sum_collided / (2.0 * fades)) / r.reference_snr;
  return r;
}

}  // namespace coordbeam
