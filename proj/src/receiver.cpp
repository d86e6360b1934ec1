#include "coordbeam/receiver.hpp"

#include <cmath>
#include <limits>

#include "coordbeam/errors.hpp"

namespace coordbeam {

namespace {

using Svd = Eigen::JacobiSVD<CMatrix>;

double condition_from_svd(const Eigen::VectorXd& s) {
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

CMatrix pseudo_inverse(const Svd& svd, double relative_cutoff) {
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? s[0] * relative_cutoff : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// Orthogonal projector onto the column span of m (rank-revealing, so it is
// well defined for rank deficient inputs too).
CMatrix column_projector(const CMatrix& m, Eigen::Index dim) {
  if (m.cols() == 0) return CMatrix::Zero(dim, dim);
  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? s[0] * 1e-12 : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  const CMatrix u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

}  // namespace

double condition_number(const CMatrix& m) {
  Svd svd(m);
  return condition_from_svd(svd.singularValues());
}

EffectiveChannel build_effective(std::span<const CMatrix> channels, std::span<const BeamPair> beams,
                                 const Codebook& mm_bs, const Codebook& mm_ue) {
  if (channels.size() != beams.size() || channels.empty()) {
    throw InvalidParameter("need one beam pair per UE channel");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(channels.size());
  CMatrix w_rf(mm_bs.num_antennas(), k);
  for (Eigen::Index i = 0; i < k; ++i) w_rf.col(i) = mm_bs.matrix().col(beams[i].bs_beam);

  EffectiveChannel out;
  out.matrix.resize(k, k);
  for (Eigen::Index u = 0; u < k; ++u) {
    out.matrix.col(u) = w_rf.adjoint() * (channels[u] * mm_ue.matrix().col(beams[u].ue_beam));
  }
  out.condition_number = condition_number(out.matrix);
  return out;
}

EffectiveChannel build_effective(std::span<const CMatrix> channels,
                                 std::span<const BeamDecision> decisions, const Codebook& mm_bs,
                                 const Codebook& mm_ue) {
  std::vector<BeamPair> beams;
  beams.reserve(decisions.size());
  for (const BeamDecision& d : decisions) beams.push_back(d.refined);
  return build_effective(channels, std::span<const BeamPair>(beams), mm_bs, mm_ue);
}

double sinr_general(const CMatrix& effective, const CMatrix& combiner, int ue, double noise_var) {
  const auto row = combiner.row(ue);
  const CMatrix out = row * effective;
  const double signal = std::norm(out(0, ue));
  double interference = 0.0;
  for (Eigen::Index w = 0; w < effective.cols(); ++w) {
    if (w != ue) interference += std::norm(out(0, w));
  }
  const double denom = interference + row.squaredNorm() * noise_var;
  if (signal == 0.0) return 0.0;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return signal / denom;
}

double sinr_zf_closed_form(const CMatrix& effective, int ue, double noise_var) {
  const CMatrix gram_inv = (effective.adjoint() * effective).inverse();
  return 1.0 / (noise_var * gram_inv(ue, ue).real());
}

double sinr_schur(const CMatrix& effective, int ue, double noise_var) {
  const Eigen::Index k = effective.cols();
  CMatrix others(effective.rows(), k - 1);
  for (Eigen::Index w = 0, c = 0; w < k; ++w) {
    if (w != ue) others.col(c++) = effective.col(w);
  }
  const CVector h = effective.col(ue);
  const CMatrix p = column_projector(others, effective.rows());
  const double residual = h.squaredNorm() - (h.adjoint() * p * h)(0, 0).real();
  return std::max(residual, 0.0) / noise_var;
}

double sum_rate(std::span<const double> sinrs) {
  double total = 0.0;
  for (double g : sinrs) {
    if (g < 0.0 || std::isnan(g)) throw InvalidParameter("SINR must be nonnegative");
    total += std::log2(1.0 + g);
  }
  return total;
}

CombinerOutput zf_combine(const CMatrix& effective, double noise_var, double singular_threshold) {
  const Eigen::Index k = effective.cols();
  if (k == 0) throw InvalidParameter("zf_combine needs at least one UE");
  if (!(noise_var > 0.0)) throw InvalidParameter("noise variance must be positive");

  Svd svd(effective, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CombinerOutput out;
  out.condition_number = condition_from_svd(svd.singularValues());
  out.sinr.resize(static_cast<std::size_t>(k));

  if (out.condition_number < singular_threshold) {
    // (H^H H)^{-1} H^H through a QR least-squares solve; the row norms of
    // W_D are the diagonal of (H^H H)^{-1}.
    out.combiner = effective.colPivHouseholderQr().solve(CMatrix::Identity(effective.rows(), effective.rows()));
    for (Eigen::Index u = 0; u < k; ++u) {
      out.sinr[u] = 1.0 / (noise_var * out.combiner.row(u).squaredNorm());
    }
  } else {
    out.pseudo_inverse = true;
    out.combiner = pseudo_inverse(svd, 1.0 / singular_threshold);
    for (Eigen::Index u = 0; u < k; ++u) {
      out.sinr[u] = sinr_general(effective, out.combiner, static_cast<int>(u), noise_var);
    }
  }
  out.sum_rate = sum_rate(out.sinr);
  return out;
}

}  // namespace coordbeam
