#pragma once

#include <span>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/selection.hpp"

namespace coordbeam {

/// K x K channel after analog beamforming; column u is W_RF^H H^u v^u.
struct EffectiveChannel {
  CMatrix matrix;
  double condition_number = 0.0;
};

/// Above this 2-norm condition number the effective channel is treated as
/// rank deficient (co-beam collision).
inline constexpr double kSingularConditionNumber = 1e6;

double condition_number(const CMatrix& m);

/// H_e[k][u] = w_{m_k}^H H^u v_{n_u} using the refined pair of every UE.
EffectiveChannel build_effective(std::span<const CMatrix> channels,
                                 std::span<const BeamDecision> decisions, const Codebook& mm_bs,
                                 const Codebook& mm_ue);

/// Same as build_effective but from explicit beam indices.
EffectiveChannel build_effective(std::span<const CMatrix> channels, std::span<const BeamPair> beams,
                                 const Codebook& mm_bs, const Codebook& mm_ue);

struct CombinerOutput {
  CMatrix combiner;  // W_D
  std::vector<double> sinr;
  double sum_rate = 0.0;
  double condition_number = 0.0;
  bool pseudo_inverse = false;
};

/// ZF digital combining. Well-conditioned: W_D = (H^H H)^{-1} H^H and
/// SINR_u = 1 / (noise_var [(H^H H)^{-1}]_uu). Otherwise W_D is the
/// Moore-Penrose pseudo-inverse with singular values below
/// s_max / kSingularConditionNumber dropped, and SINR follows the general
/// signal over interference-plus-noise ratio.
CombinerOutput zf_combine(const CMatrix& effective, double noise_var,
                          double singular_threshold = kSingularConditionNumber);

/// |w_D^u h^u|^2 / (sum_{w != u} |w_D^u h^w|^2 + ||w_D^u||^2 noise_var).
double sinr_general(const CMatrix& effective, const CMatrix& combiner, int ue, double noise_var);

/// 1 / (noise_var [(H^H H)^{-1}]_uu) via an explicit Gram inverse.
double sinr_zf_closed_form(const CMatrix& effective, int ue, double noise_var);

/// (||h^u||^2 - h^u^H P h^u) / noise_var, P the orthogonal projector onto the
/// span of the other columns.
double sinr_schur(const CMatrix& effective, int ue, double noise_var);

double sum_rate(std::span<const double> sinrs);

}  // namespace coordbeam
