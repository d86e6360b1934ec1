#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/selection.hpp"

namespace coordbeam {

struct ExhaustiveResult {
  std::vector<BeamPair> beams;  // per UE
  double sum_rate = 0.0;
  std::uint64_t evaluated = 0;
};

/// Number of joint selections (M_UE * M_BS)^K, saturating at UINT64_MAX.
std::uint64_t joint_selection_count(int num_ues, int mm_bs_beams, int mm_ue_beams);

/// Ground-truth maximizer of the ZF sum-rate over every joint beam choice.
/// Throws BudgetExceeded when the search space exceeds the budget.
ExhaustiveResult exhaustive_search(std::span<const CMatrix> channels, const Codebook& mm_bs,
                                   const Codebook& mm_ue, double noise_var,
                                   std::uint64_t budget = 1u << 20);

enum class VirtualProjection {
  matched,  // psi = A_BS^H H A_UE / sqrt(N_BS N_UE), exact only as N grows
  exact,    // minimum-norm coordinates in the steering bases (exact on grid)
};

/// Expansion of a channel on the quantized steering bases.
struct VirtualChannel {
  CMatrix coefficients;    // psi, M_BS x M_UE (row = BS bin, column = UE bin)
  CMatrix reconstruction;  // sqrt(N_BS N_UE) A_BS psi A_UE^H
  double relative_error = 0.0;  // ||H - reconstruction||_F / ||H||_F (0 for H = 0)
};

VirtualChannel virtual_decompose(const CMatrix& channel, const Codebook& mm_bs,
                                 const Codebook& mm_ue,
                                 VirtualProjection projection = VirtualProjection::matched);

/// max_{i != j} |v_i^H v_j - 1/N| over a codebook with M = N.
double lemma1_audit(const Codebook& codebook);
double lemma1_audit(int num_antennas);

/// Same audit restricted to pairs that are not the grid end points. The end
/// points 0 and pi steer to the same vector on a half-wavelength array, so
/// that one pair has inner product 1 instead of 1/N.
double lemma1_audit_distinct(const Codebook& codebook);

/// |v_first^H v_last - 1|; zero when the end points alias.
double endpoint_alias_deviation(const Codebook& codebook);

/// Large-array SINR dichotomy experiment on single-path, grid-aligned UEs.
struct DichotomyResult {
  int n_bs = 0;
  int n_ue = 0;
  double reference_snr = 0.0;  // g / noise_var with g = N_BS N_UE (unit path power)
  /// mean SINR of the no-collision layout over g / noise_var
  double no_collision_ratio = 0.0;
  /// mean SINR of the no-collision layout over the same fades' single-user SNR
  double no_collision_matched_ratio = 0.0;
  /// mean SINR of the two collided UEs over g / noise_var
  double collided_ratio = 0.0;
};

DichotomyResult sinr_dichotomy(int n_bs, int n_ue, int num_ues, int fades, double noise_var,
                               std::uint64_t seed);

}  // namespace coordbeam
