#pragma once

#include <span>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/config.hpp"
#include "coordbeam/spectrum.hpp"

namespace coordbeam {

/// Sub-6 GHz beam pair chosen from the spatial spectrum.
struct CoarsePair {
  int ue_beam = 0;  // underlined n
  int bs_beam = 0;  // underlined m
  friend bool operator==(const CoarsePair&, const CoarsePair&) = default;
};

/// mmWave beam pair after refinement.
struct BeamPair {
  int ue_beam = 0;  // n
  int bs_beam = 0;  // m
  friend bool operator==(const BeamPair&, const BeamPair&) = default;
};

struct CoarseChoice {
  CoarsePair pair;
  double metric = 0.0;
  bool fallback = false;  // no candidate had a positive metric
};

struct BeamDecision {
  int ue = 0;
  CoarsePair coarse;
  BeamPair refined;
  Strategy strategy = Strategy::uncoordinated;
  bool fallback = false;
};

struct ExchangeMessage {
  int sender = 0;
  int receiver = 0;
  int bs_beam = 0;
  int payload_bits = 0;
};

struct ExchangeLog {
  std::vector<ExchangeMessage> messages;

  int total_bits() const;
};

/// Bits needed to send one sub-6 BS beam index.
int index_payload_bits(int num_sub6_bs_beams);

/// argmax over (m, n) of spectrum(m, n) / noise_var. Ties go to the lowest
/// BS beam, then the lowest UE beam.
CoarseChoice uncoordinated_select(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                                  double noise_var);

/// Coordinated metric N*T/S for one candidate: S is the candidate mmWave pair
/// count, N the number of those pairs whose BS beam is not inside the union
/// of the received sub-6 BS beams' sets, T the spectrum entry over noise.
double coordinated_metric(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                          const std::vector<bool>& blocked_bs, CoarsePair candidate,
                          double noise_var);

/// Marks every mmWave BS beam inside S_BS(m) for each received m.
std::vector<bool> blocked_bs_beams(const BeamAssociation& assoc, int num_mm_bs_beams,
                                   std::span<const int> received);

/// Hierarchical choice given the BS beams already taken by lower-ranked UEs.
/// Falls back to the uncoordinated choice (flagged) when every metric is zero.
CoarseChoice coordinated_select(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                                std::span<const int> received, double noise_var);

/// Exhaustive beam training restricted to S(n, m) of the coarse pair.
BeamPair refine(const CMatrix& mm_channel, CoarsePair coarse, const Codebook& mm_bs,
                const Codebook& mm_ue, const BeamAssociation& assoc);

struct GenieChoice {
  BeamPair pair;
  double gain = 0.0;
};

/// Full search of |w_m^H H v_n|^2 over every mmWave pair.
GenieChoice genie_select(const CMatrix& mm_channel, const Codebook& mm_bs, const Codebook& mm_ue);

/// |w_m^H H v_n|^2 for one pair.
double pair_gain(const CMatrix& mm_channel, const Codebook& mm_bs, const Codebook& mm_ue,
                 BeamPair pair);

struct HierarchyOutcome {
  std::vector<BeamDecision> decisions;  // indexed by UE, coarse fields set
  ExchangeLog log;
};

/// Runs the OOB strategies UE by UE in the given rank order. With the
/// coordinated strategy each decided sub-6 BS index is delivered to every
/// higher-ranked UE.
HierarchyOutcome run_hierarchy(const std::vector<SpatialSpectrum>& spectra,
                               const BeamAssociation& assoc, std::span<const int> order,
                               Strategy strategy, double noise_var);

}  // namespace coordbeam
