#include "coordbeam/selection.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "coordbeam/errors.hpp"

namespace coordbeam {

int ExchangeLog::total_bits() const {
  int total = 0;
  for (const auto& m : messages) total += m.payload_bits;
  return total;
}

int index_payload_bits(int num_sub6_bs_beams) {
  if (num_sub6_bs_beams < 1) throw InvalidParameter("beam count must be positive");
  return std::bit_width(static_cast<unsigned>(num_sub6_bs_beams - 1));
}

namespace {

void check_spectrum(const SpatialSpectrum& spectrum, const BeamAssociation& assoc) {
  if (spectrum.power.rows() != static_cast<Eigen::Index>(assoc.bs_sets.size()) ||
      spectrum.power.cols() != static_cast<Eigen::Index>(assoc.ue_sets.size())) {
    throw InvalidParameter("spectrum dimensions do not match the beam association");
  }
}

// Row-major scan over (bs, ue) with strict improvement keeps the lowest
// indices on ties.
template <typename Metric>
CoarseChoice argmax_pairs(Eigen::Index num_bs, Eigen::Index num_ue, Metric&& metric) {
  CoarseChoice best;
  best.metric = -1.0;
  for (Eigen::Index m = 0; m < num_bs; ++m) {
    for (Eigen::Index n = 0; n < num_ue; ++n) {
      const double value = metric(static_cast<int>(m), static_cast<int>(n));
      if (value > best.metric) {
        best.metric = value;
        best.pair = {static_cast<int>(n), static_cast<int>(m)};
      }
    }
  }
  return best;
}

}  // namespace

CoarseChoice uncoordinated_select(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                                  double noise_var) {
  check_spectrum(spectrum, assoc);
  if (!(noise_var > 0.0)) throw InvalidParameter("noise variance must be positive");
  CoarseChoice choice = argmax_pairs(spectrum.power.rows(), spectrum.power.cols(),
                                     [&](int m, int n) { return spectrum.power(m, n) / noise_var; });
  choice.fallback = !(choice.metric > 0.0);
  return choice;
}

std::vector<bool> blocked_bs_beams(const BeamAssociation& assoc, int num_mm_bs_beams,
                                   std::span<const int> received) {
  std::vector<bool> blocked(static_cast<std::size_t>(num_mm_bs_beams), false);
  for (int m : received) {
    for (int j : assoc.bs_sets.at(m)) blocked.at(j) = true;
  }
  return blocked;
}

double coordinated_metric(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                          const std::vector<bool>& blocked_bs, CoarsePair candidate,
                          double noise_var) {
  const auto& bs_set = assoc.bs_sets.at(candidate.bs_beam);
  const std::size_t ue_count = assoc.ue_sets.at(candidate.ue_beam).size();
  std::size_t free_bs = 0;
  for (int j : bs_set) {
    if (!blocked_bs[j]) ++free_bs;
  }
  const double free_pairs = static_cast<double>(ue_count * free_bs);
  const double all_pairs = static_cast<double>(ue_count * bs_set.size());
  const double snr = spectrum.power(candidate.bs_beam, candidate.ue_beam) / noise_var;
  return free_pairs * snr / all_pairs;
}

CoarseChoice coordinated_select(const SpatialSpectrum& spectrum, const BeamAssociation& assoc,
                                std::span<const int> received, double noise_var) {
  check_spectrum(spectrum, assoc);
  if (!(noise_var > 0.0)) throw InvalidParameter("noise variance must be positive");
  if (received.empty()) return uncoordinated_select(spectrum, assoc, noise_var);

  int num_mm_bs = 0;
  for (const auto& set : assoc.bs_sets) {
    if (!set.empty()) num_mm_bs = std::max(num_mm_bs, set.back() + 1);
  }
  const std::vector<bool> blocked = blocked_bs_beams(assoc, num_mm_bs, received);
  CoarseChoice choice = argmax_pairs(spectrum.power.rows(), spectrum.power.cols(), [&](int m, int n) {
    return coordinated_metric(spectrum, assoc, blocked, {n, m}, noise_var);
  });
  if (!(choice.metric > 0.0)) {
    choice = uncoordinated_select(spectrum, assoc, noise_var);
    choice.fallback = true;
  }
  return choice;
}

double pair_gain(const CMatrix& mm_channel, const Codebook& mm_bs, const Codebook& mm_ue,
                 BeamPair pair) {
  const cdouble y = mm_bs.matrix().col(pair.bs_beam).dot(mm_channel * mm_ue.matrix().col(pair.ue_beam));
  return std::norm(y);
}

BeamPair refine(const CMatrix& mm_channel, CoarsePair coarse, const Codebook& mm_bs,
                const Codebook& mm_ue, const BeamAssociation& assoc) {
  const auto& ue_set = assoc.ue_sets.at(coarse.ue_beam);
  const auto& bs_set = assoc.bs_sets.at(coarse.bs_beam);
  // H v for every candidate UE beam, then project on the BS candidates.
  CMatrix hv(mm_channel.rows(), static_cast<Eigen::Index>(ue_set.size()));
  for (std::size_t i = 0; i < ue_set.size(); ++i) {
    hv.col(static_cast<Eigen::Index>(i)) = mm_channel * mm_ue.matrix().col(ue_set[i]);
  }
  BeamPair best{ue_set.front(), bs_set.front()};
  double best_gain = -1.0;
  for (int m : bs_set) {
    for (std::size_t i = 0; i < ue_set.size(); ++i) {
      const int n = ue_set[i];
      const double g =
          std::norm(mm_bs.matrix().col(m).dot(hv.col(static_cast<Eigen::Index>(i))));
      if (g > best_gain) {
        best_gain = g;
        best = {n, m};
      }
    }
  }
  return best;
}

GenieChoice genie_select(const CMatrix& mm_channel, const Codebook& mm_bs, const Codebook& mm_ue) {
  const Eigen::MatrixXd gains =
      (mm_bs.matrix().adjoint() * mm_channel * mm_ue.matrix()).cwiseAbs2();
  GenieChoice best;
  best.gain = -1.0;
  for (Eigen::Index m = 0; m < gains.rows(); ++m) {
    for (Eigen::Index n = 0; n < gains.cols(); ++n) {
      if (gains(m, n) > best.gain) {
        best.gain = gains(m, n);
        best.pair = {static_cast<int>(n), static_cast<int>(m)};
      }
    }
  }
  return best;
}

HierarchyOutcome run_hierarchy(const std::vector<SpatialSpectrum>& spectra,
                               const BeamAssociation& assoc, std::span<const int> order,
                               Strategy strategy, double noise_var) {
  const int num_ues = static_cast<int>(spectra.size());
  if (strategy == Strategy::genie) {
    throw InvalidParameter("run_hierarchy only handles the sub-6 aided strategies");
  }
  if (static_cast<int>(order.size()) != num_ues) {
    throw InvalidParameter("hierarchy order must list every UE once");
  }
  std::vector<bool> seen(static_cast<std::size_t>(num_ues), false);
  for (int u : order) {
    if (u < 0 || u >= num_ues || seen[u]) {
      throw InvalidParameter("hierarchy order is not a permutation");
    }
    seen[u] = true;
  }

  HierarchyOutcome out;
  out.decisions.resize(static_cast<std::size_t>(num_ues));
  const int bits = index_payload_bits(static_cast<int>(assoc.bs_sets.size()));
  std::vector<int> received;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const int u = order[rank];
    const CoarseChoice choice = strategy == Strategy::coordinated
                                    ? coordinated_select(spectra[u], assoc, received, noise_var)
                                    : uncoordinated_select(spectra[u], assoc, noise_var);
    BeamDecision& d = out.decisions[u];
    d.ue = u;
    d.coarse = choice.pair;
    d.strategy = strategy;
    d.fallback = choice.fallback;
    if (strategy == Strategy::coordinated) {
      for (std::size_t higher = rank + 1; higher < order.size(); ++higher) {
        out.log.messages.push_back({u, order[higher], choice.pair.bs_beam, bits});
      }
      received.push_back(choice.pair.bs_beam);
    }
  }
  return out;
}

}  // namespace coordbeam
