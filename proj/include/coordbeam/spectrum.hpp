#pragma once

#include <ostream>
#include <vector>

#include "coordbeam/array.hpp"
#include "coordbeam/channel.hpp"

namespace coordbeam {

/// Average sub-6 GHz beamforming gain of one UE over every (BS beam, UE beam)
/// pair. Row = BS beam, column = UE beam.
struct SpatialSpectrum {
  Eigen::MatrixXd power;
  int realizations = 0;  // 0 means closed-form expectation

  bool analytic() const { return realizations == 0; }
};

/// Sample mean of |w_m^H H v_n|^2 over the given realizations, per UE.
std::vector<SpatialSpectrum> empirical_spectrum(const std::vector<BandChannel>& realizations,
                                                const Codebook& sub6_bs, const Codebook& sub6_ue);

/// Expectation over independent path gains:
/// N_BS N_UE sum sigma^2 |w_m^H a_BS(aoa)|^2 |a_UE(aod)^H v_n|^2.
std::vector<SpatialSpectrum> analytic_spectrum(const PathSet& paths, const Codebook& sub6_bs,
                                               const Codebook& sub6_ue);

/// Heatmap CSV: header row of UE beam indices, one row per BS beam.
void write_spectrum_csv(std::ostream& out, const SpatialSpectrum& spectrum);

}  // namespace coordbeam
