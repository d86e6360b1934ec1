#include "coordbeam/spectrum.hpp"

#include <iomanip>

#include "coordbeam/errors.hpp"

namespace coordbeam {

std::vector<SpatialSpectrum> empirical_spectrum(const std::vector<BandChannel>& realizations,
                                                const Codebook& sub6_bs, const Codebook& sub6_ue) {
  if (realizations.empty()) {
    throw InvalidParameter("empirical spectrum needs at least one realization");
  }
  const std::size_t num_ues = realizations.front().matrices.size();
  std::vector<SpatialSpectrum> out(num_ues);
  for (auto& s : out) {
    s.power = Eigen::MatrixXd::Zero(sub6_bs.size(), sub6_ue.size());
    s.realizations = static_cast<int>(realizations.size());
  }
  for (const BandChannel& band : realizations) {
    if (band.matrices.size() != num_ues) {
      throw InvalidParameter("realizations disagree on the number of UEs");
    }
    for (std::size_t u = 0; u < num_ues; ++u) {
      const CMatrix& h = band.matrices[u];
      if (h.rows() != sub6_bs.num_antennas() || h.cols() != sub6_ue.num_antennas()) {
        throw InvalidParameter("channel dimensions do not match the sub-6 codebooks");
      }
      const CMatrix beamspace = sub6_bs.matrix().adjoint() * h * sub6_ue.matrix();
      out[u].power += beamspace.cwiseAbs2();
    }
  }
  for (auto& s : out) s.power /= static_cast<double>(realizations.size());
  return out;
}

std::vector<SpatialSpectrum> analytic_spectrum(const PathSet& paths, const Codebook& sub6_bs,
                                               const Codebook& sub6_ue) {
  const double array_gain = static_cast<double>(sub6_bs.num_antennas()) * sub6_ue.num_antennas();
  std::vector<SpatialSpectrum> out;
  out.reserve(paths.ues.size());
  for (const auto& clusters : paths.ues) {
    SpatialSpectrum s;
    s.power = Eigen::MatrixXd::Zero(sub6_bs.size(), sub6_ue.size());
    for (const Cluster& c : clusters) {
      for (const Path& p : c.paths) {
        const Eigen::VectorXd bs_gain =
            (sub6_bs.matrix().adjoint() * steering_vector(sub6_bs.num_antennas(), p.aoa))
                .cwiseAbs2();
        const Eigen::VectorXd ue_gain =
            (sub6_ue.matrix().adjoint() * steering_vector(sub6_ue.num_antennas(), p.aod))
                .cwiseAbs2();
        s.power.noalias() += (array_gain * c.path_power) * bs_gain * ue_gain.transpose();
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpatialSpectrum& spectrum) {
  out << "bs_beam";
  for (Eigen::Index n = 0; n < spectrum.power.cols(); ++n) out << ",ue" << n;
  out << '\n';
  out << std::setprecision(10);
  for (Eigen::Index m = 0; m < spectrum.power.rows(); ++m) {
    out << m;
    for (Eigen::Index n = 0; n < spectrum.power.cols(); ++n) out << ',' << spectrum.power(m, n);
    out << '\n';
  }
}

}  // namespace coordbeam
