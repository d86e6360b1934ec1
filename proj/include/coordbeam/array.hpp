#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace coordbeam {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Ordered set of quantized pointing angles in [0, pi], strictly increasing.
class AngleGrid {
 public:
  explicit AngleGrid(std::vector<double> angles);

  std::size_t size() const { return angles_.size(); }
  double operator[](std::size_t i) const { return angles_[i]; }
  const std::vector<double>& angles() const { return angles_; }

  bool approx_equal(const AngleGrid& other, double tol = 1e-12) const;

 private:
  std::vector<double> angles_;
};

/// Grid with angles[n] = arccos(1 - 2n/(M-1)), n = 0..M-1. Consecutive grid
/// points are equidistant in cosine space, which makes an N = M codebook have
/// constant off-diagonal inner products 1/N.
AngleGrid inverse_cosine_grid(int num_beams);

/// Unit-norm half-wavelength ULA response: element k is
/// exp(i*pi*k*cos(angle)) / sqrt(N).
CVector steering_vector(int num_antennas, double angle);

/// Analog codebook: one steering vector per grid angle, stored as the columns
/// of an N x M matrix.
class Codebook {
 public:
  Codebook(int num_antennas, AngleGrid grid);

  int num_antennas() const { return num_antennas_; }
  int size() const { return static_cast<int>(grid_.size()); }
  const AngleGrid& grid() const { return grid_; }
  const CMatrix& matrix() const { return vectors_; }
  CVector vector(int index) const { return vectors_.col(index); }

 private:
  int num_antennas_;
  AngleGrid grid_;
  CMatrix vectors_;
};

Codebook build_codebook(int num_antennas, int num_beams);

/// |codeword^H a(angle)|^2 for a unit-norm codeword.
double beam_gain_pattern(const CVector& codeword, double angle);

/// Sub-6 GHz beam index -> set of mmWave beam indices inside that beam's
/// half-power region, for each side of the link.
struct BeamAssociation {
  std::vector<std::vector<int>> ue_sets;
  std::vector<std::vector<int>> bs_sets;

  std::size_t pair_count(int sub6_ue_beam, int sub6_bs_beam) const {
    return ue_sets.at(sub6_ue_beam).size() * bs_sets.at(sub6_bs_beam).size();
  }
};

/// Half-power membership used by the association.
inline constexpr double kHalfPowerGain = 0.5;

/// Builds the sub-6 -> mmWave beam sets. Both codebooks of one side must use
/// the same angle grid. A mmWave beam not inside any half-power region is
/// attached to the sub-6 beam with the largest gain at its angle.
BeamAssociation build_association(const Codebook& sub6_bs, const Codebook& sub6_ue,
                                  const Codebook& mm_bs, const Codebook& mm_ue);

}  // namespace coordbeam
