#include "coordbeam/array.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coordbeam/errors.hpp"

namespace coordbeam {

AngleGrid::AngleGrid(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty()) {
    throw InvalidParameter("angle grid must not be empty");
  }
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!(a >= 0.0 && a <= std::numbers::pi)) {
      throw InvalidParameter("angle grid entries must lie in [0, pi]");
    }
    if (i > 0 && !(a > angles_[i - 1])) {
      throw InvalidParameter("angle grid must be strictly increasing");
    }
  }
}

bool AngleGrid::approx_equal(const AngleGrid& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(angles_[i] - other.angles_[i]) > tol) return false;
  }
  return true;
}

AngleGrid inverse_cosine_grid(int num_beams) {
  if (num_beams < 2) {
    throw InvalidParameter("inverse cosine grid needs at least 2 beams, got " +
                           std::to_string(num_beams));
  }
  std::vector<double> angles(static_cast<std::size_t>(num_beams));
  const double span = static_cast<double>(num_beams - 1);
  for (int n = 0; n < num_beams; ++n) {
    angles[n] = std::acos(1.0 - 2.0 * n / span);
  }
  return AngleGrid(std::move(angles));
}

CVector steering_vector(int num_antennas, double angle) {
  if (num_antennas < 1) {
    throw InvalidParameter("steering vector needs at least one antenna");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  const double phase_step = std::numbers::pi * std::cos(angle);
  CVector a(num_antennas);
  for (int k = 0; k < num_antennas; ++k) {
    a[k] = std::polar(scale, phase_step * k);
  }
  return a;
}

Codebook::Codebook(int num_antennas, AngleGrid grid)
    : num_antennas_(num_antennas), grid_(std::move(grid)) {
  if (num_antennas_ < 1) {
    throw InvalidParameter("codebook needs at least one antenna");
  }
  vectors_.resize(num_antennas_, static_cast<Eigen::Index>(grid_.size()));
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    vectors_.col(static_cast<Eigen::Index>(k)) = steering_vector(num_antennas_, grid_[k]);
  }
}

Codebook build_codebook(int num_antennas, int num_beams) {
  if (num_antennas < 1) {
    throw InvalidParameter("codebook needs at least one antenna");
  }
  return Codebook(num_antennas, inverse_cosine_grid(num_beams));
}

double beam_gain_pattern(const CVector& codeword, double angle) {
  const CVector a = steering_vector(static_cast<int>(codeword.size()), angle);
  return std::norm(codeword.dot(a));
}

namespace {

std::vector<std::vector<int>> half_power_sets(const Codebook& sub6, const Codebook& mm) {
  if (!sub6.grid().approx_equal(mm.grid())) {
    throw InvalidParameter("sub-6 and mmWave codebooks must share the same angle grid");
  }
  const int num_sub6 = sub6.size();
  const int num_mm = mm.size();

  // gains(j, s): power of sub-6 beam s toward mmWave grid angle j
  Eigen::MatrixXd gains(num_mm, num_sub6);
  for (int j = 0; j < num_mm; ++j) {
    const CVector a = steering_vector(sub6.num_antennas(), mm.grid()[j]);
    for (int s = 0; s < num_sub6; ++s) {
      gains(j, s) = std::norm(sub6.matrix().col(s).dot(a));
    }
  }

  std::vector<std::vector<int>> sets(static_cast<std::size_t>(num_sub6));
  for (int s = 0; s < num_sub6; ++s) {
    for (int j = 0; j < num_mm; ++j) {
      if (gains(j, s) >= kHalfPowerGain) sets[s].push_back(j);
    }
  }

  // coverage repair
  std::vector<bool> covered(static_cast<std::size_t>(num_mm), false);
  for (const auto& set : sets) {
    for (int j : set) covered[j] = true;
  }
  for (int j = 0; j < num_mm; ++j) {
    if (covered[j]) continue;
    Eigen::Index best = 0;
    gains.row(j).maxCoeff(&best);
    auto& set = sets[static_cast<std::size_t>(best)];
    set.insert(std::upper_bound(set.begin(), set.end(), j), j);
  }

  for (int s = 0; s < num_sub6; ++s) {
    if (sets[s].empty()) {
      throw ConsistencyError("sub-6 beam " + std::to_string(s) +
                             " has an empty mmWave association set");
    }
  }
  return sets;
}

}  // namespace

BeamAssociation build_association(const Codebook& sub6_bs, const Codebook& sub6_ue,
                                  const Codebook& mm_bs, const Codebook& mm_ue) {
  BeamAssociation assoc;
  assoc.bs_sets = half_power_sets(sub6_bs, mm_bs);
  assoc.ue_sets = half_power_sets(sub6_ue, mm_ue);
  return assoc;
}

}  // namespace coordbeam
