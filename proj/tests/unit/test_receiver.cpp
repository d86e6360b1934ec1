#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coordbeam/channel.hpp"
#include "coordbeam/errors.hpp"
#include "coordbeam/receiver.hpp"

using namespace coordbeam;

namespace {

CMatrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = cdouble(g(rng), g(rng));
  return m;
}

CMatrix aligned_channel(int n_bs, int n_ue, int bs_bin, int ue_bin) {
  Cluster c;
  c.path_power = 1.0;
  c.paths = {{inverse_cosine_grid(n_ue)[ue_bin], inverse_cosine_grid(n_bs)[bs_bin]}};
  return channel_from_gains({c}, {{cdouble(1, 0)}}, n_bs, n_ue);
}

}  // namespace

TEST(BuildEffective, MatchedSingleUe) {
  const Codebook bs = build_codebook(16, 16);
  const Codebook ue = build_codebook(4, 4);
  const std::vector<CMatrix> h{aligned_channel(16, 4, 5, 2)};
  const EffectiveChannel e =
      build_effective(std::span<const CMatrix>(h), std::vector<BeamPair>{{2, 5}}, bs, ue);
  ASSERT_EQ(e.matrix.rows(), 1);
  EXPECT_NEAR(std::abs(e.matrix(0, 0) - cdouble(8.0, 0.0)), 0.0, 1e-12);
  // One grid step off at the BS scales the entry by 1/N_BS.
  const EffectiveChannel off =
      build_effective(std::span<const CMatrix>(h), std::vector<BeamPair>{{2, 6}}, bs, ue);
  EXPECT_NEAR(std::abs(off.matrix(0, 0)), 8.0 / 16.0, 1e-12);
}

TEST(BuildEffective, SharedReflectorCollision) {
  // Two UEs whose only path reaches the BS from one scatterer direction.
  const Codebook bs = build_codebook(16, 16);
  const Codebook ue = build_codebook(4, 4);
  const std::vector<CMatrix> h{aligned_channel(16, 4, 7, 1), aligned_channel(16, 4, 7, 2)};
  const EffectiveChannel e = build_effective(std::span<const CMatrix>(h),
                                             std::vector<BeamPair>{{1, 7}, {2, 7}}, bs, ue);
  EXPECT_NEAR(std::abs(e.matrix(0, 0) - e.matrix(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e.matrix(0, 1) - e.matrix(1, 1)), 0.0, 1e-12);
  EXPECT_GT(e.condition_number, kSingularConditionNumber);
}

TEST(BuildEffective, FromDecisions) {
  const Codebook bs = build_codebook(16, 16);
  const Codebook ue = build_codebook(4, 4);
  const std::vector<CMatrix> h{aligned_channel(16, 4, 3, 1), aligned_channel(16, 4, 11, 2)};
  std::vector<BeamDecision> d(2);
  d[0].refined = {1, 3};
  d[1].refined = {2, 11};
  const EffectiveChannel a = build_effective(std::span<const CMatrix>(h),
                                             std::span<const BeamDecision>(d), bs, ue);
  const EffectiveChannel b = build_effective(std::span<const CMatrix>(h),
                                             std::vector<BeamPair>{{1, 3}, {2, 11}}, bs, ue);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_THROW(build_effective(std::span<const CMatrix>(h), std::vector<BeamPair>{{1, 3}}, bs, ue),
               InvalidParameter);
}

TEST(ZfCombine, Identity) {
  const CombinerOutput z = zf_combine(CMatrix::Identity(5, 5), 1.0);
  for (double g : z.sinr) EXPECT_NEAR(g, 1.0, 1e-14);
  EXPECT_NEAR(z.sum_rate, 5.0, 1e-13);
  EXPECT_FALSE(z.pseudo_inverse);
}

TEST(ZfCombine, SingleUe) {
  CMatrix h(1, 1);
  h(0, 0) = cdouble(3.0, 4.0);
  EXPECT_NEAR(zf_combine(h, 2.0).sinr[0], 12.5, 1e-12);
}

TEST(ZfCombine, OrthogonalColumns) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = cdouble(0.0, 3.0);
  h(2, 2) = 0.5;
  const CombinerOutput z = zf_combine(h, 0.5);
  EXPECT_NEAR(z.sinr[0], 8.0, 1e-12);
  EXPECT_NEAR(z.sinr[1], 18.0, 1e-12);
  EXPECT_NEAR(z.sinr[2], 0.5, 1e-12);
  for (int u = 0; u < 3; ++u) EXPECT_NEAR(sinr_schur(h, u, 0.5), z.sinr[u], 1e-12);
}

TEST(ZfCombine, ThreeWayIdentity) {
  Rng rng(41);
  int drawn = 0;
  while (drawn < 200) {
    const CMatrix h = gaussian(4, 4, rng);
    if (condition_number(h) >= 1e3) continue;
    ++drawn;
    const CombinerOutput z = zf_combine(h, 0.3);
    for (int u = 0; u < 4; ++u) {
      const double a = sinr_general(h, z.combiner, u, 0.3);
      EXPECT_NEAR(a / z.sinr[u], 1.0, 1e-9);
      EXPECT_NEAR(sinr_zf_closed_form(h, u, 0.3) / a, 1.0, 1e-9);
      EXPECT_NEAR(sinr_schur(h, u, 0.3) / a, 1.0, 1e-9);
    }
  }
}

TEST(ZfCombine, NullsInterference) {
  Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const CMatrix h = gaussian(5, 5, rng);
    const CombinerOutput z = zf_combine(h, 1.0);
    if (z.pseudo_inverse) continue;
    const CMatrix prod = z.combiner * h;
    EXPECT_LT((prod - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ZfCombine, RankDeficientUsesPseudoInverse) {
  CMatrix h(2, 2);
  h << cdouble(1, 0), cdouble(0.2, 0), cdouble(1, 0), cdouble(0.2, 0);
  const CombinerOutput z = zf_combine(h, 1.0);
  EXPECT_TRUE(z.pseudo_inverse);
  for (double g : z.sinr) EXPECT_TRUE(std::isfinite(g));
  // H = a b^T with a = (1, 1), b = (1, 0.2): the pseudo-inverse row of UE u
  // is b_u a^H / (|a|^2 |b|^2), so SINR_u = b_u^4 / (b_u^2 b_w^2 + b_u^2 |a|^-2).
  EXPECT_NEAR(z.sinr[0], 1.0 / (0.04 + 0.5), 1e-9);
  EXPECT_NEAR(z.sinr[1], 0.0016 / (0.04 + 0.02), 1e-9);
}

TEST(ZfCombine, RejectsBadInput) {
  EXPECT_THROW(zf_combine(CMatrix(0, 0), 1.0), InvalidParameter);
  EXPECT_THROW(zf_combine(CMatrix::Identity(2, 2), 0.0), InvalidParameter);
}

TEST(SinrGeneral, OrthogonalCombinerRowIsZero) {
  CMatrix h = CMatrix::Identity(2, 2);
  CMatrix w(2, 2);
  w << 0, 1, 1, 0;
  EXPECT_EQ(sinr_general(h, w, 0, 1.0), 0.0);
  EXPECT_EQ(sinr_general(h, CMatrix::Zero(2, 2), 0, 1.0), 0.0);
}

TEST(SinrGeneral, MatchedFilterForOneUe) {
  CMatrix h(3, 1);
  h << cdouble(1, 1), cdouble(0, 2), cdouble(-1, 0);
  const CMatrix w = h.adjoint();
  EXPECT_NEAR(sinr_general(h, w, 0, 0.5), h.squaredNorm() / 0.5, 1e-12);
}

TEST(SinrSchur, ColumnInSpanIsZero) {
  CMatrix h(3, 3);
  h.col(0) << 1, 0, 0;
  h.col(1) << 0, 1, 0;
  h.col(2) << cdouble(2, 1), cdouble(0, -3), 0;
  EXPECT_NEAR(sinr_schur(h, 2, 1.0), 0.0, 1e-12);
}

TEST(SumRate, Examples) {
  EXPECT_NEAR(sum_rate(std::vector<double>{1, 1, 1, 1, 1}), 5.0, 1e-14);
  EXPECT_EQ(sum_rate(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_NEAR(sum_rate(std::vector<double>{3}), 2.0, 1e-14);
  EXPECT_THROW(sum_rate(std::vector<double>{1, -0.1}), InvalidParameter);
}

TEST(SumRate, MonotoneInEachSinr) {
  std::vector<double> g{0.5, 2.0, 7.0};
  double last = sum_rate(g);
  for (int i = 0; i < 3; ++i) {
    g[i] *= 1.5;
    const double now = sum_rate(g);
    EXPECT_GE(now, last);
    last = now;
  }
}
