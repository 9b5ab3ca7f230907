#include <gtest/gtest.h>

#include <cmath>

#include "fastintra/features.hpp"
#include "fastintra/pca.hpp"
#include "fastintra/random.hpp"
#include "test_oracles.hpp"

using namespace fastintra;

namespace {

DctCoefficients coeffs_from(const std::vector<double>& v, int n, int mode = 0) {
  DctCoefficients c;
  c.mode = IntraMode{mode};
  c.size = n;
  c.values = v;
  return c;
}

// Brute-force region scan straight off the 8x8 coordinate table.
std::array<double, 15> reference_pool8(const std::vector<double>& c) {
  static const int regions[15][4] = {
      {0, 0, 0, 0}, {0, 1, 0, 3}, {0, 4, 1, 5}, {0, 6, 1, 7}, {0, 4, 1, 7},
      {1, 1, 2, 2}, {1, 1, 3, 3}, {1, 0, 3, 0}, {4, 0, 5, 1}, {6, 0, 7, 1},
      {4, 0, 7, 1}, {2, 4, 3, 7}, {4, 2, 7, 3}, {4, 4, 5, 5}, {4, 4, 7, 7}};
  std::array<double, 15> out{};
  for (int i = 0; i < 15; ++i) {
    double m = 0.0;
    for (int r = regions[i][0]; r <= regions[i][2]; ++r)
      for (int col = regions[i][1]; col <= regions[i][3]; ++col)
        m = std::max(m, std::abs(c[static_cast<std::size_t>(r) * 8 + col]));
    out[i] = m;
  }
  return out;
}

ReferenceSamples constant_refs(int n, int value) {
  ReferenceSamples r;
  r.size = n;
  r.top.assign(2 * n + 1, static_cast<std::uint8_t>(value));
  r.left.assign(2 * n, static_cast<std::uint8_t>(value));
  r.top_available.assign(r.top.size(), 1);
  r.left_available.assign(r.left.size(), 1);
  return r;
}

PcaModel identity_pca() {
  PcaModel m;
  m.mean.assign(kConcatDim, 0.0);
  m.basis.assign(static_cast<std::size_t>(kConcatDim) * kConcatDim, 0.0);
  for (int i = 0; i < kConcatDim; ++i) m.basis[static_cast<std::size_t>(i) * kConcatDim + i] = 1.0;
  m.explained_variance.assign(kConcatDim, 0.0);
  m.fitted = true;
  return m;
}

}  // namespace

TEST(Pooling, SingleDcEntryTakesAbsoluteValue) {
  std::vector<double> c(64, 0.0);
  c[0] = -7.0;
  const PooledFeatures p = selective_max_pool(coeffs_from(c, 8));
  EXPECT_DOUBLE_EQ(p.values[0], 7.0);
  for (int i = 1; i < kPooledCount; ++i) EXPECT_DOUBLE_EQ(p.values[i], 0.0);
}

TEST(Pooling, AllOnesGiveAllOnes) {
  std::vector<double> c(64, 1.0);
  const PooledFeatures p = selective_max_pool(coeffs_from(c, 8));
  for (double v : p.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Pooling, MatchesBruteForceRegionScan) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> c(64);
    for (double& v : c) v = rng.uniform(-100.0, 100.0);
    const PooledFeatures p = selective_max_pool(coeffs_from(c, 8));
    const std::array<double, 15> want = reference_pool8(c);
    for (int i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(p.values[i], want[i]);
  }
}

TEST(Pooling, ContainmentProperties) {
  Rng rng(9);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> c(64);
    for (double& v : c) v = rng.uniform(-50.0, 50.0);
    const PooledFeatures p = selective_max_pool(coeffs_from(c, 8));
    ASSERT_DOUBLE_EQ(p.values[4], std::max(p.values[2], p.values[3]));
    ASSERT_DOUBLE_EQ(p.values[10], std::max(p.values[8], p.values[9]));
    ASSERT_GE(p.values[6], p.values[5]);
    ASSERT_GE(p.values[14], p.values[13]);
    for (double v : p.values) ASSERT_GE(v, 0.0);
  }
}

TEST(Pooling, EveryFeatureIsAttainedInsideItsRegion) {
  Rng rng(13);
  std::vector<double> c(64);
  for (double& v : c) v = rng.uniform(-10.0, 10.0);
  const PooledFeatures p = selective_max_pool(coeffs_from(c, 8));
  static const int regions[15][4] = {
      {0, 0, 0, 0}, {0, 1, 0, 3}, {0, 4, 1, 5}, {0, 6, 1, 7}, {0, 4, 1, 7},
      {1, 1, 2, 2}, {1, 1, 3, 3}, {1, 0, 3, 0}, {4, 0, 5, 1}, {6, 0, 7, 1},
      {4, 0, 7, 1}, {2, 4, 3, 7}, {4, 2, 7, 3}, {4, 4, 5, 5}, {4, 4, 7, 7}};
  for (int i = 0; i < 15; ++i) {
    bool attained = false;
    for (int r = regions[i][0]; r <= regions[i][2]; ++r)
      for (int col = regions[i][1]; col <= regions[i][3]; ++col)
        attained |= std::abs(c[static_cast<std::size_t>(r) * 8 + col]) == p.values[i];
    EXPECT_TRUE(attained) << "feature " << i;
  }
}

TEST(Pooling, ScaledSizesKeepFifteenNonemptyRegions) {
  Rng rng(15);
  for (int n : {4, 16, 32, 64}) {
    std::vector<double> c(static_cast<std::size_t>(n) * n);
    for (double& v : c) v = rng.uniform(-5.0, 5.0);
    const PooledFeatures p = selective_max_pool(coeffs_from(c, n));
    for (double v : p.values) EXPECT_GE(v, 0.0);
    // Containments survive scaling (the col split at 3/4 n stays aligned).
    EXPECT_DOUBLE_EQ(p.values[4], std::max(p.values[2], p.values[3])) << n;
    EXPECT_DOUBLE_EQ(p.values[10], std::max(p.values[8], p.values[9])) << n;
    EXPECT_GE(p.values[6], p.values[5]);
    EXPECT_GE(p.values[14], p.values[13]);
  }
}

TEST(Concat, FixedOrderAndIndexArithmetic) {
  PooledFeatures a, b, c;
  a.mode = IntraMode{0};
  b.mode = IntraMode{18};
  c.mode = IntraMode{50};
  for (int i = 0; i < kPooledCount; ++i) {
    a.values[i] = 1.0;
    b.values[i] = 2.0 + i * 0.01;
    c.values[i] = 3.0;
  }
  const ConcatFeatures cat = concat_pooled(a, b, c);
  for (int i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(cat.values[i], 1.0);
  EXPECT_DOUBLE_EQ(cat.values[17], b.values[2]);  // element 17 = element 2 of the mode-18 vector
  for (int i = 30; i < 45; ++i) EXPECT_DOUBLE_EQ(cat.values[i], 3.0);

  // Permuted order is rejected outright (wrong mode set positions).
  EXPECT_THROW(concat_pooled(b, a, c), std::invalid_argument);
}

TEST(NeighborCodes, SentinelsAndTable) {
  const NeighborCodes none = encode_neighbor_codes({});
  for (double v : none.values) EXPECT_DOUBLE_EQ(v, -1.0);

  std::array<std::optional<BlockLabel>, 4> n;
  BlockLabel angular;
  angular.best_mode = IntraMode{66};
  angular.best_class = mode_to_class(IntraMode{66});  // class 8
  BlockLabel planar;
  planar.best_mode = IntraMode{kModePlanar};
  n[0] = angular;
  n[1] = planar;
  n[2] = planar;
  n[3] = planar;
  const NeighborCodes codes = encode_neighbor_codes(n);
  EXPECT_DOUBLE_EQ(codes.values[0], 1.0);
  EXPECT_DOUBLE_EQ(codes.values[1], 1.25);
  EXPECT_DOUBLE_EQ(codes.values[2], 1.25);
  EXPECT_DOUBLE_EQ(codes.values[3], 1.25);

  BlockLabel dc;
  dc.best_mode = IntraMode{kModeDc};
  n[2] = dc;
  EXPECT_DOUBLE_EQ(encode_neighbor_codes(n).values[2], 1.5);

  // Order is (L, UL, U, UR): moving the angular neighbour moves its code.
  std::array<std::optional<BlockLabel>, 4> swapped;
  swapped[3] = angular;
  const NeighborCodes moved = encode_neighbor_codes(swapped);
  EXPECT_DOUBLE_EQ(moved.values[0], -1.0);
  EXPECT_DOUBLE_EQ(moved.values[3], 1.0);
}

TEST(TextureExtraction, ZeroResidualBlockProjectsTheMeanOffset) {
  const int n = 8;
  const ReferenceSamples refs = constant_refs(n, 128);
  LumaBlock block;
  block.size = n;
  block.samples.assign(64, 128);  // every feature mode predicts it exactly
  const ConcatFeatures cat = block_concat_features(block, refs);
  for (double v : cat.values) EXPECT_DOUBLE_EQ(v, 0.0);

  const PcaModel pca = identity_pca();
  const TextureFeatures x1 = extract_texture_features(block, refs, pca);
  for (double v : x1.values) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(TextureExtraction, MatchesStagedRecomputation) {
  Rng rng(19);
  const int n = 8;
  LumaBlock block;
  block.size = n;
  block.samples.resize(64);
  for (auto& s : block.samples) s = static_cast<std::uint8_t>(rng.below(256));
  ReferenceSamples refs = constant_refs(n, 0);
  for (auto& v : refs.top) v = static_cast<std::uint8_t>(rng.below(256));
  for (auto& v : refs.left) v = static_cast<std::uint8_t>(rng.below(256));

  // Stage-by-stage recomputation with the test-side DCT oracle.
  std::array<PooledFeatures, 3> pooled;
  const int modes[3] = {0, 18, 50};
  for (int i = 0; i < 3; ++i) {
    const Prediction pred = predict(n, refs, IntraMode{modes[i]});
    std::vector<double> res(64);
    for (int j = 0; j < 64; ++j)
      res[j] = static_cast<double>(pred.samples[j]) - static_cast<double>(block.samples[j]);
    DctCoefficients c;
    c.mode = IntraMode{modes[i]};
    c.size = n;
    c.values = test_oracle::reference_dct2(res, n);
    pooled[i] = selective_max_pool(c);
  }
  const ConcatFeatures want = concat_pooled(pooled[0], pooled[1], pooled[2]);
  const ConcatFeatures got = block_concat_features(block, refs);
  for (int i = 0; i < kConcatDim; ++i) EXPECT_NEAR(got.values[i], want.values[i], 1e-8);

  const PcaModel pca = identity_pca();
  const TextureFeatures x1 = extract_texture_features(block, refs, pca);
  for (int i = 0; i < kPooledCount; ++i) EXPECT_NEAR(x1.values[i], want.values[i], 1e-8);
  EXPECT_EQ(x1.values.size(), 15u);
}

TEST(TextureExtraction, OutputAlwaysFifteenForEverySize) {
  Rng rng(23);
  const PcaModel pca = identity_pca();
  for (int n : {4, 8, 16, 32, 64}) {
    LumaBlock block;
    block.size = n;
    block.samples.resize(static_cast<std::size_t>(n) * n);
    for (auto& s : block.samples) s = static_cast<std::uint8_t>(rng.below(256));
    const ReferenceSamples refs = constant_refs(n, 100);
    const TextureFeatures x1 = extract_texture_features(block, refs, pca);
    EXPECT_EQ(x1.values.size(), 15u);
  }
}
