#pragma once

// Texture-modality feature pipeline: DCT of the Planar/horizontal/vertical
// prediction residuals, selective max pooling down to 15 values per mode,
// concatenation to 45, and PCA projection to the final 15 (see pca.hpp).
// Plus the neighbour-modality encoding: scalar codes for the best intra
// modes of the four causal neighbours.

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fastintra/intra.hpp"
#include "fastintra/transform.hpp"

namespace fastintra {

inline constexpr int kPooledCount = 15;
inline constexpr int kConcatDim = 45;
inline constexpr std::array<int, 3> kFeatureModes = {0, 18, 50};  // Planar, horizontal, vertical

struct DctCoefficients {
  IntraMode mode;
  int size = 0;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * size + c]; }
};

struct PooledFeatures {
  IntraMode mode;
  std::array<double, kPooledCount> values{};
};

struct ConcatFeatures {
  std::array<double, kConcatDim> values{};  // pooled Planar || horizontal || vertical
};

// x1: the texture modality after PCA reduction.
struct TextureFeatures {
  std::array<double, kPooledCount> values{};
};

// x2: scalar codes of the four neighbour best modes, ordered
// (left, upper-left, top, upper-right).
struct NeighborCodes {
  std::array<double, 4> values{};
};

inline constexpr double kCodePlanar = 1.25;
inline constexpr double kCodeDc = 1.5;
inline constexpr double kCodeUnavailable = -1.0;

inline DctCoefficients dct2d(const Residual& res) {
  DctCoefficients c;
  c.mode = res.mode;
  c.size = res.size;
  std::vector<double> x(res.values.begin(), res.values.end());
  c.values = dct2_forward(x, res.size);
  return c;
}

namespace detail {

struct PoolRegion {
  int r0, c0, r1, c1;  // inclusive bounds, 8x8 coordinates
};

// The 15 pooling regions on an 8x8 coefficient grid. Regions 4, 10, 6 and
// 14 contain regions {2,3}, {8,9}, 5 and 13 respectively.
inline constexpr std::array<PoolRegion, kPooledCount> kPoolRegions8 = {{
    {0, 0, 0, 0},
    {0, 1, 0, 3},
    {0, 4, 1, 5},
    {0, 6, 1, 7},
    {0, 4, 1, 7},
    {1, 1, 2, 2},
    {1, 1, 3, 3},
    {1, 0, 3, 0},
    {4, 0, 5, 1},
    {6, 0, 7, 1},
    {4, 0, 7, 1},
    {2, 4, 3, 7},
    {4, 2, 7, 3},
    {4, 4, 5, 5},
    {4, 4, 7, 7},
}};

// Scales an 8x8 region to an n x n grid: low bound floor(v*n/8), high
// bound ceil((v+1)*n/8) - 1. Never empty; clamped to the grid.
inline PoolRegion scale_region(const PoolRegion& r, int n) {
  auto lo = [n](int v) { return v * n / 8; };
  auto hi = [n](int v) { return ((v + 1) * n + 7) / 8 - 1; };
  PoolRegion s{lo(r.r0), lo(r.c0), hi(r.r1), hi(r.c1)};
  s.r1 = std::min(std::max(s.r1, s.r0), n - 1);
  s.c1 = std::min(std::max(s.c1, s.c0), n - 1);
  return s;
}

}  // namespace detail

// The 15 region maxima of |C|.
inline PooledFeatures selective_max_pool(const DctCoefficients& coeffs) {
  const int n = coeffs.size;
  if (!is_supported_block_size(n))
    throw std::invalid_argument("selective_max_pool: unsupported size");
  PooledFeatures p;
  p.mode = coeffs.mode;
  for (int i = 0; i < kPooledCount; ++i) {
    const detail::PoolRegion reg = detail::scale_region(detail::kPoolRegions8[i], n);
    double m = 0.0;
    for (int r = reg.r0; r <= reg.r1; ++r)
      for (int c = reg.c0; c <= reg.c1; ++c) m = std::max(m, std::abs(coeffs.at(r, c)));
    p.values[i] = m;
  }
  return p;
}

inline ConcatFeatures concat_pooled(const PooledFeatures& planar, const PooledFeatures& horizontal,
                                    const PooledFeatures& vertical) {
  if (planar.mode.index != 0 || horizontal.mode.index != 18 || vertical.mode.index != 50)
    throw std::invalid_argument("concat_pooled: expected pooled features for modes 0, 18, 50");
  ConcatFeatures out;
  for (int i = 0; i < kPooledCount; ++i) {
    out.values[i] = planar.values[i];
    out.values[kPooledCount + i] = horizontal.values[i];
    out.values[2 * kPooledCount + i] = vertical.values[i];
  }
  return out;
}

// Pooled-and-concatenated texture descriptor of a block (the pre-PCA stage).
inline ConcatFeatures block_concat_features(const LumaBlock& block, const ReferenceSamples& refs) {
  std::array<PooledFeatures, 3> pooled;
  for (std::size_t i = 0; i < kFeatureModes.size(); ++i) {
    const Prediction pred = predict(block.size, refs, IntraMode{kFeatureModes[i]});
    pooled[i] = selective_max_pool(dct2d(residual(pred, block)));
  }
  return concat_pooled(pooled[0], pooled[1], pooled[2]);
}

// Neighbour order is fixed: left, upper-left, top, upper-right.
inline NeighborCodes encode_neighbor_codes(
    const std::array<std::optional<BlockLabel>, 4>& neighbors) {
  NeighborCodes codes;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!neighbors[i]) {
      codes.values[i] = kCodeUnavailable;
    } else if (neighbors[i]->best_mode.index == kModePlanar) {
      codes.values[i] = kCodePlanar;
    } else if (neighbors[i]->best_mode.index == kModeDc) {
      codes.values[i] = kCodeDc;
    } else {
      codes.values[i] = mode_to_class(neighbors[i]->best_mode).index / 8.0;
    }
  }
  return codes;
}

}  // namespace fastintra
