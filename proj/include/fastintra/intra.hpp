#pragma once

// Intra prediction (Planar, DC, 65 angular modes), residual computation,
// the 9-way angular mode classification, the Hadamard RMD cost and the
// rate-distortion proxy used as this project's ground-truth oracle.
//
// The angular predictor is the normative definition for this project:
// each angular mode maps to a displacement in 1/32-pel units along the
// main reference line; prediction projects onto that line with two-tap
// linear interpolation. Modes 2..34 read mainly from the left column
// (handled by transposition), modes 34..66 from the top row. Negative
// displacements extend the main reference with inverse-projected samples
// from the side reference, index-clamped at the line ends. Wide-angle
// remapping does not apply (square blocks only).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fastintra/frame.hpp"
#include "fastintra/transform.hpp"

namespace fastintra {

inline constexpr int kModePlanar = 0;
inline constexpr int kModeDc = 1;
inline constexpr int kFirstAngular = 2;
inline constexpr int kLastAngular = 66;
inline constexpr int kNumModes = 67;
inline constexpr int kNumAngular = 65;
inline constexpr int kNumClasses = 9;

// Flat mode-signalling cost model: no MPM list, every mode costs the same
// 6 bits, so the bit terms never reorder candidates.
inline constexpr double kModeSignalBits = 6.0;
inline constexpr double kRmdLambda = 1.0;

struct IntraMode {
  int index = 0;  // 0 = Planar, 1 = DC, 2..66 angular

  friend bool operator==(const IntraMode& a, const IntraMode& b) { return a.index == b.index; }
  friend bool operator!=(const IntraMode& a, const IntraMode& b) { return a.index != b.index; }
  friend bool operator<(const IntraMode& a, const IntraMode& b) { return a.index < b.index; }
};

inline bool is_valid_mode(IntraMode m) { return m.index >= 0 && m.index < kNumModes; }
inline bool is_angular(IntraMode m) { return m.index >= kFirstAngular && m.index <= kLastAngular; }

struct ModeClass {
  int index = 0;  // 0..8

  friend bool operator==(const ModeClass& a, const ModeClass& b) { return a.index == b.index; }
};

struct Prediction {
  IntraMode mode;
  int size = 0;
  std::vector<std::uint8_t> samples;  // size*size row-major

  std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * size + x]; }
};

struct Residual {
  IntraMode mode;
  int size = 0;
  std::vector<int> values;  // pred - block, each in [-255, 255]

  int at(int x, int y) const { return values[static_cast<std::size_t>(y) * size + x]; }
};

// Oracle label of a block: the cost-minimising mode, plus its angular
// class when the winner is angular (Planar/DC winners carry no class and
// are excluded from classifier training).
struct BlockLabel {
  IntraMode best_mode;
  std::optional<ModeClass> best_class;

  std::array<double, 9> one_hot() const {
    std::array<double, 9> v{};
    if (best_class) v[best_class->index] = 1.0;
    return v;
  }
};

// Contiguous 9-way partition of the angular modes 2..66.
inline ModeClass mode_to_class(IntraMode mode) {
  if (!is_angular(mode)) throw std::invalid_argument("mode_to_class: mode is not angular");
  return ModeClass{9 * (mode.index - 2) / 65};
}

namespace detail {

inline const std::array<std::vector<IntraMode>, kNumClasses>& class_mode_table() {
  static const auto table = [] {
    std::array<std::vector<IntraMode>, kNumClasses> t;
    for (int i = kFirstAngular; i <= kLastAngular; ++i)
      t[9 * (i - 2) / 65].push_back(IntraMode{i});
    return t;
  }();
  return table;
}

}  // namespace detail

inline std::vector<IntraMode> class_modes(ModeClass cls) {
  if (cls.index < 0 || cls.index >= kNumClasses)
    throw std::invalid_argument("class_modes: class out of range");
  return detail::class_mode_table()[cls.index];
}

namespace detail {

// Displacement per row/column step, 1/32-pel units, for modes 2..66.
inline constexpr std::array<int, 65> kAngleTable = {
    32,  29,  26,  23,  20,  18,  16,  14,  12,  10,  8,   6,   4,   3,   2,   1,  0,
    -1,  -2,  -3,  -4,  -6,  -8,  -10, -12, -14, -16, -18, -20, -23, -26, -29, -32,
    -29, -26, -23, -20, -18, -16, -14, -12, -10, -8,  -6,  -4,  -3,  -2,  -1,  0,  1,
    2,   3,   4,   6,   8,   10,  12,  14,  16,  18,  20,  23,  26,  29,  32};

inline int intra_angle(int mode_index) { return kAngleTable[mode_index - 2]; }

// refs laid out as in ReferenceSamples; main = the reference line the mode
// reads from (top row for vertical modes), side = the other line.
struct RefLine {
  const std::uint8_t* corner;  // p(-1,-1)
  const std::uint8_t* main;    // main[0..2n-1], main line away from corner
  const std::uint8_t* side;    // side[0..2n-1]
};

// Angular projection onto the main line. Writes an n x n block where rows
// advance along the side direction. Caller transposes for modes < 34.
inline void predict_angular_main(std::uint8_t* out, int n, int angle, const RefLine& r) {
  // ref[k] for k in [-n .. 2n+1]; ref[0] = corner, ref[1..2n] = main line.
  std::vector<int> ref(static_cast<std::size_t>(3 * n + 2));
  int* rp = ref.data() + n;  // rp[k] valid for k in [-n, 2n+1]
  rp[0] = *r.corner;
  for (int i = 0; i < 2 * n; ++i) rp[1 + i] = r.main[i];
  rp[2 * n + 1] = r.main[2 * n - 1];
  if (angle < 0) {
    // Inverse projection of the side line, clamped to the available range.
    const int inv_angle = static_cast<int>(std::lround(512.0 * 32.0 / -angle));
    for (int k = 1; k <= n; ++k) {
      int idx = ((k * inv_angle + 256) >> 9) - 1;  // -1 selects the corner
      idx = std::min(idx, 2 * n - 1);
      rp[-k] = idx < 0 ? *r.corner : r.side[idx];
    }
  }
  for (int y = 0; y < n; ++y) {
    const int offset = ((y + 1) * angle) >> 5;
    const int frac = ((y + 1) * angle) & 31;
    for (int x = 0; x < n; ++x) {
      const int pos = x + offset + 1;
      const int v = ((32 - frac) * rp[pos] + frac * rp[pos + 1] + 16) >> 5;
      out[static_cast<std::size_t>(y) * n + x] =
          static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
}

inline int floor_log2(int n) {
  int l = 0;
  while ((1 << (l + 1)) <= n) ++l;
  return l;
}

}  // namespace detail

inline Prediction predict(int size, const ReferenceSamples& refs, IntraMode mode) {
  if (!is_valid_mode(mode)) throw std::invalid_argument("predict: invalid mode index");
  if (refs.size != size) throw std::invalid_argument("predict: reference size mismatch");
  const int n = size;
  Prediction p;
  p.mode = mode;
  p.size = n;
  p.samples.resize(static_cast<std::size_t>(n) * n);
  const std::uint8_t* top = refs.top.data() + 1;  // p(0,-1)..p(2n-1,-1)
  const std::uint8_t* left = refs.left.data();    // p(-1,0)..p(-1,2n-1)
  const int shift = detail::floor_log2(n) + 1;

  if (mode.index == kModePlanar) {
    const int top_right = top[n];
    const int bottom_left = left[n];
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int hor = (n - 1 - x) * left[y] + (x + 1) * top_right;
        const int ver = (n - 1 - y) * top[x] + (y + 1) * bottom_left;
        p.samples[static_cast<std::size_t>(y) * n + x] =
            static_cast<std::uint8_t>((hor + ver + n) >> shift);
      }
    return p;
  }
  if (mode.index == kModeDc) {
    int sum = n;
    for (int i = 0; i < n; ++i) sum += top[i] + left[i];
    const std::uint8_t dc = static_cast<std::uint8_t>(sum >> shift);
    std::fill(p.samples.begin(), p.samples.end(), dc);
    return p;
  }

  const int angle = detail::intra_angle(mode.index);
  const bool vertical = mode.index >= 34;
  detail::RefLine line;
  line.corner = refs.top.data();
  if (vertical) {
    line.main = top;
    line.side = left;
    detail::predict_angular_main(p.samples.data(), n, angle, line);
  } else {
    line.main = left;
    line.side = top;
    std::vector<std::uint8_t> t(static_cast<std::size_t>(n) * n);
    detail::predict_angular_main(t.data(), n, angle, line);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        p.samples[static_cast<std::size_t>(y) * n + x] = t[static_cast<std::size_t>(x) * n + y];
  }
  return p;
}

// Res = Pred - B, elementwise.
inline Residual residual(const Prediction& pred, const LumaBlock& block) {
  if (pred.size != block.size) throw std::invalid_argument("residual: size mismatch");
  Residual r;
  r.mode = pred.mode;
  r.size = pred.size;
  r.values.resize(pred.samples.size());
  for (std::size_t i = 0; i < pred.samples.size(); ++i)
    r.values[i] = static_cast<int>(pred.samples[i]) - static_cast<int>(block.samples[i]);
  return r;
}

// Rough-mode-decision cost: tile-wise Hadamard absolute sum plus the flat
// mode-bits term. Zero residual costs exactly the bits term.
inline double satd_cost(const Residual& res, IntraMode mode) {
  (void)mode;  // flat bit model; kept in the signature for the cost contract
  return static_cast<double>(hadamard_abs_sum(res.values, res.size)) +
         kRmdLambda * kModeSignalBits;
}

// Quantiser step and Lagrange multiplier of the RDO proxy.
inline double qstep_for_qp(int qp) { return std::exp2((qp - 4) / 6.0); }
inline double lambda_for_qp(int qp) { return 0.57 * std::exp2((qp - 12) / 3.0); }

// RDO proxy: D + lambda(qp) * R where D is the SSE between the block and
// its reconstruction through quantised DCT of the mode's residual, and R
// counts nonzero quantised coefficients. A perfectly predicted block has
// cost exactly 0.
inline double rdo_proxy_cost(const LumaBlock& block, const ReferenceSamples& refs, IntraMode mode,
                             int qp) {
  if (qp < 0 || qp > 51) throw std::invalid_argument("rdo_proxy_cost: qp out of [0, 51]");
  const int n = block.size;
  const Prediction pred = predict(n, refs, mode);
  const Residual res = residual(pred, block);
  std::vector<double> resd(res.values.begin(), res.values.end());
  std::vector<double> coeffs = dct2_forward(resd, n);

  const double qstep = qstep_for_qp(qp);
  int nonzero = 0;
  for (double& c : coeffs) {
    const long q = std::lround(c / qstep);
    if (q != 0) ++nonzero;
    c = static_cast<double>(q) * qstep;
  }
  const std::vector<double> rec_res = dct2_inverse(coeffs, n);

  double sse = 0.0;
  for (std::size_t i = 0; i < block.samples.size(); ++i) {
    // B_hat = Pred - Res_hat, unclipped (analysis reconstruction).
    const double rec = static_cast<double>(pred.samples[i]) - rec_res[i];
    const double diff = static_cast<double>(block.samples[i]) - rec;
    sse += diff * diff;
  }
  return sse + lambda_for_qp(qp) * nonzero;
}

// Exhaustive 67-mode argmin of the RDO proxy; ties break toward the lowest
// mode index. The class is populated only for angular winners.
inline BlockLabel label_block(const LumaBlock& block, const ReferenceSamples& refs, int qp) {
  BlockLabel label;
  double best = 0.0;
  for (int m = 0; m < kNumModes; ++m) {
    const double cost = rdo_proxy_cost(block, refs, IntraMode{m}, qp);
    if (m == 0 || cost < best) {
      best = cost;
      label.best_mode = IntraMode{m};
    }
  }
  if (is_angular(label.best_mode)) label.best_class = mode_to_class(label.best_mode);
  return label;
}

}  // namespace fastintra
