#pragma once

// Orthonormal 2-D type-II DCT (double precision, separable) and the
// Hadamard absolute-sum used by rough mode decision. The DCT here is the
// floating-point analysis transform, not an integer codec approximation;
// it is orthonormal, so Parseval holds exactly up to rounding.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fastintra {

namespace detail {

// Row k of the orthonormal DCT-II matrix: d(k,n) = a(k) cos(pi (2n+1) k / 2N).
inline std::vector<double> build_dct_matrix(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < n; ++k) {
    const double a = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int j = 0; j < n; ++j)
      d[static_cast<std::size_t>(k) * n + j] = a * std::cos(pi * (2 * j + 1) * k / (2.0 * n));
  }
  return d;
}

inline const std::vector<double>& dct_matrix(int n) {
  static const std::vector<double> d4 = build_dct_matrix(4);
  static const std::vector<double> d8 = build_dct_matrix(8);
  static const std::vector<double> d16 = build_dct_matrix(16);
  static const std::vector<double> d32 = build_dct_matrix(32);
  static const std::vector<double> d64 = build_dct_matrix(64);
  switch (n) {
    case 4: return d4;
    case 8: return d8;
    case 16: return d16;
    case 32: return d32;
    case 64: return d64;
    default: throw std::invalid_argument("DCT size must be one of {4, 8, 16, 32, 64}");
  }
}

// out = a * b for n x n row-major matrices.
inline void mat_mul(const double* a, const double* b, double* out, int n) {
  for (int i = 0; i < n; ++i) {
    double* row = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) row[j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * n + k];
      const double* brow = b + static_cast<std::size_t>(k) * n;
      for (int j = 0; j < n; ++j) row[j] += aik * brow[j];
    }
  }
}

// out = a^T * b.
inline void mat_tmul(const double* a, const double* b, double* out, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = 0.0;
  for (int k = 0; k < n; ++k) {
    const double* arow = a + static_cast<std::size_t>(k) * n;
    const double* brow = b + static_cast<std::size_t>(k) * n;
    for (int i = 0; i < n; ++i) {
      const double aki = arow[i];
      double* orow = out + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) orow[j] += aki * brow[j];
    }
  }
}

// out = a * b^T.
inline void mat_mul_bt(const double* a, const double* b, double* out, int n) {
  for (int i = 0; i < n; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * n;
    double* orow = out + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<std::size_t>(j) * n;
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += arow[k] * brow[k];
      orow[j] = s;
    }
  }
}

}  // namespace detail

// C = D X D^T, X given row-major.
inline std::vector<double> dct2_forward(const std::vector<double>& x, int n) {
  if (x.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("dct2: bad input size");
  const std::vector<double>& d = detail::dct_matrix(n);
  std::vector<double> tmp(x.size()), out(x.size());
  detail::mat_mul(d.data(), x.data(), tmp.data(), n);
  detail::mat_mul_bt(tmp.data(), d.data(), out.data(), n);
  return out;
}

// X = D^T C D.
inline std::vector<double> dct2_inverse(const std::vector<double>& c, int n) {
  if (c.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("idct2: bad input size");
  const std::vector<double>& d = detail::dct_matrix(n);
  std::vector<double> tmp(c.size()), out(c.size());
  detail::mat_tmul(d.data(), c.data(), tmp.data(), n);  // D^T C
  detail::mat_mul(tmp.data(), d.data(), out.data(), n);  // (D^T C) D
  return out;
}

namespace detail {

// In-place 1-D Walsh-Hadamard butterfly over stride-spaced entries.
template <int N>
inline void wht1d(std::int64_t* v, int stride) {
  for (int len = 1; len < N; len <<= 1) {
    for (int i = 0; i < N; i += len << 1) {
      for (int j = i; j < i + len; ++j) {
        const std::int64_t a = v[j * stride];
        const std::int64_t b = v[(j + len) * stride];
        v[j * stride] = a + b;
        v[(j + len) * stride] = a - b;
      }
    }
  }
}

template <int N>
inline std::int64_t hadamard_tile_abs_sum(const int* res, int row_stride) {
  std::int64_t m[N * N];
  for (int y = 0; y < N; ++y)
    for (int x = 0; x < N; ++x) m[y * N + x] = res[y * row_stride + x];
  for (int y = 0; y < N; ++y) wht1d<N>(m + y * N, 1);
  for (int x = 0; x < N; ++x) wht1d<N>(m + x, N);
  std::int64_t sum = 0;
  for (int i = 0; i < N * N; ++i) sum += m[i] < 0 ? -m[i] : m[i];
  return sum;
}

}  // namespace detail

// Sum of absolute Hadamard-transformed residual values. 4x4 blocks use the
// 4x4 Hadamard; larger sizes apply the 8x8 Hadamard on non-overlapping
// tiles and sum the tiles. No normalisation is applied.
inline std::int64_t hadamard_abs_sum(const std::vector<int>& res, int n) {
  if (res.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("hadamard_abs_sum: bad residual size");
  if (n == 4) return detail::hadamard_tile_abs_sum<4>(res.data(), 4);
  if (n % 8 != 0) throw std::invalid_argument("hadamard_abs_sum: size must be 4 or multiple of 8");
  std::int64_t sum = 0;
  for (int ty = 0; ty < n; ty += 8)
    for (int tx = 0; tx < n; tx += 8)
      sum += detail::hadamard_tile_abs_sum<8>(res.data() + static_cast<std::size_t>(ty) * n + tx, n);
  return sum;
}

}  // namespace fastintra
