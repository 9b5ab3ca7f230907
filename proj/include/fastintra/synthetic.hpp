#pragma once

// Deterministic natural-texture scene synthesis. Frames are sampled from a
// continuous field combining smooth multi-octave value noise, an oriented
// grating whose direction/wavelength/strength vary over coarse regions,
// and light pixel noise. Successive frames translate the field slightly,
// giving temporally coherent content with region-stable edge directions —
// the statistics the mode-decision models feed on. Everything derives from
// the seed; no external assets are involved.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fastintra/frame.hpp"

namespace fastintra {
namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Lattice value in [0, 1) for integer coordinates.
inline double lattice(std::uint64_t seed, std::int64_t ix, std::int64_t iy, std::uint64_t salt) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(salt));
  h = splitmix64(h ^ static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull);
  h = splitmix64(h ^ static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4Full);
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

inline double value_noise(std::uint64_t seed, double x, double y, double scale,
                          std::uint64_t salt) {
  const double fx = x / scale, fy = y / scale;
  const std::int64_t ix = static_cast<std::int64_t>(std::floor(fx));
  const std::int64_t iy = static_cast<std::int64_t>(std::floor(fy));
  const double tx = smoothstep(fx - ix), ty = smoothstep(fy - iy);
  const double v00 = lattice(seed, ix, iy, salt);
  const double v10 = lattice(seed, ix + 1, iy, salt);
  const double v01 = lattice(seed, ix, iy + 1, salt);
  const double v11 = lattice(seed, ix + 1, iy + 1, salt);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

}  // namespace detail

// One frame of the synthetic scene. frame_index shifts the field to model
// slow camera motion.
inline LumaFrame synth_frame(int width, int height, std::uint64_t seed, int frame_index) {
  LumaFrame f;
  f.width = width;
  f.height = height;
  f.frame_index = frame_index;
  f.samples.resize(static_cast<std::size_t>(width) * height);
  const double dx = 0.8 * frame_index;
  const double dy = 0.35 * frame_index;
  const double pi = 3.14159265358979323846;

  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      const double x = px + dx, y = py + dy;
      const double base = 0.62 * detail::value_noise(seed, x, y, 97.0, 1) +
                          0.27 * detail::value_noise(seed, x, y, 31.0, 2) +
                          0.11 * detail::value_noise(seed, x, y, 11.0, 3);

      // Orientation field with period pi, interpolated via the doubled
      // angle so opposite vectors describe the same edge direction. The
      // coherence scale is several blocks wide: neighbouring blocks mostly
      // share an edge direction, as natural content does.
      const double c2 = 2.0 * detail::value_noise(seed, x, y, 223.0, 4) - 1.0;
      const double s2 = 2.0 * detail::value_noise(seed, x, y, 223.0, 5) - 1.0;
      const double theta = 0.5 * std::atan2(s2, c2);
      const double wavelength = 4.0 + 13.0 * detail::value_noise(seed, x, y, 197.0, 6);
      const double strength_raw = detail::value_noise(seed, x, y, 131.0, 7);
      const double strength = strength_raw * strength_raw;  // leave genuinely flat areas
      const double phase = 2.0 * pi * detail::value_noise(seed, x, y, 211.0, 8);
      const double grating =
          std::sin(2.0 * pi * (x * std::cos(theta) + y * std::sin(theta)) / wavelength + phase);

      const double noise = detail::lattice(seed, px + 7919ll * frame_index, py, 9) - 0.5;
      double v = 52.0 + 150.0 * base + 52.0 * strength * grating + 4.0 * noise;
      if (v < 0.0) v = 0.0;
      if (v > 255.0) v = 255.0;
      f.samples[static_cast<std::size_t>(py) * width + px] =
          static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return f;
}

inline std::vector<LumaFrame> synth_scene(int width, int height, int frames, std::uint64_t seed) {
  std::vector<LumaFrame> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int i = 0; i < frames; ++i) out.push_back(synth_frame(width, height, seed, i));
  return out;
}

}  // namespace fastintra
