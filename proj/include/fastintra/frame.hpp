#pragma once

// Frame loading, fixed-grid partitioning and intra reference gathering.
//
// Supported inputs: binary PGM (P5), Y4M (4:2:0, 8-bit) and headerless raw
// YUV 4:2:0 8-bit with dimensions supplied by the caller. Only the luma
// plane is kept; chroma is discarded. All pixel data is 8-bit.
//
// Reference samples are gathered open-loop from the original frame: a
// position is available iff it lies inside the frame. Unavailable positions
// are substituted by extending the nearest available sample along the
// reference line (scan order below-left -> corner -> above-right); when no
// reference sample is available at all, the mid-level value 128 is used.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastintra {

inline constexpr int kUnavailableFill = 128;  // 2^(bitdepth-1) for 8-bit

struct LumaFrame {
  int width = 0;
  int height = 0;
  int frame_index = 0;
  std::vector<std::uint8_t> samples;  // row-major, height*width

  std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
};

struct LumaBlock {
  int origin_x = 0;
  int origin_y = 0;
  int size = 0;                       // one of {4, 8, 16, 32, 64}
  std::vector<std::uint8_t> samples;  // size*size row-major

  std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * size + x]; }
};

struct ReferenceSamples {
  int size = 0;
  // top[0] is the top-left corner p(-1,-1); top[1..size] the above row;
  // top[size+1..2*size] the above-right extension.
  std::vector<std::uint8_t> top;             // 2*size + 1
  std::vector<std::uint8_t> left;            // 2*size: left column then below-left
  std::vector<std::uint8_t> top_available;   // 1 = genuine sample, 0 = filled
  std::vector<std::uint8_t> left_available;
};

enum class FrameFormat { pgm, y4m, raw_yuv420 };

inline bool is_supported_block_size(int s) {
  return s == 4 || s == 8 || s == 16 || s == 32 || s == 64;
}

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {  // comment runs to end of line
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok.empty() ? EOF : 0;
}

inline int parse_positive_int(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("malformed header: bad ") + what + " '" + tok + "'");
  }
}

inline LumaFrame read_pgm_stream(std::istream& in) {
  std::string tok;
  if (pgm_next_token(in, tok) == EOF || tok != "P5")
    throw std::runtime_error("malformed header: not a binary PGM (P5) file");
  if (pgm_next_token(in, tok) == EOF) throw std::runtime_error("malformed header: missing width");
  int w = parse_positive_int(tok, "width");
  if (pgm_next_token(in, tok) == EOF) throw std::runtime_error("malformed header: missing height");
  int h = parse_positive_int(tok, "height");
  if (pgm_next_token(in, tok) == EOF) throw std::runtime_error("malformed header: missing maxval");
  int maxval = parse_positive_int(tok, "maxval");
  if (maxval > 255) throw std::runtime_error("unsupported bit depth: maxval " + std::to_string(maxval));

  LumaFrame f;
  f.width = w;
  f.height = h;
  f.samples.resize(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(f.samples.data()), static_cast<std::streamsize>(f.samples.size()));
  if (static_cast<std::size_t>(in.gcount()) != f.samples.size())
    throw std::runtime_error("truncated payload: PGM pixel data incomplete");
  return f;
}

struct Y4mHeader {
  int width = 0;
  int height = 0;
  std::string colourspace = "420";  // default when no C tag present
};

inline Y4mHeader parse_y4m_header(const std::string& line) {
  const std::string magic = "YUV4MPEG2";
  if (line.compare(0, magic.size(), magic) != 0)
    throw std::runtime_error("malformed header: missing YUV4MPEG2 signature");
  Y4mHeader hdr;
  std::size_t i = magic.size();
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    char tag = line[i++];
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    std::string val = line.substr(i, j - i);
    i = j;
    switch (tag) {
      case 'W': hdr.width = parse_positive_int(val, "width"); break;
      case 'H': hdr.height = parse_positive_int(val, "height"); break;
      case 'C': hdr.colourspace = val; break;
      default: break;  // F/I/A/X parameters do not affect the luma plane
    }
  }
  if (hdr.width <= 0 || hdr.height <= 0)
    throw std::runtime_error("malformed header: Y4M missing W or H tag");
  if (hdr.colourspace.find("p10") != std::string::npos ||
      hdr.colourspace.find("p12") != std::string::npos ||
      hdr.colourspace.find("p14") != std::string::npos ||
      hdr.colourspace.find("p16") != std::string::npos)
    throw std::runtime_error("unsupported bit depth: " + hdr.colourspace);
  if (hdr.colourspace.compare(0, 3, "420") != 0)
    throw std::runtime_error("unsupported chroma format C" + hdr.colourspace + " (4:2:0 only)");
  return hdr;
}

inline std::vector<LumaFrame> read_y4m_stream(std::istream& in, int max_frames) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("malformed header: empty Y4M file");
  Y4mHeader hdr = parse_y4m_header(header);
  if (hdr.width % 2 != 0 || hdr.height % 2 != 0)
    throw std::runtime_error("malformed header: 4:2:0 requires even dimensions");

  const std::size_t luma_bytes = static_cast<std::size_t>(hdr.width) * hdr.height;
  const std::size_t chroma_bytes = luma_bytes / 2;
  std::vector<LumaFrame> frames;
  std::string frame_line;
  while ((max_frames <= 0 || static_cast<int>(frames.size()) < max_frames) &&
         std::getline(in, frame_line)) {
    if (frame_line.compare(0, 5, "FRAME") != 0)
      throw std::runtime_error("malformed header: expected FRAME marker");
    LumaFrame f;
    f.width = hdr.width;
    f.height = hdr.height;
    f.frame_index = static_cast<int>(frames.size());
    f.samples.resize(luma_bytes);
    in.read(reinterpret_cast<char*>(f.samples.data()), static_cast<std::streamsize>(luma_bytes));
    if (static_cast<std::size_t>(in.gcount()) != luma_bytes)
      throw std::runtime_error("truncated payload: Y4M luma plane incomplete");
    in.ignore(static_cast<std::streamsize>(chroma_bytes));
    if (static_cast<std::size_t>(in.gcount()) != chroma_bytes)
      throw std::runtime_error("truncated payload: Y4M chroma planes incomplete");
    frames.push_back(std::move(f));
  }
  if (frames.empty()) throw std::runtime_error("truncated payload: Y4M contains no frames");
  return frames;
}

inline std::vector<LumaFrame> read_raw_yuv420(std::istream& in, int width, int height,
                                              int max_frames) {
  if (width <= 0 || height <= 0)
    throw std::runtime_error("raw YUV input requires explicit width and height");
  if (width % 2 != 0 || height % 2 != 0)
    throw std::runtime_error("4:2:0 requires even dimensions");
  in.seekg(0, std::ios::end);
  const auto file_len = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  const std::size_t luma_bytes = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = luma_bytes + luma_bytes / 2;
  if (file_len == 0 || file_len % frame_bytes != 0)
    throw std::runtime_error("truncated payload: raw YUV length " + std::to_string(file_len) +
                             " is not a multiple of " + std::to_string(frame_bytes));
  int n = static_cast<int>(file_len / frame_bytes);
  if (max_frames > 0 && n > max_frames) n = max_frames;

  std::vector<LumaFrame> frames;
  frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LumaFrame f;
    f.width = width;
    f.height = height;
    f.frame_index = i;
    f.samples.resize(luma_bytes);
    in.read(reinterpret_cast<char*>(f.samples.data()), static_cast<std::streamsize>(luma_bytes));
    if (static_cast<std::size_t>(in.gcount()) != luma_bytes)
      throw std::runtime_error("truncated payload: raw YUV read failed");
    in.ignore(static_cast<std::streamsize>(luma_bytes / 2));
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace detail

// Loads up to max_frames frames (all frames when max_frames <= 0).
// width/height are only consulted for raw YUV input.
inline std::vector<LumaFrame> load_frames(const std::string& path, FrameFormat format,
                                          int width = 0, int height = 0, int max_frames = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  switch (format) {
    case FrameFormat::pgm: {
      std::vector<LumaFrame> v;
      v.push_back(detail::read_pgm_stream(in));
      return v;
    }
    case FrameFormat::y4m:
      return detail::read_y4m_stream(in, max_frames);
    case FrameFormat::raw_yuv420:
      return detail::read_raw_yuv420(in, width, height, max_frames);
  }
  throw std::runtime_error("unknown frame format");
}

inline LumaFrame load_frame(const std::string& path, FrameFormat format, int width = 0,
                            int height = 0) {
  return load_frames(path, format, width, height, 1).front();
}

inline void save_pgm(const LumaFrame& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "P5\n" << f.width << " " << f.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(f.samples.data()),
            static_cast<std::streamsize>(f.samples.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Writes frames as Y4M 4:2:0 with neutral (128) chroma planes.
inline void save_y4m(const std::vector<LumaFrame>& frames, const std::string& path) {
  if (frames.empty()) throw std::invalid_argument("save_y4m: no frames");
  const LumaFrame& first = frames.front();
  if (first.width % 2 != 0 || first.height % 2 != 0)
    throw std::invalid_argument("save_y4m: 4:2:0 requires even dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "YUV4MPEG2 W" << first.width << " H" << first.height << " F25:1 Ip A1:1 C420\n";
  std::vector<std::uint8_t> chroma(static_cast<std::size_t>(first.width) * first.height / 2, 128);
  for (const LumaFrame& f : frames) {
    if (f.width != first.width || f.height != first.height)
      throw std::invalid_argument("save_y4m: frame dimensions differ");
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(f.samples.data()),
              static_cast<std::streamsize>(f.samples.size()));
    out.write(reinterpret_cast<const char*>(chroma.data()),
              static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Partitions a frame into full blocks of block_size in raster order.
// Trailing regions narrower than a full block are skipped, not padded.
inline std::vector<LumaBlock> partition_grid(const LumaFrame& frame, int block_size) {
  if (!is_supported_block_size(block_size))
    throw std::invalid_argument("block size must be one of {4, 8, 16, 32, 64}");
  const int cols = frame.width / block_size;
  const int rows = frame.height / block_size;
  std::vector<LumaBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(cols) * rows);
  for (int by = 0; by < rows; ++by) {
    for (int bx = 0; bx < cols; ++bx) {
      LumaBlock b;
      b.origin_x = bx * block_size;
      b.origin_y = by * block_size;
      b.size = block_size;
      b.samples.resize(static_cast<std::size_t>(block_size) * block_size);
      for (int y = 0; y < block_size; ++y)
        for (int x = 0; x < block_size; ++x)
          b.samples[static_cast<std::size_t>(y) * block_size + x] =
              frame.at(b.origin_x + x, b.origin_y + y);
      blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

inline ReferenceSamples gather_reference_samples(const LumaFrame& frame, const LumaBlock& block) {
  const int n = block.size;
  const int ox = block.origin_x;
  const int oy = block.origin_y;
  ReferenceSamples r;
  r.size = n;
  r.top.assign(2 * n + 1, 0);
  r.top_available.assign(2 * n + 1, 0);
  r.left.assign(2 * n, 0);
  r.left_available.assign(2 * n, 0);

  auto in_frame = [&](int px, int py) {
    return px >= 0 && py >= 0 && px < frame.width && py < frame.height;
  };
  if (in_frame(ox - 1, oy - 1)) {
    r.top[0] = frame.at(ox - 1, oy - 1);
    r.top_available[0] = 1;
  }
  for (int i = 0; i < 2 * n; ++i) {
    if (in_frame(ox + i, oy - 1)) {
      r.top[1 + i] = frame.at(ox + i, oy - 1);
      r.top_available[1 + i] = 1;
    }
    if (in_frame(ox - 1, oy + i)) {
      r.left[i] = frame.at(ox - 1, oy + i);
      r.left_available[i] = 1;
    }
  }

  // Substitution along the reference line, from below-left end to the
  // above-right end. A leading unavailable run takes the first available
  // sample; later gaps extend the nearest preceding sample.
  const int total = 4 * n + 1;
  auto value_at = [&](int i) -> std::uint8_t& {
    return i < 2 * n ? r.left[2 * n - 1 - i] : r.top[i - 2 * n];
  };
  auto avail_at = [&](int i) -> std::uint8_t {
    return i < 2 * n ? r.left_available[2 * n - 1 - i] : r.top_available[i - 2 * n];
  };
  int first_avail = -1;
  for (int i = 0; i < total; ++i) {
    if (avail_at(i)) {
      first_avail = i;
      break;
    }
  }
  if (first_avail < 0) {
    for (int i = 0; i < total; ++i) value_at(i) = kUnavailableFill;
    return r;
  }
  std::uint8_t prev = value_at(first_avail);
  for (int i = 0; i < total; ++i) {
    if (avail_at(i))
      prev = value_at(i);
    else
      value_at(i) = prev;
  }
  return r;
}

}  // namespace fastintra
