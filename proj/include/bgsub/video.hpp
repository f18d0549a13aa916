// Copyright 2026 the bgsub authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/factorization.hpp"
#include "bgsub/pgm.hpp"

namespace bgsub {

/// Grayscale frames in [0,1], all width x height, pixels row-major.
struct FrameSequence {
  int width = 0;
  int height = 0;
  std::vector<Vector> frames;  // each of size width*height
  std::vector<std::string> sourceIds;

  size_t frameCount() const { return frames.size(); }
  double at(size_t frame, int x, int y) const {
    return frames[frame](Index(y) * width + x);
  }
};

/// Binary masks aligned with a FrameSequence.
struct MaskSequence {
  int width = 0;
  int height = 0;
  std::vector<std::vector<std::uint8_t>> masks;  // 0/1, row-major

  size_t frameCount() const { return masks.size(); }
  bool at(size_t frame, int x, int y) const {
    return masks[frame][size_t(y) * width + x] != 0;
  }
};

enum class FrameFormat { PgmDir, RawPlanar };
enum class Cleanup { None, Median3 };

inline Cleanup cleanupFromString(const std::string& s) {
  if (s == "none") return Cleanup::None;
  if (s == "median3") return Cleanup::Median3;
  throw ConfigError("unknown cleanup mode: " + s);
}

namespace detail {

inline Vector frameFromBytes(const std::uint8_t* bytes, size_t n) {
  Vector v(static_cast<Index>(n));
  for (size_t i = 0; i < n; ++i) v(Index(i)) = double(bytes[i]) / 255.0;
  return v;
}

inline std::vector<std::uint8_t> bytesFromFrame(const Vector& v) {
  std::vector<std::uint8_t> bytes(size_t(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const double x = std::clamp(v(i), 0.0, 1.0);
    bytes[size_t(i)] = std::uint8_t(std::lround(x * 255.0));
  }
  return bytes;
}

inline std::vector<std::filesystem::path> sortedPgmFiles(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  if (files.empty()) throw IoError("no .pgm frames in " + dir.string());
  return files;
}

inline std::string frameName(size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu.pgm", index);
  return buf;
}

}  // namespace detail

/// Loads a frame sequence: a directory of P5 PGMs (lexicographic filename
/// order) or a raw-planar file with its sidecar. 8-bit values are divided by
/// 255 exactly.
inline FrameSequence ingestFrames(const std::filesystem::path& path,
                                  FrameFormat format) {
  FrameSequence seq;
  if (format == FrameFormat::PgmDir) {
    for (const auto& file : detail::sortedPgmFiles(path)) {
      const PgmImage img = readPgm(file);
      if (seq.frames.empty()) {
        seq.width = img.width;
        seq.height = img.height;
      } else if (img.width != seq.width || img.height != seq.height) {
        throw IoError(file.string() + ": frame size " +
                      std::to_string(img.width) + "x" +
                      std::to_string(img.height) + " differs from first frame");
      }
      seq.frames.push_back(
          detail::frameFromBytes(img.pixels.data(), img.pixels.size()));
      seq.sourceIds.push_back(file.filename().string());
    }
  } else {
    const RawPlanar raw = readRawPlanar(path);
    seq.width = raw.width;
    seq.height = raw.height;
    const size_t n = size_t(raw.width) * size_t(raw.height);
    for (int f = 0; f < raw.frameCount; ++f) {
      seq.frames.push_back(detail::frameFromBytes(raw.data.data() + n * f, n));
      seq.sourceIds.push_back(std::to_string(f));
    }
  }
  if (seq.frames.size() < 2)
    throw IoError(path.string() + ": need at least 2 frames");
  return seq;
}

/// Writes frames as zero-padded numeric P5 files (PgmDir) or one raw-planar
/// file plus sidecar. Byte-exact round trip with ingestFrames for 8-bit data.
inline void emitFrames(const FrameSequence& seq,
                       const std::filesystem::path& path,
                       FrameFormat format = FrameFormat::PgmDir) {
  if (format == FrameFormat::PgmDir) {
    std::filesystem::create_directories(path);
    for (size_t i = 0; i < seq.frames.size(); ++i) {
      PgmImage img{seq.width, seq.height, detail::bytesFromFrame(seq.frames[i])};
      writePgm(path / detail::frameName(i), img);
    }
  } else {
    RawPlanar raw;
    raw.width = seq.width;
    raw.height = seq.height;
    raw.frameCount = int(seq.frames.size());
    raw.data.reserve(seq.frames.size() * size_t(seq.width) * seq.height);
    for (const Vector& f : seq.frames) {
      const auto bytes = detail::bytesFromFrame(f);
      raw.data.insert(raw.data.end(), bytes.begin(), bytes.end());
    }
    writeRawPlanar(path, raw);
  }
}

/// Masks are emitted as 0/255 P5 frames.
inline void emitMasks(const MaskSequence& seq,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < seq.masks.size(); ++i) {
    PgmImage img;
    img.width = seq.width;
    img.height = seq.height;
    img.pixels.resize(seq.masks[i].size());
    for (size_t p = 0; p < img.pixels.size(); ++p)
      img.pixels[p] = seq.masks[i][p] ? 255 : 0;
    writePgm(dir / detail::frameName(i), img);
  }
}

inline MaskSequence ingestMasks(const std::filesystem::path& dir) {
  MaskSequence seq;
  for (const auto& file : detail::sortedPgmFiles(dir)) {
    const PgmImage img = readPgm(file);
    if (seq.masks.empty()) {
      seq.width = img.width;
      seq.height = img.height;
    } else if (img.width != seq.width || img.height != seq.height) {
      throw IoError(file.string() + ": mask size differs from first mask");
    }
    std::vector<std::uint8_t> m(img.pixels.size());
    for (size_t p = 0; p < m.size(); ++p) m[p] = img.pixels[p] > 127 ? 1 : 0;
    seq.masks.push_back(std::move(m));
  }
  return seq;
}

/// Observation matrix: column j is frame j, pixels row-major.
inline Matrix toObservationMatrix(const FrameSequence& seq) {
  if (seq.frames.size() < 2)
    throw ConfigError("observation matrix needs at least 2 frames");
  const Index n1 = Index(seq.width) * seq.height;
  Matrix v(n1, Index(seq.frames.size()));
  for (size_t j = 0; j < seq.frames.size(); ++j) {
    if (seq.frames[j].size() != n1)
      throw ConfigError("frame " + std::to_string(j) + " has wrong size");
    v.col(Index(j)) = seq.frames[j];
  }
  return v;
}

/// Inverse of toObservationMatrix. Values are clamped to [0,1] so solver
/// outputs can be written back out as frames.
inline FrameSequence fromObservationMatrix(const Matrix& v, int width,
                                           int height) {
  if (v.rows() != Index(width) * height)
    throw ConfigError("observation matrix rows do not match width*height");
  FrameSequence seq;
  seq.width = width;
  seq.height = height;
  for (Index j = 0; j < v.cols(); ++j) {
    seq.frames.push_back(v.col(j).cwiseMax(0.0).cwiseMin(1.0));
    seq.sourceIds.push_back(std::to_string(j));
  }
  return seq;
}

namespace detail {

/// 3x3 majority filter with replicated borders (binary median).
inline std::vector<std::uint8_t> median3(const std::vector<std::uint8_t>& m,
                                         int width, int height) {
  std::vector<std::uint8_t> out(m.size());
  const auto clampAt = [&](int x, int y) {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return m[size_t(y) * width + x];
  };
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      int count = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) count += clampAt(x + dx, y + dy);
      out[size_t(y) * width + x] = count >= 5 ? 1 : 0;
    }
  return out;
}

}  // namespace detail

/// Foreground masks: pixel = (|V - B| >= threshold), optional 3x3 median
/// cleanup per frame. B is streamed column-wise, never materialized whole.
inline MaskSequence extractForeground(const Matrix& v,
                                      const LowRankFactorization& b, int width,
                                      int height, double threshold,
                                      Cleanup cleanup = Cleanup::None) {
  if (v.rows() != b.rows() || v.cols() != b.cols())
    throw ConfigError("extractForeground: V and B dimensions differ");
  if (v.rows() != Index(width) * height)
    throw ConfigError("extractForeground: width*height does not match V");
  if (threshold <= 0.0 || threshold >= 1.0)
    throw ConfigError("extractForeground: threshold must be in (0,1)");
  MaskSequence seq;
  seq.width = width;
  seq.height = height;
  for (Index j = 0; j < v.cols(); ++j) {
    const Vector bg = b.materializeColumn(j);
    std::vector<std::uint8_t> m(size_t(v.rows()));
    for (Index i = 0; i < v.rows(); ++i)
      m[size_t(i)] = std::abs(v(i, j) - bg(i)) >= threshold ? 1 : 0;
    if (cleanup == Cleanup::Median3)
      m = detail::median3(m, width, height);
    seq.masks.push_back(std::move(m));
  }
  return seq;
}

}  // namespace bgsub
