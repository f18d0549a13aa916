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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bgsub/core.hpp"

namespace bgsub {

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

namespace detail {

inline std::string readWholeFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Next whitespace-delimited header token, skipping '#' comment lines.
inline std::string pnmToken(const std::string& data, size_t& pos) {
  while (pos < data.size()) {
    const char c = data[pos];
    if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  const size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])))
    ++pos;
  return data.substr(start, pos - start);
}

}  // namespace detail

/// Binary PGM (P5, maxval 255). Color (P6/P3) input is rejected: convert to
/// grayscale first, e.g. with luma = 0.299 R + 0.587 G + 0.114 B.
inline PgmImage readPgm(const std::filesystem::path& path) {
  const std::string data = detail::readWholeFile(path);
  size_t pos = 0;
  const std::string magic = detail::pnmToken(data, pos);
  if (magic == "P6" || magic == "P3")
    throw IoError(path.string() +
                  ": color PNM input is not supported; pre-convert to "
                  "grayscale P5 (luma = 0.299 R + 0.587 G + 0.114 B)");
  if (magic != "P5")
    throw IoError(path.string() + ": not a binary PGM (P5) file");
  PgmImage img;
  try {
    img.width = std::stoi(detail::pnmToken(data, pos));
    img.height = std::stoi(detail::pnmToken(data, pos));
    const int maxval = std::stoi(detail::pnmToken(data, pos));
    if (maxval != 255)
      throw IoError(path.string() + ": only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (img.width < 1 || img.height < 1)
    throw IoError(path.string() + ": invalid PGM dimensions");
  ++pos;  // single whitespace after maxval
  const size_t need = size_t(img.width) * size_t(img.height);
  if (data.size() - pos < need)
    throw IoError(path.string() + ": truncated PGM payload");
  img.pixels.assign(data.begin() + pos, data.begin() + pos + need);
  return img;
}

inline void writePgm(const std::filesystem::path& path, const PgmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            std::streamsize(img.pixels.size()));
  if (!out) throw IoError("write failure on " + path.string());
}

/// raw-planar: frame-major u8 planes in one file, described by a sidecar
/// "<file>.meta" with width/height/frameCount key=value lines.
struct RawPlanar {
  int width = 0;
  int height = 0;
  int frameCount = 0;
  std::vector<std::uint8_t> data;  // frameCount * width * height bytes
};

inline RawPlanar readRawPlanar(const std::filesystem::path& path) {
  const std::filesystem::path metaPath = path.string() + ".meta";
  std::ifstream meta(metaPath);
  if (!meta) throw IoError("cannot open sidecar " + metaPath.string());
  RawPlanar raw;
  std::string line;
  while (std::getline(meta, line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "width") raw.width = std::stoi(value);
      else if (key == "height") raw.height = std::stoi(value);
      else if (key == "frameCount") raw.frameCount = std::stoi(value);
    } catch (const std::logic_error&) {
      throw IoError(metaPath.string() + ": bad value for " + key);
    }
  }
  if (raw.width < 1 || raw.height < 1 || raw.frameCount < 1)
    throw IoError(metaPath.string() + ": missing width/height/frameCount");
  const std::string data = detail::readWholeFile(path);
  const size_t need =
      size_t(raw.width) * size_t(raw.height) * size_t(raw.frameCount);
  if (data.size() != need)
    throw IoError(path.string() + ": size does not match sidecar descriptor");
  raw.data.assign(data.begin(), data.end());
  return raw;
}

inline void writeRawPlanar(const std::filesystem::path& path,
                           const RawPlanar& raw) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(raw.data.data()),
              std::streamsize(raw.data.size()));
  }
  std::ofstream meta(path.string() + ".meta");
  if (!meta) throw IoError("cannot write sidecar for " + path.string());
  meta << "width=" << raw.width << "\nheight=" << raw.height
       << "\nframeCount=" << raw.frameCount << "\n";
}

}  // namespace bgsub
