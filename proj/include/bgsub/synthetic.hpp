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

#include <cmath>
#include <string>
#include <vector>

#include "bgsub/core.hpp"
#include "bgsub/rng.hpp"
#include "bgsub/video.hpp"

namespace bgsub {

/// Deterministic synthetic scene: a smooth seeded background (optionally
/// with a +-10% linear illumination drift, giving an exactly rank-2
/// background), a moving rectangular block as foreground, and clipped
/// Gaussian pixel noise.
struct SyntheticSpec {
  int width = 64;
  int height = 64;
  int frameCount = 60;
  int backgroundRank = 1;      // 1 static, 2 adds illumination drift
  int blockSize = 8;           // 0 disables the foreground block
  double blockIntensity = 0.9;
  int velX = 1;                // pixels per frame, wraps around
  int velY = 0;
  double noiseSigma = 0.0;

  void validate() const {
    if (width < 1 || height < 1) throw ConfigError("synth: bad frame size");
    if (frameCount < 2) throw ConfigError("synth: need at least 2 frames");
    if (backgroundRank != 1 && backgroundRank != 2)
      throw ConfigError("synth: backgroundRank must be 1 or 2");
    if (blockSize < 0 || blockSize > std::min(width, height))
      throw ConfigError("synth: block does not fit in the frame");
    if (blockIntensity < 0.0 || blockIntensity > 1.0)
      throw ConfigError("synth: blockIntensity must be in [0,1]");
    if (noiseSigma < 0.0) throw ConfigError("synth: noiseSigma must be >= 0");
  }
};

struct SyntheticScene {
  FrameSequence frames;
  MaskSequence truth;
  Matrix trueBackground;  // clean background observation matrix (pre-noise)
};

inline SyntheticScene generateSynthetic(const SyntheticSpec& spec,
                                        std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const int w = spec.width, h = spec.height, t = spec.frameCount;
  const Index n1 = Index(w) * h;

  // Smooth background: a few seeded low-frequency waves scaled to
  // [0.25, 0.75].
  Vector base = Vector::Zero(n1);
  for (int k = 0; k < 4; ++k) {
    const double fx = double(rng.uniformInt(3));
    const double fy = double(rng.uniformInt(3));
    const double phase = 6.283185307179586 * rng.uniform();
    const double amp = 0.5 + 0.5 * rng.uniform();
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        base(Index(y) * w + x) +=
            amp * std::cos(6.283185307179586 * (fx * x / double(w) +
                                                fy * y / double(h)) +
                           phase);
  }
  const double lo = base.minCoeff(), hi = base.maxCoeff();
  const double span = hi - lo > 0 ? hi - lo : 1.0;
  base = (0.25 + 0.5 * (base.array() - lo) / span).matrix();
  const double mean = base.mean();

  const int x0 = spec.blockSize > 0 ? int(rng.uniformInt(std::uint64_t(w))) : 0;
  const int y0 = spec.blockSize > 0 ? int(rng.uniformInt(std::uint64_t(h))) : 0;

  SyntheticScene scene;
  scene.frames.width = w;
  scene.frames.height = h;
  scene.truth.width = w;
  scene.truth.height = h;
  scene.trueBackground.resize(n1, t);

  for (int fidx = 0; fidx < t; ++fidx) {
    // Illumination drift applied about the spatial mean so the clean
    // background spans exactly two dimensions in rank-2 mode.
    const double gain =
        spec.backgroundRank == 2
            ? 1.0 + 0.1 * (2.0 * fidx / double(t - 1) - 1.0)
            : 1.0;
    Vector clean = (mean + gain * (base.array() - mean)).matrix();
    scene.trueBackground.col(fidx) = clean;

    Vector frame = clean;
    std::vector<std::uint8_t> mask(size_t(n1), 0);
    if (spec.blockSize > 0) {
      const int bx = int(((long(x0) + long(spec.velX) * fidx) % w + w) % w);
      const int by = int(((long(y0) + long(spec.velY) * fidx) % h + h) % h);
      for (int dy = 0; dy < spec.blockSize; ++dy)
        for (int dx = 0; dx < spec.blockSize; ++dx) {
          const int px = (bx + dx + w) % w;
          const int py = (by + dy + h) % h;
          frame(Index(py) * w + px) = spec.blockIntensity;
          mask[size_t(py) * w + px] = 1;
        }
    }
    if (spec.noiseSigma > 0.0) {
      for (Index i = 0; i < n1; ++i)
        frame(i) = std::clamp(frame(i) + spec.noiseSigma * rng.normal(), 0.0,
                              1.0);
    }
    scene.frames.frames.push_back(std::move(frame));
    scene.frames.sourceIds.push_back(std::to_string(fidx));
    scene.truth.masks.push_back(std::move(mask));
  }
  return scene;
}

}  // namespace bgsub
