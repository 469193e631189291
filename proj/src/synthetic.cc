// Copyright 2026 The region_al Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "region_al/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace region_al {

long long SyntheticSlide::tissue_cells() const {
  return std::count(tissue.values().begin(), tissue.values().end(), 1);
}

long long SyntheticSlide::tumor_cells() const {
  return std::count(tumor.values().begin(), tumor.values().end(), 1);
}

double SyntheticSlide::tumor_fraction() const {
  const long long t = tissue_cells();
  return t == 0 ? 0.0 : static_cast<double>(tumor_cells()) / static_cast<double>(t);
}

void GeneratorConfig::validate() const {
  if (slides < 0) throw UsageError("generator: slides must be >= 0");
  if (!(tumor_free_fraction >= 0.0 && tumor_free_fraction <= 1.0)) {
    throw UsageError("generator: tumor_free_fraction outside [0, 1]");
  }
  if (map_width < 8 || map_height < 8) throw UsageError("generator: map must be at least 8x8");
  if (map_stride < 1) throw UsageError("generator: map_stride must be >= 1");
  const double extent = std::min(map_width, map_height);
  if (!(tissue_radius_min > 0 && tissue_radius_min <= tissue_radius_max)) {
    throw UsageError("generator: tissue radius range is empty");
  }
  if (tissue_radius_max >= extent) {
    throw UsageError("generator: tissue blob radius must be smaller than the grid");
  }
  if (!(tumor_radius_min > 0 && tumor_radius_min <= tumor_radius_max)) {
    throw UsageError("generator: tumor radius range is empty");
  }
  if (tumor_radius_max >= extent) {
    throw UsageError("generator: tumor blob radius must be smaller than the grid");
  }
  if (tissue_blobs_min < 1 || tissue_blobs_min > tissue_blobs_max) {
    throw UsageError("generator: tissue blob count range is empty");
  }
  if (tumor_blobs_min < 1 || tumor_blobs_min > tumor_blobs_max) {
    throw UsageError("generator: tumor blob count range is empty");
  }
  if (tumor_mean_min > tumor_mean_max) throw UsageError("generator: tumor mean range is empty");
  if (noise_sigma < 0 || noise_radius < 0 || boundary_blur < 0) {
    throw UsageError("generator: noise parameters must be non-negative");
  }
}

namespace {

FloatGrid box_blur(const FloatGrid& g, int radius) {
  if (radius == 0) return g;
  const int w = g.width();
  const int h = g.height();
  const float norm = 1.0f / static_cast<float>(2 * radius + 1);
  FloatGrid tmp(w, h);
  FloatGrid out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int d = -radius; d <= radius; ++d) acc += g(std::clamp(x + d, 0, w - 1), y);
      tmp(x, y) = acc * norm;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int d = -radius; d <= radius; ++d) acc += tmp(x, std::clamp(y + d, 0, h - 1));
      out(x, y) = acc * norm;
    }
  }
  return out;
}

// White Gaussian noise blurred to the given correlation radius, rescaled to
// unit standard deviation.
FloatGrid correlated_noise(int w, int h, int radius, std::mt19937_64& rng) {
  std::normal_distribution<float> normal(0.0f, 1.0f);
  FloatGrid white(w, h);
  for (float& v : white.values()) v = normal(rng);
  FloatGrid out = box_blur(white, radius);
  const auto scale = static_cast<float>(2 * radius + 1);
  for (float& v : out.values()) v *= scale;
  return out;
}

struct Bump {
  double cx, cy, r;
};

double bump(const Bump& b, int x, int y) {
  const double dx = x - b.cx;
  const double dy = y - b.cy;
  return std::exp(-(dx * dx + dy * dy) / (2 * b.r * b.r));
}

SyntheticSlide make_slide(const GeneratorConfig& cfg, std::uint64_t seed, int index,
                          bool tumor_free) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  std::mt19937_64 rng(seq);
  const int w = cfg.map_width;
  const int h = cfg.map_height;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const auto count = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  SyntheticSlide s;
  s.id = cfg.id_prefix + std::to_string(index);
  s.geometry = GridGeometry::from_map(w, h, cfg.map_stride);
  s.tissue = Mask(w, h, 0);
  s.tumor = Mask(w, h, 0);

  std::vector<Bump> tissue_bumps(static_cast<std::size_t>(count(cfg.tissue_blobs_min,
                                                                cfg.tissue_blobs_max)));
  for (Bump& b : tissue_bumps) {
    b.r = uniform(cfg.tissue_radius_min, cfg.tissue_radius_max);
    const double margin = std::min(b.r, 0.25 * std::min(w, h));
    b.cx = uniform(margin, w - 1 - margin);
    b.cy = uniform(margin, h - 1 - margin);
  }
  const FloatGrid edge = correlated_noise(w, h, 4, rng);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double field = 0;
      for (const Bump& b : tissue_bumps) field = std::max(field, bump(b, x, y));
      const double noise = std::clamp(cfg.tissue_edge_noise * edge(x, y), -0.4, 0.4);
      s.tissue(x, y) = field + noise > 0.5 ? 1 : 0;
    }
  }
  // Bump centers always end up as tissue; guard the noise clamp anyway.
  for (const Bump& b : tissue_bumps) {
    s.tissue(static_cast<int>(std::lround(b.cx)), static_cast<int>(std::lround(b.cy))) = 1;
  }

  FloatGrid mean(w, h, static_cast<float>(cfg.background_mean));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (s.tissue(x, y)) mean(x, y) = static_cast<float>(cfg.normal_mean);
    }
  }
  if (!tumor_free) {
    std::vector<Cell> tissue_cells;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (s.tissue(x, y)) tissue_cells.push_back(Cell{x, y});
      }
    }
    const int n = count(cfg.tumor_blobs_min, cfg.tumor_blobs_max);
    std::vector<Bump> tumors(static_cast<std::size_t>(n));
    std::vector<double> levels(static_cast<std::size_t>(n));
    const double log_lo = std::log(cfg.tumor_radius_min);
    const double log_hi = std::log(cfg.tumor_radius_max);
    for (int i = 0; i < n; ++i) {
      const Cell c = tissue_cells[std::uniform_int_distribution<std::size_t>(
          0, tissue_cells.size() - 1)(rng)];
      tumors[i] = Bump{static_cast<double>(c.x), static_cast<double>(c.y),
                       std::exp(uniform(log_lo, log_hi))};
      levels[i] = uniform(cfg.tumor_mean_min, cfg.tumor_mean_max);
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!s.tissue(x, y)) continue;
        double best = 0;
        int owner = -1;
        for (int i = 0; i < n; ++i) {
          const double v = bump(tumors[i], x, y);
          if (v > best) {
            best = v;
            owner = i;
          }
        }
        if (best > 0.5) {
          s.tumor(x, y) = 1;
          mean(x, y) = static_cast<float>(levels[owner]);
        }
      }
    }
  }
  for (int pass = 0; pass < cfg.boundary_blur; ++pass) mean = box_blur(mean, 1);

  const FloatGrid noise = correlated_noise(w, h, cfg.noise_radius, rng);
  s.feature = FloatGrid(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      s.feature(x, y) = mean(x, y) + static_cast<float>(cfg.noise_sigma) * noise(x, y);
    }
  }
  return s;
}

}  // namespace

std::vector<SyntheticSlide> generate_pool(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = cfg.slides;
  const auto free_count = static_cast<int>(std::lround(cfg.tumor_free_fraction * n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> tumor_free(static_cast<std::size_t>(n), false);
  for (int i = 0; i < free_count; ++i) tumor_free[order[i]] = true;

  std::vector<SyntheticSlide> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.push_back(make_slide(cfg, seed, i, tumor_free[i]));
  return pool;
}

void PriorityMapConfig::validate() const {
  if (map_width < 1 || map_height < 1 || map_stride < 1) {
    throw UsageError("priority map: dimensions must be positive");
  }
  if (hotspots_min < 1 || hotspots_min > hotspots_max) {
    throw UsageError("priority map: hotspot count range is empty");
  }
  if (hotspot_radius_min <= 0 || hotspot_radius_min > hotspot_radius_max) {
    throw UsageError("priority map: hotspot radius range is invalid");
  }
  if (amplitude_min < 0 || amplitude_min > amplitude_max || amplitude_max > 1) {
    throw UsageError("priority map: amplitude range must lie in [0, 1]");
  }
  if (noise_sigma < 0 || noise_radius < 0) {
    throw UsageError("priority map: noise parameters must be non-negative");
  }
}

PriorityGrid generate_priority_map(const PriorityMapConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x9a9u};
  std::mt19937_64 rng(seq);
  const int w = cfg.map_width;
  const int h = cfg.map_height;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const int n = std::uniform_int_distribution<int>(cfg.hotspots_min, cfg.hotspots_max)(rng);
  std::vector<Bump> bumps(static_cast<std::size_t>(n));
  std::vector<double> heights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bumps[i].r = uniform(cfg.hotspot_radius_min, cfg.hotspot_radius_max);
    bumps[i].cx = uniform(0, w - 1);
    bumps[i].cy = uniform(0, h - 1);
    heights[i] = uniform(cfg.amplitude_min, cfg.amplitude_max);
  }
  const FloatGrid noise = correlated_noise(w, h, cfg.noise_radius, rng);
  FloatGrid values(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0;
      for (int i = 0; i < n; ++i) v = std::max(v, heights[i] * bump(bumps[i], x, y));
      v += cfg.noise_sigma * noise(x, y);
      values(x, y) = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return PriorityGrid(GridGeometry::from_map(w, h, cfg.map_stride), std::move(values),
                      Mask(w, h, 1));
}

void validate_slide(const SyntheticSlide& slide) {
  const int w = slide.geometry.map_width();
  const int h = slide.geometry.map_height();
  if (!slide.feature.same_shape(w, h) || !slide.tumor.same_shape(w, h) ||
      !slide.tissue.same_shape(w, h)) {
    throw DataError("slide " + slide.id + ": grid dimensions disagree");
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (slide.tumor(x, y) && !slide.tissue(x, y)) {
        throw DataError("slide " + slide.id + ": tumor cell (" + std::to_string(x) + ", " +
                        std::to_string(y) + ") outside tissue");
      }
    }
  }
}

}  // namespace region_al
