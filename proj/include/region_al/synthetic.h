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

#ifndef REGION_AL_SYNTHETIC_H_
#define REGION_AL_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "region_al/grid.h"

namespace region_al {

// Desk-scale stand-in for a slide: one feature value per map cell plus the
// tumor and tissue ground truth.
struct SyntheticSlide {
  std::string id;
  GridGeometry geometry;
  FloatGrid feature;
  Mask tumor;
  Mask tissue;

  long long tissue_cells() const;
  long long tumor_cells() const;
  bool has_tumor() const { return tumor_cells() > 0; }
  // Tumor cells over tissue cells.
  double tumor_fraction() const;
};

struct GeneratorConfig {
  int slides = 60;
  double tumor_free_fraction = 1.0 / 6.0;
  int map_width = 128;
  int map_height = 128;
  int map_stride = 256;
  // Tissue: superposed radial bumps thresholded at 0.5, edges roughened by
  // a smooth noise field.
  int tissue_blobs_min = 2;
  int tissue_blobs_max = 4;
  double tissue_radius_min = 12.0;  // map cells
  double tissue_radius_max = 26.0;
  double tissue_edge_noise = 0.25;
  // Tumor: bumps centered on tissue cells, radius drawn log-uniformly,
  // each with its own mean feature level.
  int tumor_blobs_min = 1;
  int tumor_blobs_max = 3;
  double tumor_radius_min = 2.0;
  double tumor_radius_max = 14.0;
  double normal_mean = 0.0;
  double tumor_mean_min = 0.8;
  double tumor_mean_max = 1.2;
  double background_mean = 0.0;
  // Spatially correlated feature noise: box-blurred white noise rescaled to
  // noise_sigma.
  double noise_sigma = 0.06;
  int noise_radius = 2;
  int boundary_blur = 1;  // 3x3 box passes over the class-mean field
  std::string id_prefix = "slide";

  // Throws UsageError on a degenerate configuration.
  void validate() const;
};

// Pure function of (cfg, seed).
std::vector<SyntheticSlide> generate_pool(const GeneratorConfig& cfg, std::uint64_t seed);

// Smooth hotspot maps for exercising the adaptive selector directly: a few
// Gaussian bumps of random height and width over low-amplitude correlated
// noise, clamped to [0, 1]. Every cell is tissue.
struct PriorityMapConfig {
  int map_width = 128;
  int map_height = 128;
  int map_stride = 256;
  int hotspots_min = 3;
  int hotspots_max = 6;
  double hotspot_radius_min = 3.0;  // map cells, Gaussian sigma
  double hotspot_radius_max = 10.0;
  double amplitude_min = 0.3;
  double amplitude_max = 1.0;
  double noise_sigma = 0.03;
  int noise_radius = 1;

  void validate() const;
};

PriorityGrid generate_priority_map(const PriorityMapConfig& cfg, std::uint64_t seed);

// Throws DataError unless dimensions agree and tumor is a subset of tissue.
void validate_slide(const SyntheticSlide& slide);

}  // namespace region_al

#endif  // REGION_AL_SYNTHETIC_H_
