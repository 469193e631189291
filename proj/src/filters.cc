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

#include "region_al/filters.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace region_al {

FloatGrid informativeness(const ProbabilityGrid& p) {
  const FloatGrid& in = p.values;
  FloatGrid out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      const float v = in(x, y);
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
        throw DataError("probability at cell (" + std::to_string(x) + ", " +
                        std::to_string(y) + ") is " + std::to_string(v) +
                        ", expected a finite value in [0, 1]");
      }
      out(x, y) = 1.0f - 2.0f * std::abs(v - 0.5f);
    }
  }
  return out;
}

PriorityGrid make_priority_grid(const ProbabilityGrid& p, Mask tissue) {
  return PriorityGrid(p.geometry, informativeness(p), std::move(tissue));
}

FloatGrid median_filter_3x3(const FloatGrid& g) {
  const int w = g.width();
  const int h = g.height();
  FloatGrid out(w, h);
  std::array<float, 9> window;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          window[n++] = g(std::clamp(x + dx, 0, w - 1), yy);
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out(x, y) = window[4];
    }
  }
  return out;
}

std::size_t nearest_rank(double tau, std::size_t n) {
  const double r = std::ceil(tau * static_cast<double>(n) / 100.0);
  if (r < 1.0) return 1;
  if (r > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(r);
}

float percentile(std::span<const float> values, double tau) {
  if (values.empty()) throw DataError("percentile of an empty cell set");
  if (!(tau >= 0.0 && tau <= 100.0)) throw DataError("percentile tau outside [0, 100]");
  std::vector<float> scratch(values.begin(), values.end());
  const std::size_t k = nearest_rank(tau, scratch.size()) - 1;
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                   scratch.end());
  return scratch[k];
}

float percentile_threshold(const FloatGrid& g, double tau, PercentileDomain domain,
                           const Mask* tissue) {
  if (domain == PercentileDomain::kAllCells) return percentile(g.values(), tau);
  if (tissue == nullptr || !tissue->same_shape(g)) {
    throw DataError("tissue-only percentile needs a tissue mask of matching shape");
  }
  std::vector<float> selected;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if ((*tissue)(x, y)) selected.push_back(g(x, y));
    }
  }
  return percentile(selected, tau);
}

}  // namespace region_al
