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

#include "region_al/integral_table.h"

#include <string>

namespace region_al {

IntegralTable::IntegralTable(const FloatGrid& values) { build(values); }
IntegralTable::IntegralTable(const Mask& mask) { build(mask); }

template <typename T>
void IntegralTable::build(const Grid<T>& grid) {
  width_ = grid.width();
  height_ = grid.height();
  const std::size_t stride = static_cast<std::size_t>(width_) + 1;
  sums_.assign(stride * (static_cast<std::size_t>(height_) + 1), 0.0);
  for (int y = 0; y < height_; ++y) {
    double row_sum = 0.0;
    const double* above = &sums_[static_cast<std::size_t>(y) * stride];
    double* out = &sums_[static_cast<std::size_t>(y + 1) * stride];
    for (int x = 0; x < width_; ++x) {
      row_sum += static_cast<double>(grid(x, y));
      out[x + 1] = above[x + 1] + row_sum;
    }
  }
}

double IntegralTable::window_sum(const MapRect& rect) const {
  if (rect.w < 0 || rect.h < 0) throw DataError("window has negative extent");
  if (rect.x < 0) throw DataError("window left edge " + std::to_string(rect.x) + " < 0");
  if (rect.y < 0) throw DataError("window top edge " + std::to_string(rect.y) + " < 0");
  if (rect.right() > width_) {
    throw DataError("window right edge " + std::to_string(rect.right()) + " > width " +
                    std::to_string(width_));
  }
  if (rect.bottom() > height_) {
    throw DataError("window bottom edge " + std::to_string(rect.bottom()) + " > height " +
                    std::to_string(height_));
  }
  return window_sum_unchecked(rect.x, rect.y, rect.w, rect.h);
}

IntegralTable build_integral(const FloatGrid& values) { return IntegralTable(values); }
IntegralTable build_integral(const Mask& mask) { return IntegralTable(mask); }

double tissue_fraction(const MapRect& rect, const IntegralTable& tissue) {
  if (rect.area() <= 0) throw DataError("tissue_fraction of a zero-area rect");
  return tissue.window_sum(rect) / static_cast<double>(rect.area());
}

double tissue_fraction(const MapRect& rect, const Mask& tissue) {
  return tissue_fraction(rect, IntegralTable(tissue));
}

}  // namespace region_al
