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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "region_al/grid.h"

namespace region_al {

GridGeometry::GridGeometry(std::int64_t slide_width, std::int64_t slide_height,
                           int map_stride)
    : slide_width_(slide_width), slide_height_(slide_height), map_stride_(map_stride) {
  if (map_stride < 1) throw DataError("map_stride must be >= 1");
  if (slide_width < 1 || slide_height < 1) throw DataError("slide dimensions must be >= 1");
  const std::int64_t mw = (slide_width + map_stride - 1) / map_stride;
  const std::int64_t mh = (slide_height + map_stride - 1) / map_stride;
  if (mw > (1 << 24) || mh > (1 << 24)) throw DataError("map dimensions overflow");
  map_width_ = static_cast<int>(mw);
  map_height_ = static_cast<int>(mh);
}

GridGeometry GridGeometry::from_map(int map_width, int map_height, int map_stride) {
  if (map_width < 1 || map_height < 1) throw DataError("map dimensions must be >= 1");
  return GridGeometry(static_cast<std::int64_t>(map_width) * map_stride,
                      static_cast<std::int64_t>(map_height) * map_stride, map_stride);
}

namespace {

std::string describe(const MapRect& r) {
  return "[" + std::to_string(r.x) + ", " + std::to_string(r.y) + ", " +
         std::to_string(r.w) + "x" + std::to_string(r.h) + "]";
}

}  // namespace

Region map_to_slide(const MapRect& rect, const GridGeometry& geo) {
  if (!within(rect, geo.map_width(), geo.map_height())) {
    throw DataError("map rect " + describe(rect) + " outside map " +
                    std::to_string(geo.map_width()) + "x" +
                    std::to_string(geo.map_height()));
  }
  const std::int64_t s = geo.map_stride();
  const std::int64_t left = rect.x * s;
  const std::int64_t top = rect.y * s;
  const std::int64_t right = std::min<std::int64_t>(rect.right() * s, geo.slide_width());
  const std::int64_t bottom = std::min<std::int64_t>(rect.bottom() * s, geo.slide_height());
  return Region{static_cast<double>(left + right) / 2, static_cast<double>(top + bottom) / 2,
                static_cast<double>(right - left), static_cast<double>(bottom - top)};
}

MapRect slide_to_map(const Region& region, const GridGeometry& geo) {
  if (!(region.w > 0) || !(region.h > 0)) throw DataError("region must have positive extent");
  if (region.left() < 0 || region.top() < 0 ||
      region.right() > static_cast<double>(geo.slide_width()) ||
      region.bottom() > static_cast<double>(geo.slide_height())) {
    throw DataError("region outside slide bounds " + std::to_string(geo.slide_width()) + "x" +
                    std::to_string(geo.slide_height()));
  }
  const double s = geo.map_stride();
  const int x0 = static_cast<int>(std::floor(region.left() / s));
  const int y0 = static_cast<int>(std::floor(region.top() / s));
  const int x1 = std::min(geo.map_width(), static_cast<int>(std::ceil(region.right() / s)));
  const int y1 = std::min(geo.map_height(), static_cast<int>(std::ceil(region.bottom() / s)));
  return MapRect{x0, y0, std::max(1, x1 - x0), std::max(1, y1 - y0)};
}

Cell slide_to_map(double x, double y, const GridGeometry& geo) {
  if (x < 0 || y < 0 || x >= static_cast<double>(geo.slide_width()) ||
      y >= static_cast<double>(geo.slide_height())) {
    throw DataError("slide point outside slide bounds");
  }
  const double s = geo.map_stride();
  return Cell{static_cast<int>(x / s), static_cast<int>(y / s)};
}

PriorityGrid::PriorityGrid(GridGeometry geo, FloatGrid priority, Mask tissue_mask)
    : geometry(geo), values(std::move(priority)), tissue(std::move(tissue_mask)) {
  if (!values.same_shape(geo.map_width(), geo.map_height())) {
    throw DataError("priority grid does not match geometry " +
                    std::to_string(geo.map_width()) + "x" + std::to_string(geo.map_height()));
  }
  if (!tissue.same_shape(values)) {
    throw DataError("tissue mask dimensions differ from priority grid");
  }
  for (int y = 0; y < values.height(); ++y) {
    for (int x = 0; x < values.width(); ++x) {
      const float v = values(x, y);
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
        throw DataError("priority at cell (" + std::to_string(x) + ", " + std::to_string(y) +
                        ") outside [0, 1]");
      }
    }
  }
}

}  // namespace region_al
