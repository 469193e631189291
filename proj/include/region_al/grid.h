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

#ifndef REGION_AL_GRID_H_
#define REGION_AL_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "region_al/error.h"

namespace region_al {

// Dense row-major 2-D grid. Cell (x, y) lives at data[y * width + x].
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DataError("grid dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(int width, int height) const {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Boolean masks store 0/1 bytes; std::vector<bool> lacks contiguous storage.
using Mask = Grid<std::uint8_t>;
using FloatGrid = Grid<float>;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Half-open rectangle of map cells: [x, x + w) x [y, y + h).
struct MapRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  bool contains(Cell c) const {
    return c.x >= x && c.x < right() && c.y >= y && c.y < bottom();
  }
  friend bool operator==(const MapRect&, const MapRect&) = default;
};

// True when the open interiors intersect. Rectangles that only share an edge
// or a corner do not overlap.
inline bool overlaps(const MapRect& a, const MapRect& b) {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

inline bool within(const MapRect& r, int width, int height) {
  return r.w > 0 && r.h > 0 && r.x >= 0 && r.y >= 0 && r.right() <= width &&
         r.bottom() <= height;
}

// Slide and map extents. One map cell summarizes a map_stride x map_stride
// square of slide pixels; the last row/column of cells may overhang the slide.
class GridGeometry {
 public:
  GridGeometry() = default;
  GridGeometry(std::int64_t slide_width, std::int64_t slide_height, int map_stride);

  // Geometry whose slide is exactly map_width * map_stride pixels wide.
  static GridGeometry from_map(int map_width, int map_height, int map_stride);

  std::int64_t slide_width() const { return slide_width_; }
  std::int64_t slide_height() const { return slide_height_; }
  int map_stride() const { return map_stride_; }
  int map_width() const { return map_width_; }
  int map_height() const { return map_height_; }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  std::int64_t slide_width_ = 1;
  std::int64_t slide_height_ = 1;
  int map_stride_ = 1;
  int map_width_ = 1;
  int map_height_ = 1;
};

// Axis-aligned rectangle in slide pixels, stored as center plus extent.
struct Region {
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;

  double left() const { return cx - w / 2; }
  double top() const { return cy - h / 2; }
  double right() const { return cx + w / 2; }
  double bottom() const { return cy + h / 2; }
  double area() const { return w * h; }
  friend bool operator==(const Region&, const Region&) = default;
};

// Region covering the slide pixels of `rect`, clipped to the slide bounds.
Region map_to_slide(const MapRect& rect, const GridGeometry& geo);

// Smallest map rectangle whose cells cover `region`.
MapRect slide_to_map(const Region& region, const GridGeometry& geo);

// Slide pixel -> map cell containing it.
Cell slide_to_map(double x, double y, const GridGeometry& geo);

// Model output in [0, 1], one value per map cell.
struct ProbabilityGrid {
  GridGeometry geometry;
  FloatGrid values;
};

// Informativeness per cell together with the tissue mask it refers to.
struct PriorityGrid {
  GridGeometry geometry;
  FloatGrid values;
  Mask tissue;

  PriorityGrid() = default;
  PriorityGrid(GridGeometry geo, FloatGrid priority, Mask tissue_mask);
};

}  // namespace region_al

#endif  // REGION_AL_GRID_H_
