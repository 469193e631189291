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

#ifndef REGION_AL_INTEGRAL_TABLE_H_
#define REGION_AL_INTEGRAL_TABLE_H_

#include <vector>

#include "region_al/grid.h"

namespace region_al {

// Summed-area table with a zero first row and column. Entry (x, y) holds the
// sum of all cells with coordinates strictly below (x, y). Accumulation runs
// row-major in double precision, so sums over integer-valued grids are exact.
class IntegralTable {
 public:
  IntegralTable() = default;
  explicit IntegralTable(const FloatGrid& values);
  explicit IntegralTable(const Mask& mask);

  // Dimensions of the grid the table was built from.
  int width() const { return width_; }
  int height() const { return height_; }

  double at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  }

  // Sum of cells inside `rect`. Throws DataError naming the violated bound.
  double window_sum(const MapRect& rect) const;

  // window_sum without the bounds check, for hot loops that already
  // guarantee containment.
  double window_sum_unchecked(int x, int y, int w, int h) const {
    return at(x + w, y + h) - at(x, y + h) - at(x + w, y) + at(x, y);
  }

 private:
  template <typename T>
  void build(const Grid<T>& grid);

  int width_ = 0;
  int height_ = 0;
  std::vector<double> sums_{0.0};
};

IntegralTable build_integral(const FloatGrid& values);
IntegralTable build_integral(const Mask& mask);

// Fraction of tissue cells in `rect`, from an integral table over the mask.
double tissue_fraction(const MapRect& rect, const IntegralTable& tissue);
double tissue_fraction(const MapRect& rect, const Mask& tissue);

}  // namespace region_al

#endif  // REGION_AL_INTEGRAL_TABLE_H_
