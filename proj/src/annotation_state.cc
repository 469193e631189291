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

#include "region_al/annotation_state.h"

#include <utility>

namespace region_al {

SlideAnnotations::SlideAnnotations(GridGeometry geo)
    : geometry_(geo), mask_(geo.map_width(), geo.map_height(), 0) {}

void SlideAnnotations::add(const Region& region, int cycle) {
  const MapRect cells = slide_to_map(region, geometry_);
  regions_.push_back(AnnotatedRegion{region, cells, cycle});
  for (int y = cells.y; y < cells.bottom(); ++y) {
    for (int x = cells.x; x < cells.right(); ++x) {
      if (!mask_(x, y)) {
        mask_(x, y) = 1;
        ++annotated_cells_;
      }
    }
  }
}

void SlideAnnotations::add_cells(const MapRect& cells, int cycle) {
  add(map_to_slide(cells, geometry_), cycle);
}

std::vector<MapRect> SlideAnnotations::rects() const {
  std::vector<MapRect> out;
  out.reserve(regions_.size());
  for (const auto& r : regions_) out.push_back(r.cells);
  return out;
}

}  // namespace region_al
