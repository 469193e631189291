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

#ifndef REGION_AL_ANNOTATION_STATE_H_
#define REGION_AL_ANNOTATION_STATE_H_

#include <span>
#include <vector>

#include "region_al/grid.h"

namespace region_al {

struct AnnotatedRegion {
  Region region;
  MapRect cells;
  int cycle = 0;  // cycle at which the labels were revealed
};

// Annotated regions of one slide. The cell mask is always the rasterized
// union of the region list.
class SlideAnnotations {
 public:
  SlideAnnotations() = default;
  explicit SlideAnnotations(GridGeometry geo);

  const GridGeometry& geometry() const { return geometry_; }
  std::span<const AnnotatedRegion> regions() const { return regions_; }
  const Mask& mask() const { return mask_; }
  long long annotated_cells() const { return annotated_cells_; }

  void add(const Region& region, int cycle);
  void add_cells(const MapRect& cells, int cycle);

  // Map rectangles of all annotated regions.
  std::vector<MapRect> rects() const;

 private:
  GridGeometry geometry_;
  std::vector<AnnotatedRegion> regions_;
  Mask mask_;
  long long annotated_cells_ = 0;
};

// The labeled set: one entry per slide of the pool, in pool order.
using AnnotationState = std::vector<SlideAnnotations>;

}  // namespace region_al

#endif  // REGION_AL_ANNOTATION_STATE_H_
