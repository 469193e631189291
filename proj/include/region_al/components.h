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

#ifndef REGION_AL_COMPONENTS_H_
#define REGION_AL_COMPONENTS_H_

#include <vector>

#include "region_al/grid.h"

namespace region_al {

struct Component {
  std::vector<Cell> cells;  // breadth-first order starting at the seed
  MapRect bounding_box;
};

// Maximal 8-connected set of set cells containing `seed`. Throws DataError if
// the seed is outside the mask or not set.
Component connected_component(const Mask& mask, Cell seed);

}  // namespace region_al

#endif  // REGION_AL_COMPONENTS_H_
