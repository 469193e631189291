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

#include "region_al/components.h"

#include <algorithm>
#include <string>

namespace region_al {

Component connected_component(const Mask& mask, Cell seed) {
  if (!mask.contains(seed.x, seed.y)) {
    throw DataError("component seed (" + std::to_string(seed.x) + ", " +
                    std::to_string(seed.y) + ") outside mask");
  }
  if (!mask(seed.x, seed.y)) {
    throw DataError("component seed (" + std::to_string(seed.x) + ", " +
                    std::to_string(seed.y) + ") is not set in the mask");
  }
  Mask visited(mask.width(), mask.height(), 0);
  Component c;
  c.cells.push_back(seed);
  visited(seed.x, seed.y) = 1;
  int x0 = seed.x, x1 = seed.x, y0 = seed.y, y1 = seed.y;
  // c.cells doubles as the BFS queue.
  for (std::size_t head = 0; head < c.cells.size(); ++head) {
    const Cell cur = c.cells[head];
    x0 = std::min(x0, cur.x);
    x1 = std::max(x1, cur.x);
    y0 = std::min(y0, cur.y);
    y1 = std::max(y1, cur.y);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = cur.x + dx;
        const int ny = cur.y + dy;
        if (!mask.contains(nx, ny) || visited(nx, ny) || !mask(nx, ny)) continue;
        visited(nx, ny) = 1;
        c.cells.push_back(Cell{nx, ny});
      }
    }
  }
  c.bounding_box = MapRect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  return c;
}

}  // namespace region_al
