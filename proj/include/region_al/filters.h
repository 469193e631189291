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

#ifndef REGION_AL_FILTERS_H_
#define REGION_AL_FILTERS_H_

#include <cstddef>
#include <span>

#include "region_al/grid.h"

namespace region_al {

// Uncertainty priority 1 - 2|p - 0.5|. Rejects non-finite or out-of-range
// probabilities with a message naming the offending cell.
FloatGrid informativeness(const ProbabilityGrid& p);

// Priority grid for `p` restricted to the given tissue mask.
PriorityGrid make_priority_grid(const ProbabilityGrid& p, Mask tissue);

// 3x3 median with clamp-to-edge borders.
FloatGrid median_filter_3x3(const FloatGrid& g);

enum class PercentileDomain { kAllCells, kTissueOnly };

// 1-based nearest rank ceil(tau / 100 * n), clamped to [1, n].
std::size_t nearest_rank(double tau, std::size_t n);

// Nearest-rank percentile of `values`; throws on an empty set or a tau outside
// [0, 100].
float percentile(std::span<const float> values, double tau);

// Percentile of the cells of `g` selected by `domain`. `tissue` is only read
// for kTissueOnly.
float percentile_threshold(const FloatGrid& g, double tau, PercentileDomain domain,
                           const Mask* tissue = nullptr);

}  // namespace region_al

#endif  // REGION_AL_FILTERS_H_
