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

#ifndef REGION_AL_SELECTION_H_
#define REGION_AL_SELECTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "region_al/annotation_state.h"
#include "region_al/filters.h"
#include "region_al/grid.h"

namespace region_al {

enum class Method { kRandom, kStandard, kStandardNonSquare, kAdaptive };

std::string_view to_string(Method m);
// Accepts "random", "standard", "standard_nonsquare" and "adaptive".
Method parse_method(std::string_view name);

struct SelectionConfig {
  Method method = Method::kAdaptive;
  std::int64_t region_side = 4096;  // l, slide pixels
  int count = 1;                    // k, regions per slide and cycle
  double min_tissue = 0.10;
  double tau_low = 98.0;
  double tau_high = 100.0;
  // Slide-space area bounds for adaptive boxes; default [(l/2)^2, (3l/2)^2].
  std::optional<double> min_area;
  std::optional<double> max_area;
  int bisection_max_iters = 20;
  double bisection_tol = 0.01;
  bool allow_oversample = false;
  std::uint64_t rng_seed = 0;
  PercentileDomain percentile_domain = PercentileDomain::kAllCells;

  double effective_min_area() const;
  double effective_max_area() const;
  int side_cells(const GridGeometry& geo) const;

  // Throws UsageError describing the first violated constraint.
  void validate(const GridGeometry& geo) const;
};

// Width/height pair of a standard_nonsquare candidate window.
struct CandidateShape {
  std::int64_t w = 0;  // slide pixels
  std::int64_t h = 0;
  friend bool operator==(const CandidateShape&, const CandidateShape&) = default;
};

// Widths l/2, l/2 + 256, ..., l with h = l^2 / w rounded to the map grid, plus
// transposes, duplicates removed. Ordered by width, then height.
std::vector<CandidateShape> enumerate_candidates(std::int64_t l, int map_stride);

enum class Fallback {
  kNone,
  kUndersized,  // bisection never reached min_area; box at the lowest tau kept
  kClipped,     // boxes stayed too large; (3l/2)^2 square around the peak
};

std::string_view to_string(Fallback f);

struct BisectionProbe {
  double tau = 0;
  double area = 0;  // slide px^2 of the probed box
};

struct SelectedRegion {
  Region region;
  MapRect cells;
  double score = 0;  // summed priority inside the region
  // Adaptive diagnostics.
  Cell peak;
  double tau = 0;
  int iterations = 0;
  Fallback fallback = Fallback::kNone;
  std::vector<BisectionProbe> probes;
};

struct SelectionOutcome {
  std::vector<SelectedRegion> regions;
  bool exhausted = false;  // fewer than k regions met the constraints
};

struct ScoredRect {
  MapRect rect;
  double score = 0;
};

// Greedy non-maximum suppression over candidates already ordered best first.
// Keeps a candidate when its interior misses every kept and forbidden
// rectangle. Returns indices into `candidates`.
std::vector<std::size_t> nms_disjoint(std::span<const ScoredRect> candidates, int k,
                                      std::span<const MapRect> forbidden);

SelectionOutcome select_random(const PriorityGrid& grid, const SlideAnnotations& state,
                               const SelectionConfig& cfg);
SelectionOutcome select_standard(const PriorityGrid& grid, const SlideAnnotations& state,
                                 const SelectionConfig& cfg);
SelectionOutcome select_standard_nonsquare(const PriorityGrid& grid,
                                           const SlideAnnotations& state,
                                           const SelectionConfig& cfg);
// Same search with an explicit candidate list.
SelectionOutcome select_standard_nonsquare(const PriorityGrid& grid,
                                           const SlideAnnotations& state,
                                           const SelectionConfig& cfg,
                                           std::span<const CandidateShape> shapes);
SelectionOutcome select_adaptive(const PriorityGrid& grid, const SlideAnnotations& state,
                                 const SelectionConfig& cfg);

// Dispatches on cfg.method.
SelectionOutcome select_regions(const PriorityGrid& grid, const SlideAnnotations& state,
                                const SelectionConfig& cfg);

}  // namespace region_al

#endif  // REGION_AL_SELECTION_H_
