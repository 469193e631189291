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

#include "region_al/selection.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "region_al/components.h"
#include "region_al/integral_table.h"

namespace region_al {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kRandom: return "random";
    case Method::kStandard: return "standard";
    case Method::kStandardNonSquare: return "standard_nonsquare";
    case Method::kAdaptive: return "adaptive";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "random") return Method::kRandom;
  if (name == "standard") return Method::kStandard;
  if (name == "standard_nonsquare") return Method::kStandardNonSquare;
  if (name == "adaptive") return Method::kAdaptive;
  throw UsageError("unknown selection method '" + std::string(name) + "'");
}

std::string_view to_string(Fallback f) {
  switch (f) {
    case Fallback::kNone: return "none";
    case Fallback::kUndersized: return "undersized";
    case Fallback::kClipped: return "clipped";
  }
  return "unknown";
}

double SelectionConfig::effective_min_area() const {
  const double half = static_cast<double>(region_side) / 2;
  return min_area.value_or(half * half);
}

double SelectionConfig::effective_max_area() const {
  const double big = 1.5 * static_cast<double>(region_side);
  return max_area.value_or(big * big);
}

int SelectionConfig::side_cells(const GridGeometry& geo) const {
  return static_cast<int>(region_side / geo.map_stride());
}

void SelectionConfig::validate(const GridGeometry& geo) const {
  if (region_side <= 0) throw UsageError("region side l must be positive");
  if (region_side % geo.map_stride() != 0) {
    throw UsageError("region side l=" + std::to_string(region_side) +
                     " is not a multiple of map_stride " + std::to_string(geo.map_stride()));
  }
  if (count < 1) throw UsageError("region count k must be >= 1");
  if (!(min_tissue >= 0.0 && min_tissue <= 1.0)) throw UsageError("min_tissue outside [0, 1]");
  if (!(tau_low >= 0.0 && tau_high <= 100.0 && tau_low < tau_high)) {
    throw UsageError("tau range must satisfy 0 <= low < high <= 100");
  }
  if (!(effective_min_area() < effective_max_area())) {
    throw UsageError("area bounds must satisfy min_area < max_area");
  }
  if (bisection_max_iters < 1) throw UsageError("bisection_max_iters must be >= 1");
  if (!(bisection_tol > 0.0)) throw UsageError("bisection_tol must be positive");
}

std::vector<CandidateShape> enumerate_candidates(std::int64_t l, int map_stride) {
  if (l <= 0 || map_stride < 1 || l % map_stride != 0) {
    throw UsageError("candidate side must be a positive multiple of map_stride");
  }
  const std::int64_t s = map_stride;
  const std::int64_t step = (256 + s - 1) / s * s;
  const std::int64_t w_min = (l / 2 + s - 1) / s * s;
  const double l2 = static_cast<double>(l) * static_cast<double>(l);
  std::vector<CandidateShape> shapes;
  for (std::int64_t w = w_min; w <= l; w += step) {
    const auto h = static_cast<std::int64_t>(std::llround(l2 / static_cast<double>(w) /
                                                          static_cast<double>(s))) * s;
    shapes.push_back({w, h});
    shapes.push_back({h, w});
  }
  std::sort(shapes.begin(), shapes.end(), [](const auto& a, const auto& b) {
    return a.w != b.w ? a.w < b.w : a.h < b.h;
  });
  shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
  return shapes;
}

std::vector<std::size_t> nms_disjoint(std::span<const ScoredRect> candidates, int k,
                                      std::span<const MapRect> forbidden) {
  std::vector<std::size_t> kept;
  if (k <= 0) return kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const MapRect& r = candidates[i].rect;
    const auto hits = [&r](const MapRect& o) { return overlaps(r, o); };
    if (std::any_of(forbidden.begin(), forbidden.end(), hits)) continue;
    if (std::any_of(kept.begin(), kept.end(),
                    [&](std::size_t j) { return overlaps(r, candidates[j].rect); })) {
      continue;
    }
    kept.push_back(i);
    if (static_cast<int>(kept.size()) == k) break;
  }
  return kept;
}

namespace {

void check_inputs(const PriorityGrid& grid, const SlideAnnotations& state,
                  const SelectionConfig& cfg) {
  cfg.validate(grid.geometry);
  if (!state.mask().same_shape(grid.values)) {
    throw DataError("annotation state does not match the priority grid dimensions");
  }
}

// Priority with annotated cells zeroed unless oversampling is allowed.
FloatGrid working_priority(const PriorityGrid& grid, const SlideAnnotations& state,
                           const SelectionConfig& cfg) {
  FloatGrid work = grid.values;
  if (!cfg.allow_oversample) {
    const Mask& ann = state.mask();
    for (int y = 0; y < work.height(); ++y) {
      for (int x = 0; x < work.width(); ++x) {
        if (ann(x, y)) work(x, y) = 0.0f;
      }
    }
  }
  return work;
}

SelectedRegion make_selected(const MapRect& cells, const GridGeometry& geo, double score) {
  SelectedRegion s;
  s.cells = cells;
  s.region = map_to_slide(cells, geo);
  s.score = score;
  s.peak = Cell{cells.x + cells.w / 2, cells.y + cells.h / 2};
  return s;
}

void mark(Mask& mask, const MapRect& r) {
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) mask(x, y) = 1;
  }
}

}  // namespace

SelectionOutcome select_random(const PriorityGrid& grid, const SlideAnnotations& state,
                               const SelectionConfig& cfg) {
  check_inputs(grid, state, cfg);
  constexpr int kDrawsPerRegion = 10000;
  SelectionOutcome out;
  const int side = cfg.side_cells(grid.geometry);
  const int mw = grid.values.width();
  const int mh = grid.values.height();
  if (side > mw || side > mh) {
    out.exhausted = true;
    return out;
  }
  const IntegralTable tissue(grid.tissue);
  const IntegralTable annotated(state.mask());
  const IntegralTable priority(grid.values);
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_int_distribution<int> pick_x(0, mw - side);
  std::uniform_int_distribution<int> pick_y(0, mh - side);
  std::vector<MapRect> picked;
  while (static_cast<int>(picked.size()) < cfg.count) {
    bool found = false;
    for (int draw = 0; draw < kDrawsPerRegion && !found; ++draw) {
      const MapRect r{pick_x(rng), pick_y(rng), side, side};
      if (tissue_fraction(r, tissue) < cfg.min_tissue) continue;
      if (!cfg.allow_oversample && annotated.window_sum(r) > 0) continue;
      if (std::any_of(picked.begin(), picked.end(),
                      [&r](const MapRect& o) { return overlaps(r, o); })) {
        continue;
      }
      picked.push_back(r);
      out.regions.push_back(make_selected(r, grid.geometry, priority.window_sum(r)));
      found = true;
    }
    if (!found) {
      out.exhausted = true;
      break;
    }
  }
  return out;
}

SelectionOutcome select_standard(const PriorityGrid& grid, const SlideAnnotations& state,
                                 const SelectionConfig& cfg) {
  check_inputs(grid, state, cfg);
  const int side = cfg.side_cells(grid.geometry);
  const int mw = grid.values.width();
  const int mh = grid.values.height();
  if (side > mw || side > mh) {
    throw DataError("grid " + std::to_string(mw) + "x" + std::to_string(mh) +
                    " is smaller than the " + std::to_string(side) + "-cell window");
  }
  const IntegralTable table(working_priority(grid, state, cfg));
  std::vector<ScoredRect> candidates;
  candidates.reserve(static_cast<std::size_t>(mw - side + 1) * (mh - side + 1));
  for (int y = 0; y + side <= mh; ++y) {
    for (int x = 0; x + side <= mw; ++x) {
      candidates.push_back({MapRect{x, y, side, side},
                            table.window_sum_unchecked(x, y, side, side)});
    }
  }
  // Stable sort keeps row-major order among equal scores: lowest (y, x) wins.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScoredRect& a, const ScoredRect& b) { return a.score > b.score; });
  std::vector<MapRect> forbidden;
  if (!cfg.allow_oversample) forbidden = state.rects();
  SelectionOutcome out;
  for (std::size_t i : nms_disjoint(candidates, cfg.count, forbidden)) {
    out.regions.push_back(make_selected(candidates[i].rect, grid.geometry, candidates[i].score));
  }
  out.exhausted = static_cast<int>(out.regions.size()) < cfg.count;
  return out;
}

SelectionOutcome select_standard_nonsquare(const PriorityGrid& grid,
                                           const SlideAnnotations& state,
                                           const SelectionConfig& cfg) {
  const auto shapes = enumerate_candidates(cfg.region_side, grid.geometry.map_stride());
  return select_standard_nonsquare(grid, state, cfg, shapes);
}

SelectionOutcome select_standard_nonsquare(const PriorityGrid& grid,
                                           const SlideAnnotations& state,
                                           const SelectionConfig& cfg,
                                           std::span<const CandidateShape> shapes) {
  check_inputs(grid, state, cfg);
  const int mw = grid.values.width();
  const int mh = grid.values.height();
  const int s = grid.geometry.map_stride();
  struct CellShape {
    int w;
    int h;
  };
  std::vector<CellShape> fitting;
  for (const auto& shape : shapes) {
    if (shape.w % s != 0 || shape.h % s != 0) {
      throw UsageError("candidate shape is not aligned to the map grid");
    }
    const int w = static_cast<int>(shape.w / s);
    const int h = static_cast<int>(shape.h / s);
    if (w >= 1 && h >= 1 && w <= mw && h <= mh) fitting.push_back({w, h});
  }
  if (fitting.empty()) {
    throw DataError("grid " + std::to_string(mw) + "x" + std::to_string(mh) +
                    " is smaller than every candidate window");
  }
  const IntegralTable table(working_priority(grid, state, cfg));
  Mask blocked = cfg.allow_oversample ? Mask(mw, mh, 0) : state.mask();
  SelectionOutcome out;
  for (int j = 0; j < cfg.count; ++j) {
    const IntegralTable block_table(blocked);
    bool found = false;
    double best = 0;
    MapRect best_rect;
    // Visiting order (y, x, shape) with a strict comparison implements the
    // lowest-(y, x) tie rule.
    for (int y = 0; y < mh; ++y) {
      for (int x = 0; x < mw; ++x) {
        for (const CellShape& c : fitting) {
          if (x + c.w > mw || y + c.h > mh) continue;
          if (block_table.window_sum_unchecked(x, y, c.w, c.h) > 0) continue;
          const double score = table.window_sum_unchecked(x, y, c.w, c.h);
          if (!found || score > best) {
            found = true;
            best = score;
            best_rect = MapRect{x, y, c.w, c.h};
          }
        }
      }
    }
    if (!found) break;
    out.regions.push_back(make_selected(best_rect, grid.geometry, best));
    mark(blocked, best_rect);
  }
  out.exhausted = static_cast<int>(out.regions.size()) < cfg.count;
  return out;
}

namespace {

// Shrinks `box` until its interior misses every rectangle in `forbidden`.
// Each conflict is resolved by the single edge cut that keeps the peak and the
// largest area. The peak must not lie in any forbidden rectangle.
MapRect trim_box(MapRect box, std::span<const MapRect> forbidden, Cell peak) {
  for (;;) {
    const auto hit = std::find_if(forbidden.begin(), forbidden.end(),
                                  [&box](const MapRect& f) { return overlaps(box, f); });
    if (hit == forbidden.end()) return box;
    const MapRect& f = *hit;
    MapRect best{};
    long long best_area = -1;
    const auto consider = [&](MapRect cand) {
      if (cand.w > 0 && cand.h > 0 && cand.contains(peak) && cand.area() > best_area) {
        best = cand;
        best_area = cand.area();
      }
    };
    if (peak.x >= f.right()) consider({f.right(), box.y, box.right() - f.right(), box.h});
    if (peak.x < f.x) consider({box.x, box.y, f.x - box.x, box.h});
    if (peak.y >= f.bottom()) consider({box.x, f.bottom(), box.w, box.bottom() - f.bottom()});
    if (peak.y < f.y) consider({box.x, box.y, box.w, f.y - box.y});
    if (best_area < 0) throw DataError("peak cell lies inside a forbidden region");
    box = best;
  }
}

enum class BoxFit { kTooSmall, kInRange, kTooLarge };

class AdaptiveSearch {
 public:
  AdaptiveSearch(const PriorityGrid& grid, const SelectionConfig& cfg)
      : grid_(grid), cfg_(cfg), min_area_(cfg.effective_min_area()),
        max_area_(cfg.effective_max_area()) {}

  // Finds one region on `filtered` around `peak`. `sorted` holds the
  // percentile domain values in ascending order.
  SelectedRegion run(const FloatGrid& filtered, const std::vector<float>& sorted, Cell peak,
                     std::span<const MapRect> forbidden) const {
    double lo = cfg_.tau_low;
    double hi = cfg_.tau_high;
    bool saw_small = false;
    bool saw_large = false;
    MapRect last_small{};
    double last_small_tau = 0;
    int iters = 0;
    std::vector<BisectionProbe> probes;
    while (iters < cfg_.bisection_max_iters) {
      const double mid = (lo + hi) / 2;
      ++iters;
      const MapRect box = box_at(filtered, sorted, mid, peak, forbidden);
      const BoxFit fit = classify(box);
      probes.push_back({mid, map_to_slide(box, grid_.geometry).area()});
      if (fit == BoxFit::kInRange) {
        return finish(box, peak, mid, iters, Fallback::kNone, std::move(probes));
      }
      if (fit == BoxFit::kTooLarge) {
        saw_large = true;
        lo = mid;
      } else {
        saw_small = true;
        last_small = box;
        last_small_tau = mid;
        hi = mid;
      }
      if (hi - lo < cfg_.bisection_tol) break;
    }
    if (!saw_large) {
      // Every probe was too small: take the largest island reachable in range.
      const MapRect box = box_at(filtered, sorted, lo, peak, forbidden);
      const Fallback f = classify(box) == BoxFit::kInRange ? Fallback::kNone
                                                            : Fallback::kUndersized;
      return finish(box, peak, lo, iters, f, std::move(probes));
    }
    if (saw_small) {
      return finish(last_small, peak, last_small_tau, iters, Fallback::kUndersized,
                    std::move(probes));
    }
    return finish(clip_square(peak, forbidden), peak, hi, iters, Fallback::kClipped,
                  std::move(probes));
  }

 private:
  MapRect box_at(const FloatGrid& filtered, const std::vector<float>& sorted, double tau,
                 Cell peak, std::span<const MapRect> forbidden) const {
    const float thr = sorted[nearest_rank(tau, sorted.size()) - 1];
    Mask mask(filtered.width(), filtered.height(), 0);
    for (int y = 0; y < filtered.height(); ++y) {
      for (int x = 0; x < filtered.width(); ++x) {
        const float v = filtered(x, y);
        mask(x, y) = (v >= thr && v > 0.0f) ? 1 : 0;
      }
    }
    return trim_box(connected_component(mask, peak).bounding_box, forbidden, peak);
  }

  BoxFit classify(const MapRect& box) const {
    const double area = map_to_slide(box, grid_.geometry).area();
    if (area < min_area_) return BoxFit::kTooSmall;
    if (area > max_area_) return BoxFit::kTooLarge;
    return BoxFit::kInRange;
  }

  // Largest map-aligned square within max_area, centered on the peak and
  // translated inward at the map border.
  MapRect clip_square(Cell peak, std::span<const MapRect> forbidden) const {
    const GridGeometry& geo = grid_.geometry;
    int side = static_cast<int>(std::floor(std::sqrt(max_area_) / geo.map_stride()));
    side = std::max(side, 1);
    const int w = std::min(side, geo.map_width());
    const int h = std::min(side, geo.map_height());
    const int x = std::clamp(peak.x - w / 2, 0, geo.map_width() - w);
    const int y = std::clamp(peak.y - h / 2, 0, geo.map_height() - h);
    return trim_box(MapRect{x, y, w, h}, forbidden, peak);
  }

  SelectedRegion finish(const MapRect& box, Cell peak, double tau, int iters,
                        Fallback fallback, std::vector<BisectionProbe> probes) const {
    SelectedRegion s;
    s.cells = box;
    s.region = map_to_slide(box, grid_.geometry);
    s.peak = peak;
    s.tau = tau;
    s.iterations = iters;
    s.fallback = fallback;
    s.probes = std::move(probes);
    return s;
  }

  const PriorityGrid& grid_;
  const SelectionConfig& cfg_;
  double min_area_;
  double max_area_;
};

}  // namespace

SelectionOutcome select_adaptive(const PriorityGrid& grid, const SlideAnnotations& state,
                                 const SelectionConfig& cfg) {
  check_inputs(grid, state, cfg);
  const int mw = grid.values.width();
  const int mh = grid.values.height();
  FloatGrid work = working_priority(grid, state, cfg);
  Mask zeroed = cfg.allow_oversample ? Mask(mw, mh, 0) : state.mask();
  std::vector<MapRect> forbidden;
  if (!cfg.allow_oversample) forbidden = state.rects();

  const AdaptiveSearch search(grid, cfg);
  SelectionOutcome out;
  for (int j = 0; j < cfg.count; ++j) {
    FloatGrid filtered = median_filter_3x3(work);
    // Zeroed cells stay ineligible even where the filter pulls in neighbors.
    Cell peak;
    float best = 0.0f;
    for (int y = 0; y < mh; ++y) {
      for (int x = 0; x < mw; ++x) {
        if (zeroed(x, y)) filtered(x, y) = 0.0f;
        if (filtered(x, y) > best) {
          best = filtered(x, y);
          peak = Cell{x, y};
        }
      }
    }
    if (!(best > 0.0f)) {
      out.exhausted = true;
      break;
    }
    std::vector<float> sorted;
    if (cfg.percentile_domain == PercentileDomain::kAllCells) {
      sorted.assign(filtered.values().begin(), filtered.values().end());
    } else {
      for (int y = 0; y < mh; ++y) {
        for (int x = 0; x < mw; ++x) {
          if (grid.tissue(x, y)) sorted.push_back(filtered(x, y));
        }
      }
      if (sorted.empty()) throw DataError("tissue-only percentile on a slide without tissue");
    }
    std::sort(sorted.begin(), sorted.end());

    SelectedRegion r = search.run(filtered, sorted, peak, forbidden);
    double score = 0;
    for (int y = r.cells.y; y < r.cells.bottom(); ++y) {
      for (int x = r.cells.x; x < r.cells.right(); ++x) {
        score += work(x, y);
        work(x, y) = 0.0f;
        zeroed(x, y) = 1;
      }
    }
    r.score = score;
    forbidden.push_back(r.cells);
    out.regions.push_back(r);
  }
  return out;
}

SelectionOutcome select_regions(const PriorityGrid& grid, const SlideAnnotations& state,
                                const SelectionConfig& cfg) {
  switch (cfg.method) {
    case Method::kRandom: return select_random(grid, state, cfg);
    case Method::kStandard: return select_standard(grid, state, cfg);
    case Method::kStandardNonSquare: return select_standard_nonsquare(grid, state, cfg);
    case Method::kAdaptive: return select_adaptive(grid, state, cfg);
  }
  throw UsageError("unknown selection method");
}

}  // namespace region_al
