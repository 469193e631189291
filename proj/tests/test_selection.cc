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


#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "region_al/error.h"
#include "region_al/integral_table.h"
#include "region_al/selection.h"
#include "region_al/synthetic.h"

using namespace region_al;

namespace {

PriorityGrid make_grid(FloatGrid values, int stride = 256) {
  const int w = values.width(), h = values.height();
  return PriorityGrid(GridGeometry::from_map(w, h, stride), std::move(values), Mask(w, h, 1));
}

SelectionConfig config(Method m, int side_cells, int k) {
  SelectionConfig c;
  c.method = m;
  c.region_side = 256LL * side_cells;
  c.count = k;
  return c;
}

FloatGrid gaussian(int w, int h, double cx, double cy, double sx, double sy) {
  FloatGrid g(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = std::exp(-(x - cx) * (x - cx) / (2 * sx * sx) -
                                (y - cy) * (y - cy) / (2 * sy * sy));
      g(x, y) = static_cast<float>(std::round(v * 65536) / 65536);
    }
  return g;
}

std::vector<MapRect> cells_of(const SelectionOutcome& o) {
  std::vector<MapRect> out;
  for (const auto& r : o.regions) out.push_back(r.cells);
  return out;
}

void check_disjoint(const SelectionOutcome& o, const SlideAnnotations& ann) {
  for (std::size_t i = 0; i < o.regions.size(); ++i) {
    for (std::size_t j = i + 1; j < o.regions.size(); ++j) {
      CHECK_FALSE(oracle::interiors_meet(o.regions[i].cells, o.regions[j].cells));
    }
    for (const MapRect& a : ann.rects()) CHECK_FALSE(oracle::interiors_meet(o.regions[i].cells, a));
  }
}

std::vector<std::pair<int, int>> shape_cells(std::int64_t l, int s) {
  std::vector<std::pair<int, int>> out;
  for (const auto& c : enumerate_candidates(l, s)) {
    out.push_back({static_cast<int>(c.w / s), static_cast<int>(c.h / s)});
  }
  return out;
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::kRandom, Method::kStandard, Method::kStandardNonSquare,
                   Method::kAdaptive}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("sliding"), UsageError);
}

TEST_CASE("selection config validation") {
  const auto geo = GridGeometry::from_map(64, 64, 256);
  SelectionConfig c;
  CHECK_NOTHROW(c.validate(geo));
  CHECK(c.effective_min_area() == 2048.0 * 2048.0);
  CHECK(c.effective_max_area() == 6144.0 * 6144.0);
  c.region_side = 4000;
  try {
    c.validate(geo);
    FAIL("accepted");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("multiple of map_stride") != std::string::npos);
  }
  c = SelectionConfig{};
  c.count = 0;
  CHECK_THROWS_AS(c.validate(geo), UsageError);
  c = SelectionConfig{};
  c.tau_low = 99.5;
  c.tau_high = 99;
  CHECK_THROWS_AS(c.validate(geo), UsageError);
  c = SelectionConfig{};
  c.min_area = 10;
  c.max_area = 5;
  CHECK_THROWS_AS(c.validate(geo), UsageError);
}

TEST_CASE("candidate shapes") {
  const auto big = enumerate_candidates(8192, 256);
  CHECK(big.size() == 33);
  std::set<std::int64_t> widths;
  for (const auto& c : big) {
    if (c.w <= c.h) widths.insert(c.w);
    CHECK(std::llabs(c.w * c.h - 8192LL * 8192) <= 8192LL * 256);
    CHECK(c.w % 256 == 0);
    CHECK(c.h % 256 == 0);
  }
  CHECK(widths.size() == 17);
  CHECK(*widths.begin() == 4096);
  CHECK(*widths.rbegin() == 8192);
  const auto small = enumerate_candidates(4096, 256);
  CHECK(small.size() == 17);
  CHECK(std::find(small.begin(), small.end(), CandidateShape{4096, 4096}) != small.end());
  CHECK(std::find(small.begin(), small.end(), CandidateShape{2048, 8192}) != small.end());
  CHECK(std::find(small.begin(), small.end(), CandidateShape{8192, 2048}) != small.end());
}

TEST_CASE("nms over rectangles") {
  const std::vector<ScoredRect> same{{MapRect{0, 0, 4, 4}, 2}, {MapRect{0, 0, 4, 4}, 1}};
  CHECK(nms_disjoint(same, 5, {}) == std::vector<std::size_t>{0});

  std::vector<ScoredRect> tiles;
  for (int i = 0; i < 6; ++i) tiles.push_back({MapRect{4 * i, 0, 4, 4}, 10.0 - i});
  CHECK(nms_disjoint(tiles, 4, {}).size() == 4);
  CHECK(nms_disjoint(tiles, 10, {}).size() == 6);
  const std::vector<MapRect> forbidden{MapRect{2, 2, 4, 4}};
  CHECK(nms_disjoint(tiles, 10, forbidden) == std::vector<std::size_t>{2, 3, 4, 5});

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> pos(0, 30), len(1, 8);
  for (int t = 0; t < 200; ++t) {
    std::vector<ScoredRect> soup;
    for (int i = 0; i < 40; ++i) soup.push_back({MapRect{pos(rng), pos(rng), len(rng), len(rng)}, 0});
    const std::vector<MapRect> block{MapRect{pos(rng), pos(rng), len(rng), len(rng)}};
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < soup.size() && want.size() < 7; ++i) {
      bool ok = !oracle::interiors_meet(soup[i].rect, block[0]);
      for (std::size_t j : want) ok = ok && !oracle::interiors_meet(soup[i].rect, soup[j].rect);
      if (ok) want.push_back(i);
    }
    REQUIRE(nms_disjoint(soup, 7, block) == want);
  }
}

TEST_CASE("random selection") {
  const auto geo = GridGeometry::from_map(32, 32, 256);
  SlideAnnotations none(geo);
  SelectionConfig c = config(Method::kRandom, 8, 3);
  c.rng_seed = 5;

  const PriorityGrid bare(geo, FloatGrid(32, 32), Mask(32, 32, 0));
  const SelectionOutcome empty = select_random(bare, none, c);
  CHECK(empty.regions.empty());
  CHECK(empty.exhausted);

  const PriorityGrid full = make_grid(FloatGrid(32, 32, 0.5f));
  c.count = 1;
  const SelectionOutcome one = select_random(full, none, c);
  REQUIRE(one.regions.size() == 1);
  CHECK(one.regions[0].region.w == 2048);
  CHECK(one.regions[0].region.h == 2048);
  CHECK(tissue_fraction(one.regions[0].cells, full.tissue) == 1.0);

  SlideAnnotations ann(geo);
  ann.add_cells(MapRect{0, 0, 16, 32}, 0);
  c.count = 3;
  const SelectionOutcome a = select_random(full, ann, c);
  const SelectionOutcome b = select_random(full, ann, c);
  CHECK(cells_of(a) == cells_of(b));
  check_disjoint(a, ann);

  // Room for exactly two disjoint 8x8 windows besides the annotation.
  ann.add_cells(MapRect{16, 0, 16, 24}, 0);
  const SelectionOutcome tight = select_random(full, ann, c);
  CHECK(tight.regions.size() <= 2);
  CHECK(tight.exhausted);
}

TEST_CASE("standard selection") {
  const auto geo = GridGeometry::from_map(64, 64, 256);
  SlideAnnotations none(geo);

  SUBCASE("uniform grid picks top-left first") {
    const SelectionOutcome o = select_standard(make_grid(FloatGrid(64, 64, 0.5f)), none,
                                               config(Method::kStandard, 16, 4));
    REQUIRE(o.regions.size() == 4);
    CHECK(o.regions[0].cells == MapRect{0, 0, 16, 16});
    CHECK(o.regions[1].cells == MapRect{16, 0, 16, 16});
    check_disjoint(o, none);
  }
  SUBCASE("bump is centered") {
    const FloatGrid g = gaussian(64, 64, 30, 40, 3, 3);
    const SelectionOutcome o = select_standard(make_grid(g), none, config(Method::kStandard, 8, 1));
    const auto want = oracle::greedy_nms(g, Mask(64, 64, 0), {{8, 8}}, 1);
    REQUIRE(o.regions.size() == 1);
    CHECK(o.regions[0].cells == want[0]);
    CHECK(o.regions[0].cells.contains(Cell{30, 40}));
  }
  SUBCASE("matches the oracle with and without annotations") {
    std::mt19937_64 rng(64);
    for (int t = 0; t < 20; ++t) {
      const FloatGrid g = oracle::quantized_grid(64, 64, rng, t % 2 ? 65536 : 4);
      SlideAnnotations ann(geo);
      if (t % 3 == 0) ann.add_cells(MapRect{t, 2 * t, 12, 9}, 0);
      const SelectionOutcome o = select_standard(make_grid(g), ann, config(Method::kStandard, 16, 3));
      REQUIRE(cells_of(o) == oracle::greedy_nms(g, ann.mask(), {{16, 16}}, 3));
      check_disjoint(o, ann);
      for (const auto& r : o.regions) {
        FloatGrid zeroed = g;
        for (int y = 0; y < 64; ++y)
          for (int x = 0; x < 64; ++x)
            if (ann.mask()(x, y)) zeroed(x, y) = 0;
        CHECK(r.score == oracle::window_sum(zeroed, r.cells));
      }
    }
  }
  SUBCASE("window larger than grid") {
    CHECK_THROWS_AS(select_standard(make_grid(FloatGrid(8, 8)), SlideAnnotations(
                                        GridGeometry::from_map(8, 8, 256)),
                                    config(Method::kStandard, 16, 1)),
                    DataError);
  }
  SUBCASE("exhaustion") {
    SlideAnnotations ann(geo);
    ann.add_cells(MapRect{0, 0, 64, 50}, 0);
    const SelectionOutcome o = select_standard(make_grid(FloatGrid(64, 64, 0.5f)), ann,
                                               config(Method::kStandard, 16, 2));
    CHECK(o.regions.empty());
    CHECK(o.exhausted);
  }
  SUBCASE("oversampling re-selects annotated area") {
    const FloatGrid g = gaussian(64, 64, 20, 20, 4, 4);
    SlideAnnotations ann(geo);
    ann.add_cells(MapRect{12, 12, 16, 16}, 0);
    SelectionConfig c = config(Method::kStandard, 16, 1);
    c.allow_oversample = true;
    const SelectionOutcome o = select_standard(make_grid(g), ann, c);
    REQUIRE(o.regions.size() == 1);
    CHECK(o.regions[0].cells == MapRect{12, 12, 16, 16});
  }
}

TEST_CASE("non-square selection") {
  const auto geo = GridGeometry::from_map(32, 32, 256);
  SlideAnnotations none(geo);

  SUBCASE("isotropic bump prefers the square") {
    const FloatGrid g = gaussian(32, 32, 15.5, 15.5, 2.5, 2.5);
    const SelectionOutcome o = select_standard_nonsquare(make_grid(g), none,
                                                         config(Method::kStandardNonSquare, 8, 1));
    REQUIRE(o.regions.size() == 1);
    CHECK(o.regions[0].cells.w == 8);
    CHECK(o.regions[0].cells.h == 8);
  }
  SUBCASE("horizontal bar prefers a wide window") {
    FloatGrid g(32, 32, 0.0f);
    for (int x = 2; x < 30; ++x)
      for (int y = 14; y < 18; ++y) g(x, y) = 1.0f;
    const SelectionOutcome o = select_standard_nonsquare(make_grid(g), none,
                                                         config(Method::kStandardNonSquare, 8, 1));
    REQUIRE(o.regions.size() == 1);
    CHECK(o.regions[0].cells.w > o.regions[0].cells.h);
    CHECK(o.regions[0].score > 8 * 4);
  }
  SUBCASE("square-only candidate set reduces to standard") {
    std::mt19937_64 rng(9);
    const std::vector<CandidateShape> square{{2048, 2048}};
    for (int t = 0; t < 20; ++t) {
      const FloatGrid g = oracle::quantized_grid(32, 32, rng, t % 2 ? 65536 : 3);
      SlideAnnotations ann(geo);
      if (t % 2) ann.add_cells(MapRect{t, t / 2, 5, 7}, 0);
      const auto grid = make_grid(g);
      const SelectionOutcome a = select_standard(grid, ann, config(Method::kStandard, 8, 3));
      const SelectionOutcome b = select_standard_nonsquare(
          grid, ann, config(Method::kStandardNonSquare, 8, 3), square);
      REQUIRE(cells_of(a) == cells_of(b));
    }
  }
  SUBCASE("matches the oracle") {
    std::mt19937_64 rng(10);
    const auto shapes = shape_cells(2048, 256);
    for (int t = 0; t < 10; ++t) {
      const FloatGrid g = oracle::quantized_grid(32, 32, rng, t % 2 ? 65536 : 4);
      SlideAnnotations ann(geo);
      if (t % 3 == 1) ann.add_cells(MapRect{3 * t, 10, 6, 6}, 0);
      const SelectionOutcome o = select_standard_nonsquare(
          make_grid(g), ann, config(Method::kStandardNonSquare, 8, 3));
      REQUIRE(cells_of(o) == oracle::greedy_nms(g, ann.mask(), shapes, 3));
      check_disjoint(o, ann);
    }
  }
}

TEST_CASE("adaptive selection") {
  const auto geo = GridGeometry::from_map(64, 64, 256);
  SlideAnnotations none(geo);

  SUBCASE("all-zero map exhausts") {
    const SelectionOutcome o = select_adaptive(make_grid(FloatGrid(64, 64)), none,
                                               config(Method::kAdaptive, 16, 1));
    CHECK(o.regions.empty());
    CHECK(o.exhausted);
  }
  SUBCASE("isolated spike is filtered away") {
    FloatGrid g(64, 64, 0.0f);
    g(10, 10) = 1.0f;
    CHECK(select_adaptive(make_grid(g), none, config(Method::kAdaptive, 16, 1)).exhausted);
    // With a second structure the spike is skipped, not selected.
    const FloatGrid bump = gaussian(64, 64, 40, 40, 4, 4);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) g(x, y) = std::max(g(x, y), 0.9f * bump(x, y));
    const SelectionOutcome o = select_adaptive(make_grid(g), none, config(Method::kAdaptive, 16, 1));
    REQUIRE(o.regions.size() == 1);
    CHECK_FALSE(o.regions[0].cells.contains(Cell{10, 10}));
    CHECK(o.regions[0].cells.contains(Cell{40, 40}));
  }
  SUBCASE("plateau larger than the bounds is clipped") {
    const SelectionOutcome o = select_adaptive(make_grid(FloatGrid(64, 64, 0.7f)), none,
                                               config(Method::kAdaptive, 16, 1));
    REQUIRE(o.regions.size() == 1);
    const SelectedRegion& r = o.regions[0];
    CHECK(r.fallback == Fallback::kClipped);
    CHECK(r.cells.w == 24);
    CHECK(r.cells.h == 24);
    CHECK(r.cells.contains(r.peak));
    CHECK(r.region.area() <= 6144.0 * 6144.0);
    CHECK(r.tau >= 98);
    CHECK(r.tau <= 100);
  }
  SUBCASE("contract on hotspot maps") {
    PriorityMapConfig pm;
    pm.map_width = pm.map_height = 64;
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const PriorityGrid g = generate_priority_map(pm, seed);
      SlideAnnotations ann(g.geometry);
      if (seed % 2) ann.add_cells(MapRect{static_cast<int>(seed % 40), 20, 12, 12}, 0);
      SelectionConfig c = config(Method::kAdaptive, 8, 3);
      const SelectionOutcome a = select_adaptive(g, ann, c);
      const SelectionOutcome b = select_adaptive(g, ann, c);
      CHECK(cells_of(a) == cells_of(b));
      check_disjoint(a, ann);
      for (const SelectedRegion& r : a.regions) {
        CHECK(r.cells.contains(r.peak));
        CHECK_FALSE(ann.mask()(r.peak.x, r.peak.y));
        CHECK(r.iterations <= c.bisection_max_iters);
        CHECK(r.tau >= 98);
        CHECK(r.tau <= 100);
        if (r.fallback == Fallback::kNone) {
          CHECK(r.region.area() >= c.effective_min_area());
          CHECK(r.region.area() <= c.effective_max_area());
          ++ok;
        }
      }
    }
    CHECK(ok > 100);
  }
}
