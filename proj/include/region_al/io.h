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


#ifndef REGION_AL_IO_H_
#define REGION_AL_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "region_al/grid.h"
#include "region_al/selection.h"
#include "region_al/synthetic.h"

namespace region_al {

// Binary grid file: "PFG1", then uint32 width, height, stride, kind, then
// width*height float32 values, row-major. Everything little-endian.
enum class ValueKind : std::uint32_t {
  kProbability = 0,
  kPriority = 1,
  kMask = 2,
  kFeature = 3,
};

std::string_view to_string(ValueKind k);

struct GridFile {
  GridGeometry geometry;
  ValueKind kind = ValueKind::kFeature;
  FloatGrid values;
};

inline constexpr std::size_t kGridHeaderBytes = 20;

// Throws DataError on bad magic, unknown kind, dimension overflow, a payload
// of the wrong size or mask values other than 0 and 1. `source` prefixes
// the messages.
GridFile decode_grid(std::string_view bytes, const std::string& source = "grid");
std::string encode_grid(const GridFile& grid);

GridFile read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const GridFile& grid);

GridFile mask_file(const GridGeometry& geo, const Mask& mask);
Mask to_mask(const GridFile& grid);

// A slide as three grid files: <id>_feature.pfg, <id>_tumor.pfg and
// <id>_tissue.pfg. read_slide validates tumor within tissue.
void write_slide(const std::filesystem::path& dir, const SyntheticSlide& slide);
SyntheticSlide read_slide(const std::filesystem::path& dir, const std::string& id);

// One selected region as stored in a region list.
struct RegionRow {
  std::string slide_id;
  int cycle = 0;
  Method method = Method::kStandard;
  double cx = 0, cy = 0, w = 0, h = 0;  // slide pixels
  double score_or_tau = 0;              // tau for adaptive, window score otherwise
  Fallback fallback = Fallback::kNone;

  friend bool operator==(const RegionRow&, const RegionRow&) = default;
};

RegionRow make_region_row(const std::string& slide_id, int cycle, Method method,
                          const SelectedRegion& r);

std::string format_regions(std::span<const RegionRow> rows);
std::vector<RegionRow> parse_regions(std::string_view text, const std::string& source = "regions");

struct MetricsRow {
  int repetition = 0;
  int cycle = 0;
  double annotated_tissue_pct = 0;
  double miou_tumor = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

std::string format_metrics(std::span<const MetricsRow> rows);
std::vector<MetricsRow> parse_metrics(std::string_view text, const std::string& source = "metrics");

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s, const std::string& what);
long long parse_int(std::string_view s, const std::string& what);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace region_al

#endif  // REGION_AL_IO_H_
