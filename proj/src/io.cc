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


#include "region_al/io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "region_al/error.h"

namespace region_al {

namespace fs = std::filesystem;

std::string_view to_string(ValueKind k) {
  switch (k) {
    case ValueKind::kProbability: return "probability";
    case ValueKind::kPriority: return "priority";
    case ValueKind::kMask: return "mask";
    case ValueKind::kFeature: return "feature";
  }
  return "?";
}

namespace {

constexpr char kMagic[4] = {'P', 'F', 'G', '1'};
constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 31;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Lines without terminators; a final newline does not add an empty line.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line + 1) + ": ";
}

Fallback parse_fallback(std::string_view s, const std::string& where) {
  if (s == "none") return Fallback::kNone;
  if (s == "undersized") return Fallback::kUndersized;
  if (s == "clipped") return Fallback::kClipped;
  throw DataError(where + "unknown fallback flag '" + std::string(s) + "'");
}

}  // namespace

GridFile decode_grid(std::string_view bytes, const std::string& source) {
  if (bytes.size() < kGridHeaderBytes) {
    throw DataError(source + ": truncated header: expected " + std::to_string(kGridHeaderBytes) +
                    " bytes, got " + std::to_string(bytes.size()));
  }
  if (bytes.substr(0, 4) != std::string_view(kMagic, 4)) {
    throw DataError(source + ": bad magic, not a PFG1 grid file");
  }
  const std::uint32_t w = get_u32(bytes, 4);
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t stride = get_u32(bytes, 12);
  const std::uint32_t kind = get_u32(bytes, 16);
  if (kind > 3) throw DataError(source + ": unknown value kind " + std::to_string(kind));
  if (w == 0 || h == 0 || stride == 0) {
    throw DataError(source + ": zero width, height or stride");
  }
  const std::uint64_t payload = std::uint64_t{w} * h * 4;
  if (w > (1u << 24) || h > (1u << 24) || stride > (1u << 24) || payload > kMaxPayload) {
    throw DataError(source + ": dimension overflow (" + std::to_string(w) + " x " +
                    std::to_string(h) + ", stride " + std::to_string(stride) + ")");
  }
  const std::uint64_t actual = bytes.size() - kGridHeaderBytes;
  if (actual != payload) {
    throw DataError(source + ": " + (actual < payload ? "truncated payload" : "trailing bytes") +
                    ": expected " + std::to_string(payload) + " bytes, got " +
                    std::to_string(actual));
  }

  GridFile g;
  g.kind = static_cast<ValueKind>(kind);
  g.geometry = GridGeometry::from_map(static_cast<int>(w), static_cast<int>(h),
                                      static_cast<int>(stride));
  g.values = FloatGrid(static_cast<int>(w), static_cast<int>(h));
  auto out = g.values.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::bit_cast<float>(get_u32(bytes, kGridHeaderBytes + 4 * i));
  }
  if (g.kind == ValueKind::kMask) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] != 0.0f && out[i] != 1.0f) {
        throw DataError(source + ": mask value " + format_double(out[i]) + " at cell (" +
                        std::to_string(i % w) + ", " + std::to_string(i / w) +
                        ") is neither 0 nor 1");
      }
    }
  }
  return g;
}

std::string encode_grid(const GridFile& grid) {
  const GridGeometry& geo = grid.geometry;
  if (!grid.values.same_shape(geo.map_width(), geo.map_height())) {
    throw DataError("grid values do not match the geometry");
  }
  std::string out;
  out.reserve(kGridHeaderBytes + 4 * grid.values.size());
  out.append(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(geo.map_width()));
  put_u32(out, static_cast<std::uint32_t>(geo.map_height()));
  put_u32(out, static_cast<std::uint32_t>(geo.map_stride()));
  put_u32(out, static_cast<std::uint32_t>(grid.kind));
  for (float v : grid.values.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

GridFile read_grid(const fs::path& path) { return decode_grid(read_file(path), path.string()); }

void write_grid(const fs::path& path, const GridFile& grid) {
  write_file_atomic(path, encode_grid(grid));
}

GridFile mask_file(const GridGeometry& geo, const Mask& mask) {
  GridFile g{geo, ValueKind::kMask, FloatGrid(mask.width(), mask.height())};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    g.values.values()[i] = mask.values()[i] ? 1.0f : 0.0f;
  }
  return g;
}

Mask to_mask(const GridFile& grid) {
  Mask m(grid.values.width(), grid.values.height());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const float v = grid.values.values()[i];
    if (v != 0.0f && v != 1.0f) throw DataError("mask value is neither 0 nor 1");
    m.values()[i] = v == 1.0f ? 1 : 0;
  }
  return m;
}

void write_slide(const fs::path& dir, const SyntheticSlide& slide) {
  write_grid(dir / (slide.id + "_feature.pfg"),
             GridFile{slide.geometry, ValueKind::kFeature, slide.feature});
  write_grid(dir / (slide.id + "_tumor.pfg"), mask_file(slide.geometry, slide.tumor));
  write_grid(dir / (slide.id + "_tissue.pfg"), mask_file(slide.geometry, slide.tissue));
}

SyntheticSlide read_slide(const fs::path& dir, const std::string& id) {
  const GridFile feature = read_grid(dir / (id + "_feature.pfg"));
  const GridFile tumor = read_grid(dir / (id + "_tumor.pfg"));
  const GridFile tissue = read_grid(dir / (id + "_tissue.pfg"));
  if (tumor.kind != ValueKind::kMask || tissue.kind != ValueKind::kMask) {
    throw DataError("slide " + id + ": tumor and tissue files must be masks");
  }
  if (!(feature.geometry == tumor.geometry) || !(feature.geometry == tissue.geometry)) {
    throw DataError("slide " + id + ": grid files disagree on dimensions");
  }
  SyntheticSlide s{id, feature.geometry, feature.values, to_mask(tumor), to_mask(tissue)};
  validate_slide(s);
  return s;
}

RegionRow make_region_row(const std::string& slide_id, int cycle, Method method,
                          const SelectedRegion& r) {
  RegionRow row;
  row.slide_id = slide_id;
  row.cycle = cycle;
  row.method = method;
  row.cx = r.region.cx;
  row.cy = r.region.cy;
  row.w = r.region.w;
  row.h = r.region.h;
  row.score_or_tau = method == Method::kAdaptive ? r.tau : r.score;
  row.fallback = r.fallback;
  return row;
}

static constexpr std::string_view kRegionHeader =
    "slide_id,cycle,method,cx,cy,w,h,score_or_tau,fallback";
static constexpr std::string_view kMetricsHeader =
    "repetition,cycle,annotated_tissue_pct,miou_tumor";

std::string format_regions(std::span<const RegionRow> rows) {
  std::string out(kRegionHeader);
  out += '\n';
  for (const RegionRow& r : rows) {
    if (r.slide_id.empty() || r.slide_id.find_first_of(",\n\r\"") != std::string::npos) {
      throw DataError("slide id '" + r.slide_id + "' is empty or contains a delimiter");
    }
    out += r.slide_id;
    out += ',' + std::to_string(r.cycle);
    out += ',';
    out += to_string(r.method);
    for (double v : {r.cx, r.cy, r.w, r.h, r.score_or_tau}) out += ',' + format_double(v);
    out += ',';
    out += to_string(r.fallback);
    out += '\n';
  }
  return out;
}

std::vector<RegionRow> parse_regions(std::string_view text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kRegionHeader) {
    throw DataError(source + ": missing or wrong header, expected '" + std::string(kRegionHeader) +
                    "'");
  }
  std::vector<RegionRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = at_line(source, i);
    const auto f = split(lines[i], ',');
    if (f.size() != 9) {
      throw DataError(where + "expected 9 fields, got " + std::to_string(f.size()));
    }
    RegionRow r;
    r.slide_id = std::string(f[0]);
    if (r.slide_id.empty()) throw DataError(where + "empty slide id");
    r.cycle = static_cast<int>(parse_int(f[1], where + "cycle"));
    try {
      r.method = parse_method(f[2]);
    } catch (const UsageError& e) {
      throw DataError(where + e.what());
    }
    r.cx = parse_double(f[3], where + "cx");
    r.cy = parse_double(f[4], where + "cy");
    r.w = parse_double(f[5], where + "w");
    r.h = parse_double(f[6], where + "h");
    r.score_or_tau = parse_double(f[7], where + "score_or_tau");
    r.fallback = parse_fallback(f[8], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_metrics(std::span<const MetricsRow> rows) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.repetition) + ',' + std::to_string(r.cycle) + ',' +
           format_double(r.annotated_tissue_pct) + ',' + format_double(r.miou_tumor) + '\n';
  }
  return out;
}

std::vector<MetricsRow> parse_metrics(std::string_view text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kMetricsHeader) {
    throw DataError(source + ": missing or wrong header, expected '" +
                    std::string(kMetricsHeader) + "'");
  }
  std::vector<MetricsRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = at_line(source, i);
    const auto f = split(lines[i], ',');
    if (f.size() != 4) {
      throw DataError(where + "expected 4 fields, got " + std::to_string(f.size()));
    }
    MetricsRow r;
    r.repetition = static_cast<int>(parse_int(f[0], where + "repetition"));
    r.cycle = static_cast<int>(parse_int(f[1], where + "cycle"));
    r.annotated_tissue_pct = parse_double(f[2], where + "annotated_tissue_pct");
    r.miou_tumor = parse_double(f[3], where + "miou_tumor");
    rows.push_back(r);
  }
  return rows;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw DataError("cannot serialize non-finite value");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& what) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(what + ": '" + std::string(s) + "' is not a finite number");
  }
  return v;
}

long long parse_int(std::string_view s, const std::string& what) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError(what + ": '" + std::string(s) + "' is not an integer");
  }
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

}  // namespace region_al
