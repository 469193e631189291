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


#include "region_al/report.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "region_al/error.h"

namespace region_al {

std::vector<CurvePoint> aggregate_metrics(std::span<const MetricsRow> rows) {
  std::map<int, std::map<int, const MetricsRow*>> by_rep;
  for (const MetricsRow& r : rows) {
    if (!by_rep[r.repetition].emplace(r.cycle, &r).second) {
      throw DataError("duplicate row for repetition " + std::to_string(r.repetition) +
                      ", cycle " + std::to_string(r.cycle));
    }
  }
  std::vector<CurvePoint> curve;
  if (by_rep.empty()) return curve;
  for (const auto& [cycle, first] : by_rep.begin()->second) {
    CurvePoint p;
    p.cycle = cycle;
    p.area_min = p.miou_min = 1e300;
    p.area_max = p.miou_max = -1e300;
    int n = 0;
    for (const auto& [rep, cycles] : by_rep) {
      const auto it = cycles.find(cycle);
      if (it == cycles.end()) break;
      const MetricsRow& r = *it->second;
      p.area_mean += r.annotated_tissue_pct;
      p.miou_mean += r.miou_tumor;
      p.area_min = std::min(p.area_min, r.annotated_tissue_pct);
      p.area_max = std::max(p.area_max, r.annotated_tissue_pct);
      p.miou_min = std::min(p.miou_min, r.miou_tumor);
      p.miou_max = std::max(p.miou_max, r.miou_tumor);
      ++n;
    }
    if (n != static_cast<int>(by_rep.size())) continue;
    p.area_mean /= n;
    p.miou_mean /= n;
    curve.push_back(p);
  }
  return curve;
}

std::optional<double> area_at_target(std::span<const CurvePoint> curve, double target_miou) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const CurvePoint& b = curve[i];
    if (b.miou_mean < target_miou) continue;
    if (i == 0) return b.area_mean;
    const CurvePoint& a = curve[i - 1];
    const double t = (target_miou - a.miou_mean) / (b.miou_mean - a.miou_mean);
    return a.area_mean + t * (b.area_mean - a.area_mean);
  }
  return std::nullopt;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& title, std::span<const CurveSeries> series,
                       double reference_miou) {
  constexpr double W = 640, H = 420, L = 60, R = 150, T = 36, B = 50;
  double xmax = 0, ymin = std::min(reference_miou, 1.0), ymax = reference_miou;
  for (const CurveSeries& s : series) {
    for (const CurvePoint& p : s.curve) {
      xmax = std::max(xmax, p.area_max);
      ymin = std::min(ymin, p.miou_min);
      ymax = std::max(ymax, p.miou_max);
    }
  }
  xmax = xmax > 0 ? xmax * 1.05 : 1.0;
  ymin = std::max(0.0, ymin - 0.02);
  ymax = std::min(1.0, ymax + 0.02);
  if (ymax <= ymin) ymax = ymin + 0.05;
  const auto px = [&](double x) { return L + (W - L - R) * x / xmax; };
  const auto py = [&](double y) { return H - B - (H - T - B) * (y - ymin) / (ymax - ymin); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
         num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  out += "<line x1=\"" + num(L) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(W - R) +
         "\" y2=\"" + num(H - B) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(L) + "\" y1=\"" + num(T) + "\" x2=\"" + num(L) + "\" y2=\"" +
         num(H - B) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmax * i / 5, yv = ymin + (ymax - ymin) * i / 5;
    out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(H - B + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + num(xv) + "</text>\n";
    out += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(yv) + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">" + num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num((L + W - R) / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">annotated tissue (%)</text>\n";
  out += "<text x=\"14\" y=\"" + num((T + H - B) / 2) + "\" font-size=\"12\" " +
         "text-anchor=\"middle\" transform=\"rotate(-90 14 " + num((T + H - B) / 2) +
         ")\">mIoU (tumor)</text>\n";
  out += "<line x1=\"" + num(L) + "\" y1=\"" + num(py(reference_miou)) + "\" x2=\"" +
         num(W - R) + "\" y2=\"" + num(py(reference_miou)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const CurveSeries& s = series[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    if (!s.curve.empty()) {
      std::string band;
      for (const CurvePoint& p : s.curve) {
        band += num(px(p.area_mean)) + "," + num(py(p.miou_max)) + " ";
      }
      for (auto it = s.curve.rbegin(); it != s.curve.rend(); ++it) {
        band += num(px(it->area_mean)) + "," + num(py(it->miou_min)) + " ";
      }
      band.pop_back();
      out += "<polygon points=\"" + band + "\" fill=\"" + color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
      std::string line;
      for (const CurvePoint& p : s.curve) {
        line += num(px(p.area_mean)) + "," + num(py(p.miou_mean)) + " ";
      }
      line.pop_back();
      out += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
    }
    const double ly = T + 16 + 18.0 * static_cast<double>(i);
    out += "<line x1=\"" + num(W - R + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(W - R + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(W - R + 38) + "\" y=\"" + num(ly + 4) + "\" font-size=\"11\">" +
           escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace region_al
