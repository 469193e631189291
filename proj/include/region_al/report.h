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


#ifndef REGION_AL_REPORT_H_
#define REGION_AL_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "region_al/experiment.h"
#include "region_al/io.h"

namespace region_al {

// Mean/min/max over repetitions for every cycle present in all of them.
std::vector<CurvePoint> aggregate_metrics(std::span<const MetricsRow> rows);

// Annotated area at which the mean curve first reaches `target_miou`, linearly
// interpolated between the bracketing cycles. nullopt when never reached.
std::optional<double> area_at_target(std::span<const CurvePoint> curve, double target_miou);

struct CurveSeries {
  std::string label;
  std::vector<CurvePoint> curve;
};

// Line chart of mIoU against annotated tissue %, one mean line and min/max
// band per series, with a dashed reference line.
std::string render_svg(const std::string& title, std::span<const CurveSeries> series,
                       double reference_miou);

}  // namespace region_al

#endif  // REGION_AL_REPORT_H_
