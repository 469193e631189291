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

#include "region_al/learner.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace region_al {

namespace {

double median_in_place(std::vector<float>& v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), mid);
    m = (m + lower) / 2;
  }
  return m;
}

std::optional<ClassStats> robust_stats(std::vector<float>& values, double min_spread) {
  if (values.empty()) return std::nullopt;
  ClassStats s;
  s.count = static_cast<long long>(values.size());
  s.centroid = median_in_place(values);
  for (float& v : values) v = static_cast<float>(std::abs(v - s.centroid));
  s.spread = std::max(min_spread, 1.4826 * median_in_place(values));
  return s;
}

}  // namespace

double SurrogateLearner::probability(float feature) const {
  if (!normal_ && !tumor_) return 0.5;
  // Both distances share one scale so the decision boundary sits midway
  // between the centroids. With one class missing, its own spread is used.
  double scale = 0;
  if (normal_ && tumor_) {
    scale = std::sqrt(0.5 * (normal_->spread * normal_->spread + tumor_->spread * tumor_->spread));
  } else {
    scale = normal_ ? normal_->spread : tumor_->spread;
  }
  const auto distance = [&](const std::optional<ClassStats>& c) {
    return c ? std::abs(feature - c->centroid) / scale : cfg_.prior_distance;
  };
  const double contrast = distance(normal_) - distance(tumor_);
  return 1.0 / (1.0 + std::exp(-cfg_.steepness * contrast));
}

SurrogateLearner fit(const SurrogateLearner& base, std::span<const SyntheticSlide> slides,
                     const AnnotationState& state) {
  if (state.size() != slides.size()) {
    throw DataError("annotation state and slide pool sizes differ");
  }
  std::vector<float> normal;
  std::vector<float> tumor;
  for (std::size_t i = 0; i < slides.size(); ++i) {
    const SyntheticSlide& s = slides[i];
    const Mask& annotated = state[i].mask();
    if (!annotated.same_shape(s.feature)) throw DataError("annotation mask shape mismatch");
    for (int y = 0; y < s.feature.height(); ++y) {
      for (int x = 0; x < s.feature.width(); ++x) {
        if (!annotated(x, y)) continue;
        (s.tumor(x, y) ? tumor : normal).push_back(s.feature(x, y));
      }
    }
  }
  SurrogateLearner out(base.cfg_);
  out.normal_ = robust_stats(normal, base.cfg_.min_spread);
  out.tumor_ = robust_stats(tumor, base.cfg_.min_spread);
  return out;
}

ProbabilityGrid predict(const SurrogateLearner& learner, const SyntheticSlide& slide) {
  ProbabilityGrid p{slide.geometry, FloatGrid(slide.feature.width(), slide.feature.height())};
  for (int y = 0; y < slide.feature.height(); ++y) {
    for (int x = 0; x < slide.feature.width(); ++x) {
      p.values(x, y) =
          slide.tissue(x, y) ? static_cast<float>(learner.probability(slide.feature(x, y)))
                             : 0.0f;
    }
  }
  return p;
}

}  // namespace region_al
