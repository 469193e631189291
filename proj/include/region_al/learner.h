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

#ifndef REGION_AL_LEARNER_H_
#define REGION_AL_LEARNER_H_

#include <optional>
#include <span>

#include "region_al/annotation_state.h"
#include "region_al/grid.h"
#include "region_al/synthetic.h"

namespace region_al {

struct LearnerConfig {
  double steepness = 3.0;
  // Normalized distance assumed for a class with no annotated cells.
  double prior_distance = 2.5;
  double min_spread = 0.02;
};

struct ClassStats {
  double centroid = 0;  // median feature
  double spread = 0;    // 1.4826 * MAD, floored at min_spread
  long long count = 0;
};

// Per-class robust centroid/spread model; p(tumor) is a logistic contrast of
// the normalized distances to the two centroids.
class SurrogateLearner {
 public:
  SurrogateLearner() = default;
  explicit SurrogateLearner(LearnerConfig cfg) : cfg_(cfg) {}

  const LearnerConfig& config() const { return cfg_; }
  const std::optional<ClassStats>& normal() const { return normal_; }
  const std::optional<ClassStats>& tumor() const { return tumor_; }

  double probability(float feature) const;

  friend SurrogateLearner fit(const SurrogateLearner& base,
                              std::span<const SyntheticSlide> slides,
                              const AnnotationState& state);

 private:
  LearnerConfig cfg_;
  std::optional<ClassStats> normal_;
  std::optional<ClassStats> tumor_;
};

// Fits on annotated cells only. Background cells inside annotated regions are
// negatives.
SurrogateLearner fit(const SurrogateLearner& base, std::span<const SyntheticSlide> slides,
                     const AnnotationState& state);

// Probability grid; background cells are forced to 0.
ProbabilityGrid predict(const SurrogateLearner& learner, const SyntheticSlide& slide);

}  // namespace region_al

#endif  // REGION_AL_LEARNER_H_
