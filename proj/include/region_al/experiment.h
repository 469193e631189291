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

#ifndef REGION_AL_EXPERIMENT_H_
#define REGION_AL_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "region_al/annotation_state.h"
#include "region_al/learner.h"
#include "region_al/selection.h"
#include "region_al/synthetic.h"

namespace region_al {

struct ExperimentConfig {
  GeneratorConfig generator;  // AL pool; test slides reuse all but `slides`
  int test_slides = 20;
  std::uint64_t pool_seed = 1;
  std::uint64_t test_seed = 2;
  bool include_tumor_free = false;
  SelectionConfig selection;
  LearnerConfig learner;
  int cycles = 10;
  int subsets = 5;
  int initial_k = 0;  // 0: use selection.count
  int repetitions = 3;
  std::uint64_t seed = 2024;
  double eval_threshold = 0.5;

  void validate() const;
};

struct Pool {
  std::vector<SyntheticSlide> train;  // the unlabeled AL pool
  std::vector<SyntheticSlide> test;   // held out for evaluation
};

// Generates the train/test pools; tumor-free train slides are dropped unless
// include_tumor_free is set.
Pool make_pool(const ExperimentConfig& cfg);

struct SlideSelection {
  int slide = 0;  // index into Pool::train
  SelectionOutcome outcome;
};

struct CycleRecord {
  int cycle = 0;
  double annotated_tissue_pct = 0;
  double miou_tumor = 0;
  std::vector<SlideSelection> selections;
};

struct RepetitionLog {
  int repetition = 0;
  std::uint64_t seed = 0;
  std::vector<CycleRecord> cycles;  // cycle 0 is the random initialization
  AnnotationState final_state;
};

struct CurvePoint {
  int cycle = 0;
  double area_mean = 0, area_min = 0, area_max = 0;
  double miou_mean = 0, miou_min = 0, miou_max = 0;
};

struct ExperimentLog {
  double full_annotation_miou = 0;
  std::vector<RepetitionLog> repetitions;
};

// Mean/min/max across repetitions per cycle index.
std::vector<CurvePoint> aggregate(const ExperimentLog& log);

// Deterministic 64-bit mixing of seed components.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

// Subset index for every pool slide. Slides are stratified by tumor presence
// and tumor-size tercile, shuffled within strata, then dealt round-robin, so
// subset sizes differ by at most one.
std::vector<int> stratified_subsets(std::span<const SyntheticSlide> pool, int subsets,
                                    std::uint64_t seed);

// Subset scheduled at AL cycle `cycle` (>= 1).
int scheduled_subset(int cycle, int subsets);

// Cycle 0: initial_k random regions per slide.
AnnotationState initialize_state(std::span<const SyntheticSlide> pool,
                                 const ExperimentConfig& cfg, std::uint64_t rep_seed);

// Predicts on the scheduled subset, selects regions and reveals them in
// `state`. Exhaustion is recorded in the outcomes.
std::vector<SlideSelection> run_cycle(std::span<const SyntheticSlide> pool,
                                      AnnotationState& state, const SurrogateLearner& learner,
                                      const ExperimentConfig& cfg, int cycle,
                                      std::span<const int> subset_of, std::uint64_t rep_seed);

// IoU of predicted and true tumor over tissue cells; 1 when both are empty.
double tumor_iou(const Mask& predicted, const Mask& truth, const Mask& tissue);

// Mean IoU over the tumor-containing slides of `test`; IoU is computed on
// tissue cells. Throws DataError when no test slide has tumor.
double evaluate(const SurrogateLearner& learner, std::span<const SyntheticSlide> test,
                double threshold);

double annotated_tissue_pct(const AnnotationState& state, std::span<const SyntheticSlide> pool);

// Evaluation of a learner fitted on the fully annotated pool.
double full_annotation_miou(std::span<const SyntheticSlide> pool,
                            std::span<const SyntheticSlide> test, const LearnerConfig& cfg,
                            double threshold);

RepetitionLog run_repetition(const ExperimentConfig& cfg, const Pool& pool, int repetition);

ExperimentLog run_experiment(const ExperimentConfig& cfg, const Pool& pool);
ExperimentLog run_experiment(const ExperimentConfig& cfg);

// Worker count: REGION_AL_THREADS if set, else hardware concurrency.
int worker_threads();

// Runs fn(0..n-1) on up to worker_threads() threads. Exceptions are
// rethrown on the caller's thread.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace region_al

#endif  // REGION_AL_EXPERIMENT_H_
