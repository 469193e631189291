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

#include "region_al/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "region_al/filters.h"

namespace region_al {

void ExperimentConfig::validate() const {
  generator.validate();
  if (test_slides < 1) throw UsageError("test_slides must be >= 1");
  if (cycles < 0) throw UsageError("cycles must be >= 0");
  if (subsets < 1) throw UsageError("subsets must be >= 1");
  if (repetitions < 1) throw UsageError("repetitions must be >= 1");
  if (initial_k < 0) throw UsageError("initial_k must be >= 0");
  if (!(eval_threshold > 0.0 && eval_threshold < 1.0)) {
    throw UsageError("eval_threshold must lie in (0, 1)");
  }
  selection.validate(
      GridGeometry::from_map(generator.map_width, generator.map_height, generator.map_stride));
}

Pool make_pool(const ExperimentConfig& cfg) {
  cfg.validate();
  Pool pool;
  for (SyntheticSlide& s : generate_pool(cfg.generator, cfg.pool_seed)) {
    if (cfg.include_tumor_free || s.has_tumor()) pool.train.push_back(std::move(s));
  }
  GeneratorConfig test_gen = cfg.generator;
  test_gen.slides = cfg.test_slides;
  test_gen.id_prefix = "test";
  pool.test = generate_pool(test_gen, cfg.test_seed);
  if (cfg.subsets > static_cast<int>(pool.train.size())) {
    throw UsageError("subsets (" + std::to_string(cfg.subsets) + ") exceed the pool size (" +
                     std::to_string(pool.train.size()) + ")");
  }
  return pool;
}

std::vector<CurvePoint> aggregate(const ExperimentLog& log) {
  std::vector<CurvePoint> curve;
  if (log.repetitions.empty()) return curve;
  std::size_t cycles = log.repetitions.front().cycles.size();
  for (const auto& r : log.repetitions) cycles = std::min(cycles, r.cycles.size());
  for (std::size_t c = 0; c < cycles; ++c) {
    CurvePoint p;
    p.cycle = log.repetitions.front().cycles[c].cycle;
    p.area_min = p.miou_min = 1e300;
    p.area_max = p.miou_max = -1e300;
    for (const auto& r : log.repetitions) {
      const CycleRecord& rec = r.cycles[c];
      p.area_mean += rec.annotated_tissue_pct;
      p.miou_mean += rec.miou_tumor;
      p.area_min = std::min(p.area_min, rec.annotated_tissue_pct);
      p.area_max = std::max(p.area_max, rec.annotated_tissue_pct);
      p.miou_min = std::min(p.miou_min, rec.miou_tumor);
      p.miou_max = std::max(p.miou_max, rec.miou_tumor);
    }
    const auto n = static_cast<double>(log.repetitions.size());
    p.area_mean /= n;
    p.miou_mean /= n;
    curve.push_back(p);
  }
  return curve;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 finalizer applied to each component in turn.
  const auto step = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return step(step(step(a) ^ b) ^ c);
}

std::vector<int> stratified_subsets(std::span<const SyntheticSlide> pool, int subsets,
                                    std::uint64_t seed) {
  if (subsets < 1) throw UsageError("subsets must be >= 1");
  const int n = static_cast<int>(pool.size());
  std::vector<int> tumor_slides;
  for (int i = 0; i < n; ++i) {
    if (pool[i].has_tumor()) tumor_slides.push_back(i);
  }
  std::vector<double> fraction(static_cast<std::size_t>(n), 0.0);
  for (int i : tumor_slides) fraction[i] = pool[i].tumor_fraction();
  std::stable_sort(tumor_slides.begin(), tumor_slides.end(),
                   [&](int a, int b) { return fraction[a] < fraction[b]; });
  // Stratum 0: tumor-free; strata 1..3: tumor-size terciles.
  std::vector<int> stratum(static_cast<std::size_t>(n), 0);
  const int nt = static_cast<int>(tumor_slides.size());
  for (int r = 0; r < nt; ++r) stratum[tumor_slides[r]] = 1 + (3 * r) / nt;

  std::mt19937_64 rng(seed);
  std::vector<int> order;
  for (int s = 0; s <= 3; ++s) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (stratum[i] == s) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    order.insert(order.end(), members.begin(), members.end());
  }
  std::vector<int> subset_of(static_cast<std::size_t>(n), 0);
  for (int pos = 0; pos < n; ++pos) subset_of[order[pos]] = pos % subsets;
  return subset_of;
}

int scheduled_subset(int cycle, int subsets) {
  if (cycle < 1) throw UsageError("AL cycles are numbered from 1");
  if (subsets < 1) throw UsageError("subsets must be >= 1");
  return (cycle - 1) % subsets;
}

AnnotationState initialize_state(std::span<const SyntheticSlide> pool,
                                 const ExperimentConfig& cfg, std::uint64_t rep_seed) {
  AnnotationState state;
  state.reserve(pool.size());
  SelectionConfig init = cfg.selection;
  init.method = Method::kRandom;
  init.count = cfg.initial_k > 0 ? cfg.initial_k : cfg.selection.count;
  init.allow_oversample = false;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const SyntheticSlide& s = pool[i];
    SlideAnnotations ann(s.geometry);
    const PriorityGrid blank(s.geometry, FloatGrid(s.feature.width(), s.feature.height()),
                             s.tissue);
    init.rng_seed = mix_seed(rep_seed, 0, i);
    for (const SelectedRegion& r : select_random(blank, ann, init).regions) {
      ann.add(r.region, 0);
    }
    state.push_back(std::move(ann));
  }
  return state;
}

std::vector<SlideSelection> run_cycle(std::span<const SyntheticSlide> pool,
                                      AnnotationState& state, const SurrogateLearner& learner,
                                      const ExperimentConfig& cfg, int cycle,
                                      std::span<const int> subset_of, std::uint64_t rep_seed) {
  if (state.size() != pool.size() || subset_of.size() != pool.size()) {
    throw DataError("run_cycle: pool, state and schedule sizes differ");
  }
  const int subset = scheduled_subset(cycle, cfg.subsets);
  std::vector<SlideSelection> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (subset_of[i] != subset) continue;
    const SyntheticSlide& s = pool[i];
    const PriorityGrid priority = make_priority_grid(predict(learner, s), s.tissue);
    SelectionConfig sel = cfg.selection;
    sel.rng_seed = mix_seed(rep_seed, static_cast<std::uint64_t>(cycle), i);
    SelectionOutcome outcome = select_regions(priority, state[i], sel);
    for (const SelectedRegion& r : outcome.regions) state[i].add(r.region, cycle);
    out.push_back(SlideSelection{static_cast<int>(i), std::move(outcome)});
  }
  return out;
}

double tumor_iou(const Mask& predicted, const Mask& truth, const Mask& tissue) {
  if (!predicted.same_shape(truth) || !predicted.same_shape(tissue)) {
    throw DataError("tumor_iou: mask dimensions differ");
  }
  long long inter = 0;
  long long uni = 0;
  for (std::size_t c = 0; c < tissue.size(); ++c) {
    if (!tissue.values()[c]) continue;
    const bool pred = predicted.values()[c] != 0;
    const bool real = truth.values()[c] != 0;
    inter += (pred && real) ? 1 : 0;
    uni += (pred || real) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double evaluate(const SurrogateLearner& learner, std::span<const SyntheticSlide> test,
                double threshold) {
  double total = 0;
  int slides = 0;
  for (const SyntheticSlide& s : test) {
    if (!s.has_tumor()) continue;
    const ProbabilityGrid p = predict(learner, s);
    Mask predicted(s.feature.width(), s.feature.height(), 0);
    for (std::size_t c = 0; c < predicted.size(); ++c) {
      predicted.values()[c] = p.values.values()[c] >= threshold ? 1 : 0;
    }
    total += tumor_iou(predicted, s.tumor, s.tissue);
    ++slides;
  }
  if (slides == 0) throw DataError("evaluation set contains no tumor slide");
  return total / slides;
}

double annotated_tissue_pct(const AnnotationState& state, std::span<const SyntheticSlide> pool) {
  if (state.size() != pool.size()) throw DataError("annotation state and pool sizes differ");
  long long annotated = 0;
  long long tissue = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Mask& ann = state[i].mask();
    const Mask& t = pool[i].tissue;
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (t.values()[c]) {
        ++tissue;
        if (ann.values()[c]) ++annotated;
      }
    }
  }
  return tissue == 0 ? 0.0 : 100.0 * static_cast<double>(annotated) / static_cast<double>(tissue);
}

double full_annotation_miou(std::span<const SyntheticSlide> pool,
                            std::span<const SyntheticSlide> test, const LearnerConfig& cfg,
                            double threshold) {
  AnnotationState full;
  for (const SyntheticSlide& s : pool) {
    SlideAnnotations ann(s.geometry);
    ann.add_cells(MapRect{0, 0, s.geometry.map_width(), s.geometry.map_height()}, 0);
    full.push_back(std::move(ann));
  }
  return evaluate(fit(SurrogateLearner(cfg), pool, full), test, threshold);
}

RepetitionLog run_repetition(const ExperimentConfig& cfg, const Pool& pool, int repetition) {
  RepetitionLog log;
  log.repetition = repetition;
  log.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(repetition));
  const std::vector<int> subset_of = stratified_subsets(pool.train, cfg.subsets, log.seed);
  AnnotationState state = initialize_state(pool.train, cfg, log.seed);
  const SurrogateLearner base(cfg.learner);
  SurrogateLearner learner = fit(base, pool.train, state);
  log.cycles.push_back(CycleRecord{0, annotated_tissue_pct(state, pool.train),
                                   evaluate(learner, pool.test, cfg.eval_threshold), {}});
  for (int c = 1; c <= cfg.cycles; ++c) {
    auto selections = run_cycle(pool.train, state, learner, cfg, c, subset_of, log.seed);
    learner = fit(base, pool.train, state);
    log.cycles.push_back(CycleRecord{c, annotated_tissue_pct(state, pool.train),
                                     evaluate(learner, pool.test, cfg.eval_threshold),
                                     std::move(selections)});
  }
  log.final_state = std::move(state);
  return log;
}

ExperimentLog run_experiment(const ExperimentConfig& cfg, const Pool& pool) {
  cfg.validate();
  ExperimentLog log;
  log.full_annotation_miou =
      full_annotation_miou(pool.train, pool.test, cfg.learner, cfg.eval_threshold);
  log.repetitions.resize(static_cast<std::size_t>(cfg.repetitions));
  parallel_for(cfg.repetitions,
               [&](int r) { log.repetitions[r] = run_repetition(cfg, pool, r); });
  return log;
}

ExperimentLog run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, make_pool(cfg));
}

int worker_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REGION_AL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(n, 1);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int threads = std::min(worker_threads(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace region_al
