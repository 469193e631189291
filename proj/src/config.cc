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


#include "region_al/config.h"

#include <functional>
#include <map>
#include <set>

#include "region_al/error.h"
#include "region_al/io.h"

namespace region_al {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, const ConfigEntry& e) {
  return source + ":" + std::to_string(e.line) + ": " + e.key;
}

// Value parsers rethrow as UsageError: a bad config is a usage problem.
template <typename F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

long long to_int(const ConfigEntry& e, const std::string& w) {
  return as_usage([&] { return parse_int(e.value, w); });
}

double to_double(const ConfigEntry& e, const std::string& w) {
  return as_usage([&] { return parse_double(e.value, w); });
}

bool to_bool(const ConfigEntry& e, const std::string& w) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw UsageError(w + ": expected true or false, got '" + e.value + "'");
}

std::vector<std::string_view> list_of(const ConfigEntry& e, const std::string& w) {
  std::vector<std::string_view> out;
  std::string_view rest = e.value;
  while (true) {
    const auto pos = rest.find(',');
    const std::string_view item = trim(rest.substr(0, pos));
    if (item.empty()) throw UsageError(w + ": empty list item");
    out.push_back(item);
    if (pos == std::string_view::npos) return out;
    rest = rest.substr(pos + 1);
  }
}

template <typename T>
using Binder = std::function<void(T&, const ConfigEntry&, const std::string&)>;

template <typename T, typename M>
Binder<T> int_field(M T::*field) {
  return [field](T& t, const ConfigEntry& e, const std::string& w) {
    t.*field = static_cast<M>(to_int(e, w));
  };
}

template <typename T>
Binder<T> double_field(double T::*field) {
  return [field](T& t, const ConfigEntry& e, const std::string& w) { t.*field = to_double(e, w); };
}

std::map<std::string, Binder<GeneratorConfig>, std::less<>> generator_binders() {
  using G = GeneratorConfig;
  return {
      {"slides", int_field(&G::slides)},
      {"tumor_free_fraction", double_field(&G::tumor_free_fraction)},
      {"map_width", int_field(&G::map_width)},
      {"map_height", int_field(&G::map_height)},
      {"map_stride", int_field(&G::map_stride)},
      {"tissue_blobs_min", int_field(&G::tissue_blobs_min)},
      {"tissue_blobs_max", int_field(&G::tissue_blobs_max)},
      {"tissue_radius_min", double_field(&G::tissue_radius_min)},
      {"tissue_radius_max", double_field(&G::tissue_radius_max)},
      {"tissue_edge_noise", double_field(&G::tissue_edge_noise)},
      {"tumor_blobs_min", int_field(&G::tumor_blobs_min)},
      {"tumor_blobs_max", int_field(&G::tumor_blobs_max)},
      {"tumor_radius_min", double_field(&G::tumor_radius_min)},
      {"tumor_radius_max", double_field(&G::tumor_radius_max)},
      {"normal_mean", double_field(&G::normal_mean)},
      {"tumor_mean_min", double_field(&G::tumor_mean_min)},
      {"tumor_mean_max", double_field(&G::tumor_mean_max)},
      {"background_mean", double_field(&G::background_mean)},
      {"noise_sigma", double_field(&G::noise_sigma)},
      {"noise_radius", int_field(&G::noise_radius)},
      {"boundary_blur", int_field(&G::boundary_blur)},
  };
}

std::map<std::string, Binder<SimulationPlan>, std::less<>> simulation_binders() {
  using P = SimulationPlan;
  std::map<std::string, Binder<P>, std::less<>> m;
  for (auto& [k, b] : generator_binders()) m.emplace(k, [b](P& p, const ConfigEntry& e, const std::string& w) {
    b(p.base.generator, e, w);
  });
  const auto exp = [](auto f) {
    return [f](P& p, const ConfigEntry& e, const std::string& w) { f(p.base, e, w); };
  };
  m["methods"] = [](P& p, const ConfigEntry& e, const std::string& w) {
    for (auto item : list_of(e, w)) {
      try {
        p.methods.push_back(parse_method(item));
      } catch (const UsageError& err) {
        throw UsageError(w + ": " + err.what());
      }
    }
  };
  m["k"] = [](P& p, const ConfigEntry& e, const std::string& w) {
    for (auto item : list_of(e, w)) {
      p.ks.push_back(static_cast<int>(as_usage([&] { return parse_int(item, w); })));
    }
  };
  m["l"] = [](P& p, const ConfigEntry& e, const std::string& w) {
    for (auto item : list_of(e, w)) p.ls.push_back(as_usage([&] { return parse_int(item, w); }));
  };
  m["cycles"] = exp(int_field(&ExperimentConfig::cycles));
  m["repetitions"] = exp(int_field(&ExperimentConfig::repetitions));
  m["subsets"] = exp(int_field(&ExperimentConfig::subsets));
  m["initial_k"] = exp(int_field(&ExperimentConfig::initial_k));
  m["test_slides"] = exp(int_field(&ExperimentConfig::test_slides));
  m["seed"] = exp(int_field(&ExperimentConfig::seed));
  m["pool_seed"] = exp(int_field(&ExperimentConfig::pool_seed));
  m["test_seed"] = exp(int_field(&ExperimentConfig::test_seed));
  m["eval_threshold"] = exp(double_field(&ExperimentConfig::eval_threshold));
  m["include_tumor_free"] = exp([](ExperimentConfig& c, const ConfigEntry& e, const std::string& w) {
    c.include_tumor_free = to_bool(e, w);
  });
  const auto sel = [](auto f) {
    return [f](P& p, const ConfigEntry& e, const std::string& w) { f(p.base.selection, e, w); };
  };
  m["min_tissue"] = sel(double_field(&SelectionConfig::min_tissue));
  m["tau_low"] = sel(double_field(&SelectionConfig::tau_low));
  m["tau_high"] = sel(double_field(&SelectionConfig::tau_high));
  m["bisection_max_iters"] = sel(int_field(&SelectionConfig::bisection_max_iters));
  m["bisection_tol"] = sel(double_field(&SelectionConfig::bisection_tol));
  m["min_area"] = sel([](SelectionConfig& c, const ConfigEntry& e, const std::string& w) {
    c.min_area = to_double(e, w);
  });
  m["max_area"] = sel([](SelectionConfig& c, const ConfigEntry& e, const std::string& w) {
    c.max_area = to_double(e, w);
  });
  m["allow_oversample"] = sel([](SelectionConfig& c, const ConfigEntry& e, const std::string& w) {
    c.allow_oversample = to_bool(e, w);
  });
  m["percentile_domain"] = sel([](SelectionConfig& c, const ConfigEntry& e, const std::string& w) {
    if (e.value == "all") {
      c.percentile_domain = PercentileDomain::kAllCells;
    } else if (e.value == "tissue") {
      c.percentile_domain = PercentileDomain::kTissueOnly;
    } else {
      throw UsageError(w + ": expected all or tissue, got '" + e.value + "'");
    }
  });
  const auto learn = [](auto f) {
    return [f](P& p, const ConfigEntry& e, const std::string& w) { f(p.base.learner, e, w); };
  };
  m["steepness"] = learn(double_field(&LearnerConfig::steepness));
  m["prior_distance"] = learn(double_field(&LearnerConfig::prior_distance));
  m["min_spread"] = learn(double_field(&LearnerConfig::min_spread));
  return m;
}

template <typename T>
void apply(T& target, const std::vector<ConfigEntry>& entries, const std::string& source,
           const std::map<std::string, Binder<T>, std::less<>>& binders,
           std::initializer_list<std::string_view> required) {
  std::set<std::string, std::less<>> seen;
  for (const ConfigEntry& e : entries) {
    const auto it = binders.find(e.key);
    if (it == binders.end()) {
      throw UsageError(source + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
    it->second(target, e, where(source, e));
    seen.insert(e.key);
  }
  for (std::string_view key : required) {
    if (!seen.contains(key)) {
      throw UsageError(source + ": missing required key '" + std::string(key) + "'");
    }
  }
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& source) {
  std::vector<ConfigEntry> entries;
  std::set<std::string, std::less<>> keys;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw UsageError(at + "expected key=value");
    ConfigEntry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                  line_no};
    if (e.key.empty()) throw UsageError(at + "empty key");
    if (e.value.empty()) throw UsageError(at + "empty value for '" + e.key + "'");
    if (!keys.insert(e.key).second) throw UsageError(at + "duplicate key '" + e.key + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

ExperimentConfig SimulationPlan::config_for(Method m, int k, std::int64_t l) const {
  ExperimentConfig cfg = base;
  cfg.selection.method = m;
  cfg.selection.count = k;
  cfg.selection.region_side = l;
  return cfg;
}

SimulationPlan load_simulation_plan(std::string_view text, const std::string& source) {
  SimulationPlan plan;
  plan.entries = parse_config(text, source);
  apply(plan, plan.entries, source, simulation_binders(),
        {"methods", "k", "l", "cycles", "repetitions"});
  for (Method m : plan.methods) {
    for (int k : plan.ks) {
      for (std::int64_t l : plan.ls) {
        try {
          plan.config_for(m, k, l).validate();
        } catch (const DataError& e) {
          throw UsageError(source + ": " + e.what());
        } catch (const UsageError& e) {
          throw UsageError(source + ": " + e.what());
        }
      }
    }
  }
  return plan;
}

GenerationPlan load_generation_plan(std::string_view text, const std::string& source) {
  GenerationPlan plan;
  plan.entries = parse_config(text, source);
  auto binders = generator_binders();
  std::map<std::string, Binder<GenerationPlan>, std::less<>> m;
  for (auto& [k, b] : binders) {
    m.emplace(k, [b](GenerationPlan& p, const ConfigEntry& e, const std::string& w) {
      b(p.generator, e, w);
    });
  }
  m["seed"] = int_field(&GenerationPlan::seed);
  m["id_prefix"] = [](GenerationPlan& p, const ConfigEntry& e, const std::string& w) {
    if (e.value.find_first_of(",\"/\\") != std::string::npos) {
      throw UsageError(w + ": id prefix must not contain ',', '\"' or path separators");
    }
    p.generator.id_prefix = e.value;
  };
  apply(plan, plan.entries, source, m, {"slides", "seed"});
  plan.generator.validate();
  return plan;
}

}  // namespace region_al
