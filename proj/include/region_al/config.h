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


#ifndef REGION_AL_CONFIG_H_
#define REGION_AL_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "region_al/experiment.h"

namespace region_al {

// key=value lines; '#' starts a comment, blank lines are skipped.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// Throws UsageError naming the line for malformed or duplicate entries.
std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& source);

// A simulate run: every (method, k, l) combination shares `base`.
struct SimulationPlan {
  std::vector<Method> methods;
  std::vector<int> ks;
  std::vector<std::int64_t> ls;  // slide pixels
  ExperimentConfig base;
  std::vector<ConfigEntry> entries;

  ExperimentConfig config_for(Method m, int k, std::int64_t l) const;
};

// Required keys: methods, k, l, cycles, repetitions. Unknown keys, bad
// values and failed validation throw UsageError.
SimulationPlan load_simulation_plan(std::string_view text, const std::string& source);

struct GenerationPlan {
  GeneratorConfig generator;
  std::uint64_t seed = 0;
  std::vector<ConfigEntry> entries;
};

// Generator keys plus `seed`; `slides` and `seed` are required.
GenerationPlan load_generation_plan(std::string_view text, const std::string& source);

}  // namespace region_al

#endif  // REGION_AL_CONFIG_H_
