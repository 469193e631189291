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


#include "region_al/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "region_al/config.h"
#include "region_al/error.h"
#include "region_al/experiment.h"
#include "region_al/filters.h"
#include "region_al/io.h"
#include "region_al/report.h"

namespace region_al {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string run_stem(Method m, int k, std::int64_t l) {
  return std::string(to_string(m)) + "_k" + std::to_string(k) + "_l" + std::to_string(l);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

// Dumps with a trailing newline; key order is lexicographic so the output is
// stable.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct SelectArgs {
  std::string grid, tissue, method, annotated, out, slide_id = "slide";
  std::int64_t l = 0;
  int k = 1;
  int cycle = 1;
  std::uint64_t seed = 0;
  bool oversample = false;
};

int cmd_select(const SelectArgs& a, std::ostream& err) {
  const Method method = parse_method(a.method);
  const GridFile grid = read_grid(a.grid);
  const GridFile tissue = read_grid(a.tissue);
  if (tissue.kind != ValueKind::kMask) throw DataError(a.tissue + ": expected a mask grid");
  if (!(grid.geometry == tissue.geometry)) {
    throw DataError("dimension mismatch: grid is " + std::to_string(grid.geometry.map_width()) +
                    " x " + std::to_string(grid.geometry.map_height()) + " (stride " +
                    std::to_string(grid.geometry.map_stride()) + "), tissue is " +
                    std::to_string(tissue.geometry.map_width()) + " x " +
                    std::to_string(tissue.geometry.map_height()) + " (stride " +
                    std::to_string(tissue.geometry.map_stride()) + ")");
  }
  Mask tissue_mask = to_mask(tissue);
  PriorityGrid priority;
  if (grid.kind == ValueKind::kPriority) {
    priority = PriorityGrid(grid.geometry, grid.values, std::move(tissue_mask));
  } else if (grid.kind == ValueKind::kProbability) {
    priority = make_priority_grid(ProbabilityGrid{grid.geometry, grid.values},
                                  std::move(tissue_mask));
  } else {
    throw DataError(a.grid + ": expected a priority or probability grid, got " +
                    std::string(to_string(grid.kind)));
  }

  SelectionConfig cfg;
  cfg.method = method;
  cfg.region_side = a.l;
  cfg.count = a.k;
  cfg.rng_seed = a.seed;
  cfg.allow_oversample = a.oversample;
  cfg.validate(grid.geometry);

  SlideAnnotations state(grid.geometry);
  if (!a.annotated.empty()) {
    for (const RegionRow& r : parse_regions(read_file(a.annotated), a.annotated)) {
      if (r.slide_id == a.slide_id) state.add(Region{r.cx, r.cy, r.w, r.h}, r.cycle);
    }
  }
  const SelectionOutcome outcome = select_regions(priority, state, cfg);
  std::vector<RegionRow> rows;
  for (const SelectedRegion& r : outcome.regions) {
    rows.push_back(make_region_row(a.slide_id, a.cycle, method, r));
  }
  write_file_atomic(a.out, format_regions(rows));
  if (outcome.exhausted) {
    err << "select: exhausted after " << outcome.regions.size() << " of " << a.k
        << " regions\n";
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const fs::path& out_dir, std::ostream& out) {
  const SimulationPlan plan = load_simulation_plan(read_file(config_path), config_path);
  ensure_dir(out_dir);
  const Pool pool = make_pool(plan.base);

  json manifest;
  manifest["version"] = kVersion;
  json config = json::object();
  for (const ConfigEntry& e : plan.entries) config[e.key] = e.value;
  manifest["config"] = config;
  manifest["seeds"] = {{"seed", plan.base.seed},
                       {"pool_seed", plan.base.pool_seed},
                       {"test_seed", plan.base.test_seed}};
  manifest["pool"] = {{"train_slides", pool.train.size()}, {"test_slides", pool.test.size()}};
  json runs = json::array();
  std::optional<double> full;
  for (Method m : plan.methods) {
    for (int k : plan.ks) {
      for (std::int64_t l : plan.ls) {
        const ExperimentConfig cfg = plan.config_for(m, k, l);
        const ExperimentLog log = run_experiment(cfg, pool);
        full = log.full_annotation_miou;
        std::vector<MetricsRow> rows;
        json rep_seeds = json::array();
        long long regions = 0, undersized = 0, clipped = 0, exhausted = 0;
        for (const RepetitionLog& rep : log.repetitions) {
          rep_seeds.push_back(rep.seed);
          for (const CycleRecord& c : rep.cycles) {
            rows.push_back({rep.repetition, c.cycle, c.annotated_tissue_pct, c.miou_tumor});
            for (const SlideSelection& s : c.selections) {
              exhausted += s.outcome.exhausted ? 1 : 0;
              for (const SelectedRegion& r : s.outcome.regions) {
                ++regions;
                undersized += r.fallback == Fallback::kUndersized ? 1 : 0;
                clipped += r.fallback == Fallback::kClipped ? 1 : 0;
              }
            }
          }
        }
        const std::string file = "metrics_" + run_stem(m, k, l) + ".csv";
        write_file_atomic(out_dir / file, format_metrics(rows));
        runs.push_back({{"method", to_string(m)},
                        {"k", k},
                        {"l", l},
                        {"metrics", file},
                        {"repetition_seeds", rep_seeds},
                        {"regions_selected", regions},
                        {"fallback_undersized", undersized},
                        {"fallback_clipped", clipped},
                        {"exhausted_selections", exhausted}});
        out << file << ": " << rows.size() << " rows\n";
      }
    }
  }
  manifest["runs"] = runs;
  manifest["full_annotation_miou"] = full.value_or(0.0);
  write_file_atomic(out_dir / "run_manifest.json", dump(manifest));
  return 0;
}

int cmd_report(const fs::path& in_dir, const fs::path& out_dir, double target,
               std::ostream& out) {
  if (!(target > 0 && target <= 1)) throw UsageError("--target must lie in (0, 1]");
  if (!fs::is_directory(in_dir)) throw IoError("no such directory " + in_dir.string());
  const fs::path manifest_path = in_dir / "run_manifest.json";
  if (!fs::exists(manifest_path)) {
    throw DataError("empty input dir: " + in_dir.string() + " has no run_manifest.json");
  }
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  const json& runs = manifest.value("runs", json::array());
  if (!runs.is_array() || runs.empty()) {
    throw DataError("empty input dir: " + in_dir.string() + " lists no metrics files");
  }
  double full = 0;
  std::map<std::pair<int, std::int64_t>, std::vector<CurveSeries>> charts;
  std::string summary = "method,k,l,target_fraction,area_at_target\n";
  try {
    full = manifest.at("full_annotation_miou").get<double>();
    for (const json& run : runs) {
      const std::string method = run.at("method").get<std::string>();
      const int k = run.at("k").get<int>();
      const auto l = run.at("l").get<std::int64_t>();
      const fs::path file = in_dir / run.at("metrics").get<std::string>();
      const auto rows = parse_metrics(read_file(file), file.string());
      const std::vector<CurvePoint> curve = aggregate_metrics(rows);
      const auto area = area_at_target(curve, target * full);
      summary += method + "," + std::to_string(k) + "," + std::to_string(l) + "," +
                 format_double(target) + "," + (area ? format_double(*area) : "/") + "\n";
      charts[{k, l}].push_back({method, curve});
    }
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  ensure_dir(out_dir);
  for (const auto& [key, series] : charts) {
    const std::string name =
        "curve_k" + std::to_string(key.first) + "_l" + std::to_string(key.second) + ".svg";
    const std::string title =
        "k = " + std::to_string(key.first) + ", l = " + std::to_string(key.second) + " px";
    write_file_atomic(out_dir / name, render_svg(title, series, full));
    out << name << "\n";
  }
  write_file_atomic(out_dir / "summary.csv", summary);
  out << "summary.csv\n";
  return 0;
}

int cmd_gen_synthetic(const std::string& config_path, const fs::path& out_dir,
                      std::ostream& out) {
  const GenerationPlan plan = load_generation_plan(read_file(config_path), config_path);
  ensure_dir(out_dir);
  const auto pool = generate_pool(plan.generator, plan.seed);
  json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = plan.seed;
  json config = json::object();
  for (const ConfigEntry& e : plan.entries) config[e.key] = e.value;
  manifest["config"] = config;
  json slides = json::array();
  for (const SyntheticSlide& s : pool) {
    write_slide(out_dir, s);
    slides.push_back({{"id", s.id},
                      {"map_width", s.geometry.map_width()},
                      {"map_height", s.geometry.map_height()},
                      {"map_stride", s.geometry.map_stride()},
                      {"tissue_cells", s.tissue_cells()},
                      {"tumor_cells", s.tumor_cells()},
                      {"tumor_fraction", s.tumor_fraction()}});
  }
  manifest["slides"] = slides;
  write_file_atomic(out_dir / "pool_manifest.json", dump(manifest));
  out << pool.size() << " slides written to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Region selection and active-learning simulation", "region_al"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SelectArgs sel;
  CLI::App* select = app.add_subcommand("select", "Select regions on one priority grid");
  select->add_option("--grid", sel.grid, "Priority or probability grid file")->required();
  select->add_option("--tissue", sel.tissue, "Tissue mask grid file")->required();
  select->add_option("--method", sel.method, "random, standard, standard_nonsquare or adaptive")
      ->required();
  select->add_option("--l", sel.l, "Region side in slide pixels")->required();
  select->add_option("--k", sel.k, "Regions to select")->capture_default_str();
  select->add_option("--annotated", sel.annotated, "Region list of already annotated regions");
  select->add_option("--seed", sel.seed, "Seed for the random method")->capture_default_str();
  select->add_option("--slide-id", sel.slide_id, "Slide id written to the output")
      ->capture_default_str();
  select->add_option("--cycle", sel.cycle, "Cycle written to the output")->capture_default_str();
  select->add_flag("--oversample", sel.oversample, "Allow overlap with annotated regions");
  select->add_option("--out", sel.out, "Output region list")->required();

  std::string sim_config, sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the AL simulation grid");
  simulate->add_option("--config", sim_config, "key=value config file")->required();
  simulate->add_option("--out-dir", sim_out, "Output directory")->required();

  std::string rep_in, rep_out;
  double target = 1.0;
  CLI::App* report = app.add_subcommand("report", "Charts and summary from simulate output");
  report->add_option("--in-dir", rep_in, "simulate output directory")->required();
  report->add_option("--out", rep_out, "Directory for SVG charts and summary.csv")->required();
  report->add_option("--target", target, "Fraction of the full-annotation mIoU")
      ->capture_default_str();

  std::string gen_config, gen_out;
  CLI::App* gen = app.add_subcommand("gen-synthetic", "Write a synthetic slide pool");
  gen->add_option("--config", gen_config, "key=value generator config")->required();
  gen->add_option("--out-dir", gen_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*select) return cmd_select(sel, err);
    if (*simulate) return cmd_simulate(sim_config, sim_out, out);
    if (*report) return cmd_report(rep_in, rep_out, target, out);
    if (*gen) return cmd_gen_synthetic(gen_config, gen_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace region_al
