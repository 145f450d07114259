// Copyright 2026 The middrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>

#include "middrive/cli.hpp"

namespace {

middrive::RunConfig defaults_with_env() {
  middrive::RunConfig cfg;
  if (const char* root = std::getenv("MIDDRIVE_OUT")) cfg.out_dir = root;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using middrive::RunConfig;

  CLI::App app{"middrive: closed-loop hierarchical driving simulator and benchmark"};
  app.require_subcommand(1);

  // run
  RunConfig run_cfg = defaults_with_env();
  std::string config_file;
  auto* run = app.add_subcommand("run", "run a benchmark suite and write episode logs");
  run->add_option("--suite", run_cfg.suite_path, "suite JSON file")->required();
  run->add_option("--config", config_file, "config file (JSON); flags override it");
  auto* opt_seed = run->add_option("--seed", run_cfg.seed, "master seed");
  auto* opt_dt = run->add_option("--dt", run_cfg.dt_s, "simulation step, seconds");
  auto* opt_k = run->add_option("--planner-cadence", run_cfg.planner_cadence,
                                "ticks between command refreshes");
  auto* opt_workers = run->add_option("--workers", run_cfg.workers, "parallel episodes");
  auto* opt_out = run->add_option("--out", run_cfg.out_dir, "output directory");
  auto* opt_planner = run->add_option("--planner", run_cfg.planner, "planner name");
  auto* opt_controller =
      run->add_option("--controller", run_cfg.controller, "controller name");
  auto* opt_target =
      run->add_option("--target-speed", run_cfg.target_speed_mps, "cruise target, m/s");

  // annotate
  std::string ann_log, ann_out;
  auto* annotate = app.add_subcommand("annotate", "label an episode log with commands");
  annotate->add_option("--log", ann_log, "episode log JSONL")->required();
  annotate->add_option("--out", ann_out, "output records JSONL")->required();

  // resample
  std::string res_in, res_out;
  double res_cap = 20.0;
  std::uint64_t res_seed = 0;
  auto* resample = app.add_subcommand("resample", "balance a records file");
  resample->add_option("--in", res_in, "input records JSONL")->required();
  resample->add_option("--out", res_out, "output records JSONL")->required();
  resample->add_option("--cap-ratio", res_cap, "max/min group ratio");
  resample->add_option("--seed", res_seed, "subsample seed");

  // score
  std::string score_dir, score_records, score_out;
  auto* score = app.add_subcommand("score", "score episode logs or records");
  score->add_option("--logs", score_dir, "directory of episode logs");
  score->add_option("--records", score_records, "records JSONL for waypoint L1");
  score->add_option("--out", score_out, "summary output directory");

  // plot
  std::string plot_log, plot_out;
  auto* plot = app.add_subcommand("plot", "render an overhead SVG trace");
  plot->add_option("--log", plot_log, "episode log JSONL")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  // gen-town
  int town_id = 1;
  std::uint64_t town_seed = 42;
  std::string town_out = "town.json";
  auto* gen = app.add_subcommand("gen-town", "generate a procedural town");
  gen->add_option("--town", town_id, "town id in [1, 8]")->required();
  gen->add_option("--seed", town_seed, "generation seed");
  gen->add_option("--out", town_out, "output JSON path");

  // config
  auto* config = app.add_subcommand("config", "configuration helpers");
  auto* config_show = config->add_subcommand("show", "print the effective config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : middrive::kExitConfig;
  }

  if (*run) {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        std::fprintf(stderr, "config error: cannot open config file: %s\n",
                     config_file.c_str());
        return middrive::kExitConfig;
      }
      middrive::Json j;
      try {
        in >> j;
        RunConfig merged = middrive::run_config_from_json(j, defaults_with_env());
        merged.suite_path = run_cfg.suite_path;
        // Explicit flags take precedence over the file.
        if (opt_seed->count() == 0) run_cfg.seed = merged.seed;
        if (opt_dt->count() == 0) run_cfg.dt_s = merged.dt_s;
        if (opt_k->count() == 0) run_cfg.planner_cadence = merged.planner_cadence;
        if (opt_workers->count() == 0) run_cfg.workers = merged.workers;
        if (opt_out->count() == 0) run_cfg.out_dir = merged.out_dir;
        if (opt_planner->count() == 0) run_cfg.planner = merged.planner;
        if (opt_controller->count() == 0) run_cfg.controller = merged.controller;
        if (opt_target->count() == 0) run_cfg.target_speed_mps = merged.target_speed_mps;
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return middrive::kExitConfig;
      }
    }
    return middrive::cmd_run(run_cfg);
  }
  if (*annotate) return middrive::cmd_annotate(ann_log, ann_out);
  if (*resample) return middrive::cmd_resample(res_in, res_out, res_cap, res_seed);
  if (*score) {
    if (!score_records.empty()) return middrive::cmd_score_records(score_records);
    if (score_dir.empty()) {
      std::fprintf(stderr, "config error: score needs --logs or --records\n");
      return middrive::kExitConfig;
    }
    return middrive::cmd_score(
        score_dir, score_out.empty() ? std::nullopt : std::optional(score_out));
  }
  if (*plot) return middrive::cmd_plot(plot_log, plot_out);
  if (*gen) return middrive::cmd_gen_town(town_id, town_seed, town_out);
  if (*config_show) return middrive::cmd_config_show(defaults_with_env());

  return middrive::kExitConfig;
}
