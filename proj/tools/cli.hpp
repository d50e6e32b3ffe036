#pragma once

// Command-line front end:
//   run      one grid cell
//   full     all 24 cells
//   compare  markdown report of a summary against the reference tables
//   dataset  dump one generated dataset as JSON

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inter_mdm/inter_mdm.hpp"

namespace inter_mdm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct RunFlags {
  std::string variant, method, out, config;
  int condition = 0, trials = 0, iterations = 0, jobs = 0;
  std::uint64_t seed = 0;
};

inline void add_run_flags(CLI::App& app, RunFlags& f, bool cell_options) {
  if (cell_options) {
    app.add_option("--variant", f.variant, "t2t or h2h");
    app.add_option("--method", f.method, "mh, reject or gibbs");
    app.add_option("--condition", f.condition, "perception condition 1..4");
  }
  app.add_option("--trials", f.trials, "independent trials per cell");
  app.add_option("--iterations", f.iterations, "naming-game iterations per trial");
  app.add_option("--seed", f.seed, "base seed");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--jobs", f.jobs, "trials run in parallel");
  app.add_option("--config", f.config, "JSON config file; flags take precedence");
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
}

// Defaults, then the config file, then explicitly given flags.
inline ExperimentConfig resolve_config(const CLI::App& app, const RunFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) config_from_json(load_json(f.config), cfg);
  auto given = [&](const char* name) {
    const auto* opt = app.get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (given("--variant")) cfg.variant = parse_variant(f.variant);
  if (given("--method")) cfg.method = parse_method(f.method);
  if (given("--condition")) cfg.condition = f.condition;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("--iterations")) cfg.iterations = f.iterations;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--out")) cfg.out = f.out;
  if (given("--jobs")) cfg.jobs = f.jobs;
  cfg.validate();
  return cfg;
}

// Parses the flags of the `run` command (without the command word).
inline ExperimentConfig parse_config(std::vector<std::string> args) {
  CLI::App app{"run"};
  RunFlags flags;
  add_run_flags(app, flags, true);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    throw ConfigError("arguments", e.what());
  }
  return resolve_config(app, flags);
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Two-agent naming-game simulator for inter-personal multimodal categorization"};
  app.require_subcommand(1);

  RunFlags run_flags, full_flags;
  auto* run = app.add_subcommand("run", "run one (variant, method, condition) cell");
  add_run_flags(*run, run_flags, true);
  auto* full = app.add_subcommand("full", "run all 24 grid cells");
  add_run_flags(*full, full_flags, false);

  std::string compare_dir;
  auto* compare = app.add_subcommand("compare", "compare a summary with the reference tables");
  compare->add_option("--in", compare_dir, "directory holding summary.csv")->required();

  RunFlags ds_flags;
  std::string ds_path;
  auto* dataset = app.add_subcommand("dataset", "write one generated dataset as JSON");
  dataset->add_option("--condition", ds_flags.condition, "perception condition 1..4");
  dataset->add_option("--seed", ds_flags.seed, "base seed");
  dataset->add_option("--trial", ds_flags.trials, "trial index");
  dataset->add_option("--out", ds_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      const ExperimentConfig cfg = resolve_config(*run, run_flags);
      const SummaryRow s = run_experiment(cfg);
      write_summary_csv(out, {s});
    } else if (*full) {
      const ExperimentConfig cfg = resolve_config(*full, full_flags);
      write_summary_csv(out, run_full_grid(cfg));
    } else if (*compare) {
      const std::filesystem::path dir(compare_dir);
      std::ifstream is(dir / "summary.csv");
      if (!is) throw IoError("cannot read " + (dir / "summary.csv").string());
      const std::string report = compare_to_reference(read_summary_csv(is));
      std::ofstream md(dir / "compare.md", std::ios::binary);
      if (!md || !(md << report)) throw IoError("cannot write " + (dir / "compare.md").string());
      out << report;
    } else if (*dataset) {
      ExperimentConfig cfg;
      if (dataset->get_option("--condition")->count()) cfg.condition = ds_flags.condition;
      if (dataset->get_option("--seed")->count()) cfg.seed = ds_flags.seed;
      cfg.validate();
      const Dataset data = trial_dataset(cfg, ds_flags.trials);
      std::ofstream os(ds_path, std::ios::binary);
      if (!os || !(os << dataset_to_json(data).dump() << '\n')) throw IoError("cannot write " + ds_path);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace inter_mdm::cli
