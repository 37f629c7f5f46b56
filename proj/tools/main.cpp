#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "gpfail/csv.hpp"
#include "gpfail/errors.hpp"

#ifndef GPFAIL_VERSION
#define GPFAIL_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace gpfail;

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

void push_common_meta(Meta& meta, const std::string& command) {
  meta.emplace_back("version", GPFAIL_VERSION);
  meta.emplace_back("command", command);
}

void push_config_meta(Meta& meta, const ExperimentConfig& cfg) {
  meta.emplace_back("criterion", cfg.criterion.describe());
  meta.emplace_back("threshold", fmt_double(cfg.threshold));
  meta.emplace_back("n0", std::to_string(cfg.n0));
  meta.emplace_back("budget", std::to_string(cfg.budget));
  meta.emplace_back("m", std::to_string(cfg.m));
  meta.emplace_back("reestimate_every", std::to_string(cfg.reestimate_every));
  meta.emplace_back("seed_design", std::to_string(cfg.seed_design));
  meta.emplace_back("seed_sample", std::to_string(cfg.seed_sample));
  meta.emplace_back("seed_estimation", std::to_string(cfg.seed_estimation));
}

void report_run(const RunTrace& trace, bool verbose) {
  if (!verbose) {
    return;
  }
  std::printf("alpha_m        %s\n", fmt_double(trace.alpha_m).c_str());
  std::printf("alpha_hat      %s\n",
              fmt_double(trace.final_estimate()).c_str());
  std::printf("evaluations    %ld\n", static_cast<long>(trace.values.size()));
  std::printf("re-estimations %zu\n", trace.estimates.size());
}

struct SeedOverrides {
  std::uint64_t design = 0;
  std::uint64_t sample = 0;
  CLI::Option* design_opt = nullptr;
  CLI::Option* sample_opt = nullptr;

  void add(CLI::App* cmd) {
    design_opt = cmd->add_option("--seed-design", design,
                                 "Override the initial design seed");
    sample_opt = cmd->add_option("--seed-sample", sample,
                                 "Override the Monte Carlo sample seed");
  }

  void apply(ExperimentConfig& cfg) const {
    if (design_opt->count() > 0) {
      cfg.seed_design = design;
    }
    if (sample_opt->count() > 0) {
      cfg.seed_sample = sample;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sequential Gaussian process designs for estimating excursion "
      "probabilities"};
  app.require_subcommand(1);

  // run
  auto* cmd_run = app.add_subcommand(
      "run", "Run one sequential experiment from a JSON config");
  std::string run_config, run_out;
  std::string run_criterion;
  bool run_verbose = false;
  SeedOverrides run_seeds;
  cmd_run->add_option("--config", run_config, "JSON experiment config")
      ->required();
  cmd_run->add_option("--out", run_out, "Output directory")->required();
  run_seeds.add(cmd_run);
  cmd_run->add_option("--criterion", run_criterion,
                      "Criterion preset override (sur1..sur4, timse, ech, rb, "
                      "maximin)");
  cmd_run->add_flag("--verbose", run_verbose, "Print a summary to stdout");
  cmd_run->callback([&] {
    ExperimentConfig cfg =
        cli::parse_experiment_config(cli::load_json_file(run_config));
    run_seeds.apply(cfg);
    if (!run_criterion.empty()) {
      cfg.criterion = cli::parse_criterion_name(run_criterion);
    }
    cfg.validate();
    const RunTrace trace = run(cfg);
    fs::create_directories(run_out);
    write_trace_csv(run_out + "/trace.csv", trace);
    Meta meta;
    push_common_meta(meta, "run");
    meta.emplace_back("config", run_config);
    push_config_meta(meta, cfg);
    meta.emplace_back("alpha_m", fmt_double(trace.alpha_m));
    meta.emplace_back("alpha_hat_final", fmt_double(trace.final_estimate()));
    write_meta(run_out + "/run_meta.txt", meta);
    report_run(trace, run_verbose);
  });

  // study
  auto* cmd_study = app.add_subcommand(
      "study", "Run a replicated benchmark study from a JSON spec");
  std::string study_config, study_out;
  bool paper_scale = false;
  bool study_verbose = false;
  int jobs = 1;
  cmd_study->add_option("--config", study_config, "JSON study spec")
      ->required();
  cmd_study->add_option("--out", study_out, "Output directory")->required();
  cmd_study->add_flag("--paper-scale", paper_scale,
                      "Use the full replication counts instead of desk scale");
  cmd_study->add_option("--jobs", jobs,
                        "Worker cap for replications (this build runs them "
                        "sequentially)")
      ->check(CLI::PositiveNumber);
  cmd_study->add_flag("--verbose", study_verbose, "Print rows to stdout");
  cmd_study->callback([&] {
    const nlohmann::json spec_json = cli::load_json_file(study_config);
    fs::create_directories(study_out);
    Meta meta;
    push_common_meta(meta, "study");
    meta.emplace_back("config", study_config);
    meta.emplace_back("paper_scale", paper_scale ? "true" : "false");
    meta.emplace_back("jobs", std::to_string(jobs));
    switch (cli::parse_study_kind(spec_json)) {
      case cli::StudyKind::FourBranch: {
        const FourBranchStudySpec spec =
            cli::parse_four_branch_spec(spec_json, paper_scale);
        spec.validate();
        const FourBranchReport report = run_four_branch_study(spec);
        write_ngamma_csv(study_out + "/ngamma.csv", report);
        meta.emplace_back("study", "four_branch");
        meta.emplace_back("replications", std::to_string(spec.replications));
        meta.emplace_back("m", std::to_string(spec.m));
        meta.emplace_back("added_budget", std::to_string(spec.added_budget));
        meta.emplace_back("base_seed", std::to_string(spec.base_seed));
        if (study_verbose) {
          for (const auto& row : report.rows) {
            std::printf("%-12s gamma=%-5g mean=%-7.2f p10=%-6.1f p90=%-6.1f "
                        "not_attained=%.2f\n",
                        row.label.c_str(), row.gamma, row.mean_n, row.p10,
                        row.p90, row.not_attained_fraction);
          }
        }
        break;
      }
      case cli::StudyKind::GpPaths: {
        const GpPathStudySpec spec =
            cli::parse_gp_path_spec(spec_json, paper_scale);
        spec.validate();
        const GpPathReport report = run_gp_path_study(spec);
        write_rmse_csv(study_out + "/rmse.csv", report);
        meta.emplace_back("study", "gp_paths");
        meta.emplace_back("d", std::to_string(spec.d));
        meta.emplace_back("paths", std::to_string(spec.paths));
        meta.emplace_back("m", std::to_string(spec.m));
        meta.emplace_back("total_budget", std::to_string(spec.total_budget));
        meta.emplace_back("base_seed", std::to_string(spec.base_seed));
        if (study_verbose) {
          for (const auto& row : report.rows) {
            if (row.n == spec.total_budget) {
              std::printf("%-12s d=%d n=%-4d rmse_db=%.2f\n", row.label.c_str(),
                          row.d, row.n, row.rmse_db);
            }
          }
        }
        break;
      }
    }
    write_meta(study_out + "/study_meta.txt", meta);
  });

  // illustrate-1d
  auto* cmd_ill = app.add_subcommand(
      "illustrate-1d",
      "Run the fixed one-dimensional walkthrough and dump posterior "
      "snapshots at n = 4, 6, 12");
  std::string ill_out;
  SeedOverrides ill_seeds;
  cmd_ill->add_option("--out", ill_out, "Output directory")->required();
  ill_seeds.add(cmd_ill);
  cmd_ill->callback([&] {
    ExperimentConfig cfg = one_d_illustration_config();
    ill_seeds.apply(cfg);
    const RunTrace trace = run(cfg);
    fs::create_directories(ill_out);
    write_trace_csv(ill_out + "/trace.csv", trace);
    for (const int n : {4, 6, 12}) {
      const StepScores s = scores_at_step(cfg, n);
      write_posterior_csv(ill_out + "/posterior_n" + std::to_string(n) + ".csv",
                          s.sample, s.summary);
      if (n == 4) {
        write_scores_csv(ill_out + "/scores_n4.csv", s);
      }
    }
    Meta meta;
    push_common_meta(meta, "illustrate-1d");
    push_config_meta(meta, cfg);
    meta.emplace_back("alpha_m", fmt_double(trace.alpha_m));
    meta.emplace_back("alpha_hat_final", fmt_double(trace.final_estimate()));
    write_meta(ill_out + "/meta.txt", meta);
  });

  // criteria-surface
  auto* cmd_surf = app.add_subcommand(
      "criteria-surface",
      "Score every candidate of the MC sample at one step of a run");
  std::string surf_config, surf_out, surf_criterion;
  int surf_step = 0;
  SeedOverrides surf_seeds;
  cmd_surf->add_option("--config", surf_config, "JSON experiment config")
      ->required();
  cmd_surf->add_option("--out", surf_out, "Output directory")->required();
  cmd_surf->add_option("--step", surf_step,
                       "Number of evaluations n at which to score (n0 <= n <= "
                       "budget)")
      ->required();
  surf_seeds.add(cmd_surf);
  cmd_surf->add_option("--criterion", surf_criterion,
                       "Criterion preset override");
  cmd_surf->callback([&] {
    ExperimentConfig cfg =
        cli::parse_experiment_config(cli::load_json_file(surf_config));
    surf_seeds.apply(cfg);
    if (!surf_criterion.empty()) {
      cfg.criterion = cli::parse_criterion_name(surf_criterion);
    }
    cfg.validate();
    const StepScores scores = scores_at_step(cfg, surf_step);
    fs::create_directories(surf_out);
    const std::string name = "scores_n" + std::to_string(surf_step) + ".csv";
    write_scores_csv(surf_out + "/" + name, scores);
    Meta meta;
    push_common_meta(meta, "criteria-surface");
    meta.emplace_back("config", surf_config);
    push_config_meta(meta, cfg);
    meta.emplace_back("step", std::to_string(surf_step));
    meta.emplace_back("chosen_index",
                      std::to_string(scores.selection.chosen_index));
    write_meta(surf_out + "/meta.txt", meta);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
