// Command-line front end: load an experiment config, run it, point at the
// summary.  Exit codes: 0 success, 2 config or usage error, 1 runtime failure.
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "pdslab/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = std::thread::hardware_concurrency();
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--config", args.config_path, "experiment config file (JSON)")
      ->required();
  cmd.add_option("--seed", args.seed, "override master_seed");
  cmd.add_option("--out", args.out, "override the output directory");
  cmd.add_option("--threads", args.threads, "work-pool size (default: hardware)");
}

/// Loads the config and applies command-line overrides.  Throws pdslab::Error.
pdslab::ExperimentConfig resolve_config(const CommonArgs& args) {
  pdslab::ExperimentConfig cfg = pdslab::load_experiment_config(args.config_path);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.out) cfg.out_dir = *args.out;
  pdslab::validate_experiment_config(cfg);
  return cfg;
}

int report_run(const pdslab::RunResult& res) {
  std::size_t failed = 0;
  for (const pdslab::TrialOutcome& t : res.trials)
    if (!t.ok) ++failed;
  if (failed > 0)
    std::fprintf(stderr, "warning: %zu/%zu trials failed; see summary\n", failed,
                 res.trials.size());
  std::printf("%s/summary.json\n", res.run_dir.c_str());
  return 0;
}

template <class Runner>
int run_command(const CommonArgs& args, Runner&& runner) {
  pdslab::ExperimentConfig cfg;
  try {
    cfg = resolve_config(args);
  } catch (const pdslab::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  try {
    return report_run(runner(cfg, args.threads));
  } catch (const pdslab::Error& e) {
    if (e.code() == pdslab::ErrorCode::config) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdslab: positive-distribution-shift learning experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a config");
  add_common(*run, run_args);

  CommonArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "run a dimension sweep config");
  add_common(*sweep, sweep_args);

  CommonArgs transfer_args;
  CLI::App* transfer =
      app.add_subcommand("transfer", "run the three-arm transfer panel");
  add_common(*transfer, transfer_args);

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate-config", "check a config without running it");
  validate->add_option("--config", validate_path, "experiment config file (JSON)")
      ->required();

  app.add_subcommand("list-experiments", "print the experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::fprintf(stderr, "%s\n", e.what());
    std::fprintf(stderr, "%s", app.help().c_str());
    return 2;
  }

  if (app.got_subcommand("list-experiments")) {
    for (std::string_view name : pdslab::kExperimentKindNames)
      std::printf("%.*s\n", static_cast<int>(name.size()), name.data());
    return 0;
  }
  if (app.got_subcommand(validate)) {
    try {
      const pdslab::ExperimentConfig cfg = pdslab::load_experiment_config(validate_path);
      validate_experiment_config(cfg);
      const std::string kind{pdslab::kind_name(cfg.kind)};
      std::printf("ok: %s\n", kind.c_str());
      return 0;
    } catch (const pdslab::Error& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }
  if (app.got_subcommand(run))
    return run_command(run_args, [](const pdslab::ExperimentConfig& cfg, unsigned threads) {
      return pdslab::run_experiment(cfg, threads);
    });
  if (app.got_subcommand(sweep))
    return run_command(sweep_args, [](const pdslab::ExperimentConfig& cfg, unsigned threads) {
      return pdslab::run_sweep(cfg, threads);
    });
  if (app.got_subcommand(transfer))
    return run_command(transfer_args, [](const pdslab::ExperimentConfig& cfg, unsigned threads) {
      return pdslab::run_transfer_panel(cfg, threads);
    });
  return 2;
}
