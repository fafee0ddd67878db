// trustrpl: run trust-aware DODAG scenarios, parameter sweeps and figure datasets.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "trustrpl/config_io.hpp"
#include "trustrpl/csv.hpp"
#include "trustrpl/experiments.hpp"
#include "trustrpl/output.hpp"
#include "trustrpl/simulation.hpp"

namespace fs = std::filesystem;
using namespace trustrpl;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  unsigned workers = 0;
};

sim::ScenarioConfig load(const Common& c) {
  sim::ScenarioConfig cfg;
  if (!c.config_path.empty()) cfg = config::load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
}

int cmd_run(const Common& c) {
  const auto cfg = load(c);
  const auto result = sim::run_scenario(cfg);
  output::write_bundle(c.out, result, cfg);
  if (!c.quiet) {
    std::printf("%d epochs, retain %d, modify %d, mean return %.3f, optimal %.1f%% -> %s\n",
                static_cast<int>(result.epochs.size()), result.retain_count(),
                result.modify_count(), result.mean_return(), 100.0 * result.optimal_fraction(),
                c.out.c_str());
  }
  return 0;
}

int cmd_sweep(const Common& c, const std::string& param_text, std::vector<std::string> values,
              int n_seeds, int burn_in) {
  std::erase(values, std::string());
  if (values.empty()) throw UsageError("--values needs at least one value");
  experiments::SweepParam param;
  try {
    param = experiments::parse_sweep_param(param_text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto cfg = load(c);
  const auto rows = experiments::sweep(cfg, param, values, n_seeds, burn_in, c.workers);
  ensure_dir(c.out);
  csv::write(fs::path(c.out) / "sweep_summary.csv",
             experiments::sweep_summary_table(rows, param, cfg.seed));
  if (param == experiments::SweepParam::B || param == experiments::SweepParam::C) {
    csv::write(fs::path(c.out) / "ig_curves.csv", experiments::ig_curve_table(cfg, param, values));
  }
  if (!c.quiet) {
    for (const auto& r : rows) {
      std::printf("%s=%s: mean return %.3f, optimal %.1f%% (after burn-in %.1f%%), "
                  "retain %.1f, modify %.1f\n",
                  param_text.c_str(), r.value.c_str(), r.mean_return, r.optimal_pct,
                  r.optimal_pct_converged, r.retain_mean, r.modify_mean);
    }
  }
  return 0;
}

int cmd_figure(const Common& c, const std::string& figure_text, int n_seeds) {
  experiments::Figure figure;
  try {
    figure = experiments::parse_figure(figure_text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto cfg = load(c);
  const auto table = experiments::figure_data(figure, cfg, n_seeds, c.workers);
  ensure_dir(c.out);
  const auto path = fs::path(c.out) / (figure_text + ".csv");
  csv::write(path, table);
  if (!c.quiet) std::printf("%zu rows -> %s\n", table.rows.size(), path.string().c_str());
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config_path, "Scenario config (JSON)");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "Output directory")->required();
  sub->add_option("--seed", c.seed, "Seed override (base seed for multi-seed commands)");
  sub->add_flag("--quiet", c.quiet, "Suppress the summary line");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-aware RPL DODAG simulator"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one scenario and write its CSV bundle");
  add_common(run, run_opts, true);

  Common sweep_opts;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  int sweep_seeds = 10;
  int burn_in = experiments::kDefaultBurnIn;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over several seeds");
  add_common(sweep, sweep_opts, false);
  sweep->add_option("--param", sweep_param, "epsilon, B, C or environment")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->delimiter(',')
      ->expected(0, -1)
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "Seeds per value")->check(CLI::PositiveNumber);
  sweep->add_option("--burn-in", burn_in, "Epochs left out of the converged optimal share")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--workers", sweep_opts.workers, "Worker threads (0 = all cores)");

  Common fig_opts;
  std::string figure;
  int fig_seeds = 10;
  auto* fig = app.add_subcommand("figure-data", "Emit a long-format figure dataset");
  add_common(fig, fig_opts, false);
  fig->add_option("--figure", figure,
                  "trust_curves, failure_rates, decision_distribution, "
                  "environment_decisions or returns_box")
      ->required();
  fig->add_option("--seeds", fig_seeds, "Seeds to pool")->check(CLI::PositiveNumber);
  fig->add_option("--workers", fig_opts.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_param, sweep_values, sweep_seeds, burn_in);
    if (*fig) return cmd_figure(fig_opts, figure, fig_seeds);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
