#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "trustrpl/csv.hpp"
#include "trustrpl/simulation.hpp"

namespace trustrpl::experiments {

/// Runs seeds base.seed, base.seed + 1, ... on up to `workers` threads
/// (0 picks the hardware concurrency). Results come back in seed order.
std::vector<sim::RunResult> run_seeds(const sim::ScenarioConfig& base, int n_seeds,
                                      unsigned workers = 0);

enum class SweepParam { Epsilon, B, C, Environment };

std::string_view to_string(SweepParam param);
SweepParam parse_sweep_param(std::string_view text);

/// `base` with one parameter replaced by the textual `value`.
sim::ScenarioConfig apply(sim::ScenarioConfig base, SweepParam param, std::string_view value);

struct SweepRow {
  std::string value;
  std::string config_digest;
  int n_seeds = 0;
  double mean_return = 0.0;
  double optimal_pct = 0.0;            // all epochs
  double optimal_pct_converged = 0.0;  // epochs at or after the burn-in
  double retain_mean = 0.0;
  double modify_mean = 0.0;
};

/// Epochs before this index are left out of optimal_pct_converged.
inline constexpr int kDefaultBurnIn = 20;

std::vector<SweepRow> sweep(const sim::ScenarioConfig& base, SweepParam param,
                            const std::vector<std::string>& values, int n_seeds,
                            int burn_in = kDefaultBurnIn, unsigned workers = 0);

/// config_digest,seed,parameter,value,n_seeds,mean_return,optimal_pct,
/// optimal_pct_converged,retain_mean,modify_mean
csv::Table sweep_summary_table(const std::vector<SweepRow>& rows, SweepParam param,
                               std::uint64_t base_seed);

/// Long-format trust curves over g in [0, 100] for a B or C sweep:
/// config_digest,seed,figure,series,x,y with series "B=<v>" or "C=<v>".
csv::Table ig_curve_table(const sim::ScenarioConfig& base, SweepParam param,
                          const std::vector<std::string>& values, double g_step = 1.0);

/// Trust of one honest, one selfish and one malicious child of the root after
/// each of `episodes` episodes with equal operation counts. Index by NodeClass.
std::array<std::vector<double>, 3> class_trust_curves(const sim::ScenarioConfig& base,
                                                      int episodes = 10);

enum class Figure { TrustCurves, FailureRates, DecisionDistribution, EnvironmentDecisions,
                    ReturnsBox };

std::string_view to_string(Figure figure);
Figure parse_figure(std::string_view text);

/// Long-format dataset config_digest,seed,figure,series,x,y for one figure
/// analogue, pooled over `n_seeds` seeds starting at base.seed.
csv::Table figure_data(Figure figure, const sim::ScenarioConfig& base, int n_seeds,
                       unsigned workers = 0);

}  // namespace trustrpl::experiments
