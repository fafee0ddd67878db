#include "trustrpl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "trustrpl/behavior.hpp"
#include "trustrpl/config_io.hpp"
#include "trustrpl/trust.hpp"

namespace trustrpl::experiments {

namespace {

constexpr std::array<behavior::Environment, 3> kEnvironments{
    behavior::Environment::LowMalicious, behavior::Environment::MediumMalicious,
    behavior::Environment::HighMalicious};

double parse_number(std::string_view text, std::string_view what) {
  try {
    return csv::parse_double(text);
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " value '" + std::string(text) + "' is not a number");
  }
}

csv::Table long_table() {
  csv::Table t;
  t.header = {"config_digest", "seed", "figure", "series", "x", "y"};
  return t;
}

void add_point(csv::Table& t, const std::string& digest, std::uint64_t seed,
               std::string_view figure, std::string series, std::string x, double y) {
  t.add_row({digest, std::to_string(seed), std::string(figure), std::move(series), std::move(x),
             csv::format_double(y)});
}

sim::ScenarioConfig with_environment(sim::ScenarioConfig base, behavior::Environment env) {
  base.environment = behavior::EnvironmentProfile::preset(env);
  return base;
}

}  // namespace

std::vector<sim::RunResult> run_seeds(const sim::ScenarioConfig& base, int n_seeds,
                                      unsigned workers) {
  require(n_seeds >= 1, "at least one seed is required");
  base.validate();
  const auto n = static_cast<std::size_t>(n_seeds);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::vector<sim::RunResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        auto cfg = base;
        cfg.seed = base.seed + i;
        results[i] = sim::run_scenario(cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string_view to_string(SweepParam param) {
  switch (param) {
    case SweepParam::Epsilon: return "epsilon";
    case SweepParam::B: return "B";
    case SweepParam::C: return "C";
    case SweepParam::Environment: return "environment";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view text) {
  for (auto p : {SweepParam::Epsilon, SweepParam::B, SweepParam::C, SweepParam::Environment}) {
    if (text == to_string(p)) return p;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown sweep parameter '" + std::string(text) +
                  "' (expected epsilon, B, C or environment)");
}

sim::ScenarioConfig apply(sim::ScenarioConfig base, SweepParam param, std::string_view value) {
  switch (param) {
    case SweepParam::Epsilon: base.marl.epsilon = parse_number(value, "epsilon"); break;
    case SweepParam::B: base.trust.b = parse_number(value, "B"); break;
    case SweepParam::C: base.trust.c = parse_number(value, "C"); break;
    case SweepParam::Environment:
      base.environment =
          behavior::EnvironmentProfile::preset(behavior::parse_environment(value));
      break;
  }
  base.validate();
  return base;
}

std::vector<SweepRow> sweep(const sim::ScenarioConfig& base, SweepParam param,
                            const std::vector<std::string>& values, int n_seeds, int burn_in,
                            unsigned workers) {
  require(!values.empty(), "sweep needs at least one value");
  std::vector<sim::ScenarioConfig> configs;
  for (const auto& v : values) configs.push_back(apply(base, param, v));

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto runs = run_seeds(configs[i], n_seeds, workers);
    SweepRow row;
    row.value = values[i];
    row.config_digest = config::config_digest(configs[i]);
    row.n_seeds = n_seeds;
    std::uint64_t epochs = 0, optimal = 0, late = 0, late_optimal = 0;
    double returns = 0.0;
    for (const auto& r : runs) {
      for (const auto& e : r.epochs) {
        const bool good = marl::is_optimal(e.decision());
        ++epochs;
        optimal += good;
        returns += e.return_value;
        if (e.epoch >= burn_in) {
          ++late;
          late_optimal += good;
        }
      }
      row.retain_mean += r.retain_count();
      row.modify_mean += r.modify_count();
    }
    row.mean_return = epochs ? returns / static_cast<double>(epochs) : 0.0;
    row.optimal_pct = epochs ? 100.0 * static_cast<double>(optimal) / epochs : 0.0;
    row.optimal_pct_converged = late ? 100.0 * static_cast<double>(late_optimal) / late : 0.0;
    row.retain_mean /= n_seeds;
    row.modify_mean /= n_seeds;
    rows.push_back(std::move(row));
  }
  return rows;
}

csv::Table sweep_summary_table(const std::vector<SweepRow>& rows, SweepParam param,
                               std::uint64_t base_seed) {
  csv::Table t;
  t.header = {"config_digest", "seed",        "parameter",   "value",
              "n_seeds",       "mean_return", "optimal_pct", "optimal_pct_converged",
              "retain_mean",   "modify_mean"};
  for (const auto& r : rows) {
    t.add_row({r.config_digest, std::to_string(base_seed), std::string(to_string(param)), r.value,
               std::to_string(r.n_seeds), csv::format_double(r.mean_return),
               csv::format_double(r.optimal_pct), csv::format_double(r.optimal_pct_converged),
               csv::format_double(r.retain_mean), csv::format_double(r.modify_mean)});
  }
  return t;
}

csv::Table ig_curve_table(const sim::ScenarioConfig& base, SweepParam param,
                          const std::vector<std::string>& values, double g_step) {
  require(param == SweepParam::B || param == SweepParam::C, "trust curves need B or C");
  require(g_step > 0.0, "g step must be positive");
  auto t = long_table();
  for (const auto& v : values) {
    const auto cfg = apply(base, param, v);
    const auto digest = config::config_digest(cfg);
    const std::string series = std::string(to_string(param)) + "=" + v;
    const auto steps = static_cast<int>(std::floor(100.0 / g_step + 1e-9));
    for (int i = 0; i <= steps; ++i) {
      const double g = std::min(100.0, i * g_step);
      add_point(t, digest, cfg.seed, "ig_curve", series, csv::format_double(g),
                trust::inverse_gompertz(g, cfg.trust));
    }
  }
  return t;
}

std::array<std::vector<double>, 3> class_trust_curves(const sim::ScenarioConfig& base,
                                                      int episodes) {
  require(episodes >= 1, "at least one episode is required");
  auto cfg = base;
  cfg.join_attempts_per_episode = 0.0;
  cfg.parent_change_probability = 0.0;
  cfg.rejoin_probability = 0.0;
  cfg.dio_neighbors = 0;
  SeededRandom pop_rng(cfg.seed);
  const std::array<NodeClass, 3> classes{NodeClass::Honest, NodeClass::Selfish,
                                         NodeClass::Malicious};
  std::vector<dodag::NodeRecord> population;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    population.push_back(
        behavior::make_node(NodeId{static_cast<std::uint32_t>(i + 2)}, classes[i], pop_rng));
  }
  sim::Simulation s(cfg, std::move(population));
  std::array<std::vector<double>, 3> curves;
  for (int e = 0; e < episodes; ++e) {
    s.run_episode();
    for (std::size_t i = 0; i < classes.size(); ++i) {
      curves[i].push_back(s.dodag().node(NodeId{static_cast<std::uint32_t>(i + 2)}).trust);
    }
  }
  return curves;
}

std::string_view to_string(Figure figure) {
  switch (figure) {
    case Figure::TrustCurves: return "trust_curves";
    case Figure::FailureRates: return "failure_rates";
    case Figure::DecisionDistribution: return "decision_distribution";
    case Figure::EnvironmentDecisions: return "environment_decisions";
    case Figure::ReturnsBox: return "returns_box";
  }
  return "?";
}

Figure parse_figure(std::string_view text) {
  for (auto f : {Figure::TrustCurves, Figure::FailureRates, Figure::DecisionDistribution,
                 Figure::EnvironmentDecisions, Figure::ReturnsBox}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown figure id '" + std::string(text) + "'");
}

csv::Table figure_data(Figure figure, const sim::ScenarioConfig& base, int n_seeds,
                       unsigned workers) {
  require(n_seeds >= 1, "at least one seed is required");
  auto t = long_table();
  const auto name = to_string(figure);
  switch (figure) {
    case Figure::TrustCurves: {
      const std::array<NodeClass, 3> classes{NodeClass::Honest, NodeClass::Selfish,
                                             NodeClass::Malicious};
      const auto digest = config::config_digest(base);
      std::array<std::vector<double>, 3> sums;
      for (int i = 0; i < n_seeds; ++i) {
        auto cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(i);
        const auto curves = class_trust_curves(cfg);
        for (std::size_t c = 0; c < 3; ++c) {
          sums[c].resize(curves[c].size(), 0.0);
          for (std::size_t k = 0; k < curves[c].size(); ++k) sums[c][k] += curves[c][k];
        }
      }
      for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t k = 0; k < sums[c].size(); ++k) {
          add_point(t, digest, base.seed, name, std::string(to_string(classes[c])),
                    std::to_string(k + 1), sums[c][k] / n_seeds);
        }
      }
      break;
    }
    case Figure::FailureRates:
    case Figure::EnvironmentDecisions:
    case Figure::ReturnsBox: {
      for (auto env : kEnvironments) {
        const auto cfg = with_environment(base, env);
        const auto digest = config::config_digest(cfg);
        const auto runs = run_seeds(cfg, n_seeds, workers);
        const std::string series(behavior::to_string(env));
        if (figure == Figure::FailureRates) {
          for (int e = 0; e < cfg.n_epochs; ++e) {
            double sum = 0.0;
            for (const auto& r : runs) sum += r.epoch_failure_rate.at(e);
            add_point(t, digest, base.seed, name, series, std::to_string(e), sum / n_seeds);
          }
        } else if (figure == Figure::EnvironmentDecisions) {
          double retain = 0.0, modify = 0.0;
          for (const auto& r : runs) {
            retain += r.retain_count();
            modify += r.modify_count();
          }
          add_point(t, digest, base.seed, name, series, "retain", retain / n_seeds);
          add_point(t, digest, base.seed, name, series, "modify", modify / n_seeds);
        } else {
          for (std::size_t s = 0; s < runs.size(); ++s) {
            for (const auto& e : runs[s].epochs) {
              add_point(t, digest, base.seed + s, name, series, std::to_string(e.epoch),
                        e.return_value);
            }
          }
        }
      }
      break;
    }
    case Figure::DecisionDistribution: {
      const auto digest = config::config_digest(base);
      const auto runs = run_seeds(base, n_seeds, workers);
      std::array<double, 4> tally{};
      double total = 0.0;
      for (const auto& r : runs) {
        for (std::size_t i = 0; i < 4; ++i) tally[i] += static_cast<double>(r.decision_tally[i]);
        total += static_cast<double>(r.epochs.size());
      }
      for (const auto& pair : marl::kPairOrder) {
        add_point(t, digest, base.seed, name, marl::label(pair), "proportion",
                  tally[pair.index()] / total);
      }
      break;
    }
  }
  return t;
}

}  // namespace trustrpl::experiments
