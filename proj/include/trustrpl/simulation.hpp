#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trustrpl/behavior.hpp"
#include "trustrpl/dodag.hpp"
#include "trustrpl/marl.hpp"
#include "trustrpl/random.hpp"
#include "trustrpl/trust.hpp"

namespace trustrpl::sim {

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int n_initial_nodes = 20;
  behavior::EnvironmentProfile environment =
      behavior::EnvironmentProfile::preset(behavior::Environment::MediumMalicious);
  trust::TrustParams trust;
  marl::MarlParams marl;  // carries episodes_per_epoch
  int n_epochs = 140;
  int ops_per_episode = 20;
  double join_attempts_per_episode = 1.0;
  double parent_change_probability = 0.05;
  // Chance that a join attempt comes from a previously suspended or denied node.
  double rejoin_probability = 0.25;
  // How many active nodes hear a DIS or send a DIO; 0 means every active node.
  int dio_neighbors = 3;
  double rank_factor = 1.0;

  /// Throws Error{Config} listing every invalid field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct EpisodeSummary {
  int episode = 0;
  int join_attempts = 0;
  int joins_accepted = 0;
  int joins_denied = 0;
  int parent_change_attempts = 0;
  int parent_changes = 0;
  std::uint64_t operations = 0;
  std::uint64_t misbehaviors = 0;
};

struct TrustSample {
  int episode = 0;
  NodeId node;
  NodeClass node_class = NodeClass::Honest;
  NodeId parent;
  double trust = 1.0;
  int reward = 0;

  bool operator==(const TrustSample&) const = default;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string generator;
  std::string environment;
  int n_epochs = 0;
  int episodes_per_epoch = 0;

  bool operator==(const RunMetadata&) const = default;
};

struct RunResult {
  RunMetadata metadata;
  std::vector<TrustSample> trust_series;
  std::vector<marl::EpochRecord> epochs;
  std::vector<double> epoch_failure_rate;  // observed misbehaviors / operations per epoch
  std::array<std::uint64_t, 4> decision_tally{};  // observed state x executed action
  std::array<std::uint64_t, 4> chosen_tally{};    // pair returned by the selector

  int retain_count() const;
  int modify_count() const;
  double mean_return() const;
  /// Share of epochs whose decision is (HighReturn, Retain) or (LowReturn, Modify),
  /// counted from epoch `from` onwards.
  double optimal_fraction(int from = 0) const;

  bool operator==(const RunResult&) const = default;
};

/// One seeded run. Owns its DODAG, root agent and random source.
class Simulation {
 public:
  /// Spawns `n_initial_nodes` from the environment and joins them before
  /// the first episode.
  explicit Simulation(ScenarioConfig config);

  /// Starts from a caller-supplied population instead of a spawned one.
  Simulation(ScenarioConfig config, std::vector<dodag::NodeRecord> population);

  /// One episode: joins, parent changes, traffic, trust updates, rewards.
  EpisodeSummary run_episode();

  /// episodes_per_epoch episodes followed by the root's decision.
  marl::EpochRecord run_epoch();

  /// Runs all configured epochs and returns the collected result.
  RunResult run();

  const ScenarioConfig& config() const noexcept { return config_; }
  const dodag::Dodag& dodag() const noexcept { return dodag_; }
  dodag::Dodag& dodag() noexcept { return dodag_; }
  const marl::RootAgent& agent() const noexcept { return agent_; }
  int episode() const noexcept { return episode_; }
  const RunResult& result() const noexcept { return result_; }

 private:
  dodag::TrustContext trust_context() const;
  std::vector<NodeId> sample_neighbors(std::vector<NodeId> pool);
  void join_population(std::vector<dodag::NodeRecord> population);
  bool attempt_join(dodag::NodeRecord joiner);

  ScenarioConfig config_;
  SeededRandom rng_;
  dodag::Dodag dodag_;
  marl::RootAgent agent_;
  int episode_ = 0;
  int epoch_ = 0;
  std::uint64_t epoch_operations_ = 0;
  std::uint64_t epoch_misbehaviors_ = 0;
  RunResult result_;
};

RunResult run_scenario(const ScenarioConfig& config);

}  // namespace trustrpl::sim
