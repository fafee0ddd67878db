#include "trustrpl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "trustrpl/config_io.hpp"

namespace trustrpl::sim {

void ScenarioConfig::validate() const {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  auto nested = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      problems.emplace_back(e.what());
    }
  };
  check(n_initial_nodes >= 1, "n_initial_nodes must be at least 1");
  check(n_epochs >= 1, "n_epochs must be at least 1");
  check(ops_per_episode >= 0, "ops_per_episode must be non-negative");
  check(join_attempts_per_episode >= 0.0 && std::isfinite(join_attempts_per_episode),
        "join_attempts_per_episode must be non-negative");
  check(parent_change_probability >= 0.0 && parent_change_probability <= 1.0,
        "parent_change_probability must lie in [0, 1]");
  check(rejoin_probability >= 0.0 && rejoin_probability <= 1.0,
        "rejoin_probability must lie in [0, 1]");
  check(dio_neighbors >= 0, "dio_neighbors must be non-negative");
  check(rank_factor > 0.0 && std::isfinite(rank_factor), "rank_factor must be positive");
  nested([&] { environment.validate(); });
  nested([&] { trust.validate(); });
  nested([&] { marl.validate(); });
  if (problems.empty()) return;
  std::string msg = "invalid scenario config:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(ErrorCode::Config, msg);
}

int RunResult::retain_count() const {
  return static_cast<int>(std::count_if(epochs.begin(), epochs.end(), [](const auto& e) {
    return e.executed() == marl::Action::Retain;
  }));
}

int RunResult::modify_count() const { return static_cast<int>(epochs.size()) - retain_count(); }

double RunResult::mean_return() const {
  if (epochs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : epochs) sum += e.return_value;
  return sum / static_cast<double>(epochs.size());
}

double RunResult::optimal_fraction(int from) const {
  int total = 0;
  int optimal = 0;
  for (const auto& e : epochs) {
    if (e.epoch < from) continue;
    ++total;
    if (marl::is_optimal(e.decision())) ++optimal;
  }
  return total == 0 ? 0.0 : static_cast<double>(optimal) / total;
}

namespace {

ScenarioConfig validated(ScenarioConfig config) {
  config.validate();
  return config;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config)
    : config_(validated(std::move(config))), rng_(config_.seed),
      dodag_(dodag::Dodag::create_root({config_.rank_factor, 1})) {
  auto population = behavior::spawn_population(static_cast<std::size_t>(config_.n_initial_nodes),
                                               config_.environment, rng_, NodeId{2});
  join_population(std::move(population));
}

Simulation::Simulation(ScenarioConfig config, std::vector<dodag::NodeRecord> population)
    : config_(validated(std::move(config))), rng_(config_.seed),
      dodag_(dodag::Dodag::create_root({config_.rank_factor, 1})) {
  join_population(std::move(population));
}

void Simulation::join_population(std::vector<dodag::NodeRecord> population) {
  result_.metadata = {config_.seed, config::config_digest(config_),
                      std::string(SeededRandom::kAlgorithm),
                      std::string(behavior::to_string(config_.environment.name)), config_.n_epochs,
                      config_.marl.episodes_per_epoch};
  for (auto& rec : population) attempt_join(std::move(rec));
  dodag_.check_invariants();
}

dodag::TrustContext Simulation::trust_context() const {
  const int per_epoch = config_.marl.episodes_per_epoch;
  return {config_.trust, episode_, {epoch_ * per_epoch + 1, per_epoch}};
}

std::vector<NodeId> Simulation::sample_neighbors(std::vector<NodeId> pool) {
  const auto limit = static_cast<std::size_t>(config_.dio_neighbors);
  if (limit == 0 || pool.size() <= limit) return pool;
  // Partial Fisher-Yates, then restore id order so DIO order is stable.
  for (std::size_t i = 0; i < limit; ++i) {
    std::swap(pool[i], pool[i + rng_.index(pool.size() - i)]);
  }
  pool.resize(limit);
  std::sort(pool.begin(), pool.end());
  return pool;
}

bool Simulation::attempt_join(dodag::NodeRecord joiner) {
  const auto scenario =
      rng_.bernoulli(0.5) ? dodag::JoinScenario::DodagInvites : dodag::JoinScenario::NodeSolicits;
  const auto neighbors = sample_neighbors(dodag_.active_nodes());
  const auto outcome =
      dodag_.join_node(std::move(joiner), scenario, trust_context(), std::span(neighbors));
  return outcome.accepted;
}

EpisodeSummary Simulation::run_episode() {
  ++episode_;
  dodag_.set_episode_index(episode_);
  EpisodeSummary summary;
  summary.episode = episode_;
  const auto ctx = trust_context();

  // 1. Join attempts by newcomers (trickle-triggered DIO or solicited).
  const double whole = std::floor(config_.join_attempts_per_episode);
  int attempts = static_cast<int>(whole);
  if (rng_.bernoulli(config_.join_attempts_per_episode - whole)) ++attempts;
  for (int i = 0; i < attempts; ++i) {
    std::vector<NodeId> former;
    for (const auto& [id, rec] : dodag_.nodes()) {
      if (!rec.active && id != kRootId) former.push_back(id);
    }
    dodag::NodeRecord rec;
    if (rng_.bernoulli(config_.rejoin_probability) && !former.empty()) {
      rec = dodag_.node(former[rng_.index(former.size())]);
    } else {
      const NodeClass cls = behavior::draw_class(config_.environment, rng_);
      rec = behavior::make_node(dodag_.allocate_id(), cls, rng_);
    }
    ++summary.join_attempts;
    if (attempt_join(std::move(rec))) {
      ++summary.joins_accepted;
    } else {
      ++summary.joins_denied;
    }
  }

  // 2. Parent changes towards a better-ranked neighbor.
  std::set<NodeId> moved;
  for (NodeId n : dodag_.active_non_root()) {
    if (!rng_.bernoulli(config_.parent_change_probability)) continue;
    const NodeId current = *dodag_.node(n).parent;
    std::vector<NodeId> pool;
    for (NodeId c : dodag_.active_nodes()) {
      if (c != n && c != current && !dodag_.is_descendant(c, n)) pool.push_back(c);
    }
    const auto heard = sample_neighbors(std::move(pool));
    if (heard.empty()) continue;
    std::vector<dodag::ControlMessage> dios;
    for (NodeId c : heard) dios.push_back(dodag::make_dio(c, dodag_.node(c).rank, n));
    const NodeId best = dodag::select_parent(dios);
    if (dodag_.node(best).rank >= dodag_.node(current).rank) continue;
    ++summary.parent_change_attempts;
    if (dodag_.change_parent(n, best, ctx).accepted) {
      ++summary.parent_changes;
      moved.insert(n);
    }
  }

  // 3. Downward traffic: each member receives ops_per_episode messages from a
  //    random ancestor, routed hop by hop through the routing tables.
  const auto ops = static_cast<std::uint64_t>(config_.ops_per_episode);
  for (NodeId n : dodag_.active_non_root()) {
    const auto chain = dodag_.ancestors(n);
    NodeId hop = chain[rng_.index(chain.size())];
    while (hop != n) hop = dodag::route_lookup(dodag_, hop, n);
    const auto& rec = dodag_.node(n);
    const auto bad = behavior::generate_misbehaviors(rec, ops, rng_);
    dodag_.ledger().record(*rec.parent, n, ops, bad);
    summary.operations += ops;
    summary.misbehaviors += bad;
  }
  epoch_operations_ += summary.operations;
  epoch_misbehaviors_ += summary.misbehaviors;

  // 4. Direct trust. 5. Rewards.
  for (NodeId n : dodag_.active_non_root()) {
    const NodeId parent = *dodag_.node(n).parent;
    trust::update_direct_trust(dodag_.table(parent), n, dodag_.ledger(), config_.trust, episode_);
    dodag_.sync_trust(n);
    const auto event = moved.contains(n) ? marl::RewardEvent::ParentChange
                                         : marl::RewardEvent::Existing;
    const auto decision = marl::episode_reward(dodag_.node(n).trust, config_.trust.theta, event);
    dodag_.set_reward(n, decision.reward);
    result_.trust_series.push_back({episode_, n, dodag_.node(n).node_class, parent,
                                    dodag_.node(n).trust, decision.reward});
  }
  return summary;
}

marl::EpochRecord Simulation::run_epoch() {
  dodag_.set_epoch_index(epoch_);
  epoch_operations_ = 0;
  epoch_misbehaviors_ = 0;
  for (int i = 0; i < config_.marl.episodes_per_epoch; ++i) run_episode();

  auto record = marl::decide_epoch(dodag_, agent_, config_.marl, rng_);
  dodag_.check_invariants();

  result_.epochs.push_back(record);
  result_.epoch_failure_rate.push_back(
      epoch_operations_ == 0 ? 0.0
                             : static_cast<double>(epoch_misbehaviors_) / epoch_operations_);
  ++result_.decision_tally[record.decision().index()];
  ++result_.chosen_tally[record.chosen.index()];
  ++epoch_;
  return record;
}

RunResult Simulation::run() {
  while (epoch_ < config_.n_epochs) run_epoch();
  return result_;
}

RunResult run_scenario(const ScenarioConfig& config) { return Simulation(config).run(); }

}  // namespace trustrpl::sim
