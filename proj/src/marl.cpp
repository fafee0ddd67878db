#include "trustrpl/marl.hpp"

#include <algorithm>
#include <cmath>

namespace trustrpl::marl {

namespace {

constexpr std::array<DodagState, 2> kStates{DodagState::HighReturn, DodagState::LowReturn};
constexpr std::array<Action, 2> kActions{Action::Retain, Action::Modify};
constexpr int kMaxSweeps = 1'000'000;

}  // namespace

std::string_view to_string(DodagState state) {
  return state == DodagState::HighReturn ? "high_return" : "low_return";
}

std::string_view to_string(Action action) {
  return action == Action::Retain ? "retain" : "modify";
}

StateActionPair StateActionPair::from_index(std::size_t index) {
  require(index < 4, "state-action index out of range");
  return {static_cast<DodagState>(index / 2), static_cast<Action>(index % 2)};
}

std::string label(const StateActionPair& pair) {
  std::string out;
  out += pair.state == DodagState::HighReturn ? 'H' : 'L';
  out += pair.action == Action::Retain ? 'R' : 'M';
  return out;
}

StateActionPair parse_pair_label(std::string_view text) {
  for (const auto& pair : kPairOrder) {
    if (label(pair) == text) return pair;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown state-action label '" + std::string(text) + "'");
}

bool is_optimal(const StateActionPair& pair) {
  return (pair.state == DodagState::HighReturn && pair.action == Action::Retain) ||
         (pair.state == DodagState::LowReturn && pair.action == Action::Modify);
}

void MarlParams::validate() const {
  require(gamma >= 0.0 && gamma < 1.0, "marl.gamma must lie in [0, 1)");
  require(epsilon >= 0.0 && epsilon <= 1.0, "marl.epsilon must lie in [0, 1]");
  require(episodes_per_epoch >= 1, "episodes_per_epoch must be at least 1");
  require(value_iteration_tolerance > 0.0 && value_iteration_tolerance < 1.0,
          "marl.value_iteration_tolerance must lie in (0, 1)");
}

double QTable::transition_probability(const StateActionPair& pair, DodagState next) const {
  const auto& c = counts_[pair.index()];
  const double total = static_cast<double>(c[0] + c[1]) + 2.0;
  return (static_cast<double>(c[static_cast<std::size_t>(next)]) + 1.0) / total;
}

RewardDecision episode_reward(double trust, double theta, RewardEvent event) {
  require(trust >= 0.0 && trust <= 1.0, "trust must lie in [0, 1]");
  switch (event) {
    case RewardEvent::ParentChange:
      return {false, 0};
    case RewardEvent::NewJoiner:
      return trust < theta ? RewardDecision{true, 0} : RewardDecision{false, 0};
    case RewardEvent::Existing:
      return {false, trust < theta ? -1 : +1};
  }
  return {};
}

int return_threshold(int n_nonroot) {
  require(n_nonroot >= 0, "node count must be non-negative");
  return (n_nonroot + 1) / 2;
}

DodagState classify_return(int return_value, int n_nonroot) {
  if (n_nonroot == 0) return DodagState::LowReturn;
  return return_value >= return_threshold(n_nonroot) ? DodagState::HighReturn
                                                     : DodagState::LowReturn;
}

ReturnSummary aggregate_return(const dodag::Dodag& dodag) {
  ReturnSummary out;
  for (NodeId id : dodag.active_non_root()) {
    out.return_value += dodag.latest_reward(id);
    ++out.n_nonroot;
  }
  out.state = classify_return(out.return_value, out.n_nonroot);
  return out;
}

int expected_reward(DodagState current, DodagState next, Action action) {
  if (current == next) return 0;
  const bool improved = current == DodagState::LowReturn;
  if (action == Action::Retain) return improved ? +1 : -1;
  return improved ? -1 : +1;
}

int update_q(QTable& table, const MarlParams& params) {
  params.validate();
  std::array<std::array<double, 2>, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (DodagState next : kStates) {
      p[i][static_cast<std::size_t>(next)] =
          table.transition_probability(StateActionPair::from_index(i), next);
    }
  }

  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    std::array<double, 2> best{};
    for (DodagState s : kStates) {
      best[static_cast<std::size_t>(s)] =
          std::max(table.q({s, Action::Retain}), table.q({s, Action::Modify}));
    }
    double delta = 0.0;
    std::array<double, 4> next_q{};
    for (DodagState s : kStates) {
      for (Action a : kActions) {
        const StateActionPair pair{s, a};
        double value = 0.0;
        for (DodagState s2 : kStates) {
          value += p[pair.index()][static_cast<std::size_t>(s2)] *
                   (expected_reward(s, s2, a) + params.gamma * best[static_cast<std::size_t>(s2)]);
        }
        next_q[pair.index()] = value;
        delta = std::max(delta, std::abs(value - table.q(pair)));
      }
    }
    for (std::size_t i = 0; i < 4; ++i) table.set_q(StateActionPair::from_index(i), next_q[i]);
    // Contraction bound: the remaining error is at most gamma / (1 - gamma) * delta.
    if (params.gamma * delta <= (1.0 - params.gamma) * params.value_iteration_tolerance) {
      return sweep;
    }
  }
  throw Error(ErrorCode::Integrity, "value iteration did not converge");
}

StateActionPair greedy_pair(const QTable& table) {
  StateActionPair best = kPairOrder[0];
  for (const auto& pair : kPairOrder) {
    if (table.q(pair) > table.q(best)) best = pair;
  }
  return best;
}

Selection epsilon_greedy_select(const QTable& table, SeededRandom& rng, double epsilon) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
  const StateActionPair best = greedy_pair(table);
  const double u = rng.uniform();
  const std::uint64_t pick = rng.index(3);
  if (u >= epsilon) return {best, false};
  std::array<StateActionPair, 3> others{};
  std::size_t k = 0;
  for (const auto& pair : kPairOrder) {
    if (!(pair == best)) others[k++] = pair;
  }
  return {others[pick], true};
}

std::vector<NodeId> modify_dodag(dodag::Dodag& dodag) {
  std::vector<NodeId> doomed;
  for (NodeId id : dodag.active_non_root()) {
    if (dodag.latest_reward(id) == -1) doomed.push_back(id);
  }
  // Children are handed upwards before each deletion. A doomed child that was
  // moved under its grandparent is removed from there when its turn comes.
  for (NodeId id : doomed) dodag.suspend(id);
  return doomed;
}

EpochRecord decide_epoch(dodag::Dodag& dodag, RootAgent& agent, const MarlParams& params,
                         SeededRandom& rng) {
  const ReturnSummary summary = aggregate_return(dodag);
  if (agent.previous) agent.table.observe(*agent.previous, summary.state);
  update_q(agent.table, params);
  const Selection selection = epsilon_greedy_select(agent.table, rng, params.epsilon);

  EpochRecord record;
  record.epoch = dodag.epoch_index();
  record.return_value = summary.return_value;
  record.n_nonroot = summary.n_nonroot;
  record.state = summary.state;
  record.chosen = selection.pair;
  record.explored = selection.explored;
  if (selection.pair.action == Action::Modify) record.removed_nodes = modify_dodag(dodag);
  agent.previous = selection.pair;
  return record;
}

}  // namespace trustrpl::marl
