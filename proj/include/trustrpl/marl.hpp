#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustrpl/dodag.hpp"
#include "trustrpl/random.hpp"

namespace trustrpl::marl {

enum class DodagState { HighReturn, LowReturn };
enum class Action { Retain, Modify };

std::string_view to_string(DodagState state);
std::string_view to_string(Action action);

struct StateActionPair {
  DodagState state = DodagState::HighReturn;
  Action action = Action::Retain;

  /// Storage slot, 0..3, independent of the tie-break order.
  std::size_t index() const noexcept {
    return static_cast<std::size_t>(state) * 2 + static_cast<std::size_t>(action);
  }
  static StateActionPair from_index(std::size_t index);

  bool operator==(const StateActionPair&) const = default;
};

/// Short label: HR, HM, LR or LM.
std::string label(const StateActionPair& pair);
StateActionPair parse_pair_label(std::string_view text);

/// Greedy ties resolve to the earliest pair in this order.
inline constexpr std::array<StateActionPair, 4> kPairOrder{{
    {DodagState::HighReturn, Action::Retain},
    {DodagState::LowReturn, Action::Modify},
    {DodagState::LowReturn, Action::Retain},
    {DodagState::HighReturn, Action::Modify},
}};

/// The two desirable decisions: retain under high return, modify under low.
bool is_optimal(const StateActionPair& pair);

struct MarlParams {
  double gamma = 0.8;
  double epsilon = 0.2;
  int episodes_per_epoch = 10;
  double value_iteration_tolerance = 1e-9;

  void validate() const;
  bool operator==(const MarlParams&) const = default;
};

/// Q values of the four state-action pairs plus the observed transition counts
/// (pair -> next state) they are estimated from.
class QTable {
 public:
  double q(const StateActionPair& pair) const { return q_[pair.index()]; }
  void set_q(const StateActionPair& pair, double value) { q_[pair.index()] = value; }

  std::uint64_t transitions(const StateActionPair& pair, DodagState next) const {
    return counts_[pair.index()][static_cast<std::size_t>(next)];
  }
  void observe(const StateActionPair& pair, DodagState next) {
    ++counts_[pair.index()][static_cast<std::size_t>(next)];
  }

  /// p(next | pair) with add-one smoothing over the two states.
  double transition_probability(const StateActionPair& pair, DodagState next) const;

  bool operator==(const QTable&) const = default;

 private:
  std::array<double, 4> q_{};
  std::array<std::array<std::uint64_t, 2>, 4> counts_{};
};

enum class RewardEvent { Existing, NewJoiner, ParentChange };

struct RewardDecision {
  bool denied = false;
  int reward = 0;

  bool operator==(const RewardDecision&) const = default;
};

/// Episode-level policy a parent applies to a child's trust.
RewardDecision episode_reward(double trust, double theta, RewardEvent event);

/// ceil(n / 2).
int return_threshold(int n_nonroot);

/// HighReturn iff value >= ceil(n/2); an empty DODAG is always LowReturn.
DodagState classify_return(int return_value, int n_nonroot);

struct ReturnSummary {
  int return_value = 0;
  int n_nonroot = 0;
  DodagState state = DodagState::LowReturn;
};

/// Sums the latest reward of every active non-root node and classifies it.
ReturnSummary aggregate_return(const dodag::Dodag& dodag);

/// Root-level reward for moving from `current` to `next` under `action`.
int expected_reward(DodagState current, DodagState next, Action action);

/// Value iteration of the Bellman optimality equation over the smoothed
/// transition model, starting from the table's current values. Returns the
/// number of sweeps performed.
int update_q(QTable& table, const MarlParams& params);

/// Highest-valued pair, ties broken by kPairOrder.
StateActionPair greedy_pair(const QTable& table);

struct Selection {
  StateActionPair pair;
  bool explored = false;
};

/// With probability 1 - epsilon the greedy pair, otherwise one of the other
/// three uniformly. Always consumes exactly two draws from `rng`.
Selection epsilon_greedy_select(const QTable& table, SeededRandom& rng, double epsilon);

/// Suspends every active non-root node whose latest reward is -1, handing its
/// children to its parent. Returns the suspended ids in processing order.
std::vector<NodeId> modify_dodag(dodag::Dodag& dodag);

struct EpochRecord {
  int epoch = 0;
  int return_value = 0;
  int n_nonroot = 0;
  DodagState state = DodagState::LowReturn;  // observed
  StateActionPair chosen;
  bool explored = false;
  std::vector<NodeId> removed_nodes;

  Action executed() const noexcept { return chosen.action; }
  /// The observed state paired with the executed action.
  StateActionPair decision() const noexcept { return {state, chosen.action}; }

  bool operator==(const EpochRecord&) const = default;
};

/// Learning state kept by the root across epochs.
struct RootAgent {
  QTable table;
  std::optional<StateActionPair> previous;

  bool operator==(const RootAgent&) const = default;
};

/// End-of-epoch decision: aggregate, classify, learn from the previous
/// choice, select, then retain or modify.
EpochRecord decide_epoch(dodag::Dodag& dodag, RootAgent& agent, const MarlParams& params,
                         SeededRandom& rng);

}  // namespace trustrpl::marl
