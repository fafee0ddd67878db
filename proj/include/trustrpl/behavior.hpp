#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "trustrpl/dodag.hpp"
#include "trustrpl/random.hpp"
#include "trustrpl/types.hpp"

namespace trustrpl::behavior {

struct BehaviorProfile {
  NodeClass node_class = NodeClass::Honest;
  double failure_rate = 0.0;
};

/// Closed failure-rate interval of a node class.
std::pair<double, double> failure_interval(NodeClass cls);

enum class Environment { LowMalicious, MediumMalicious, HighMalicious };

std::string_view to_string(Environment env);
Environment parse_environment(std::string_view text);

/// Share of malicious nodes; the rest is split between honest and selfish.
struct EnvironmentProfile {
  Environment name = Environment::MediumMalicious;
  double malicious_fraction = 0.425;
  double honest_share = 0.5;  // of the non-malicious remainder

  /// Default profile for `env`: 0.10, 0.425 and 0.875 malicious.
  static EnvironmentProfile preset(Environment env);

  /// Allowed malicious-fraction interval of `env`.
  static std::pair<double, double> malicious_interval(Environment env);

  void validate() const;
  bool operator==(const EnvironmentProfile&) const = default;
};

inline constexpr double kMinEtx = 1.0;
inline constexpr double kMaxEtx = 3.0;

/// Draws a class with the environment's proportions.
NodeClass draw_class(const EnvironmentProfile& env, SeededRandom& rng);

/// Builds an inactive node of class `cls` with a failure rate drawn from the
/// class interval and an ETX drawn from [1, 3].
dodag::NodeRecord make_node(NodeId id, NodeClass cls, SeededRandom& rng);

/// `n` not-yet-joined nodes with ids first_id, first_id + 1, ... The malicious
/// count is floor(fraction * n); honest and selfish split the remainder, with
/// honest taking the odd one. Classes are shuffled across ids.
std::vector<dodag::NodeRecord> spawn_population(std::size_t n, const EnvironmentProfile& env,
                                                SeededRandom& rng, NodeId first_id = NodeId{2});

/// Misbehaving operations out of `ops`, Binomial(ops, failure_rate).
std::uint64_t generate_misbehaviors(const dodag::NodeRecord& node, std::uint64_t ops,
                                    SeededRandom& rng);

}  // namespace trustrpl::behavior
