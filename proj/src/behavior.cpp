#include "trustrpl/behavior.hpp"

#include <cmath>
#include <string>

namespace trustrpl::behavior {

std::pair<double, double> failure_interval(NodeClass cls) {
  switch (cls) {
    case NodeClass::Honest:
      return {0.00, 0.10};
    case NodeClass::Selfish:
      return {0.40, 0.50};
    case NodeClass::Malicious:
      return {0.80, 0.90};
  }
  return {0.0, 0.0};
}

std::string_view to_string(Environment env) {
  switch (env) {
    case Environment::LowMalicious:
      return "low_malicious";
    case Environment::MediumMalicious:
      return "medium_malicious";
    case Environment::HighMalicious:
      return "high_malicious";
  }
  return "unknown";
}

Environment parse_environment(std::string_view text) {
  if (text == "low_malicious") return Environment::LowMalicious;
  if (text == "medium_malicious") return Environment::MediumMalicious;
  if (text == "high_malicious") return Environment::HighMalicious;
  throw Error(ErrorCode::InvalidArgument, "unknown environment '" + std::string(text) +
                                              "' (expected low_malicious, medium_malicious "
                                              "or high_malicious)");
}

std::pair<double, double> EnvironmentProfile::malicious_interval(Environment env) {
  switch (env) {
    case Environment::LowMalicious:
      return {0.10, 0.10};
    case Environment::MediumMalicious:
      return {0.40, 0.45};
    case Environment::HighMalicious:
      return {0.85, 0.90};
  }
  return {0.0, 0.0};
}

EnvironmentProfile EnvironmentProfile::preset(Environment env) {
  const auto [lo, hi] = malicious_interval(env);
  return {env, (lo + hi) / 2.0, 0.5};
}

void EnvironmentProfile::validate() const {
  const auto [lo, hi] = malicious_interval(name);
  // Compare with a little slack so 0.1 written in JSON is accepted as 0.10.
  constexpr double slack = 1e-12;
  require(malicious_fraction >= lo - slack && malicious_fraction <= hi + slack,
          "environment.malicious_fraction for " + std::string(to_string(name)) +
              " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  require(honest_share >= 0.0 && honest_share <= 1.0,
          "environment.honest_share must lie in [0, 1]");
}

NodeClass draw_class(const EnvironmentProfile& env, SeededRandom& rng) {
  const double u = rng.uniform();
  if (u < env.malicious_fraction) return NodeClass::Malicious;
  const double honest = env.malicious_fraction + (1.0 - env.malicious_fraction) * env.honest_share;
  return u < honest ? NodeClass::Honest : NodeClass::Selfish;
}

dodag::NodeRecord make_node(NodeId id, NodeClass cls, SeededRandom& rng) {
  const auto [lo, hi] = failure_interval(cls);
  dodag::NodeRecord rec;
  rec.id = id;
  rec.node_class = cls;
  rec.failure_rate = rng.uniform(lo, hi);
  rec.etx = rng.uniform(kMinEtx, kMaxEtx);
  rec.trust = 1.0;
  rec.rank = 0;
  rec.active = false;
  return rec;
}

std::vector<dodag::NodeRecord> spawn_population(std::size_t n, const EnvironmentProfile& env,
                                                SeededRandom& rng, NodeId first_id) {
  require(n >= 1, "population size must be at least 1");
  env.validate();
  // The epsilon absorbs representation error, e.g. 0.85 * 20 = 16.999...
  const auto malicious =
      static_cast<std::size_t>(std::floor(env.malicious_fraction * static_cast<double>(n) + 1e-9));
  const std::size_t remainder = n - malicious;
  const auto honest = static_cast<std::size_t>(
      std::ceil(env.honest_share * static_cast<double>(remainder) - 1e-9));

  std::vector<NodeClass> classes;
  classes.reserve(n);
  classes.insert(classes.end(), malicious, NodeClass::Malicious);
  classes.insert(classes.end(), honest, NodeClass::Honest);
  classes.insert(classes.end(), remainder - honest, NodeClass::Selfish);
  for (std::size_t i = classes.size(); i > 1; --i) {
    std::swap(classes[i - 1], classes[rng.index(i)]);
  }

  std::vector<dodag::NodeRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make_node(NodeId{first_id.value + static_cast<std::uint32_t>(i)}, classes[i], rng));
  }
  return out;
}

std::uint64_t generate_misbehaviors(const dodag::NodeRecord& node, std::uint64_t ops,
                                    SeededRandom& rng) {
  return rng.binomial(ops, node.failure_rate);
}

}  // namespace trustrpl::behavior
