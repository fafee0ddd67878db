#include "trustrpl/trust.hpp"

#include <algorithm>
#include <cmath>

namespace trustrpl::trust {

void TrustParams::validate() const {
  require(a == 1.0, "trust.A must be 1.0");
  require(b > 0.0 && std::isfinite(b), "trust.B must be positive");
  require(c > 0.0 && std::isfinite(c), "trust.C must be positive");
  require(theta > 0.0 && theta < 1.0, "trust.theta must lie in (0, 1)");
  require(alpha > 0.0 && std::isfinite(alpha), "trust.alpha must be positive");
}

double inverse_gompertz(double g, const TrustParams& params) {
  require(g >= 0.0 && g <= 100.0, "misbehavior percentage must lie in [0, 100]");
  const double inner = params.b * std::exp(-params.c * g);
  // 1 - A e^{-x} written with expm1 so tiny trusts keep their precision.
  const double tau = (1.0 - params.a) - params.a * std::expm1(-inner);
  return std::clamp(tau, 0.0, 1.0);
}

double trust_coefficient(int t, int total, double alpha) {
  require(t >= 0, "episode index must be non-negative");
  require(t <= total, "episode index exceeds the epoch length");
  const double weight = std::exp(-alpha * static_cast<double>(total - t));
  return weight < kNegligibleWeight ? 0.0 : weight;
}

IndirectTrust indirect_trust(std::span<const TrustOpinion> opinions, int total, double alpha) {
  double sum = 0.0;
  bool any_weight = false;
  for (const auto& opinion : opinions) {
    const double weight = trust_coefficient(opinion.episode, total, alpha);
    if (weight == 0.0) continue;
    any_weight = true;
    sum += weight * opinion.tau;
  }
  if (!any_weight) return {1.0, TrustOrigin::FreshNode};
  return {std::clamp(sum, 0.0, 1.0), TrustOrigin::Aggregated};
}

void MisbehaviorLedger::record(NodeId parent, NodeId child, std::uint64_t ops,
                               std::uint64_t misbehaviors) {
  require(misbehaviors <= ops, "misbehaviors cannot exceed operations");
  auto& c = counts_[{parent, child}];
  c.operations += ops;
  c.misbehaviors += misbehaviors;
}

MisbehaviorLedger::Counts MisbehaviorLedger::counts(NodeId parent, NodeId child) const {
  auto it = counts_.find({parent, child});
  return it == counts_.end() ? Counts{} : it->second;
}

double MisbehaviorLedger::misbehavior_pct(NodeId parent, NodeId child) const {
  const Counts c = counts(parent, child);
  if (c.operations == 0) return 0.0;
  return 100.0 * static_cast<double>(c.misbehaviors) / static_cast<double>(c.operations);
}

void MisbehaviorLedger::reset(NodeId parent, NodeId child) { counts_[{parent, child}] = Counts{}; }

void MisbehaviorLedger::transfer(NodeId from_parent, NodeId to_parent, NodeId child) {
  const Counts moved = counts(from_parent, child);
  counts_.erase({from_parent, child});
  counts_[{to_parent, child}] = moved;
}

double update_direct_trust(RoutingTable& table, NodeId child, const MisbehaviorLedger& ledger,
                           const TrustParams& params, int episode) {
  RoutingEntry updated = table.entry(child);
  const double g = ledger.misbehavior_pct(table.owner(), child);
  updated.misbehavior_pct = g;
  updated.trust = std::min(updated.trust, inverse_gompertz(g, params));
  updated.episode = std::max(updated.episode, episode);
  table.upsert(updated);
  return updated.trust;
}

}  // namespace trustrpl::trust
