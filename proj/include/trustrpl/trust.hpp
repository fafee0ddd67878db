#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "trustrpl/routing_table.hpp"
#include "trustrpl/types.hpp"

namespace trustrpl::trust {

/// Inverse Gompertz shape, admission threshold and recency decay.
struct TrustParams {
  double a = 1.0;        // initial asymptote, fixed at 1
  double b = 150.0;      // displacement
  double c = 0.7;        // decay
  double theta = 0.5;    // admission / reward threshold
  double alpha = 0.05;   // recency decay of indirect-trust weights, per episode

  void validate() const;
  bool operator==(const TrustParams&) const = default;
};

/// Direct trust for a misbehavior percentage `g` in [0, 100]:
/// 1 - A * exp(-B * exp(-C * g)), clamped to [0, 1].
double inverse_gompertz(double g, const TrustParams& params);

/// Weights below this are treated as zero when aggregating opinions.
inline constexpr double kNegligibleWeight = 0.01;

/// Recency weight exp(-alpha * (total - t)) of an opinion stamped at episode
/// `t` of an epoch with `total` episodes. Negligible weights return 0.
double trust_coefficient(int t, int total, double alpha);

/// A former (or current) parent's direct trust in some child.
struct TrustOpinion {
  NodeId source_parent;
  double tau = 1.0;
  int episode = 0;  // episode index within the current epoch, 0..total

  bool operator==(const TrustOpinion&) const = default;
};

enum class TrustOrigin { Aggregated, FreshNode };

struct IndirectTrust {
  double value = 1.0;
  TrustOrigin origin = TrustOrigin::FreshNode;
};

/// Recency-weighted sum of opinions, clamped to [0, 1]. With no opinions, or
/// when every weight is negligible, the node is treated as new (trust 1.0).
IndirectTrust indirect_trust(std::span<const TrustOpinion> opinions, int total, double alpha);

/// Misbehavior evidence per (parent, child) tenure.
class MisbehaviorLedger {
 public:
  struct Counts {
    std::uint64_t misbehaviors = 0;
    std::uint64_t operations = 0;

    bool operator==(const Counts&) const = default;
  };

  void record(NodeId parent, NodeId child, std::uint64_t ops, std::uint64_t misbehaviors);

  Counts counts(NodeId parent, NodeId child) const;

  /// 100 * misbehaviors / operations over the tenure; 0 with no operations.
  double misbehavior_pct(NodeId parent, NodeId child) const;

  /// Starts a new tenure of `child` under `parent`.
  void reset(NodeId parent, NodeId child);

  /// Carries the evidence of `child` over from `from_parent` to `to_parent`,
  /// used when a suspended parent's children are handed to the grandparent.
  void transfer(NodeId from_parent, NodeId to_parent, NodeId child);

  bool operator==(const MisbehaviorLedger&) const = default;

 private:
  std::map<std::pair<NodeId, NodeId>, Counts> counts_;
};

/// Refreshes `child`'s entry in `table` from the ledger: stores the tenure's
/// misbehavior percentage, stamps `episode`, and lowers the trust to the
/// Inverse Gompertz value when that is below the current trust. Trust is never
/// raised within a tenure. Returns the new trust.
double update_direct_trust(RoutingTable& table, NodeId child, const MisbehaviorLedger& ledger,
                           const TrustParams& params, int episode);

}  // namespace trustrpl::trust
