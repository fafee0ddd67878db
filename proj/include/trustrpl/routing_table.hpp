#pragma once

#include <map>
#include <optional>
#include <vector>

#include "trustrpl/types.hpp"

namespace trustrpl {

/// Per-child bookkeeping held by a parent in storing mode.
struct RoutingEntry {
  NodeId destination;
  NodeId next_hop;
  double trust = 1.0;
  int reward = 0;
  int episode = 0;
  double misbehavior_pct = 0.0;

  bool operator==(const RoutingEntry&) const = default;
};

/// Routing state of one node.
///
/// `entries()` holds one RoutingEntry per direct child (destination ==
/// next_hop) and carries that child's trust and reward. `routes()` holds the
/// downward routes to deeper descendants, keyed by destination, each pointing
/// at the child whose subtree contains it. Entries of former children are
/// kept in `history()` so the owner can answer trust queries about them later.
class RoutingTable {
 public:
  RoutingTable() = default;
  explicit RoutingTable(NodeId owner) : owner_(owner) {}

  NodeId owner() const noexcept { return owner_; }

  const RoutingEntry* find(NodeId destination) const;
  RoutingEntry* find(NodeId destination);

  /// Entry for `destination`; throws Error{UnknownNode} if absent.
  const RoutingEntry& entry(NodeId destination) const;
  RoutingEntry& entry(NodeId destination);

  /// Inserts or replaces the entry for `entry.destination`. Replacing an entry
  /// with an older episode stamp is an integrity error.
  void upsert(const RoutingEntry& entry);

  /// Moves the entry for `destination` into history. No-op if absent.
  void archive(NodeId destination);

  /// Removes and returns the entry for `destination` without archiving it.
  std::optional<RoutingEntry> take(NodeId destination);

  const std::map<NodeId, RoutingEntry>& entries() const noexcept { return entries_; }
  const std::vector<RoutingEntry>& history() const noexcept { return history_; }

  void set_route(NodeId destination, NodeId next_hop);
  void clear_routes() { routes_.clear(); }
  const std::map<NodeId, NodeId>& routes() const noexcept { return routes_; }

  bool operator==(const RoutingTable&) const = default;

 private:
  NodeId owner_;
  std::map<NodeId, RoutingEntry> entries_;
  std::vector<RoutingEntry> history_;
  std::map<NodeId, NodeId> routes_;
};

/// Next hop from `table`'s owner towards `destination`; throws Error{NoRoute}.
NodeId route_lookup(const RoutingTable& table, NodeId destination);

}  // namespace trustrpl
