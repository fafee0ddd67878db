#include "trustrpl/routing_table.hpp"

#include <utility>

namespace trustrpl {

const RoutingEntry* RoutingTable::find(NodeId destination) const {
  auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

RoutingEntry* RoutingTable::find(NodeId destination) {
  auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

const RoutingEntry& RoutingTable::entry(NodeId destination) const {
  if (const auto* e = find(destination)) return *e;
  throw Error(ErrorCode::UnknownNode, "node " + to_string(owner_) + " has no routing entry for " +
                                          to_string(destination));
}

RoutingEntry& RoutingTable::entry(NodeId destination) {
  return const_cast<RoutingEntry&>(std::as_const(*this).entry(destination));
}

void RoutingTable::upsert(const RoutingEntry& entry) {
  auto it = entries_.find(entry.destination);
  if (it == entries_.end()) {
    entries_.emplace(entry.destination, entry);
    routes_.erase(entry.destination);
    return;
  }
  if (entry.episode < it->second.episode) {
    throw Error(ErrorCode::Integrity, "episode stamp for " + to_string(entry.destination) +
                                          " would move backwards in table of " + to_string(owner_));
  }
  it->second = entry;
}

void RoutingTable::archive(NodeId destination) {
  auto it = entries_.find(destination);
  if (it == entries_.end()) return;
  history_.push_back(it->second);
  entries_.erase(it);
}

std::optional<RoutingEntry> RoutingTable::take(NodeId destination) {
  auto it = entries_.find(destination);
  if (it == entries_.end()) return std::nullopt;
  RoutingEntry out = it->second;
  entries_.erase(it);
  return out;
}

void RoutingTable::set_route(NodeId destination, NodeId next_hop) {
  routes_[destination] = next_hop;
}

NodeId route_lookup(const RoutingTable& table, NodeId destination) {
  if (const auto* e = table.find(destination)) return e->next_hop;
  auto it = table.routes().find(destination);
  if (it != table.routes().end()) return it->second;
  throw Error(ErrorCode::NoRoute,
              "no route from " + to_string(table.owner()) + " to " + to_string(destination));
}

}  // namespace trustrpl
