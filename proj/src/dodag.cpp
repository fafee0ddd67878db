#include "trustrpl/dodag.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace trustrpl::dodag {

namespace {

constexpr std::uint8_t kRplInstanceId = 0;

ControlMessage make_message(MessageKind kind, NodeId sender, std::optional<NodeId> receiver) {
  ControlMessage msg;
  msg.kind = kind;
  msg.sender = sender;
  msg.receiver = receiver;
  return msg;
}

ControlMessage make_cc(NodeId sender, std::optional<NodeId> receiver, bool response,
                       std::uint32_t nonce, NodeId dodag_id, NodeId subject) {
  ControlMessage msg = make_message(MessageKind::Cc, sender, receiver);
  msg.payload = CcPayload{kRplInstanceId, response, nonce, dodag_id, subject.value};
  return msg;
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Dis:
      return "DIS";
    case MessageKind::Dio:
      return "DIO";
    case MessageKind::Dao:
      return "DAO";
    case MessageKind::DaoAck:
      return "DAO-ACK";
    case MessageKind::Cc:
      return "CC";
  }
  return "?";
}

ControlMessage make_dio(NodeId sender, int rank, std::optional<NodeId> receiver, double trust,
                        unsigned version) {
  ControlMessage msg = make_message(MessageKind::Dio, sender, receiver);
  msg.payload = DioPayload{rank, trust, version};
  return msg;
}

int compute_rank(int parent_rank, int hop_count, double etx, double rank_factor) {
  require(parent_rank >= 1, "parent rank must be at least 1");
  require(hop_count >= 1, "hop count must be at least 1");
  require(etx >= 1.0 && std::isfinite(etx), "ETX must be at least 1");
  require(rank_factor > 0.0 && std::isfinite(rank_factor), "rank factor must be positive");
  const double increment = std::ceil(rank_factor * hop_count * etx);
  return parent_rank + static_cast<int>(increment);
}

NodeId select_parent(std::span<const ControlMessage> messages) {
  std::optional<NodeId> best;
  int best_rank = 0;
  for (const auto& msg : messages) {
    if (msg.kind != MessageKind::Dio) continue;
    const auto* dio = std::get_if<DioPayload>(&msg.payload);
    if (dio == nullptr) continue;
    if (!best || dio->rank < best_rank || (dio->rank == best_rank && msg.sender < *best)) {
      best = msg.sender;
      best_rank = dio->rank;
    }
  }
  if (!best) throw Error(ErrorCode::NoCandidate, "no DIO received; no parent candidate");
  return *best;
}

std::optional<int> TrustWindow::position(int episode) const {
  const int t = episode - first_episode + 1;
  if (t < 0 || t > episodes_per_epoch) return std::nullopt;
  return t;
}

Dodag Dodag::create_root(const DodagConfig& config) {
  require(config.rank_factor > 0.0, "rank factor must be positive");
  require(config.hop_count >= 1, "hop count must be at least 1");
  Dodag d;
  d.config_ = config;
  d.root_ = d.allocate_id();
  NodeRecord root;
  root.id = d.root_;
  root.rank = 1;
  root.etx = 1.0;
  root.failure_rate = kRootFailureRate;
  root.node_class = NodeClass::Honest;
  root.trust = 1.0;
  root.active = true;
  d.nodes_.emplace(root.id, root);
  d.tables_.emplace(root.id, RoutingTable(root.id));
  return d;
}

NodeId Dodag::allocate_id() { return NodeId{next_id_++}; }

bool Dodag::is_active(NodeId id) const {
  auto it = nodes_.find(id);
  return it != nodes_.end() && it->second.active;
}

const NodeRecord& Dodag::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, "unknown node " + to_string(id));
  return it->second;
}

NodeRecord& Dodag::mutable_node(NodeId id) { return const_cast<NodeRecord&>(node(id)); }

std::vector<NodeId> Dodag::active_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, rec] : nodes_) {
    if (rec.active) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> Dodag::active_non_root() const {
  std::vector<NodeId> out;
  for (const auto& [id, rec] : nodes_) {
    if (rec.active && id != root_) out.push_back(id);
  }
  return out;
}

std::size_t Dodag::active_non_root_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [&](const auto& kv) {
    return kv.second.active && kv.first != root_;
  }));
}

std::vector<NodeId> Dodag::children(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& [cid, rec] : nodes_) {
    if (rec.active && rec.parent == id) out.push_back(cid);
  }
  return out;
}

std::vector<NodeId> Dodag::ancestors(NodeId id) const {
  std::vector<NodeId> out;
  auto parent = node(id).parent;
  while (parent) {
    if (out.size() > nodes_.size()) {
      throw Error(ErrorCode::Integrity, "parent links of " + to_string(id) + " contain a cycle");
    }
    out.push_back(*parent);
    parent = node(*parent).parent;
  }
  return out;
}

bool Dodag::is_descendant(NodeId candidate, NodeId ancestor) const {
  if (!contains(candidate)) return false;
  const auto chain = ancestors(candidate);
  return std::find(chain.begin(), chain.end(), ancestor) != chain.end();
}

const RoutingTable& Dodag::table(NodeId owner) const {
  auto it = tables_.find(owner);
  if (it == tables_.end()) {
    throw Error(ErrorCode::UnknownNode, "no routing table for node " + to_string(owner));
  }
  return it->second;
}

RoutingTable& Dodag::table(NodeId owner) {
  return const_cast<RoutingTable&>(std::as_const(*this).table(owner));
}

std::vector<trust::TrustOpinion> Dodag::collect_opinions(NodeId node,
                                                         const TrustWindow& window) const {
  std::vector<trust::TrustOpinion> out;
  for (const auto& [owner, tbl] : tables_) {
    // Suspended nodes are no longer DODAG members and do not answer CC requests.
    if (!is_active(owner) || owner == node) continue;
    std::optional<RoutingEntry> latest;
    auto consider = [&](const RoutingEntry& e) {
      if (e.destination != node || !window.position(e.episode)) return;
      if (!latest || e.episode >= latest->episode) latest = e;
    };
    for (const auto& e : tbl.history()) consider(e);
    if (const auto* e = tbl.find(node)) consider(*e);
    if (latest) {
      out.push_back({owner, latest->trust, *window.position(latest->episode)});
    }
  }
  return out;
}

JoinOutcome Dodag::join_node(NodeRecord joiner, JoinScenario scenario, const TrustContext& ctx,
                             std::optional<std::span<const NodeId>> neighbors) {
  if (joiner.id.value == 0) joiner.id = allocate_id();
  const bool seen_before = contains(joiner.id);
  if (seen_before) {
    require(!node(joiner.id).active, "node " + to_string(joiner.id) + " is already a member");
  } else {
    next_id_ = std::max(next_id_, joiner.id.value + 1);
  }

  JoinOutcome out;
  std::vector<NodeId> candidates;
  if (neighbors) {
    for (NodeId n : *neighbors) {
      if (n != joiner.id && is_active(n)) candidates.push_back(n);
    }
  } else {
    for (NodeId n : active_nodes()) {
      if (n != joiner.id) candidates.push_back(n);
    }
  }

  if (scenario == JoinScenario::NodeSolicits) {
    out.messages.push_back(make_message(MessageKind::Dis, joiner.id, std::nullopt));
  }
  std::vector<ControlMessage> dios;
  for (NodeId c : candidates) {
    const auto& rec = node(c);
    const std::optional<NodeId> receiver =
        scenario == JoinScenario::NodeSolicits ? std::optional<NodeId>(joiner.id) : std::nullopt;
    dios.push_back(make_dio(c, rec.rank, receiver, rec.trust, version_));
  }
  out.messages.insert(out.messages.end(), dios.begin(), dios.end());

  auto keep_record = [&] {
    if (seen_before) return;
    joiner.active = false;
    joiner.parent.reset();
    joiner.rank = 0;
    nodes_.emplace(joiner.id, joiner);
    tables_.emplace(joiner.id, RoutingTable(joiner.id));
  };

  if (dios.empty()) {
    out.reason = "no reachable parent candidates";
    keep_record();
    return out;
  }

  const NodeId parent = select_parent(dios);
  ControlMessage dao = make_message(MessageKind::Dao, joiner.id, parent);
  dao.payload = DaoPayload{parent};
  out.messages.push_back(dao);

  if (seen_before) {
    const auto opinions = collect_opinions(joiner.id, ctx.window);
    const std::uint32_t nonce = static_cast<std::uint32_t>(ctx.episode);
    out.messages.push_back(make_cc(parent, std::nullopt, false, nonce, root_, joiner.id));
    for (const auto& op : opinions) {
      out.messages.push_back(make_cc(op.source_parent, parent, true, nonce, root_, joiner.id));
    }
    const auto indirect =
        trust::indirect_trust(opinions, ctx.window.episodes_per_epoch, ctx.params.alpha);
    out.trust = indirect.value;
    out.origin = indirect.origin;
  } else {
    out.trust = 1.0;
    out.origin = trust::TrustOrigin::FreshNode;
  }

  if (out.trust < ctx.params.theta) {
    out.reason = "trust below threshold";
    keep_record();
    return out;
  }

  out.messages.push_back(make_message(MessageKind::DaoAck, parent, joiner.id));
  out.accepted = true;
  out.parent = parent;

  joiner.parent = parent;
  joiner.rank = compute_rank(node(parent).rank, config_.hop_count, joiner.etx, config_.rank_factor);
  joiner.trust = out.trust;
  joiner.joined_episode = ctx.episode;
  joiner.active = true;
  if (seen_before) {
    NodeRecord& rec = mutable_node(joiner.id);
    rec = joiner;
  } else {
    nodes_.emplace(joiner.id, joiner);
    tables_.emplace(joiner.id, RoutingTable(joiner.id));
  }
  table(parent).upsert({joiner.id, joiner.id, out.trust, 0, ctx.episode, 0.0});
  ledger_.reset(parent, joiner.id);

  NodeId via = parent;
  for (NodeId ancestor : ancestors(parent)) {
    table(ancestor).set_route(joiner.id, via);
    via = ancestor;
  }
  return out;
}

ParentChangeOutcome Dodag::change_parent(NodeId child, NodeId new_parent,
                                         const TrustContext& ctx) {
  require(is_active(child), "node " + to_string(child) + " is not an active member");
  require(child != root_, "the root has no parent to change");
  require(is_active(new_parent), "node " + to_string(new_parent) + " is not an active member");
  if (new_parent == child || is_descendant(new_parent, child)) {
    throw Error(ErrorCode::Cycle, "node " + to_string(new_parent) + " lies in the subtree of " +
                                      to_string(child));
  }

  ParentChangeOutcome out;
  const NodeId old_parent = *node(child).parent;
  out.messages.push_back(make_message(MessageKind::Dis, child, std::nullopt));
  const auto& candidate = node(new_parent);
  out.messages.push_back(make_dio(new_parent, candidate.rank, child, candidate.trust, version_));

  if (new_parent == old_parent || candidate.rank >= node(old_parent).rank) {
    out.reason = "candidate rank is not better than the current parent's";
    return out;
  }

  ControlMessage dao = make_message(MessageKind::Dao, child, new_parent);
  dao.payload = DaoPayload{new_parent};
  out.messages.push_back(dao);

  const auto opinions = collect_opinions(child, ctx.window);
  const std::uint32_t nonce = static_cast<std::uint32_t>(ctx.episode);
  out.messages.push_back(make_cc(new_parent, std::nullopt, false, nonce, root_, child));
  for (const auto& op : opinions) {
    out.messages.push_back(make_cc(op.source_parent, new_parent, true, nonce, root_, child));
  }
  const auto indirect =
      trust::indirect_trust(opinions, ctx.window.episodes_per_epoch, ctx.params.alpha);
  out.trust = indirect.value;
  out.origin = indirect.origin;
  if (out.trust < ctx.params.theta) {
    out.reason = "trust below threshold";
    return out;
  }

  out.messages.push_back(make_message(MessageKind::DaoAck, new_parent, child));
  out.accepted = true;

  table(old_parent).archive(child);
  table(new_parent).upsert({child, child, out.trust, 0, ctx.episode, 0.0});
  ledger_.reset(new_parent, child);
  NodeRecord& rec = mutable_node(child);
  rec.parent = new_parent;
  rec.trust = out.trust;
  recompute_subtree_ranks(child);
  refresh_routes();
  return out;
}

std::vector<NodeId> Dodag::suspend(NodeId id) {
  if (id == root_) throw Error(ErrorCode::Forbidden, "the root cannot be removed");
  require(is_active(id), "node " + to_string(id) + " is not an active member");

  const NodeId parent = *node(id).parent;
  const auto moved = children(id);
  RoutingTable& own = table(id);
  RoutingTable& up = table(parent);
  for (NodeId c : moved) {
    auto entry = own.take(c);
    if (!entry) {
      throw Error(ErrorCode::Integrity,
                  "node " + to_string(id) + " has no routing entry for child " + to_string(c));
    }
    entry->next_hop = c;
    up.upsert(*entry);
    ledger_.transfer(id, parent, c);
    mutable_node(c).parent = parent;
  }
  up.archive(id);
  own.clear_routes();

  NodeRecord& rec = mutable_node(id);
  rec.active = false;
  rec.parent.reset();
  rec.rank = 0;

  for (NodeId c : moved) recompute_subtree_ranks(c);
  refresh_routes();
  return moved;
}

void Dodag::set_reward(NodeId child, int reward) {
  require(reward >= -1 && reward <= 1, "reward must be -1, 0 or +1");
  const auto& rec = node(child);
  require(rec.active && rec.parent.has_value(), "node " + to_string(child) + " has no parent");
  table(*rec.parent).entry(child).reward = reward;
}

int Dodag::latest_reward(NodeId id) const {
  const auto& rec = node(id);
  if (!rec.active || !rec.parent) {
    throw Error(ErrorCode::Integrity, "node " + to_string(id) + " is not an active child");
  }
  const auto* e = table(*rec.parent).find(id);
  if (e == nullptr) {
    throw Error(ErrorCode::Integrity, "parent " + to_string(*rec.parent) +
                                          " holds no reward for " + to_string(id));
  }
  return e->reward;
}

void Dodag::sync_trust(NodeId id) {
  NodeRecord& rec = mutable_node(id);
  if (!rec.parent) return;
  rec.trust = table(*rec.parent).entry(id).trust;
}

void Dodag::recompute_subtree_ranks(NodeId top) {
  std::deque<NodeId> queue{top};
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    NodeRecord& rec = mutable_node(n);
    rec.rank = compute_rank(node(*rec.parent).rank, config_.hop_count, rec.etx, config_.rank_factor);
    for (NodeId c : children(n)) queue.push_back(c);
  }
}

void Dodag::refresh_routes() {
  for (auto& [owner, tbl] : tables_) tbl.clear_routes();
  for (const auto& [id, rec] : nodes_) {
    if (!rec.active || !rec.parent) continue;
    NodeId via = *rec.parent;
    auto up = node(via).parent;
    while (up) {
      table(*up).set_route(id, via);
      via = *up;
      up = node(*up).parent;
    }
  }
}

void Dodag::check_invariants() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Integrity, msg); };
  const auto& root = node(root_);
  if (!root.active || root.parent || root.rank != 1 || root.trust != 1.0) {
    fail("root record is malformed");
  }
  std::size_t active = 0;
  for (const auto& [id, rec] : nodes_) {
    if (!rec.active) continue;
    ++active;
    if (rec.trust < 0.0 || rec.trust > 1.0) fail("trust of " + to_string(id) + " out of range");
    if (id == root_) continue;
    if (!rec.parent) fail("active node " + to_string(id) + " has no parent");
    if (!is_active(*rec.parent)) fail("parent of " + to_string(id) + " is not active");
    if (rec.rank <= node(*rec.parent).rank) fail("rank of " + to_string(id) + " not above parent");
    const auto* e = table(*rec.parent).find(id);
    if (e == nullptr || e->next_hop != id) {
      fail("parent " + to_string(*rec.parent) + " lacks an entry for child " + to_string(id));
    }
    const auto chain = ancestors(id);
    if (chain.empty() || chain.back() != root_) fail(to_string(id) + " is not reachable from root");
  }
  std::size_t edges = 0;
  for (const auto& [owner, tbl] : tables_) {
    for (const auto& [dest, e] : tbl.entries()) {
      if (!is_active(owner)) fail("suspended node " + to_string(owner) + " still has children");
      const auto& child = node(dest);
      if (!child.active || child.parent != owner) {
        fail("entry " + to_string(dest) + " in table of " + to_string(owner) + " is stale");
      }
      ++edges;
    }
    for (const auto& [dest, hop] : tbl.routes()) {
      const auto* e = tbl.find(hop);
      if (e == nullptr || !is_descendant(dest, hop)) {
        fail("route to " + to_string(dest) + " at " + to_string(owner) + " is inconsistent");
      }
    }
  }
  if (edges + 1 != active) fail("edge count does not match a tree");
}

NodeId route_lookup(const Dodag& dodag, NodeId from, NodeId destination) {
  return route_lookup(dodag.table(from), destination);
}

}  // namespace trustrpl::dodag
