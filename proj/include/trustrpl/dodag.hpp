#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trustrpl/routing_table.hpp"
#include "trustrpl/trust.hpp"
#include "trustrpl/types.hpp"

namespace trustrpl::dodag {

struct NodeRecord {
  NodeId id;
  std::optional<NodeId> parent;
  int rank = 0;  // 0 until the node has joined
  double etx = 1.0;
  double failure_rate = 0.0;
  NodeClass node_class = NodeClass::Honest;
  double trust = 1.0;
  int joined_episode = 0;
  bool active = false;

  bool operator==(const NodeRecord&) const = default;
};

enum class MessageKind { Dis, Dio, Dao, DaoAck, Cc };

std::string_view to_string(MessageKind kind);

struct DioPayload {
  int rank = 0;
  double trust = 1.0;
  unsigned version = 1;

  bool operator==(const DioPayload&) const = default;
};

struct DaoPayload {
  NodeId chosen_parent;

  bool operator==(const DaoPayload&) const = default;
};

struct CcPayload {
  std::uint8_t rpl_instance_id = 0;
  bool is_response = false;
  std::uint32_t nonce = 0;
  NodeId dodag_id;
  std::uint32_t destination_counter = 0;

  bool operator==(const CcPayload&) const = default;
};

struct ControlMessage {
  MessageKind kind = MessageKind::Dis;
  NodeId sender;
  std::optional<NodeId> receiver;  // absent = broadcast
  std::variant<std::monostate, DioPayload, DaoPayload, CcPayload> payload;

  bool operator==(const ControlMessage&) const = default;
};

ControlMessage make_dio(NodeId sender, int rank, std::optional<NodeId> receiver = std::nullopt,
                        double trust = 1.0, unsigned version = 1);

/// parent_rank + ceil(rank_factor * hop_count * etx).
int compute_rank(int parent_rank, int hop_count, double etx, double rank_factor);

/// Sender of the DIO advertising the lowest rank; ties go to the lowest id.
/// Non-DIO messages are ignored. Throws Error{NoCandidate} if there is no DIO.
NodeId select_parent(std::span<const ControlMessage> messages);

enum class JoinScenario { DodagInvites, NodeSolicits };

struct DodagConfig {
  double rank_factor = 1.0;
  int hop_count = 1;

  bool operator==(const DodagConfig&) const = default;
};

/// Episodes that count towards indirect trust: those of the current epoch.
struct TrustWindow {
  int first_episode = 1;  // global index of episode 1 of the epoch
  int episodes_per_epoch = 10;

  /// Position of global episode `episode` within the window, or nullopt.
  std::optional<int> position(int episode) const;
};

/// What a prospective parent needs to evaluate trust at a given moment.
struct TrustContext {
  trust::TrustParams params;
  int episode = 0;
  TrustWindow window;
};

struct JoinOutcome {
  bool accepted = false;
  std::optional<NodeId> parent;
  double trust = 0.0;
  trust::TrustOrigin origin = trust::TrustOrigin::FreshNode;
  std::string reason;
  std::vector<ControlMessage> messages;
};

struct ParentChangeOutcome {
  bool accepted = false;
  double trust = 0.0;
  trust::TrustOrigin origin = trust::TrustOrigin::FreshNode;
  std::string reason;
  std::vector<ControlMessage> messages;
};

class Dodag {
 public:
  static constexpr double kRootFailureRate = 0.05;
  static constexpr unsigned kVersion = 1;

  /// A DODAG holding only its root: rank 1, trust 1.0, failure rate 0.05.
  static Dodag create_root(const DodagConfig& config = {});

  NodeId root() const noexcept { return root_; }
  unsigned version() const noexcept { return version_; }
  const DodagConfig& config() const noexcept { return config_; }

  int epoch_index() const noexcept { return epoch_index_; }
  int episode_index() const noexcept { return episode_index_; }
  void set_epoch_index(int epoch) { epoch_index_ = epoch; }
  void set_episode_index(int episode) { episode_index_ = episode; }

  /// Next unused id; reserving it guarantees no later reuse.
  NodeId allocate_id();

  bool contains(NodeId id) const { return nodes_.contains(id); }
  bool is_active(NodeId id) const;
  const NodeRecord& node(NodeId id) const;
  const std::map<NodeId, NodeRecord>& nodes() const noexcept { return nodes_; }

  /// Active nodes in id order, root first.
  std::vector<NodeId> active_nodes() const;
  std::vector<NodeId> active_non_root() const;
  std::size_t active_non_root_count() const;
  std::vector<NodeId> children(NodeId id) const;
  /// Strict ancestors of `id`, nearest first, ending at the root.
  std::vector<NodeId> ancestors(NodeId id) const;
  bool is_descendant(NodeId candidate, NodeId ancestor) const;

  const RoutingTable& table(NodeId owner) const;
  RoutingTable& table(NodeId owner);
  const std::map<NodeId, RoutingTable>& tables() const noexcept { return tables_; }

  trust::MisbehaviorLedger& ledger() noexcept { return ledger_; }
  const trust::MisbehaviorLedger& ledger() const noexcept { return ledger_; }

  /// Opinions about `node` held by active nodes, current entries and archived
  /// ones alike, restricted to `window`. The latest opinion per parent wins.
  std::vector<trust::TrustOpinion> collect_opinions(NodeId node, const TrustWindow& window) const;

  /// Runs the join handshake for `joiner`. `neighbors` restricts which active
  /// nodes hear the joiner (all active nodes when absent).
  JoinOutcome join_node(NodeRecord joiner, JoinScenario scenario, const TrustContext& ctx,
                        std::optional<std::span<const NodeId>> neighbors = std::nullopt);

  /// Moves `child` under `new_parent` if the latter advertises a better rank
  /// and trusts the child. Throws Error{Cycle} if `new_parent` lies in the
  /// child's subtree.
  ParentChangeOutcome change_parent(NodeId child, NodeId new_parent, const TrustContext& ctx);

  /// Suspends `id`: its children move to its parent, their entries are
  /// appended to the parent's table, and the node's own entry is archived.
  /// Returns the re-parented children. Suspending the root is forbidden.
  std::vector<NodeId> suspend(NodeId id);

  /// Overwrites the reward of `child` in its parent's table.
  void set_reward(NodeId child, int reward);

  /// Latest reward of an active non-root node as held by its parent.
  int latest_reward(NodeId id) const;

  /// Copies the parent-held trust of `id` into its node record.
  void sync_trust(NodeId id);

  /// Rebuilds the downward routes of every table from the parent links.
  void refresh_routes();

  /// Throws Error{Integrity} describing the first violated structural invariant.
  void check_invariants() const;

  bool operator==(const Dodag&) const = default;

 private:
  NodeRecord& mutable_node(NodeId id);
  void recompute_subtree_ranks(NodeId top);

  NodeId root_;
  unsigned version_ = kVersion;
  DodagConfig config_;
  std::uint32_t next_id_ = 1;
  int epoch_index_ = 0;
  int episode_index_ = 0;
  std::map<NodeId, NodeRecord> nodes_;
  std::map<NodeId, RoutingTable> tables_;
  trust::MisbehaviorLedger ledger_;
};

/// Next hop from `from` towards `destination` in `dodag`.
NodeId route_lookup(const Dodag& dodag, NodeId from, NodeId destination);

}  // namespace trustrpl::dodag
