#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trustrpl {

/// Identifier of a DODAG node. The root always holds the smallest id of a run;
/// ids are handed out in increasing order and never reused.
struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

constexpr NodeId kRootId{1};

std::string to_string(NodeId id);

enum class NodeClass { Honest, Selfish, Malicious };

std::string_view to_string(NodeClass cls);
NodeClass parse_node_class(std::string_view text);

enum class ErrorCode {
  InvalidArgument,
  UnknownNode,
  NoCandidate,
  NoRoute,
  Cycle,
  Integrity,
  Forbidden,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error{InvalidArgument} with `message` when `condition` is false.
void require(bool condition, const std::string& message);

}  // namespace trustrpl

template <>
struct std::hash<trustrpl::NodeId> {
  std::size_t operator()(const trustrpl::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
