#include "trustrpl/types.hpp"

namespace trustrpl {

std::string to_string(NodeId id) { return std::to_string(id.value); }

std::string_view to_string(NodeClass cls) {
  switch (cls) {
    case NodeClass::Honest:
      return "honest";
    case NodeClass::Selfish:
      return "selfish";
    case NodeClass::Malicious:
      return "malicious";
  }
  return "unknown";
}

NodeClass parse_node_class(std::string_view text) {
  if (text == "honest") return NodeClass::Honest;
  if (text == "selfish") return NodeClass::Selfish;
  if (text == "malicious") return NodeClass::Malicious;
  throw Error(ErrorCode::InvalidArgument, "unknown node class '" + std::string(text) + "'");
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, message);
}

}  // namespace trustrpl
