#include "bhdpc/path.hpp"

#include <algorithm>
#include <unordered_set>

namespace bhdpc {

namespace {

void check_simple(const NodeSeq& nodes, bool closed) {
  std::unordered_set<NodeId, NodeIdHash> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!seen.insert(nodes[i]).second) throw InvalidPath("node " + format_node(nodes[i]) + " repeated");
    if (i + 1 < nodes.size() && !adjacent(nodes[i], nodes[i + 1])) {
      throw InvalidPath(format_node(nodes[i]) + " -> " + format_node(nodes[i + 1]) + " is not an edge");
    }
  }
  if (closed && !adjacent(nodes.back(), nodes.front())) throw InvalidPath("cycle does not close");
}

}  // namespace

Path::Path(NodeSeq nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidPath("empty path");
  check_simple(nodes_, false);
}

Path Path::reversed() const {
  NodeSeq r(nodes_.rbegin(), nodes_.rend());
  return Path(std::move(r));
}

Cycle::Cycle(NodeSeq nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 4 || nodes_.size() % 2 != 0) throw InvalidPath("cycle length must be even and >= 4");
  check_simple(nodes_, true);
}

NodeSeq Cycle::oriented(NodeId first, NodeId second) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), first);
  if (it == nodes_.end()) throw InvalidPath("node not on cycle");
  const std::size_t m = nodes_.size();
  const std::size_t pos = static_cast<std::size_t>(it - nodes_.begin());
  NodeSeq out(m);
  if (nodes_[(pos + 1) % m] == second) {
    for (std::size_t k = 0; k < m; ++k) out[k] = nodes_[(pos + k) % m];
  } else if (nodes_[(pos + m - 1) % m] == second) {
    for (std::size_t k = 0; k < m; ++k) out[k] = nodes_[(pos + m - k) % m];
  } else {
    throw InvalidPath("nodes are not consecutive on the cycle");
  }
  return out;
}

}  // namespace bhdpc
