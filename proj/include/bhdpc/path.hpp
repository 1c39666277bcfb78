#pragma once

#include <stdexcept>
#include <vector>

#include "bhdpc/topology.hpp"

namespace bhdpc {

using NodeSeq = std::vector<NodeId>;

class InvalidPath : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A simple path: consecutive nodes adjacent, no repeats. Checked on construction.
class Path {
 public:
  Path() = default;
  explicit Path(NodeSeq nodes);

  const NodeSeq& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId front() const { return nodes_.front(); }
  NodeId back() const { return nodes_.back(); }
  Path reversed() const;

  bool operator==(const Path&) const = default;

 private:
  NodeSeq nodes_;
};

/// A cycle listed without repeating its first node; even length >= 4.
class Cycle {
 public:
  Cycle() = default;
  explicit Cycle(NodeSeq nodes);

  const NodeSeq& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  /// Rotate/reflect so that the listing starts with `first` followed by `second`.
  /// Throws InvalidPath if they are not consecutive on the cycle.
  NodeSeq oriented(NodeId first, NodeId second) const;

 private:
  NodeSeq nodes_;
};

/// A source (black) joined to its designated sink (white).
struct TerminalPair {
  NodeId source;
  NodeId sink;
  bool operator==(const TerminalPair&) const = default;
};

}  // namespace bhdpc
