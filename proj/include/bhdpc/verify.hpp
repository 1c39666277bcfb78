#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhdpc/path.hpp"
#include "bhdpc/topology.hpp"

namespace bhdpc {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Outcome of checking a claimed path cover. Checks, in order:
/// "shape", "adjacency", "pairing", "disjointness", "coverage".
struct Report {
  std::vector<CheckResult> checks;

  bool ok() const;
  const CheckResult* find(const std::string& name) const;
  /// First failing check's name and detail, or empty.
  std::string first_failure() const;
};

/// Checks k node sequences against the pairing: path j must run from
/// pairs[j].source (black) to pairs[j].sink (white) along edges of BH_n, the
/// paths must be pairwise disjoint and cover all 4^n vertices.
Report verify_kdpc(int n, std::span<const TerminalPair> pairs, std::span<const NodeSeq> paths);
Report verify_kdpc(int n, std::span<const TerminalPair> pairs, std::span<const Path> paths);

/// Adjacency computed straight from the vertex definition of BH_n.
bool reference_adjacent(NodeId u, NodeId v);

class OracleScope : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleAnswer {
  bool exists = false;
  std::vector<Path> witness;
};

/// Complete search for a paired 3-DPC of BH_n, n <= 2. A negative answer is a
/// proof of nonexistence.
OracleAnswer oracle_exists_3dpc(int n, const std::array<TerminalPair, 3>& pairs);

/// Every white t3 outside {t1, t2} for which a paired 3-DPC of BH_2 with
/// sources s and sinks (t1, t2, t3) exists, in ascending order.
std::vector<NodeId> oracle_find_t3(const std::array<NodeId, 3>& s, NodeId t1, NodeId t2);

}  // namespace bhdpc
