#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhdpc/path.hpp"
#include "bhdpc/topology.hpp"

namespace bhdpc {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Node-expansion cap per search call; BHDPC_BUDGET overrides the default.
std::uint64_t default_budget();

/// A search that should always succeed did not (budget hit or unexpected Unsat).
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SearchStatus { Found, Unsat, BudgetExceeded };

std::string to_string(SearchStatus status);

struct SearchOptions {
  std::uint64_t budget = default_budget();
  /// Vertices of the scope treated as already used.
  std::vector<NodeId> blocked;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Unsat;
  std::vector<Path> paths;
  std::uint64_t expansions = 0;

  bool found() const { return status == SearchStatus::Found; }
};

/// Paired k-disjoint path cover of `scope` by backtracking. Path i runs from
/// pairs[i].source (black) to pairs[i].sink (white); together the paths cover
/// every non-blocked vertex of the scope. Deterministic. Unsat is a proof of
/// nonexistence; BudgetExceeded is not.
SearchResult solve_kdpc(const Subcube& scope, std::span<const TerminalPair> pairs, const SearchOptions& options = {});

/// Hamiltonian path of `scope` from u to v (opposite colours, either order).
Path ham_path(const Subcube& scope, NodeId u, NodeId v, const SearchOptions& options = {});

/// Paired 2-disjoint path cover of `scope`.
std::array<Path, 2> two_dpc(const Subcube& scope, TerminalPair first, TerminalPair second,
                            const SearchOptions& options = {});

/// An 8-cycle through the edge (u, v) with exactly one edge inside each of the
/// four subcubes of `partition` and four crossing edges. Listed starting u, v.
Cycle find_8cycle(NodeId u, NodeId v, const Partition& partition);

/// A 5-path <s,a,b,c,d> lying on a Hamiltonian cycle, where <a,b,c,d,a> is a
/// 4-cycle whose opposite corners are symmetric pairs.
struct FivePathCertificate {
  Path five_path;
  Cycle hamiltonian;

  NodeId s() const { return five_path.nodes()[0]; }
  NodeId a() const { return five_path.nodes()[1]; }
  NodeId b() const { return five_path.nodes()[2]; }
  NodeId c() const { return five_path.nodes()[3]; }
  NodeId d() const { return five_path.nodes()[4]; }
  std::array<NodeId, 4> square() const { return {a(), b(), c(), d()}; }
};

/// Two certificates for black s whose 4-cycles are vertex-disjoint. The scope
/// must have dimension >= 2; larger scopes recurse through the subcube holding s.
std::array<FivePathCertificate, 2> five_path_pair(const Subcube& scope, NodeId s, const SearchOptions& options = {});
std::array<FivePathCertificate, 2> five_path_pair(NodeId s);

/// Empty string if `cert` satisfies every certificate invariant in `scope`,
/// otherwise a description of the first violation.
std::string certificate_violation(const FivePathCertificate& cert, const Subcube& scope);

}  // namespace bhdpc
