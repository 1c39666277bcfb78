#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bhdpc {

/// Largest BH_n handled. Digits are packed two bits each into a 32-bit code.
inline constexpr int kMaxDimension = 12;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAdjacent : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class BadDimension : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class ParseError : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class NoSplit : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

enum class Color { White, Black };

/// A vertex of BH_n: n mod-4 digits (a_0, ..., a_{n-1}), a_0 being the inner index.
///
/// The digits are stored as a base-4 code with a_0 in the least significant
/// position, so `code()` doubles as a dense vertex index in 0..4^n-1 and the
/// natural ordering of NodeIds is the global vertex order.
class NodeId {
 public:
  NodeId() = default;
  NodeId(int dimension, std::uint32_t code);

  static NodeId from_digits(std::span<const int> digits);
  static NodeId from_digits(std::initializer_list<int> digits);

  int dimension() const { return dim_; }
  std::uint32_t code() const { return code_; }
  int digit(int i) const { return static_cast<int>((code_ >> (2 * i)) & 3u); }
  int inner() const { return digit(0); }
  std::vector<int> digits() const;

  /// Copy with digit i replaced by value mod 4.
  NodeId with_digit(int i, int value) const;

  auto operator<=>(const NodeId&) const = default;

 private:
  std::uint32_t code_ = 0;
  std::uint8_t dim_ = 0;
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& u) const noexcept {
    return (static_cast<std::size_t>(u.dimension()) << 32) ^ u.code();
  }
};

inline Color color(NodeId u) { return (u.inner() % 2 == 0) ? Color::White : Color::Black; }
inline bool is_white(NodeId u) { return color(u) == Color::White; }
inline bool is_black(NodeId u) { return color(u) == Color::Black; }

/// Number of vertices of BH_n.
inline std::size_t order(int n) { return std::size_t{1} << (2 * n); }

void check_dimension(int n);

/// All 2n neighbours of u in the order given by the definition: the two
/// dimension-0 neighbours (a_0+1, a_0-1) followed by the pairs for i = 1..n-1.
std::vector<NodeId> neighbors(NodeId u);

bool adjacent(NodeId u, NodeId v);

/// 0 if u and v differ only in the inner index, else the unique i >= 1 where
/// they also differ. Throws NotAdjacent.
int edge_dimension(NodeId u, NodeId v);

/// (a_0 + 2, a_1, ..., a_{n-1}); shares u's colour and neighbour set.
NodeId symmetric_node(NodeId u);

/// The two neighbours of u along dimension `dim` >= 1:
/// (a_0 +- 1, ..., a_dim + (-1)^{a_0}, ...).
std::array<NodeId, 2> dimension_neighbors(NodeId u, int dim);

/// Translation of digit `dim` (>= 1) by `shift`. An automorphism of BH_n.
NodeId translate(NodeId u, int dim, int shift);

std::vector<NodeId> all_vertices(int n);

/// "(a0,a1,...,a{n-1})"
std::string format_node(NodeId u);
NodeId parse_node(std::string_view text);

struct DimEdge {
  NodeId u;
  NodeId v;
  int dim = 0;
};

/// Every undirected edge of BH_n once, oriented white -> black.
std::vector<DimEdge> all_edges(int n);

/// A sub-balanced hypercube: the vertices of BH_n whose digits on a set of
/// fixed dimensions (all >= 1) take prescribed values. Isomorphic to BH_d with
/// d = n - #fixed; its edges are those of dimension 0 or of a free dimension.
class Subcube {
 public:
  Subcube() = default;
  static Subcube whole(int n);

  /// Fix digit `dim` (must currently be free and >= 1) to `value`.
  Subcube restrict(int dim, int value) const;

  int ambient_dimension() const { return n_; }
  int dimension() const;
  std::size_t order() const { return bhdpc::order(dimension()); }
  bool is_free(int dim) const;
  /// Free dimensions >= 1, ascending.
  std::vector<int> free_dimensions() const;

  bool contains(NodeId u) const;
  /// Vertices in ascending global order.
  std::vector<NodeId> vertices() const;
  /// Neighbours of u that stay inside the subcube.
  std::vector<NodeId> neighbors(NodeId u) const;

  /// Compress the free digits of u (dimension 0 first) into a node of BH_d.
  NodeId to_local(NodeId u) const;
  NodeId to_global(NodeId local) const;

  bool operator==(const Subcube&) const = default;

 private:
  int n_ = 0;
  std::uint32_t fixed_dims_ = 0;  // bit i set: digit i fixed
  std::uint32_t fixed_code_ = 0;  // fixed digits in place, zeros elsewhere
};

/// The four-way split of a subcube along one of its free dimensions l >= 1.
/// Subcube i holds the vertices with digit l equal to i; the dimension-l edges
/// run from each white vertex of subcube i to two black vertices of i+1.
class Partition {
 public:
  Partition(const Subcube& scope, int split_dim);
  Partition(int n, int split_dim);

  const Subcube& scope() const { return scope_; }
  int split_dimension() const { return split_; }
  const Subcube& subcube(int i) const { return parts_[static_cast<std::size_t>(i & 3)]; }
  int subcube_of(NodeId u) const { return u.digit(split_); }

  /// The two crossing (dimension-l) neighbours: in subcube i+1 for white u,
  /// in subcube i-1 for black u.
  std::array<NodeId, 2> crossing_neighbors(NodeId u) const { return dimension_neighbors(u, split_); }
  bool is_crossing(NodeId u, NodeId v) const;

  NodeId to_local(NodeId u) const { return subcube(subcube_of(u)).to_local(u); }
  NodeId to_global(NodeId local, int i) const { return subcube(i).to_global(local); }

 private:
  Subcube scope_;
  int split_ = 1;
  std::array<Subcube, 4> parts_;
};

/// Smallest free dimension l >= 1 of `scope` on which the three nodes do not
/// all agree. Throws NoSplit when no such dimension exists.
int choose_split_dimension(const Subcube& scope, NodeId t1, NodeId t2, NodeId t3);
int choose_split_dimension(NodeId t1, NodeId t2, NodeId t3);

}  // namespace bhdpc
