#include "bhdpc/topology.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace bhdpc {

namespace {

inline int mod4(int x) { return ((x % 4) + 4) % 4; }

inline std::uint32_t digit_mask(int i) { return 3u << (2 * i); }

}  // namespace

void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw BadDimension("dimension " + std::to_string(n) + " outside 1.." + std::to_string(kMaxDimension));
  }
}

NodeId::NodeId(int dimension, std::uint32_t code) : code_(code), dim_(static_cast<std::uint8_t>(dimension)) {
  check_dimension(dimension);
  if (dimension < 16 && (code >> (2 * dimension)) != 0) {
    throw TopologyError("node code out of range for dimension " + std::to_string(dimension));
  }
}

NodeId NodeId::from_digits(std::span<const int> digits) {
  const int n = static_cast<int>(digits.size());
  check_dimension(n);
  std::uint32_t code = 0;
  for (int i = 0; i < n; ++i) {
    const int d = digits[static_cast<std::size_t>(i)];
    if (d < 0 || d > 3) throw TopologyError("digit outside 0..3");
    code |= static_cast<std::uint32_t>(d) << (2 * i);
  }
  return NodeId(n, code);
}

NodeId NodeId::from_digits(std::initializer_list<int> digits) {
  return from_digits(std::span<const int>(digits.begin(), digits.size()));
}

std::vector<int> NodeId::digits() const {
  std::vector<int> out(dim_);
  for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] = digit(i);
  return out;
}

NodeId NodeId::with_digit(int i, int value) const {
  NodeId out = *this;
  out.code_ = (code_ & ~digit_mask(i)) | (static_cast<std::uint32_t>(mod4(value)) << (2 * i));
  return out;
}

std::vector<NodeId> neighbors(NodeId u) {
  const int n = u.dimension();
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  const int a0 = u.inner();
  out.push_back(u.with_digit(0, a0 + 1));
  out.push_back(u.with_digit(0, a0 - 1));
  for (int i = 1; i < n; ++i) {
    const auto pair = dimension_neighbors(u, i);
    out.push_back(pair[0]);
    out.push_back(pair[1]);
  }
  return out;
}

std::array<NodeId, 2> dimension_neighbors(NodeId u, int dim) {
  if (dim < 1 || dim >= u.dimension()) throw BadDimension("dimension " + std::to_string(dim) + " has no crossing edges");
  const int a0 = u.inner();
  const int step = (a0 % 2 == 0) ? 1 : -1;
  const NodeId moved = u.with_digit(dim, u.digit(dim) + step);
  return {moved.with_digit(0, a0 + 1), moved.with_digit(0, a0 - 1)};
}

bool adjacent(NodeId u, NodeId v) {
  if (u.dimension() != v.dimension() || u == v) return false;
  const auto nb = neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

int edge_dimension(NodeId u, NodeId v) {
  if (!adjacent(u, v)) throw NotAdjacent(format_node(u) + " and " + format_node(v) + " are not adjacent");
  for (int i = 1; i < u.dimension(); ++i) {
    if (u.digit(i) != v.digit(i)) return i;
  }
  return 0;
}

NodeId symmetric_node(NodeId u) { return u.with_digit(0, u.inner() + 2); }

NodeId translate(NodeId u, int dim, int shift) {
  if (dim < 1 || dim >= u.dimension()) throw BadDimension("translation dimension out of range");
  return u.with_digit(dim, u.digit(dim) + shift);
}

std::vector<NodeId> all_vertices(int n) {
  check_dimension(n);
  std::vector<NodeId> out;
  out.reserve(order(n));
  for (std::uint32_t c = 0; c < order(n); ++c) out.emplace_back(n, c);
  return out;
}

std::vector<DimEdge> all_edges(int n) {
  std::vector<DimEdge> out;
  for (const NodeId u : all_vertices(n)) {
    if (!is_white(u)) continue;
    const auto nb = neighbors(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      // For n == 1 the two inner neighbours are the only ones; no duplicates arise.
      out.push_back({u, nb[k], static_cast<int>(k / 2)});
    }
  }
  return out;
}

std::string format_node(NodeId u) {
  std::string out = "(";
  for (int i = 0; i < u.dimension(); ++i) {
    if (i > 0) out += ',';
    out += static_cast<char>('0' + u.digit(i));
  }
  out += ')';
  return out;
}

NodeId parse_node(std::string_view text) {
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("cannot parse node '" + std::string(text) + "': " + why);
  };
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= text.size() || text[pos] != '(') throw fail("expected '('");
  ++pos;
  std::vector<int> digits;
  while (true) {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("expected digit");
    int value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > 3) throw fail("digit outside 0..3");
      ++pos;
    }
    digits.push_back(value);
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < text.size() && text[pos] == ')') {
      ++pos;
      break;
    }
    throw fail("expected ',' or ')'");
  }
  skip_ws();
  if (pos != text.size()) throw fail("trailing characters");
  if (digits.empty() || static_cast<int>(digits.size()) > kMaxDimension) throw fail("bad digit count");
  return NodeId::from_digits(std::span<const int>(digits));
}

// --- Subcube ---------------------------------------------------------------

Subcube Subcube::whole(int n) {
  check_dimension(n);
  Subcube s;
  s.n_ = n;
  return s;
}

Subcube Subcube::restrict(int dim, int value) const {
  if (dim < 1 || dim >= n_ || !is_free(dim)) throw BadDimension("cannot fix dimension " + std::to_string(dim));
  Subcube s = *this;
  s.fixed_dims_ |= 1u << dim;
  s.fixed_code_ |= static_cast<std::uint32_t>(mod4(value)) << (2 * dim);
  return s;
}

int Subcube::dimension() const { return n_ - std::popcount(fixed_dims_); }

bool Subcube::is_free(int dim) const { return dim >= 0 && dim < n_ && ((fixed_dims_ >> dim) & 1u) == 0; }

std::vector<int> Subcube::free_dimensions() const {
  std::vector<int> out;
  for (int i = 1; i < n_; ++i) {
    if (is_free(i)) out.push_back(i);
  }
  return out;
}

bool Subcube::contains(NodeId u) const {
  if (u.dimension() != n_) return false;
  std::uint32_t mask = 0;
  for (int i = 1; i < n_; ++i) {
    if (!is_free(i)) mask |= digit_mask(i);
  }
  return (u.code() & mask) == fixed_code_;
}

std::vector<NodeId> Subcube::vertices() const {
  const int d = dimension();
  std::vector<NodeId> out;
  out.reserve(bhdpc::order(d));
  for (std::uint32_t c = 0; c < bhdpc::order(d); ++c) out.push_back(to_global(NodeId(d, c)));
  return out;
}

std::vector<NodeId> Subcube::neighbors(NodeId u) const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(2 * dimension()));
  const int a0 = u.inner();
  out.push_back(u.with_digit(0, a0 + 1));
  out.push_back(u.with_digit(0, a0 - 1));
  for (int i = 1; i < n_; ++i) {
    if (!is_free(i)) continue;
    const auto pair = dimension_neighbors(u, i);
    out.push_back(pair[0]);
    out.push_back(pair[1]);
  }
  return out;
}

NodeId Subcube::to_local(NodeId u) const {
  std::uint32_t code = 0;
  int k = 0;
  for (int i = 0; i < n_; ++i) {
    if (!is_free(i)) continue;
    code |= static_cast<std::uint32_t>(u.digit(i)) << (2 * k);
    ++k;
  }
  return NodeId(k, code);
}

NodeId Subcube::to_global(NodeId local) const {
  std::uint32_t code = fixed_code_;
  int k = 0;
  for (int i = 0; i < n_; ++i) {
    if (!is_free(i)) continue;
    code |= static_cast<std::uint32_t>(local.digit(k)) << (2 * i);
    ++k;
  }
  return NodeId(n_, code);
}

// --- Partition -------------------------------------------------------------

Partition::Partition(const Subcube& scope, int split_dim) : scope_(scope), split_(split_dim) {
  if (split_dim < 1 || split_dim >= scope.ambient_dimension() || !scope.is_free(split_dim)) {
    throw BadDimension("cannot split along dimension " + std::to_string(split_dim));
  }
  for (int i = 0; i < 4; ++i) parts_[static_cast<std::size_t>(i)] = scope.restrict(split_dim, i);
}

Partition::Partition(int n, int split_dim) : Partition(Subcube::whole(n), split_dim) {}

bool Partition::is_crossing(NodeId u, NodeId v) const {
  if (u.digit(split_) == v.digit(split_)) return false;
  const auto nb = crossing_neighbors(u);
  return nb[0] == v || nb[1] == v;
}

int choose_split_dimension(const Subcube& scope, NodeId t1, NodeId t2, NodeId t3) {
  if (t1 == t2 || t1 == t3 || t2 == t3) throw NoSplit("split selection needs three distinct nodes");
  for (const int l : scope.free_dimensions()) {
    if (t1.digit(l) != t2.digit(l) || t1.digit(l) != t3.digit(l)) return l;
  }
  throw NoSplit("nodes agree on every free dimension >= 1");
}

int choose_split_dimension(NodeId t1, NodeId t2, NodeId t3) {
  return choose_split_dimension(Subcube::whole(t1.dimension()), t1, t2, t3);
}

}  // namespace bhdpc
