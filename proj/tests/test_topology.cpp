#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "bhdpc/topology.hpp"
#include "support/reference.hpp"

using namespace bhdpc;

namespace {

std::set<std::uint32_t> codes(const std::vector<NodeId>& nodes) {
  std::set<std::uint32_t> out;
  for (const NodeId u : nodes) out.insert(u.code());
  return out;
}

}  // namespace

TEST(Topology, NeighboursMatchDefinition) {
  for (int n = 1; n <= 4; ++n) {
    for (const NodeId u : all_vertices(n)) {
      const auto expected = ref::neighbours(n, static_cast<int>(u.code()));
      const auto got = codes(neighbors(u));
      EXPECT_EQ(got, std::set<std::uint32_t>(expected.begin(), expected.end())) << format_node(u);
    }
  }
}

TEST(Topology, OrderRegularityBipartition) {
  for (int n = 1; n <= 4; ++n) {
    const auto vs = all_vertices(n);
    EXPECT_EQ(vs.size(), order(n));
    std::size_t white = 0;
    for (const NodeId u : vs) {
      if (is_white(u)) ++white;
      if (n >= 2) EXPECT_EQ(codes(neighbors(u)).size(), static_cast<std::size_t>(2 * n));
      for (const NodeId v : neighbors(u)) EXPECT_NE(color(u), color(v));
    }
    EXPECT_EQ(white * 2, vs.size());
  }
  EXPECT_EQ(codes(neighbors(NodeId::from_digits({0}))).size(), 2u);
}

TEST(Topology, EdgeListIsComplete) {
  for (int n = 1; n <= 4; ++n) {
    std::size_t degree_sum = 0;
    for (const NodeId u : all_vertices(n)) degree_sum += codes(neighbors(u)).size();
    const auto edges = all_edges(n);
    EXPECT_EQ(edges.size() * 2, degree_sum);
    for (const auto& e : edges) {
      EXPECT_TRUE(is_white(e.u));
      EXPECT_TRUE(ref::adjacent(n, static_cast<int>(e.u.code()), static_cast<int>(e.v.code())));
      EXPECT_EQ(edge_dimension(e.u, e.v), e.dim);
    }
  }
}

TEST(Topology, DeletingDimensionEdgesLeavesFourCopies) {
  for (int n = 2; n <= 4; ++n) {
    for (int l = 1; l < n; ++l) {
      const auto vs = all_vertices(n);
      std::map<std::uint32_t, int> comp;
      int count = 0;
      for (const NodeId start : vs) {
        if (comp.count(start.code())) continue;
        std::queue<NodeId> q;
        q.push(start);
        comp[start.code()] = count;
        while (!q.empty()) {
          const NodeId u = q.front();
          q.pop();
          for (const NodeId v : neighbors(u)) {
            if (edge_dimension(u, v) == l || comp.count(v.code())) continue;
            comp[v.code()] = count;
            q.push(v);
          }
        }
        ++count;
      }
      ASSERT_EQ(count, 4) << "n=" << n << " l=" << l;
      // Components are the digit-l classes, and deleting digit l is an isomorphism onto BH_{n-1}.
      for (const NodeId u : vs) {
        for (const NodeId v : vs) {
          if (u.digit(l) != v.digit(l)) continue;
          EXPECT_EQ(comp[u.code()], comp[v.code()]);
        }
      }
      Partition part(n, l);
      for (int i = 0; i < 4; ++i) {
        const Subcube& sc = part.subcube(i);
        EXPECT_EQ(sc.dimension(), n - 1);
        for (const NodeId u : sc.vertices()) {
          EXPECT_EQ(u.digit(l), i);
          const NodeId lu = sc.to_local(u);
          EXPECT_EQ(sc.to_global(lu), u);
          auto d = u.digits();
          d.erase(d.begin() + l);
          EXPECT_EQ(lu, NodeId::from_digits(d));
          for (const NodeId v : sc.neighbors(u)) EXPECT_TRUE(adjacent(lu, sc.to_local(v)));
          std::size_t inner = 0;
          for (const NodeId v : neighbors(u)) inner += sc.contains(v);
          EXPECT_EQ(inner, sc.neighbors(u).size());
          EXPECT_EQ(inner, codes(neighbors(lu)).size());
        }
      }
    }
  }
}

TEST(Topology, CrossingEdgesGoForwardFromWhite) {
  Partition part(3, 2);
  for (const NodeId u : all_vertices(3)) {
    const int i = part.subcube_of(u);
    for (const NodeId v : part.crossing_neighbors(u)) {
      EXPECT_TRUE(adjacent(u, v));
      EXPECT_TRUE(part.is_crossing(u, v));
      EXPECT_EQ(part.subcube_of(v), is_white(u) ? (i + 1) % 4 : (i + 3) % 4);
    }
  }
}

TEST(Topology, SymmetricNodesShareNeighbours) {
  for (const NodeId u : all_vertices(3)) {
    const NodeId w = symmetric_node(u);
    EXPECT_NE(u, w);
    EXPECT_EQ(color(u), color(w));
    EXPECT_EQ(codes(neighbors(u)), codes(neighbors(w)));
  }
}

TEST(Topology, WhitesShareCrossingNeighbourOnlyWhenSymmetric) {
  Partition part(3, 1);
  for (const NodeId u : all_vertices(3)) {
    if (!is_white(u)) continue;
    for (const NodeId v : all_vertices(3)) {
      if (!is_white(v) || u == v) continue;
      const auto a = part.crossing_neighbors(u);
      const auto b = part.crossing_neighbors(v);
      bool share = false;
      for (const NodeId x : a)
        for (const NodeId y : b) share |= (x == y);
      EXPECT_EQ(share, v == symmetric_node(u));
    }
  }
}

TEST(Topology, TranslationIsAutomorphism) {
  for (int dim = 1; dim < 3; ++dim) {
    for (int c = 0; c < 4; ++c) {
      for (const auto& e : all_edges(3)) EXPECT_TRUE(adjacent(translate(e.u, dim, c), translate(e.v, dim, c)));
    }
  }
}

TEST(Topology, ExamplesFromDefinition) {
  // (0,0) in BH_2: (1,0), (3,0), (1,1), (3,1).
  const auto nb = codes(neighbors(NodeId::from_digits({0, 0})));
  std::set<std::uint32_t> want;
  for (auto d : {std::vector<int>{1, 0}, {3, 0}, {1, 1}, {3, 1}}) want.insert(NodeId::from_digits(d).code());
  EXPECT_EQ(nb, want);
  // Black (1,0): second digit moves by -1.
  EXPECT_TRUE(adjacent(NodeId::from_digits({1, 0}), NodeId::from_digits({0, 3})));
  EXPECT_FALSE(adjacent(NodeId::from_digits({1, 0}), NodeId::from_digits({0, 1})));
  EXPECT_EQ(edge_dimension(NodeId::from_digits({0, 0, 0}), NodeId::from_digits({1, 0, 1})), 2);
  EXPECT_EQ(edge_dimension(NodeId::from_digits({0, 0, 0}), NodeId::from_digits({3, 0, 0})), 0);
  EXPECT_THROW(edge_dimension(NodeId::from_digits({0, 0}), NodeId::from_digits({2, 0})), NotAdjacent);
}

TEST(Topology, FormatAndParse) {
  for (const NodeId u : all_vertices(3)) EXPECT_EQ(parse_node(format_node(u)), u);
  EXPECT_EQ(format_node(NodeId::from_digits({1, 2, 3})), "(1,2,3)");
  EXPECT_EQ(parse_node(" ( 1 , 2 ) "), NodeId::from_digits({1, 2}));
  EXPECT_THROW(parse_node("(1,4)"), ParseError);
  EXPECT_THROW(parse_node("1,2"), ParseError);
  EXPECT_THROW(parse_node("()"), ParseError);
  EXPECT_THROW(parse_node("(1,x)"), ParseError);
}

TEST(Topology, BadDimensions) {
  EXPECT_THROW(check_dimension(0), BadDimension);
  EXPECT_THROW(check_dimension(kMaxDimension + 1), BadDimension);
  EXPECT_THROW(Partition(3, 0), BadDimension);
  EXPECT_THROW(Partition(3, 3), BadDimension);
}

TEST(Topology, SplitDimension) {
  const NodeId a = NodeId::from_digits({0, 1, 2});
  const NodeId b = NodeId::from_digits({2, 1, 3});
  const NodeId c = NodeId::from_digits({0, 1, 0});
  EXPECT_EQ(choose_split_dimension(a, b, c), 2);
  EXPECT_EQ(choose_split_dimension(a, NodeId::from_digits({0, 3, 2}), c), 1);
  EXPECT_THROW(choose_split_dimension(a, NodeId::from_digits({2, 1, 2}), NodeId::from_digits({0, 1, 2})), NoSplit);
  EXPECT_EQ(choose_split_dimension(NodeId::from_digits({0, 1, 3}), NodeId::from_digits({2, 1, 3}),
                                   NodeId::from_digits({0, 3, 3})),
            1);
}

TEST(Topology, ThreeWhitesAlwaysSplit) {
  // Only two even inner indices exist, so three distinct whites differ on some digit >= 1.
  std::vector<NodeId> whites;
  for (const NodeId u : all_vertices(3))
    if (is_white(u)) whites.push_back(u);
  for (std::size_t i = 0; i < whites.size(); ++i)
    for (std::size_t j = i + 1; j < whites.size(); ++j)
      for (std::size_t k = j + 1; k < whites.size(); ++k) {
        const int l = choose_split_dimension(whites[i], whites[j], whites[k]);
        EXPECT_GE(l, 1);
        EXPECT_FALSE(whites[i].digit(l) == whites[j].digit(l) && whites[j].digit(l) == whites[k].digit(l));
      }
}
