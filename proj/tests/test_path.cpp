#include <gtest/gtest.h>

#include "bhdpc/path.hpp"

using namespace bhdpc;

namespace {
NodeId N(std::initializer_list<int> d) { return NodeId::from_digits(d); }
}  // namespace

TEST(Path, AcceptsSimplePaths) {
  Path p({N({1, 0}), N({0, 0}), N({1, 1})});
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.front(), N({1, 0}));
  EXPECT_EQ(p.reversed().front(), N({1, 1}));
  EXPECT_EQ(p.reversed().reversed(), p);
  EXPECT_NO_THROW(Path({N({1, 0})}));
}

TEST(Path, RejectsBrokenPaths) {
  EXPECT_THROW(Path(NodeSeq{}), InvalidPath);
  EXPECT_THROW(Path({N({1, 0}), N({3, 0})}), InvalidPath);
  EXPECT_THROW(Path({N({0, 0}), N({1, 1}), N({0, 2})}), InvalidPath);
  EXPECT_THROW(Path({N({1, 0}), N({0, 0}), N({1, 0})}), InvalidPath);
  EXPECT_THROW(Path({N({1, 0}), N({0, 0, 0})}), InvalidPath);
}

TEST(Cycle, OrientsFromAnyEdge) {
  // Square (0,0),(1,0),(2,0),(3,0): symmetric corners.
  Cycle c({N({0, 0}), N({1, 0}), N({2, 0}), N({3, 0})});
  EXPECT_EQ(c.oriented(N({2, 0}), N({1, 0})), (NodeSeq{N({2, 0}), N({1, 0}), N({0, 0}), N({3, 0})}));
  EXPECT_EQ(c.oriented(N({3, 0}), N({0, 0})), (NodeSeq{N({3, 0}), N({0, 0}), N({1, 0}), N({2, 0})}));
  EXPECT_THROW(c.oriented(N({0, 0}), N({2, 0})), InvalidPath);
}

TEST(Cycle, RejectsNonCycles) {
  EXPECT_THROW(Cycle({N({0, 0}), N({1, 0})}), InvalidPath);
  EXPECT_THROW(Cycle({N({0, 0}), N({1, 0}), N({2, 0})}), InvalidPath);
  EXPECT_THROW(Cycle({N({0, 0}), N({1, 0}), N({0, 3}), N({1, 3})}), InvalidPath);
}
