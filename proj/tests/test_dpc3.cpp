#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "bhdpc/dpc3.hpp"
#include "bhdpc/verify.hpp"
#include "support/reference.hpp"

using namespace bhdpc;

namespace {

NodeId N(std::initializer_list<int> d) { return NodeId::from_digits(d); }

TerminalSpec random_spec(int n, std::mt19937& rng) {
  std::vector<NodeId> blacks, whites;
  for (const NodeId u : all_vertices(n)) (is_black(u) ? blacks : whites).push_back(u);
  std::shuffle(blacks.begin(), blacks.end(), rng);
  std::shuffle(whites.begin(), whites.end(), rng);
  TerminalSpec spec{n, {}};
  for (std::size_t j = 0; j < 3; ++j) spec.pairs[j] = {blacks[j], whites[j]};
  return spec;
}

void expect_cover(const TerminalSpec& spec, const PathCover& cover) {
  const Report r = verify_kdpc(spec.n, spec.pairs, std::span<const Path>(cover.paths));
  EXPECT_TRUE(r.ok()) << r.first_failure();
}

// s1,s3 in subcube 1, s2 in subcube 3; t1,t2 in subcube 0, t3 in subcube 1 (split on digit 1).
TerminalSpec placement_example() {
  return {3, {{{N({1, 1, 0}), N({0, 0, 0})}, {N({1, 3, 0}), N({0, 0, 2})}, {N({3, 1, 2}), N({2, 1, 1})}}}};
}

}  // namespace

TEST(Profile, SingleIntervalWrapsAround) {
  const std::array<TerminalPair, 3> pairs{{{N({1, 2, 0}), N({0, 0, 0})},
                                           {N({1, 0, 1}), N({2, 0, 2})},
                                           {N({3, 1, 1}), N({0, 1, 3})}}};
  const CaseProfile p = compute_profile(pairs, 1);
  EXPECT_EQ(p.M[0], (std::array<int, 4>{1, 0, 1, 1}));
  EXPECT_EQ(p.M[1], (std::array<int, 4>{1, 0, 0, 0}));
  EXPECT_EQ(p.M[2], (std::array<int, 4>{0, 1, 0, 0}));
}

TEST(Profile, PlacementExampleIsCase11) {
  const TerminalSpec spec = placement_example();
  const CaseProfile p = compute_profile(spec);
  EXPECT_EQ(p.split_dim, 1);
  EXPECT_EQ(p.beta, (std::array<int, 4>{2, 2, 1, 2}));
  EXPECT_EQ(p.f, (std::array<int, 4>{0, 1, 3, 0}));
  EXPECT_EQ(classify(p), Subcase::Case1_1);
  expect_cover(spec, build_3dpc(spec));
}

TEST(Profile, BetaMatchesIndependentCount) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const TerminalSpec spec = random_spec(3, rng);
    const CaseProfile p = compute_profile(spec);
    EXPECT_EQ(p.beta, ref::beta(p.g, p.h));
    int total = 0;
    for (int k = 0; k < 4; ++k) total += p.f[static_cast<std::size_t>(k)];
    EXPECT_EQ(total, 4);
  }
}

TEST(Profile, ClassifyBoundaries) {
  CaseProfile p;
  p.f = {0, 1, 3, 0};
  EXPECT_EQ(classify(p), Subcase::Case1_1);
  p.f = {0, 1, 1, 2};
  EXPECT_EQ(classify(p), Subcase::Case1_2);
  p.f = {1, 1, 1, 1};
  EXPECT_EQ(classify(p), Subcase::Case1_3);
  p.f = {2, 0, 0, 2};
  EXPECT_EQ(classify(p), Subcase::Case2_1);
  p.f = {1, 0, 0, 3};
  EXPECT_EQ(classify(p), Subcase::Case2_2);
  p.f = {1, 1, 0, 2};
  EXPECT_EQ(classify(p), Subcase::Case2_3);
  EXPECT_EQ(to_string(Subcase::Case2_3), "2.3");
}

TEST(Profile, ImpossibleSubcasesNeverArise) {
  // Every assignment of subcube indices to the six terminals whose sinks do
  // not all share one subcube.
  int seen = 0;
  for (int code = 0; code < (1 << 12); ++code) {
    std::array<int, 3> g{}, h{};
    for (int j = 0; j < 3; ++j) {
      g[static_cast<std::size_t>(j)] = (code >> (4 * j)) & 3;
      h[static_cast<std::size_t>(j)] = (code >> (4 * j + 2)) & 3;
    }
    if (h[0] == h[1] && h[1] == h[2]) continue;
    ++seen;
    const auto beta = ref::beta(g, h);
    std::array<int, 4> f{};
    for (const int b : beta) ++f[static_cast<std::size_t>(b)];
    EXPECT_FALSE(f[0] == 2 && f[3] == 2);
    EXPECT_FALSE(f[0] == 1 && f[3] == 3);
  }
  EXPECT_EQ(seen, 4096 - 64 * 4);
}

TEST(Chains, DisjointAlternatingAndAvoidTerminals) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const TerminalSpec spec = random_spec(3, rng);
    const CaseProfile p = compute_profile(spec);
    if (p.f[0] != 0) continue;
    const Partition part(3, p.split_dim);
    const auto chains = select_chains(Subcube::whole(3), spec.pairs, p);
    std::set<NodeId> terminals, used;
    for (const auto& pr : spec.pairs) terminals.insert({pr.source, pr.sink});
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& nodes = chains[j].nodes;
      const int hops = (p.h[j] - p.g[j] + 4) % 4;
      ASSERT_EQ(nodes.size(), static_cast<std::size_t>(2 * hops));
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        EXPECT_EQ(is_white(nodes[k]), k % 2 == 0);
        EXPECT_EQ(part.subcube_of(nodes[k]), (p.g[j] + static_cast<int>((k + 1) / 2)) % 4);
        EXPECT_FALSE(terminals.count(nodes[k]));
        EXPECT_TRUE(used.insert(nodes[k]).second);
        if (k % 2 == 1) EXPECT_TRUE(part.is_crossing(nodes[k - 1], nodes[k]));
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Build, RotationOfSplitDigit) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const TerminalSpec base = random_spec(3, rng);
    const int l = compute_profile(base).split_dim;
    Subcase first{};
    for (int c = 0; c < 4; ++c) {
      TerminalSpec spec = base;
      for (auto& pr : spec.pairs) pr = {translate(pr.source, l, c), translate(pr.sink, l, c)};
      BuildTrace trace;
      expect_cover(spec, build_3dpc_traced(spec, trace));
      if (c == 0) first = trace.subcase;
      EXPECT_EQ(trace.subcase, first);
    }
  }
}

TEST(Build, AdjacentTerminalPairs) {
  // Every pair is an edge; one short path each and the rest absorbed.
  const TerminalSpec spec{3, {{{N({1, 0, 0}), N({0, 0, 0})}, {N({1, 1, 2}), N({2, 1, 2})}, {N({3, 3, 3}), N({2, 3, 2})}}}};
  expect_cover(spec, build_3dpc(spec));
}

TEST(Build, SinkAdjacentToOtherSource) {
  const TerminalSpec spec{3, {{{N({1, 1, 0}), N({0, 0, 0})}, {N({3, 2, 1}), N({2, 0, 0})}, {N({3, 0, 0}), N({0, 1, 3})}}}};
  ASSERT_TRUE(adjacent(spec.pairs[1].sink, spec.pairs[2].source));
  expect_cover(spec, build_3dpc(spec));
}

TEST(Build, EachSubcaseAtDimensionThree) {
  std::mt19937 rng(5);
  std::map<Subcase, int> hits;
  for (int trial = 0; trial < 400; ++trial) {
    const TerminalSpec spec = random_spec(3, rng);
    BuildTrace trace;
    const PathCover cover = build_3dpc_traced(spec, trace);
    expect_cover(spec, cover);
    ++hits[trace.subcase];
  }
  EXPECT_GT(hits[Subcase::Case1_1], 0);
  EXPECT_GT(hits[Subcase::Case1_2], 0);
  EXPECT_GT(hits[Subcase::Case1_3], 0);
  EXPECT_EQ(hits.count(Subcase::Case2_1), 0u);
  EXPECT_EQ(hits.count(Subcase::Case2_2), 0u);
}

TEST(Build, CaseTwoThree) {
  // Sources in subcube 1, nothing in subcube 0; sinks spread over 2 and 3.
  const TerminalSpec spec{3, {{{N({1, 1, 0}), N({0, 2, 0})}, {N({3, 1, 1}), N({0, 3, 1})}, {N({1, 1, 3}), N({2, 2, 2})}}}};
  BuildTrace trace;
  const PathCover cover = build_3dpc_traced(spec, trace);
  EXPECT_EQ(trace.subcase, Subcase::Case2_3);
  expect_cover(spec, cover);
}

TEST(Build, SmallDimensionRejected) {
  const TerminalSpec spec{2, {{{N({1, 0}), N({0, 0})}, {N({3, 0}), N({2, 1})}, {N({1, 2}), N({0, 1})}}}};
  EXPECT_THROW(build_3dpc(spec), DimensionTooSmall);
  EXPECT_THROW(build_3dpc(Subcube::whole(2), spec.pairs), DimensionTooSmall);
}

TEST(Build, InvalidSpecs) {
  TerminalSpec spec = placement_example();
  std::swap(spec.pairs[0].source, spec.pairs[0].sink);
  EXPECT_THROW(build_3dpc(spec), InvalidSpec);
  spec = placement_example();
  spec.pairs[1].sink = spec.pairs[0].sink;
  EXPECT_THROW(build_3dpc(spec), InvalidSpec);
  spec = placement_example();
  spec.pairs[2].sink = N({0, 0});
  EXPECT_THROW(build_3dpc(spec), InvalidSpec);
}
