#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bhdpc/pathengine.hpp"
#include "bhdpc/verify.hpp"
#include "support/reference.hpp"

using namespace bhdpc;

namespace {

NodeId N(std::initializer_list<int> d) { return NodeId::from_digits(d); }

std::vector<NodeId> of_color(int n, bool black) {
  std::vector<NodeId> out;
  for (const NodeId u : all_vertices(n))
    if (is_black(u) == black) out.push_back(u);
  return out;
}

std::vector<std::pair<int, int>> as_codes(const std::vector<TerminalPair>& pairs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : pairs) out.emplace_back(static_cast<int>(p.source.code()), static_cast<int>(p.sink.code()));
  return out;
}

}  // namespace

TEST(PathEngine, AgreesWithPlainBacktracking) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = (trial % 5 == 0) ? 1 : 2;
    const int kmax = (n == 1) ? 2 : 3;
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(kmax));
    auto blacks = of_color(n, true);
    auto whites = of_color(n, false);
    std::shuffle(blacks.begin(), blacks.end(), rng);
    std::shuffle(whites.begin(), whites.end(), rng);
    std::vector<TerminalPair> pairs;
    for (int j = 0; j < k; ++j) pairs.push_back({blacks[static_cast<std::size_t>(j)], whites[static_cast<std::size_t>(j)]});
    const auto res = solve_kdpc(Subcube::whole(n), pairs);
    ASSERT_NE(res.status, SearchStatus::BudgetExceeded);
    EXPECT_EQ(res.found(), ref::kdpc_exists(n, as_codes(pairs))) << "trial " << trial;
    if (res.found()) EXPECT_TRUE(verify_kdpc(n, pairs, std::span<const Path>(res.paths)).ok());
  }
}

TEST(PathEngine, HamiltonianLaceableBH2) {
  const Subcube whole = Subcube::whole(2);
  for (const NodeId b : of_color(2, true)) {
    for (const NodeId w : of_color(2, false)) {
      const Path p = ham_path(whole, b, w);
      const TerminalPair pr{b, w};
      EXPECT_TRUE(verify_kdpc(2, std::span(&pr, 1), std::span(&p, 1)).ok());
      const Path q = ham_path(whole, w, b);
      EXPECT_EQ(q.front(), w);
      EXPECT_EQ(q.back(), b);
      EXPECT_EQ(q.size(), 16u);
    }
  }
}

TEST(PathEngine, TwoDpcInSubcube) {
  const Subcube sc = Subcube::whole(3).restrict(2, 1);
  const auto paths = two_dpc(sc, {N({1, 0, 1}), N({0, 1, 1})}, {N({3, 2, 1}), N({2, 3, 1})});
  EXPECT_EQ(paths[0].size() + paths[1].size(), 16u);
  for (const auto& p : paths)
    for (const NodeId u : p.nodes()) EXPECT_TRUE(sc.contains(u));
}

TEST(PathEngine, KnownNonexistentInstance) {
  const std::vector<TerminalPair> pairs{{N({1, 0}), N({0, 0})}, {N({3, 0}), N({2, 0})}, {N({1, 2}), N({0, 1})}};
  const auto res = solve_kdpc(Subcube::whole(2), pairs);
  EXPECT_EQ(res.status, SearchStatus::Unsat);
  EXPECT_FALSE(ref::kdpc_exists(2, as_codes(pairs)));
}

TEST(PathEngine, BlockedVerticesAreAvoided) {
  SearchOptions opts;
  opts.blocked = {N({0, 0}), N({1, 0})};
  const std::vector<TerminalPair> pairs{{N({3, 0}), N({2, 0})}};
  const auto res = solve_kdpc(Subcube::whole(2), pairs, opts);
  ASSERT_TRUE(res.found());
  EXPECT_EQ(res.paths[0].size(), 14u);
}

TEST(PathEngine, BudgetIsReported) {
  SearchOptions opts;
  opts.budget = 1;
  const std::vector<TerminalPair> pairs{{N({1, 0, 0}), N({0, 2, 3})}};
  EXPECT_EQ(solve_kdpc(Subcube::whole(3), pairs, opts).status, SearchStatus::BudgetExceeded);
}

TEST(PathEngine, BaseCertificatesVerbatim) {
  const auto certs = five_path_pair(N({1, 0}));
  EXPECT_EQ(certs[0].five_path.nodes(), (NodeSeq{N({1, 0}), N({0, 0}), N({1, 1}), N({2, 0}), N({3, 1})}));
  EXPECT_EQ(certs[1].five_path.nodes(), (NodeSeq{N({1, 0}), N({0, 3}), N({3, 3}), N({2, 3}), N({1, 3})}));
}

TEST(PathEngine, CertificateInvariants) {
  for (int n = 2; n <= 3; ++n) {
    const Subcube whole = Subcube::whole(n);
    for (const NodeId s : of_color(n, true)) {
      const auto certs = five_path_pair(whole, s);
      for (const auto& c : certs) {
        EXPECT_EQ(certificate_violation(c, whole), "") << format_node(s);
        EXPECT_EQ(c.s(), s);
        EXPECT_EQ(c.hamiltonian.size(), order(n));
        EXPECT_EQ(symmetric_node(c.a()), c.c());
        EXPECT_EQ(symmetric_node(c.b()), c.d());
      }
      for (const NodeId x : certs[0].square())
        for (const NodeId y : certs[1].square()) EXPECT_NE(x, y);
    }
  }
}

TEST(PathEngine, CertificateViolationDetected) {
  auto certs = five_path_pair(N({1, 0}));
  FivePathCertificate mixed{certs[0].five_path, certs[1].hamiltonian};
  EXPECT_NE(certificate_violation(mixed, Subcube::whole(2)), "");
}

TEST(PathEngine, EightCyclesMatchBruteForce) {
  for (const auto& e : all_edges(2)) {
    const Partition part(2, 1);
    const Cycle c = find_8cycle(e.u, e.v, part);
    ASSERT_EQ(c.size(), 8u);
    EXPECT_EQ(c.nodes()[0], e.u);
    EXPECT_EQ(c.nodes()[1], e.v);
    std::vector<int> codes;
    for (const NodeId x : c.nodes()) codes.push_back(static_cast<int>(x.code()));
    const auto all = ref::eight_cycles(2, codes[0], codes[1]);
    EXPECT_NE(std::find(all.begin(), all.end(), codes), all.end());
    const auto inner = ref::inner_edges_per_subcube(2, codes, 1);
    EXPECT_EQ(inner, (std::array<int, 4>{1, 1, 1, 1}));
  }
}
