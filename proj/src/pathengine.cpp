#include "bhdpc/pathengine.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace bhdpc {

std::uint64_t default_budget() {
  static const std::uint64_t budget = [] {
    if (const char* env = std::getenv("BHDPC_BUDGET")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return kDefaultBudget;
  }();
  return budget;
}

std::string to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Unsat: return "unsat";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

namespace {

struct BudgetHit {};

constexpr std::uint64_t kFirstAttemptExpansions = 4096;

// Backtracking over a compact copy of the scope. Paths are grown one at a time
// from their sources; after every step the unvisited region is checked for
// connectivity, pairing and colour balance.
class KdpcSearch {
 public:
  KdpcSearch(const Subcube& scope, std::span<const TerminalPair> pairs, const SearchOptions& options,
             std::uint64_t limit, unsigned seed)
      : scope_(scope), budget_(limit), rng_(seed), shuffled_(seed != 0) {
    nodes_ = scope.vertices();
    m_ = static_cast<int>(nodes_.size());
    adj_start_.assign(static_cast<std::size_t>(m_) + 1, 0);
    for (int v = 0; v < m_; ++v) {
      for (const NodeId w : scope.neighbors(nodes_[static_cast<std::size_t>(v)])) adj_.push_back(local(w));
      adj_start_[static_cast<std::size_t>(v) + 1] = static_cast<int>(adj_.size());
    }
    black_.resize(static_cast<std::size_t>(m_));
    for (int v = 0; v < m_; ++v) black_[static_cast<std::size_t>(v)] = is_black(nodes_[static_cast<std::size_t>(v)]);

    k_ = static_cast<int>(pairs.size());
    if (k_ < 1) throw std::invalid_argument("solve_kdpc needs at least one pair");
    role_.assign(static_cast<std::size_t>(m_), -1);
    for (int p = 0; p < k_; ++p) {
      const TerminalPair& tp = pairs[static_cast<std::size_t>(p)];
      if (!scope.contains(tp.source) || !scope.contains(tp.sink)) throw std::invalid_argument("terminal outside scope");
      if (!is_black(tp.source) || !is_white(tp.sink)) throw std::invalid_argument("pairs must run black -> white");
      const int s = local(tp.source);
      const int t = local(tp.sink);
      if (role_[static_cast<std::size_t>(s)] != -1 || role_[static_cast<std::size_t>(t)] != -1) {
        throw std::invalid_argument("terminals must be distinct");
      }
      role_[static_cast<std::size_t>(s)] = 2 * p;
      role_[static_cast<std::size_t>(t)] = 2 * p + 1;
      src_.push_back(s);
      snk_.push_back(t);
    }
    visited_.assign(static_cast<std::size_t>(m_), 0);
    free_deg_.assign(static_cast<std::size_t>(m_), 0);
    for (int v = 0; v < m_; ++v) free_deg_[static_cast<std::size_t>(v)] = adj_start_[v + 1] - adj_start_[v];
    for (const NodeId b : options.blocked) {
      if (!scope.contains(b)) continue;
      const int v = local(b);
      if (role_[static_cast<std::size_t>(v)] != -1) throw std::invalid_argument("terminal is blocked");
      if (!visited_[static_cast<std::size_t>(v)]) visit(v);
    }
    comp_.assign(static_cast<std::size_t>(m_), -1);
    near_head_.assign(static_cast<std::size_t>(m_), 0);
    queue_.resize(static_cast<std::size_t>(m_));
    paths_.resize(static_cast<std::size_t>(k_));
  }

  SearchResult run() {
    SearchResult result;
    try {
      cur_ = 0;
      visit(src_[0]);
      paths_[0].push_back(src_[0]);
      const bool ok = feasible(src_[0]) && dfs(src_[0]);
      result.status = ok ? SearchStatus::Found : SearchStatus::Unsat;
    } catch (const BudgetHit&) {
      result.status = SearchStatus::BudgetExceeded;
    }
    result.expansions = expansions_;
    if (result.status == SearchStatus::Found) {
      for (const auto& p : paths_) {
        NodeSeq seq;
        seq.reserve(p.size());
        for (const int v : p) seq.push_back(nodes_[static_cast<std::size_t>(v)]);
        result.paths.emplace_back(std::move(seq));
      }
    }
    return result;
  }

 private:
  int local(NodeId u) const { return static_cast<int>(scope_.to_local(u).code()); }

  void visit(int v) {
    visited_[static_cast<std::size_t>(v)] = 1;
    ++visited_count_;
    for (int e = adj_start_[v]; e < adj_start_[v + 1]; ++e) --free_deg_[static_cast<std::size_t>(adj_[e])];
  }

  void unvisit(int v) {
    visited_[static_cast<std::size_t>(v)] = 0;
    --visited_count_;
    for (int e = adj_start_[v]; e < adj_start_[v + 1]; ++e) ++free_deg_[static_cast<std::size_t>(adj_[e])];
  }

  bool dfs(int head) {
    if (++expansions_ > budget_) throw BudgetHit{};
    if (head == snk_[static_cast<std::size_t>(cur_)]) {
      if (cur_ + 1 == k_) return visited_count_ == m_;
      ++cur_;
      const int s = src_[static_cast<std::size_t>(cur_)];
      visit(s);
      paths_[static_cast<std::size_t>(cur_)].push_back(s);
      if (feasible(s) && dfs(s)) return true;
      paths_[static_cast<std::size_t>(cur_)].pop_back();
      unvisit(s);
      --cur_;
      return false;
    }

    const int sink = snk_[static_cast<std::size_t>(cur_)];
    std::array<int, 2 * kMaxDimension> cand{};
    int nc = 0;
    bool sink_adjacent = false;
    for (int e = adj_start_[head]; e < adj_start_[head + 1]; ++e) {
      const int w = adj_[e];
      if (visited_[static_cast<std::size_t>(w)]) continue;
      if (w == sink) {
        sink_adjacent = true;
      } else if (role_[static_cast<std::size_t>(w)] == -1) {
        cand[static_cast<std::size_t>(nc++)] = w;
      }
    }
    if (shuffled_) {
      for (int i = nc - 1; i > 0; --i) std::swap(cand[static_cast<std::size_t>(i)], cand[rng_() % (i + 1)]);
    }
    std::stable_sort(cand.begin(), cand.begin() + nc, [&](int x, int y) {
      return free_deg_[static_cast<std::size_t>(x)] < free_deg_[static_cast<std::size_t>(y)];
    });
    if (sink_adjacent) cand[static_cast<std::size_t>(nc++)] = sink;

    auto& path = paths_[static_cast<std::size_t>(cur_)];
    for (int i = 0; i < nc; ++i) {
      const int w = cand[static_cast<std::size_t>(i)];
      visit(w);
      path.push_back(w);
      const bool ok = (w == sink) ? dfs(w) : (feasible(w) && dfs(w));
      if (ok) return true;
      path.pop_back();
      unvisit(w);
    }
    return false;
  }

  // Necessary conditions for completing the cover with path cur_ open at head.
  bool feasible(int head) {
    const int sink = snk_[static_cast<std::size_t>(cur_)];
    for (int e = adj_start_[head]; e < adj_start_[head + 1]; ++e) near_head_[static_cast<std::size_t>(adj_[e])] = 1;
    const bool ok = feasible_impl(head, sink);
    for (int e = adj_start_[head]; e < adj_start_[head + 1]; ++e) near_head_[static_cast<std::size_t>(adj_[e])] = 0;
    return ok;
  }

  bool feasible_impl(int head, int sink) {
    // Degree: interior vertices need two usable neighbours, terminals one.
    for (int v = 0; v < m_; ++v) {
      if (visited_[static_cast<std::size_t>(v)]) continue;
      const int r = role_[static_cast<std::size_t>(v)];
      int avail = free_deg_[static_cast<std::size_t>(v)];
      if (near_head_[static_cast<std::size_t>(v)] && (r == -1 || v == sink)) ++avail;
      if (avail < (r == -1 ? 2 : 1)) return false;
    }

    // Components of the unvisited region.
    std::fill(comp_.begin(), comp_.end(), -1);
    ncomp_ = 0;
    balance_.clear();
    for (int v = 0; v < m_; ++v) {
      if (visited_[static_cast<std::size_t>(v)] || comp_[static_cast<std::size_t>(v)] >= 0) continue;
      int diff = 0;
      int qh = 0;
      int qt = 0;
      queue_[static_cast<std::size_t>(qt++)] = v;
      comp_[static_cast<std::size_t>(v)] = ncomp_;
      while (qh < qt) {
        const int x = queue_[static_cast<std::size_t>(qh++)];
        diff += black_[static_cast<std::size_t>(x)] ? -1 : 1;
        for (int e = adj_start_[x]; e < adj_start_[x + 1]; ++e) {
          const int y = adj_[e];
          if (visited_[static_cast<std::size_t>(y)] || comp_[static_cast<std::size_t>(y)] >= 0) continue;
          comp_[static_cast<std::size_t>(y)] = ncomp_;
          queue_[static_cast<std::size_t>(qt++)] = y;
        }
      }
      balance_.push_back(diff);
      ++ncomp_;
    }

    const int sink_comp = comp_[static_cast<std::size_t>(sink)];
    bool reach = false;
    for (int e = adj_start_[head]; e < adj_start_[head + 1]; ++e) {
      const int w = adj_[e];
      if (!visited_[static_cast<std::size_t>(w)] && comp_[static_cast<std::size_t>(w)] == sink_comp) {
        reach = true;
        break;
      }
    }
    if (!reach) return false;

    anchored_.assign(static_cast<std::size_t>(ncomp_), 0);
    anchored_[static_cast<std::size_t>(sink_comp)] = 1;
    for (int p = cur_ + 1; p < k_; ++p) {
      const int cs = comp_[static_cast<std::size_t>(src_[static_cast<std::size_t>(p)])];
      if (cs != comp_[static_cast<std::size_t>(snk_[static_cast<std::size_t>(p)])]) return false;
      anchored_[static_cast<std::size_t>(cs)] = 1;
    }
    for (int c = 0; c < ncomp_; ++c) {
      if (!anchored_[static_cast<std::size_t>(c)]) return false;
      // whites minus blacks: zero for components holding whole pairs only,
      // one extra white when the open path still has to enter from a black head.
      const int expected = (c == sink_comp && black_[static_cast<std::size_t>(head)]) ? 1 : 0;
      if (balance_[static_cast<std::size_t>(c)] != expected) return false;
    }
    return true;
  }

  Subcube scope_;
  std::uint64_t budget_;
  std::mt19937 rng_;
  bool shuffled_;
  std::uint64_t expansions_ = 0;
  int m_ = 0;
  int k_ = 0;
  int cur_ = 0;
  int visited_count_ = 0;
  int ncomp_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<int> adj_start_;
  std::vector<int> adj_;
  std::vector<char> black_;
  std::vector<int> role_;
  std::vector<int> src_;
  std::vector<int> snk_;
  std::vector<char> visited_;
  std::vector<int> free_deg_;
  std::vector<int> comp_;
  std::vector<char> near_head_;
  std::vector<int> queue_;
  std::vector<int> balance_;
  std::vector<char> anchored_;
  std::vector<std::vector<int>> paths_;
};

}  // namespace

SearchResult solve_kdpc(const Subcube& scope, std::span<const TerminalPair> pairs, const SearchOptions& options) {
  // Restarts with doubling limits; later attempts break degree ties at random.
  // Every attempt is a complete search, so an Unsat from any of them is final.
  std::uint64_t spent = 0;
  std::uint64_t limit = kFirstAttemptExpansions;
  for (unsigned attempt = 0;; ++attempt) {
    const std::uint64_t left = options.budget - spent;
    const bool last = limit >= left;
    KdpcSearch search(scope, pairs, options, last ? left : limit, attempt);
    SearchResult r = search.run();
    spent += r.expansions;
    if (r.status != SearchStatus::BudgetExceeded || last) {
      r.expansions = spent;
      return r;
    }
    if (limit < std::numeric_limits<std::uint64_t>::max() / 2) limit *= 2;
  }
}

Path ham_path(const Subcube& scope, NodeId u, NodeId v, const SearchOptions& options) {
  if (color(u) == color(v)) throw std::invalid_argument("Hamiltonian path endpoints must have opposite colours");
  const bool flip = is_white(u);
  const TerminalPair pair = flip ? TerminalPair{v, u} : TerminalPair{u, v};
  const SearchResult r = solve_kdpc(scope, std::span<const TerminalPair>(&pair, 1), options);
  if (!r.found()) {
    throw SearchExhausted("Hamiltonian path " + format_node(u) + " -> " + format_node(v) + ": " + to_string(r.status));
  }
  return flip ? r.paths[0].reversed() : r.paths[0];
}

std::array<Path, 2> two_dpc(const Subcube& scope, TerminalPair first, TerminalPair second,
                            const SearchOptions& options) {
  const std::array<TerminalPair, 2> pairs{first, second};
  const SearchResult r = solve_kdpc(scope, pairs, options);
  if (!r.found()) throw SearchExhausted("paired 2-DPC: " + to_string(r.status));
  return {r.paths[0], r.paths[1]};
}

Cycle find_8cycle(NodeId u, NodeId v, const Partition& partition) {
  const Subcube& scope = partition.scope();
  if (!scope.contains(u) || !scope.contains(v)) throw std::invalid_argument("edge outside partition scope");
  const int l = partition.split_dimension();
  std::array<int, 4> inside{};
  auto note = [&](NodeId x, NodeId y, int delta) {
    if (x.digit(l) == y.digit(l)) inside[static_cast<std::size_t>(x.digit(l))] += delta;
  };
  const auto around_u = scope.neighbors(u);
  if (std::find(around_u.begin(), around_u.end(), v) == around_u.end()) {
    throw std::invalid_argument("find_8cycle needs an edge");
  }
  note(u, v, 1);
  NodeSeq walk{u, v};

  // Depth-first over walks u, v, x2, ..., x7 closing back to u.
  auto extend = [&](auto&& self) -> bool {
    const NodeId last = walk.back();
    if (walk.size() == 8) {
      if (!adjacent(last, u)) return false;
      note(last, u, 1);
      const bool ok = std::all_of(inside.begin(), inside.end(), [](int c) { return c == 1; });
      note(last, u, -1);
      return ok;
    }
    for (const NodeId w : scope.neighbors(last)) {
      if (std::find(walk.begin(), walk.end(), w) != walk.end()) continue;
      note(last, w, 1);
      if (last.digit(l) != w.digit(l) || inside[static_cast<std::size_t>(w.digit(l))] <= 1) {
        walk.push_back(w);
        if (self(self)) return true;
        walk.pop_back();
      }
      note(last, w, -1);
    }
    return false;
  };
  if (!extend(extend)) {
    throw NotFound("no 8-cycle with one edge per subcube through " + format_node(u) + "-" + format_node(v));
  }
  return Cycle(walk);
}

namespace {

// Explicit BH_2 certificates for s = (1,0).
constexpr std::array<std::array<int, 2>, 5> kBasePath1{{{1, 0}, {0, 0}, {1, 1}, {2, 0}, {3, 1}}};
constexpr std::array<std::array<int, 2>, 16> kBaseCycle1{{{1, 0}, {0, 0}, {1, 1}, {2, 0}, {3, 1}, {0, 1},
                                                         {1, 2}, {2, 1}, {3, 2}, {2, 2}, {1, 3}, {0, 2},
                                                         {3, 3}, {2, 3}, {3, 0}, {0, 3}}};
constexpr std::array<std::array<int, 2>, 5> kBasePath2{{{1, 0}, {0, 3}, {3, 3}, {2, 3}, {1, 3}}};
constexpr std::array<std::array<int, 2>, 16> kBaseCycle2{{{1, 0}, {0, 3}, {3, 3}, {2, 3}, {1, 3}, {2, 2},
                                                         {3, 2}, {0, 2}, {1, 2}, {2, 1}, {3, 1}, {0, 1},
                                                         {1, 1}, {2, 0}, {3, 0}, {0, 0}}};

template <std::size_t N>
NodeSeq map_base(const std::array<std::array<int, 2>, N>& seq, const Subcube& scope, NodeId s) {
  // Translating a_1 and shifting a_0 by 2 are automorphisms of BH_2; together
  // they carry (1,0) onto any black vertex.
  const NodeId local_s = scope.to_local(s);
  const int shift0 = local_s.digit(0) - 1;
  const int shift1 = local_s.digit(1);
  NodeSeq out;
  out.reserve(N);
  for (const auto& xy : seq) {
    const NodeId local = NodeId::from_digits({((xy[0] + shift0) % 4 + 4) % 4, ((xy[1] + shift1) % 4 + 4) % 4});
    out.push_back(scope.to_global(local));
  }
  return out;
}

FivePathCertificate extend_certificate(const FivePathCertificate& inner, const Partition& part,
                                       const SearchOptions& options) {
  const NodeSeq& cyc = inner.hamiltonian.nodes();
  const std::array<NodeId, 5> protect{inner.s(), inner.a(), inner.b(), inner.c(), inner.d()};
  auto is_protected = [&](NodeId x) { return std::find(protect.begin(), protect.end(), x) != protect.end(); };

  // First cycle edge, taken white-first, that avoids the five-path.
  const std::size_t m = cyc.size();
  NodeId u;
  NodeId v;
  bool found = false;
  for (std::size_t k = 0; k < m && !found; ++k) {
    const NodeId x = cyc[k];
    const NodeId y = cyc[(k + 1) % m];
    if (is_protected(x) || is_protected(y)) continue;
    u = is_white(x) ? x : y;
    v = is_white(x) ? y : x;
    found = true;
  }
  if (!found) throw NotFound("no removable edge on the Hamiltonian cycle");

  const Cycle eight = find_8cycle(u, v, part);
  // u (white) leaves through its crossing edge: u, v1, u1, v2, u2, v3, u3, v.
  const NodeSeq& e = eight.nodes();
  const NodeId next = (e[1] == v) ? e[7] : e[1];
  const NodeSeq ring = eight.oriented(u, next);

  // Hamiltonian cycle of the home subcube without edge (u, v), read v ... u.
  const NodeSeq around = inner.hamiltonian.oriented(u, v);
  NodeSeq cycle(around.begin() + 1, around.end());
  cycle.push_back(u);
  const int g = part.subcube_of(u);
  for (int i = 1; i <= 3; ++i) {
    const NodeId entry = ring[static_cast<std::size_t>(2 * i - 1)];
    const NodeId exit = ring[static_cast<std::size_t>(2 * i)];
    if (part.subcube_of(entry) != ((g + i) & 3) || part.subcube_of(exit) != ((g + i) & 3)) {
      throw NotFound("8-cycle does not visit the subcubes in ring order");
    }
    const Path p = ham_path(part.subcube(g + i), entry, exit, options);
    cycle.insert(cycle.end(), p.nodes().begin(), p.nodes().end());
  }
  return FivePathCertificate{inner.five_path, Cycle(std::move(cycle))};
}

}  // namespace

std::array<FivePathCertificate, 2> five_path_pair(const Subcube& scope, NodeId s, const SearchOptions& options) {
  if (scope.dimension() < 2) throw BadDimension("five-path certificates need dimension >= 2");
  if (!scope.contains(s) || !is_black(s)) throw std::invalid_argument("five_path_pair needs a black node of the scope");
  if (scope.dimension() == 2) {
    return {FivePathCertificate{Path(map_base(kBasePath1, scope, s)), Cycle(map_base(kBaseCycle1, scope, s))},
            FivePathCertificate{Path(map_base(kBasePath2, scope, s)), Cycle(map_base(kBaseCycle2, scope, s))}};
  }
  const std::vector<int> dims = scope.free_dimensions();
  const Partition part(scope, dims.back());
  const auto inner = five_path_pair(part.subcube(part.subcube_of(s)), s, options);
  return {extend_certificate(inner[0], part, options), extend_certificate(inner[1], part, options)};
}

std::array<FivePathCertificate, 2> five_path_pair(NodeId s) { return five_path_pair(Subcube::whole(s.dimension()), s); }

std::string certificate_violation(const FivePathCertificate& cert, const Subcube& scope) {
  const NodeSeq& p = cert.five_path.nodes();
  if (p.size() != 5) return "five-path has " + std::to_string(p.size()) + " nodes";
  if (!is_black(cert.s())) return "s is not black";
  if (cert.a() != symmetric_node(cert.c())) return "a and c are not a symmetric pair";
  if (cert.b() != symmetric_node(cert.d())) return "b and d are not a symmetric pair";
  if (!adjacent(cert.d(), cert.a())) return "<a,b,c,d> does not close into a 4-cycle";
  const NodeSeq& cyc = cert.hamiltonian.nodes();
  if (cyc.size() != scope.order()) return "cycle is not Hamiltonian";
  for (const NodeId x : cyc) {
    if (!scope.contains(x)) return "cycle leaves the scope";
  }
  NodeSeq oriented;
  try {
    oriented = cert.hamiltonian.oriented(p[0], p[1]);
  } catch (const InvalidPath&) {
    return "five-path is not on the cycle";
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (oriented[i] != p[i]) return "five-path is not a contiguous segment of the cycle";
  }
  return {};
}

}  // namespace bhdpc
