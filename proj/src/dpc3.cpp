#include "bhdpc/dpc3.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "bhdpc/verify.hpp"

namespace bhdpc {

std::string to_string(Subcase c) {
  switch (c) {
    case Subcase::Case1_1: return "1.1";
    case Subcase::Case1_2: return "1.2";
    case Subcase::Case1_3: return "1.3";
    case Subcase::Case2_1: return "2.1";
    case Subcase::Case2_2: return "2.2";
    case Subcase::Case2_3: return "2.3";
  }
  return "?";
}

void validate_spec(const TerminalSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxDimension) throw InvalidSpec("dimension out of range");
  std::vector<NodeId> all;
  for (const auto& p : spec.pairs) {
    if (p.source.dimension() != spec.n || p.sink.dimension() != spec.n) {
      throw InvalidSpec("terminal is not a vertex of BH_" + std::to_string(spec.n));
    }
    if (!is_black(p.source)) throw InvalidSpec("source " + format_node(p.source) + " is not black");
    if (!is_white(p.sink)) throw InvalidSpec("sink " + format_node(p.sink) + " is not white");
    all.push_back(p.source);
    all.push_back(p.sink);
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw InvalidSpec("terminals must be distinct");
}

CaseProfile compute_profile(std::span<const TerminalPair> pairs, int split_dim) {
  CaseProfile prof;
  prof.split_dim = split_dim;
  for (std::size_t j = 0; j < 3; ++j) {
    prof.g[j] = pairs[j].source.digit(split_dim);
    prof.h[j] = pairs[j].sink.digit(split_dim);
    const int len = (prof.h[j] - prof.g[j] + 4) % 4;
    for (int k = 0; k <= len; ++k) prof.M[j][static_cast<std::size_t>((prof.g[j] + k) % 4)] = 1;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    prof.beta[i] = prof.M[0][i] + prof.M[1][i] + prof.M[2][i];
    ++prof.f[static_cast<std::size_t>(prof.beta[i])];
  }
  return prof;
}

CaseProfile compute_profile(const TerminalSpec& spec) {
  const int l = choose_split_dimension(spec.pairs[0].sink, spec.pairs[1].sink, spec.pairs[2].sink);
  return compute_profile(spec.pairs, l);
}

Subcase classify(const CaseProfile& p) {
  const int f0 = p.f[0];
  const int f3 = p.f[3];
  if (f0 == 0 || f3 < 2) {
    if (f0 > 0) return Subcase::Case1_3;
    return f3 == 0 ? Subcase::Case1_1 : Subcase::Case1_2;
  }
  if (f0 == 2 && f3 == 2) return Subcase::Case2_1;
  if (f0 == 1 && f3 == 3) return Subcase::Case2_2;
  return Subcase::Case2_3;
}

namespace {

constexpr std::uint64_t kChoiceLimit = 400'000;
constexpr std::uint64_t kFirstAttemptSteps = 1'000;
constexpr std::uint64_t kLayoutAttempts = 20'000;

int mod4(int x) { return ((x % 4) + 4) % 4; }

// Paired cover of one subcube: search for up to two pairs or at dimension 2,
// the recursive construction otherwise. nullopt when no cover was produced.
std::optional<std::vector<Path>> solve_cube(const Subcube& cube, const std::vector<TerminalPair>& pairs,
                                            const SearchOptions& options) {
  if (pairs.empty()) return std::nullopt;
  if (pairs.size() <= 2 || (pairs.size() == 3 && cube.dimension() <= 2)) {
    SearchResult r = solve_kdpc(cube, pairs, options);
    if (!r.found()) return std::nullopt;
    return std::move(r.paths);
  }
  if (pairs.size() == 3) {
    try {
      const auto built = build_3dpc(cube, pairs, options);
      return std::vector<Path>(built.begin(), built.end());
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

class Marks {
 public:
  explicit Marks(const Subcube& scope) : scope_(scope), bits_(scope.order(), 0) {}
  bool test(NodeId u) const { return bits_[scope_.to_local(u).code()] != 0; }
  void set(NodeId u) { bits_[scope_.to_local(u).code()] = 1; }
  void reset(NodeId u) { bits_[scope_.to_local(u).code()] = 0; }
  void clear() { std::fill(bits_.begin(), bits_.end(), 0); }

 private:
  Subcube scope_;
  std::vector<char> bits_;
};

std::vector<NodeId> whites_of(const Subcube& cube) {
  std::vector<NodeId> out;
  for (const NodeId u : cube.vertices()) {
    if (is_white(u)) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> blacks_of(const Subcube& cube) {
  std::vector<NodeId> out;
  for (const NodeId u : cube.vertices()) {
    if (is_black(u)) out.push_back(u);
  }
  return out;
}

void append(NodeSeq& out, const NodeSeq& seg) { out.insert(out.end(), seg.begin(), seg.end()); }

void append_reversed(NodeSeq& out, const NodeSeq& seg) { out.insert(out.end(), seg.rbegin(), seg.rend()); }

// Memoised subcube covers, keyed by subcube and pair list.
class CubeCache {
 public:
  std::optional<std::vector<Path>> solve(int cube_index, const Subcube& cube, const std::vector<TerminalPair>& pairs,
                                         const SearchOptions& options) {
    std::vector<std::uint32_t> key{static_cast<std::uint32_t>(cube_index)};
    for (const auto& p : pairs) {
      key.push_back(p.source.code());
      key.push_back(p.sink.code());
    }
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(std::move(key), solve_cube(cube, pairs, options)).first;
    return it->second;
  }

 private:
  std::map<std::vector<std::uint32_t>, std::optional<std::vector<Path>>> memo_;
};

struct AttemptLimit {};

// Chain selection and per-subcube covers for Case 1. Subcubes are settled in
// ring order from a fullest one; each crossing hop is chosen from the side
// settled first. Failed attempts restart with a reshuffled candidate order.
class Case1Builder {
 public:
  Case1Builder(const Subcube& scope, std::span<const TerminalPair> pairs, const CaseProfile& prof,
               const SearchOptions& options)
      : scope_(scope), part_(scope, prof.split_dim), pairs_(pairs.begin(), pairs.end()), prof_(prof),
        options_(options), used_(scope) {
    for (int j = 0; j < 3; ++j) {
      hops_[j] = mod4(prof.h[j] - prof.g[j]);
      chain_[j].assign(static_cast<std::size_t>(2 * hops_[j]), NodeId{});
    }
    for (int i = 0; i < 4; ++i) {
      whites_[static_cast<std::size_t>(i)] = whites_of(part_.subcube(i));
      blacks_[static_cast<std::size_t>(i)] = blacks_of(part_.subcube(i));
    }
  }

  /// Only subcubes in `checked` are covered during chain selection; `leaf` runs
  /// once every chain node is placed and may reject the assignment.
  bool run(std::array<bool, 4> checked, const std::function<bool()>& leaf) {
    checked_ = checked;
    start_ = 0;
    for (int i = 1; i < 4; ++i) {
      if (prof_.beta[static_cast<std::size_t>(i)] > prof_.beta[static_cast<std::size_t>(start_)]) start_ = i;
    }
    auto pos = [&](int i) { return mod4(i - start_); };
    sequence_.clear();
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < hops_[j]; ++k) {
        const int from = mod4(prof_.g[j] + k);
        sequence_.push_back({j, k, pos(from) < pos(from + 1)});
      }
    }
    auto level = [&](const Hop& hop) {
      const int from = mod4(prof_.g[hop.pair] + hop.k);
      return std::min(pos(from), pos(from + 1));
    };
    std::stable_sort(sequence_.begin(), sequence_.end(),
                     [&](const Hop& x, const Hop& y) { return level(x) < level(y); });
    std::array<int, 4> ready{-1, -1, -1, -1};
    for (int d = 0; d < static_cast<int>(sequence_.size()); ++d) {
      const Hop& hop = sequence_[static_cast<std::size_t>(d)];
      const int from = mod4(prof_.g[hop.pair] + hop.k);
      ready[static_cast<std::size_t>(from)] = d;
      ready[static_cast<std::size_t>(mod4(from + 1))] = d;
    }
    check_at_.assign(sequence_.size() + 1, {});
    for (int i = 0; i < 4; ++i) {
      if (prof_.beta[static_cast<std::size_t>(i)] == 0 || !checked_[static_cast<std::size_t>(i)]) continue;
      check_at_[static_cast<std::size_t>(ready[static_cast<std::size_t>(i)] + 1)].push_back(i);
    }
    leaf_ = &leaf;
    for (const int i : check_at_[0]) {
      if (!solve(i)) return false;
    }

    std::uint64_t total = 0;
    std::uint64_t limit = kFirstAttemptSteps;
    for (unsigned attempt = 0;; ++attempt, limit *= 2) {
      if (attempt > 0) {
        std::mt19937 shuffle(attempt);
        for (auto& v : whites_) std::shuffle(v.begin(), v.end(), shuffle);
        for (auto& v : blacks_) std::shuffle(v.begin(), v.end(), shuffle);
        rng_.seed(attempt);
      }
      used_.clear();
      for (const auto& p : pairs_) {
        used_.set(p.source);
        used_.set(p.sink);
      }
      steps_ = 0;
      limit_ = std::min(limit, kChoiceLimit - total);
      flip_ = attempt > 0;
      try {
        return dfs(0);
      } catch (const AttemptLimit&) {
        total += steps_;
        if (total >= kChoiceLimit) throw ChoiceExhausted("crossing-chain selection exceeded its step limit");
      }
    }
  }

  /// Pairs of subcube i in pair order, plus the pair index of each.
  std::vector<TerminalPair> cube_pairs(int i, std::vector<int>* owners = nullptr) const {
    std::vector<TerminalPair> out;
    for (int j = 0; j < 3; ++j) {
      if (!prof_.M[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) continue;
      const int k = mod4(i - prof_.g[j]);
      const NodeId src = (k == 0) ? pairs_[static_cast<std::size_t>(j)].source
                                  : chain_[static_cast<std::size_t>(j)][static_cast<std::size_t>(2 * k - 1)];
      const NodeId snk = (k == hops_[j]) ? pairs_[static_cast<std::size_t>(j)].sink
                                         : chain_[static_cast<std::size_t>(j)][static_cast<std::size_t>(2 * k)];
      out.push_back({src, snk});
      if (owners) owners->push_back(j);
    }
    return out;
  }

  const Partition& partition() const { return part_; }
  Marks& used() { return used_; }
  CubeCache& cache() { return cache_; }
  std::vector<Path>& solution(int i) { return solution_[static_cast<std::size_t>(i)]; }
  const std::array<std::vector<NodeId>, 3>& chains() const { return chain_; }

  /// Segment of pair j inside subcube i.
  const Path& segment(int j, int i) const {
    int idx = 0;
    for (int jj = 0; jj < j; ++jj) idx += prof_.M[static_cast<std::size_t>(jj)][static_cast<std::size_t>(i)];
    return solution_[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx)];
  }

  /// Pair j's route: its segments in ring order joined by the crossing edges.
  NodeSeq stitch(int j) const {
    NodeSeq out;
    for (int k = 0; k <= hops_[j]; ++k) append(out, segment(j, mod4(prof_.g[j] + k)).nodes());
    return out;
  }

  bool solve(int i) {
    auto r = cache_.solve(i, part_.subcube(i), cube_pairs(i), options_);
    if (!r) return false;
    solution_[static_cast<std::size_t>(i)] = std::move(*r);
    return true;
  }

 private:
  struct Hop {
    int pair;
    int k;
    bool white_free;  // the white end is picked freely, the black end among its crossing neighbours
  };

  bool dfs(std::size_t depth) {
    if (depth == sequence_.size()) return (*leaf_)();
    if (++steps_ > limit_) throw AttemptLimit{};
    const Hop hop = sequence_[depth];
    const int from = mod4(prof_.g[hop.pair] + hop.k);
    auto& chain = chain_[static_cast<std::size_t>(hop.pair)];
    NodeId& white = chain[static_cast<std::size_t>(2 * hop.k)];
    NodeId& black = chain[static_cast<std::size_t>(2 * hop.k + 1)];
    const auto& candidates = hop.white_free ? whites_[static_cast<std::size_t>(from)]
                                            : blacks_[static_cast<std::size_t>(mod4(from + 1))];
    for (const NodeId x : candidates) {
      if (used_.test(x)) continue;
      used_.set(x);
      auto partners = part_.crossing_neighbors(x);
      if (flip_ && (rng_() & 1u)) std::swap(partners[0], partners[1]);
      for (const NodeId y : partners) {
        if (used_.test(y)) continue;
        used_.set(y);
        white = hop.white_free ? x : y;
        black = hop.white_free ? y : x;
        bool ok = true;
        for (const int i : check_at_[depth + 1]) {
          if (!solve(i)) {
            ok = false;
            break;
          }
        }
        if (ok && dfs(depth + 1)) return true;
        used_.reset(y);
      }
      used_.reset(x);
    }
    return false;
  }

  Subcube scope_;
  Partition part_;
  std::vector<TerminalPair> pairs_;
  CaseProfile prof_;
  SearchOptions options_;
  Marks used_;
  CubeCache cache_;
  std::array<int, 3> hops_{};
  std::array<std::vector<NodeId>, 3> chain_;
  std::array<std::vector<NodeId>, 4> whites_;
  std::array<std::vector<NodeId>, 4> blacks_;
  std::array<std::vector<Path>, 4> solution_;
  std::array<bool, 4> checked_{};
  int start_ = 0;
  std::vector<Hop> sequence_;
  std::vector<std::vector<int>> check_at_;
  const std::function<bool()>* leaf_ = nullptr;
  std::uint64_t steps_ = 0;
  std::uint64_t limit_ = 0;
  bool flip_ = false;
  std::mt19937 rng_;
};

std::array<Path, 3> to_paths(std::array<NodeSeq, 3> seqs) {
  return {Path(std::move(seqs[0])), Path(std::move(seqs[1])), Path(std::move(seqs[2]))};
}

}  // namespace

std::array<CrossingChain, 3> select_chains(const Subcube& scope, std::span<const TerminalPair> pairs,
                                           const CaseProfile& profile) {
  Case1Builder builder(scope, pairs, profile, {});
  if (!builder.run({false, false, false, false}, [] { return true; })) {
    throw ChoiceExhausted("no disjoint crossing chains");
  }
  std::array<CrossingChain, 3> out;
  for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(j)] = {j, builder.chains()[static_cast<std::size_t>(j)]};
  return out;
}

std::array<Path, 3> construct_case1(const Subcube& scope, std::span<const TerminalPair> pairs,
                                    const CaseProfile& profile, const SearchOptions& options) {
  Case1Builder builder(scope, pairs, profile, options);
  if (!builder.run({true, true, true, true}, [] { return true; })) {
    throw ChoiceExhausted("no crossing chains admit subcube covers");
  }
  return to_paths({builder.stitch(0), builder.stitch(1), builder.stitch(2)});
}

std::array<Path, 3> construct_case1_detour(const Subcube& scope, std::span<const TerminalPair> pairs,
                                           const CaseProfile& profile, const SearchOptions& options) {
  Case1Builder builder(scope, pairs, profile, options);
  const Partition& part = builder.partition();
  int p = 0;
  for (int i = 1; i < 4; ++i) {
    if (profile.beta[static_cast<std::size_t>(i)] > profile.beta[static_cast<std::size_t>(p)]) p = i;
  }
  std::array<bool, 4> checked{};
  checked[static_cast<std::size_t>(p)] = true;

  // Detour pair (source v, sink u) per subcube; entered at u, left at v.
  std::array<TerminalPair, 4> detour{};
  int split_pair = -1;
  std::size_t split_at = 0;
  Marks& used = builder.used();

  std::function<bool(int, NodeId, NodeId)> ring = [&](int step, NodeId prev_black, NodeId split_white) -> bool {
    const int c = mod4(p - step);
    const Subcube& cube = part.subcube(c);
    for (const NodeId u : part.crossing_neighbors(prev_black)) {
      if (used.test(u)) continue;
      used.set(u);
      std::vector<NodeId> sources;
      if (step < 3) {
        sources = blacks_of(cube);
      } else {
        const auto back = part.crossing_neighbors(split_white);
        sources.assign(back.begin(), back.end());
      }
      for (const NodeId v : sources) {
        if (used.test(v)) continue;
        used.set(v);
        auto cube_pairs = builder.cube_pairs(c);
        cube_pairs.push_back({v, u});
        if (auto sol = builder.cache().solve(c, cube, cube_pairs, options)) {
          detour[static_cast<std::size_t>(c)] = {v, u};
          builder.solution(c) = std::move(*sol);
          if (step == 3 || ring(step + 1, v, split_white)) return true;
        }
        used.reset(v);
      }
      used.reset(u);
    }
    return false;
  };

  auto leaf = [&]() -> bool {
    std::vector<int> owners;
    builder.cube_pairs(p, &owners);
    const auto& paths = builder.solution(p);
    for (std::size_t idx = 0; idx < paths.size(); ++idx) {
      const NodeSeq& nodes = paths[idx].nodes();
      for (std::size_t k = 0; k + 1 < nodes.size(); k += 2) {
        if (ring(1, nodes[k], nodes[k + 1])) {
          split_pair = owners[idx];
          split_at = k;
          return true;
        }
      }
    }
    return false;
  };

  if (!builder.run(checked, leaf)) throw DetourInfeasible("no split edge admits a ring detour");

  std::array<NodeSeq, 3> out;
  for (int j = 0; j < 3; ++j) {
    const int g = profile.g[static_cast<std::size_t>(j)];
    const int len = mod4(profile.h[static_cast<std::size_t>(j)] - g);
    for (int k = 0; k <= len; ++k) {
      const int i = mod4(g + k);
      const NodeSeq& seg = builder.segment(j, i).nodes();
      if (j != split_pair || i != p) {
        append(out[static_cast<std::size_t>(j)], seg);
        continue;
      }
      NodeSeq& dst = out[static_cast<std::size_t>(j)];
      dst.insert(dst.end(), seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(split_at) + 1);
      for (int step = 1; step <= 3; ++step) {
        const int c = mod4(p - step);
        append_reversed(dst, builder.solution(c).back().nodes());
      }
      dst.insert(dst.end(), seg.begin() + static_cast<std::ptrdiff_t>(split_at) + 1, seg.end());
    }
  }
  return to_paths(std::move(out));
}

namespace {

// The source subcube's share of a Subcase 2.3 cover. The routed pair leaves
// through w1 to the common crossing neighbour of the symmetric pair {w1, w2},
// comes back to w2 and walks on to the black exit `drop`, which leads into the
// empty subcube. The other two pairs leave through white exits.
struct SourceLayout {
  int routed = 0;
  NodeSeq head;  // s_routed ... w1
  NodeSeq mid;   // w2 ... drop
  std::array<int, 2> others{};
  std::array<NodeSeq, 2> exits;  // s ... white exit
};

// Layouts read off a Hamiltonian cycle through <x, a, b, c, d> of the source subcube.
std::vector<SourceLayout> certificate_layouts(const Subcube& cube, std::span<const TerminalPair> pairs,
                                              const SearchOptions& options) {
  std::vector<SourceLayout> out;
  auto source_index = [&](NodeId u) -> int {
    for (int j = 0; j < 3; ++j) {
      if (pairs[static_cast<std::size_t>(j)].source == u) return j;
    }
    return -1;
  };
  for (int xj = 0; xj < 3; ++xj) {
    const NodeId x = pairs[static_cast<std::size_t>(xj)].source;
    for (const FivePathCertificate& cert : five_path_pair(cube, x, options)) {
      const NodeSeq cyc = cert.hamiltonian.oriented(x, cert.a());
      const std::size_t m = cyc.size();
      const int b_src = source_index(cert.b());
      const int d_src = source_index(cert.d());
      SourceLayout lay;
      std::size_t from = 0;  // first cycle index of the part shared by the other sources
      if (b_src < 0) {
        // Routed pair owns the stretch from d to the first source after it.
        std::size_t k = 4;
        while (source_index(cyc[k]) < 0) ++k;
        lay.routed = source_index(cyc[k]);
        for (std::size_t i = k + 1; i-- > 4;) lay.head.push_back(cyc[i]);
        lay.head.push_back(cert.a());
        lay.mid = {cert.c(), cert.b()};
        from = k + 1;
      } else if (d_src < 0) {
        lay.routed = b_src;
        lay.head = {cert.b(), cert.c()};
        lay.mid = {cert.a(), cert.d()};
        from = 5;
      } else {
        continue;
      }
      // Remaining stretch from[..] to x splits at the one source in between.
      std::size_t k = from;
      while (k < m && source_index(cyc[k]) < 0) ++k;
      if (k >= m) continue;
      const int mid_src = source_index(cyc[k]);
      NodeSeq first;
      for (std::size_t i = k + 1; i-- > from;) first.push_back(cyc[i]);
      NodeSeq second{x};
      for (std::size_t i = m; i-- > k + 1;) second.push_back(cyc[i]);
      lay.others = {mid_src, xj};
      lay.exits = {std::move(first), std::move(second)};
      out.push_back(std::move(lay));
    }
  }
  return out;
}

class Case23Builder {
 public:
  Case23Builder(const Subcube& scope, std::span<const TerminalPair> pairs, const CaseProfile& prof,
                const SearchOptions& options)
      : part_(scope, prof.split_dim), pairs_(pairs.begin(), pairs.end()), prof_(prof), options_(options),
        used_(scope) {
    z_ = 0;
    while (prof.beta[static_cast<std::size_t>(z_)] != 0) ++z_;
    q_ = mod4(z_ + 1);
    for (int j = 0; j < 3; ++j) {
      const int hop = mod4(prof.h[static_cast<std::size_t>(j)] - prof.g[static_cast<std::size_t>(j)]);
      if (prof.g[static_cast<std::size_t>(j)] != q_ || hop < 1 || hop > 2) {
        throw UnreachableCase("subcase 2.3 profile without all sources next to the empty subcube");
      }
      near_[static_cast<std::size_t>(j)] = (hop == 1);
    }
    const int n_near = static_cast<int>(std::count(near_.begin(), near_.end(), true));
    if (n_near < 1 || n_near > 2) throw UnreachableCase("subcase 2.3 profile with all sinks in one subcube");
    for (const auto& p : pairs_) {
      used_.set(p.source);
      used_.set(p.sink);
    }
  }

  std::optional<std::array<Path, 3>> run() {
    for (const SourceLayout& lay : certificate_layouts(part_.subcube(q_), pairs_, options_)) {
      if (!near_[static_cast<std::size_t>(lay.routed)]) continue;
      if (auto r = with_layout(lay)) return r;
    }
    for (int j = 0; j < 3; ++j) {
      if (!near_[static_cast<std::size_t>(j)]) continue;
      if (auto r = searched_layouts(j)) return r;
    }
    return std::nullopt;
  }

 private:
  // Layouts found by covering the source subcube with four pairs:
  // (s_routed, w1), (drop, w2) with w2 symmetric to w1, and one white exit per
  // remaining source.
  std::optional<std::array<Path, 3>> searched_layouts(int routed) {
    const Subcube& cube = part_.subcube(q_);
    const std::vector<NodeId> whites = whites_of(cube);
    std::vector<NodeId> blacks;
    for (const NodeId u : blacks_of(cube)) {
      if (!used_.test(u)) blacks.push_back(u);
    }
    std::array<int, 2> others{};
    for (int j = 0, e = 0; j < 3; ++j) {
      if (j != routed) others[static_cast<std::size_t>(e++)] = j;
    }
    std::uint64_t attempts = 0;
    for (const NodeId w1 : whites) {
      const NodeId w2 = symmetric_node(w1);
      for (const NodeId drop : blacks) {
        for (const NodeId e1 : whites) {
          if (e1 == w1 || e1 == w2) continue;
          for (const NodeId e2 : whites) {
            if (e2 == w1 || e2 == w2 || e2 == e1) continue;
            if (++attempts > kLayoutAttempts) return std::nullopt;
            const std::vector<TerminalPair> cover{{pairs_[static_cast<std::size_t>(routed)].source, w1},
                                                  {drop, w2},
                                                  {pairs_[static_cast<std::size_t>(others[0])].source, e1},
                                                  {pairs_[static_cast<std::size_t>(others[1])].source, e2}};
            SearchResult r = solve_kdpc(cube, cover, options_);
            if (!r.found()) continue;
            SourceLayout lay;
            lay.routed = routed;
            lay.head = r.paths[0].nodes();
            lay.mid = r.paths[1].reversed().nodes();
            lay.others = others;
            lay.exits = {r.paths[2].nodes(), r.paths[3].nodes()};
            if (auto out = with_layout(lay)) return out;
          }
        }
      }
    }
    return std::nullopt;
  }

  std::optional<std::array<Path, 3>> with_layout(const SourceLayout& lay) {
    lay_ = &lay;
    for (const auto& seg : {lay.head, lay.mid, lay.exits[0], lay.exits[1]}) {
      for (const NodeId u : seg) used_.set(u);
    }
    std::optional<std::array<Path, 3>> result;
    for (const NodeId a2 : part_.crossing_neighbors(lay.head.back())) {
      a2_ = a2;
      used_.set(a2);
      if (choose_exit(0)) {
        result = stitch();
        break;
      }
      used_.reset(a2);
    }
    for (const auto& seg : {lay.head, lay.mid, lay.exits[0], lay.exits[1]}) {
      for (const NodeId u : seg) {
        if (std::find_if(pairs_.begin(), pairs_.end(), [&](const TerminalPair& p) { return p.source == u; }) ==
            pairs_.end()) {
          used_.reset(u);
        }
      }
    }
    return result;
  }

  // Crossing neighbours in q+1 of the two white exits.
  bool choose_exit(int e) {
    if (e == 2) return choose_turn(0);
    for (const NodeId x2 : part_.crossing_neighbors(lay_->exits[static_cast<std::size_t>(e)].back())) {
      if (used_.test(x2)) continue;
      used_.set(x2);
      entry_[static_cast<std::size_t>(e)] = x2;
      if (choose_exit(e + 1)) return true;
      used_.reset(x2);
    }
    return false;
  }

  // Free white turn-around nodes in q+1 for pairs whose sink lies in q+2.
  bool choose_turn(int e) {
    if (e == 2) return solve_near();
    const int j = lay_->others[static_cast<std::size_t>(e)];
    if (near_[static_cast<std::size_t>(j)]) return choose_turn(e + 1);
    for (const NodeId w : whites_of(part_.subcube(q_ + 1))) {
      if (used_.test(w)) continue;
      used_.set(w);
      turn_[static_cast<std::size_t>(e)] = w;
      if (choose_turn(e + 1)) return true;
      used_.reset(w);
    }
    return false;
  }

  bool solve_near() {
    std::vector<TerminalPair> cube{{a2_, pairs_[static_cast<std::size_t>(lay_->routed)].sink}};
    for (int e = 0; e < 2; ++e) {
      const int j = lay_->others[static_cast<std::size_t>(e)];
      cube.push_back({entry_[static_cast<std::size_t>(e)],
                      near_[static_cast<std::size_t>(j)] ? pairs_[static_cast<std::size_t>(j)].sink
                                                         : turn_[static_cast<std::size_t>(e)]});
    }
    auto sol = solve_cube(part_.subcube(q_ + 1), cube, options_);
    if (!sol) return false;
    near_sol_ = std::move(*sol);
    // The routed path meets a2 early and resumes at its successor b2.
    const NodeId b2 = near_sol_[0].nodes()[1];
    for (const NodeId b3 : part_.crossing_neighbors(b2)) {
      if (used_.test(b3)) continue;
      used_.set(b3);
      b3_ = b3;
      if (choose_far_entry(0)) return true;
      used_.reset(b3);
    }
    return false;
  }

  bool choose_far_entry(int e) {
    if (e == 2) return choose_a3();
    const int j = lay_->others[static_cast<std::size_t>(e)];
    if (near_[static_cast<std::size_t>(j)]) return choose_far_entry(e + 1);
    for (const NodeId x3 : part_.crossing_neighbors(turn_[static_cast<std::size_t>(e)])) {
      if (used_.test(x3)) continue;
      used_.set(x3);
      far_entry_[static_cast<std::size_t>(e)] = x3;
      if (choose_far_entry(e + 1)) return true;
      used_.reset(x3);
    }
    return false;
  }

  bool choose_a3() {
    const Subcube& far = part_.subcube(q_ + 2);
    for (const NodeId a3 : whites_of(far)) {
      if (used_.test(a3)) continue;
      std::vector<TerminalPair> cube{{b3_, a3}};
      for (int e = 0; e < 2; ++e) {
        const int j = lay_->others[static_cast<std::size_t>(e)];
        if (!near_[static_cast<std::size_t>(j)]) {
          cube.push_back({far_entry_[static_cast<std::size_t>(e)], pairs_[static_cast<std::size_t>(j)].sink});
        }
      }
      auto sol = solve_cube(far, cube, options_);
      if (!sol) continue;
      far_sol_ = std::move(*sol);
      const Subcube& empty = part_.subcube(z_);
      const NodeId a0 = part_.crossing_neighbors(lay_->mid.back())[0];
      const NodeId b0 = part_.crossing_neighbors(a3)[0];
      SearchResult r = solve_kdpc(empty, std::vector<TerminalPair>{{b0, a0}}, options_);
      if (!r.found()) continue;
      ham_ = r.paths[0].reversed();
      return true;
    }
    return false;
  }

  std::array<Path, 3> stitch() const {
    std::array<NodeSeq, 3> out;
    NodeSeq& routed = out[static_cast<std::size_t>(lay_->routed)];
    append(routed, lay_->head);
    routed.push_back(a2_);
    append(routed, lay_->mid);
    append(routed, ham_.nodes());
    append_reversed(routed, far_sol_[0].nodes());
    const NodeSeq& q1 = near_sol_[0].nodes();
    routed.insert(routed.end(), q1.begin() + 1, q1.end());
    std::size_t far_idx = 1;
    for (int e = 0; e < 2; ++e) {
      const int j = lay_->others[static_cast<std::size_t>(e)];
      NodeSeq& dst = out[static_cast<std::size_t>(j)];
      append(dst, lay_->exits[static_cast<std::size_t>(e)]);
      append(dst, near_sol_[static_cast<std::size_t>(e + 1)].nodes());
      if (!near_[static_cast<std::size_t>(j)]) append(dst, far_sol_[far_idx++].nodes());
    }
    return to_paths(std::move(out));
  }

  Partition part_;
  std::vector<TerminalPair> pairs_;
  CaseProfile prof_;
  SearchOptions options_;
  Marks used_;
  int z_ = 0;
  int q_ = 1;
  std::array<bool, 3> near_{};
  const SourceLayout* lay_ = nullptr;
  NodeId a2_;
  NodeId b3_;
  std::array<NodeId, 2> entry_{};
  std::array<NodeId, 2> turn_{};
  std::array<NodeId, 2> far_entry_{};
  std::vector<Path> near_sol_;
  std::vector<Path> far_sol_;
  Path ham_;
};

}  // namespace

std::array<Path, 3> construct_case23(const Subcube& scope, std::span<const TerminalPair> pairs,
                                     const CaseProfile& profile, const SearchOptions& options) {
  Case23Builder builder(scope, pairs, profile, options);
  if (auto r = builder.run()) return *r;
  throw ChoiceExhausted("no source-subcube layout completes a subcase 2.3 cover");
}

std::array<Path, 3> build_3dpc(const Subcube& scope, std::span<const TerminalPair> pairs,
                               const SearchOptions& options) {
  if (scope.dimension() < 3) throw DimensionTooSmall("paired 3-DPC construction needs dimension >= 3");
  if (pairs.size() != 3) throw InvalidSpec("exactly three pairs expected");
  const int l = choose_split_dimension(scope, pairs[0].sink, pairs[1].sink, pairs[2].sink);
  const CaseProfile profile = compute_profile(pairs, l);
  switch (classify(profile)) {
    case Subcase::Case1_1:
    case Subcase::Case1_2:
      return construct_case1(scope, pairs, profile, options);
    case Subcase::Case1_3:
      return construct_case1_detour(scope, pairs, profile, options);
    case Subcase::Case2_3:
      return construct_case23(scope, pairs, profile, options);
    case Subcase::Case2_1:
      throw UnreachableCase("profile has f_0 = f_3 = 2");
    case Subcase::Case2_2:
      throw UnreachableCase("profile has f_0 = 1 and f_3 = 3");
  }
  throw UnreachableCase("unclassified profile");
}

PathCover build_3dpc_traced(const TerminalSpec& spec, BuildTrace& trace, const SearchOptions& options) {
  validate_spec(spec);
  if (spec.n < 3) {
    throw DimensionTooSmall("a paired 3-DPC of BH_n is only guaranteed for n >= 3; BH_2 has counterexamples");
  }
  trace.profile = compute_profile(spec);
  trace.subcase = classify(trace.profile);
  PathCover cover{spec, build_3dpc(Subcube::whole(spec.n), spec.pairs, options)};
  const Report report = verify_kdpc(spec.n, spec.pairs, std::span<const Path>(cover.paths));
  if (!report.ok()) throw ConstructionFailed("constructed cover failed verification: " + report.first_failure());
  return cover;
}

PathCover build_3dpc(const TerminalSpec& spec, const SearchOptions& options) {
  BuildTrace trace;
  return build_3dpc_traced(spec, trace, options);
}

}  // namespace bhdpc
