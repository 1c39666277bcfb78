#include "bhdpc/verify.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "bhdpc/pathengine.hpp"

namespace bhdpc {

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string Report::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name + ": " + c.detail;
  }
  return {};
}

bool reference_adjacent(NodeId u, NodeId v) {
  const int n = u.dimension();
  if (v.dimension() != n) return false;
  const int du = u.digit(0);
  const int dv = v.digit(0);
  if ((dv - du + 4) % 4 != 1 && (du - dv + 4) % 4 != 1) return false;
  const int step = (du % 2 == 0) ? 1 : 3;
  int differing = 0;
  for (int i = 1; i < n; ++i) {
    if (u.digit(i) == v.digit(i)) continue;
    if (v.digit(i) != (u.digit(i) + step) % 4) return false;
    ++differing;
  }
  return differing <= 1;
}

namespace {

std::string name_of(NodeId u) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < u.dimension(); ++i) os << (i ? "," : "") << u.digit(i);
  os << ')';
  return os.str();
}

}  // namespace

Report verify_kdpc(int n, std::span<const TerminalPair> pairs, std::span<const NodeSeq> paths) {
  Report report;
  CheckResult shape{"shape", true, {}};
  if (n < 1 || n > kMaxDimension) {
    shape = {"shape", false, "dimension out of range"};
  } else if (paths.size() != pairs.size() || paths.empty()) {
    shape = {"shape", false, std::to_string(paths.size()) + " paths for " + std::to_string(pairs.size()) + " pairs"};
  } else {
    for (std::size_t j = 0; j < paths.size() && shape.passed; ++j) {
      if (paths[j].empty()) shape = {"shape", false, "path " + std::to_string(j + 1) + " is empty"};
      for (const NodeId x : paths[j]) {
        if (x.dimension() != n) {
          shape = {"shape", false, "node " + name_of(x) + " is not a vertex of BH_" + std::to_string(n)};
          break;
        }
      }
    }
  }
  report.checks.push_back(shape);
  if (!shape.passed) {
    for (const char* name : {"adjacency", "pairing", "disjointness", "coverage"}) {
      report.checks.push_back({name, false, "not checked"});
    }
    return report;
  }

  CheckResult adjacency{"adjacency", true, {}};
  for (std::size_t j = 0; j < paths.size() && adjacency.passed; ++j) {
    for (std::size_t k = 0; k + 1 < paths[j].size(); ++k) {
      if (!reference_adjacent(paths[j][k], paths[j][k + 1])) {
        adjacency = {"adjacency", false,
                     "path " + std::to_string(j + 1) + ": " + name_of(paths[j][k]) + " - " +
                         name_of(paths[j][k + 1]) + " is not an edge"};
        break;
      }
    }
  }
  report.checks.push_back(adjacency);

  CheckResult pairing{"pairing", true, {}};
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const NodeId s = pairs[j].source;
    const NodeId t = pairs[j].sink;
    const std::string label = "path " + std::to_string(j + 1);
    if (s.digit(0) % 2 != 1 || t.digit(0) % 2 != 0) {
      pairing = {"pairing", false, label + ": source must be black and sink white"};
      break;
    }
    if (paths[j].front() != s || paths[j].back() != t) {
      pairing = {"pairing", false,
                 label + " runs " + name_of(paths[j].front()) + " -> " + name_of(paths[j].back()) + ", expected " +
                     name_of(s) + " -> " + name_of(t)};
      break;
    }
  }
  report.checks.push_back(pairing);

  const std::size_t total = std::size_t{1} << (2 * n);
  std::vector<int> owner(total, -1);
  CheckResult disjoint{"disjointness", true, {}};
  for (std::size_t j = 0; j < paths.size(); ++j) {
    for (const NodeId x : paths[j]) {
      int& o = owner[x.code()];
      if (o != -1 && disjoint.passed) {
        disjoint = {"disjointness", false,
                    name_of(x) + " appears in path " + std::to_string(o + 1) + " and path " + std::to_string(j + 1)};
      }
      o = static_cast<int>(j);
    }
  }
  report.checks.push_back(disjoint);

  CheckResult coverage{"coverage", true, {}};
  std::vector<std::string> missing;
  for (std::size_t c = 0; c < total; ++c) {
    if (owner[c] == -1) missing.push_back(name_of(NodeId(n, static_cast<std::uint32_t>(c))));
  }
  if (!missing.empty()) {
    std::string detail = std::to_string(missing.size()) + " uncovered:";
    for (std::size_t i = 0; i < missing.size() && i < 8; ++i) detail += " " + missing[i];
    if (missing.size() > 8) detail += " ...";
    coverage = {"coverage", false, detail};
  }
  report.checks.push_back(coverage);
  return report;
}

Report verify_kdpc(int n, std::span<const TerminalPair> pairs, std::span<const Path> paths) {
  std::vector<NodeSeq> seqs;
  seqs.reserve(paths.size());
  for (const Path& p : paths) seqs.push_back(p.nodes());
  return verify_kdpc(n, pairs, std::span<const NodeSeq>(seqs));
}

OracleAnswer oracle_exists_3dpc(int n, const std::array<TerminalPair, 3>& pairs) {
  if (n < 1 || n > 2) throw OracleScope("the exhaustive oracle covers BH_1 and BH_2 only");
  std::vector<NodeId> seen;
  for (const auto& p : pairs) {
    if (p.source.dimension() != n || p.sink.dimension() != n) throw OracleScope("terminal dimension mismatch");
    if (!is_black(p.source) || !is_white(p.sink)) throw OracleScope("sources must be black and sinks white");
    seen.push_back(p.source);
    seen.push_back(p.sink);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw OracleScope("terminals must be distinct");

  SearchOptions options;
  options.budget = std::numeric_limits<std::uint64_t>::max();
  SearchResult r = solve_kdpc(Subcube::whole(n), pairs, options);
  OracleAnswer answer;
  answer.exists = r.found();
  if (answer.exists) answer.witness = std::move(r.paths);
  return answer;
}

std::vector<NodeId> oracle_find_t3(const std::array<NodeId, 3>& s, NodeId t1, NodeId t2) {
  std::vector<NodeId> found;
  for (const NodeId t3 : all_vertices(2)) {
    if (!is_white(t3) || t3 == t1 || t3 == t2) continue;
    const std::array<TerminalPair, 3> pairs{TerminalPair{s[0], t1}, {s[1], t2}, {s[2], t3}};
    if (oracle_exists_3dpc(2, pairs).exists) found.push_back(t3);
  }
  return found;
}

}  // namespace bhdpc
