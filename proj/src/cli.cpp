#include "bhdpc/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "bhdpc/tables.hpp"

namespace bhdpc {

using json = nlohmann::json;

namespace {

// Splits on commas outside parentheses.
std::vector<std::string> split_top(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (const char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced parentheses in '" + text + "'");
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + text + "'");
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::vector<NodeId> parse_node_list(const std::string& text) {
  std::vector<NodeId> out;
  for (const auto& part : split_top(text)) out.push_back(parse_node(part));
  return out;
}

std::vector<TerminalPair> parse_pairs(const std::string& text) {
  std::vector<TerminalPair> out;
  for (const auto& part : split_top(text)) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw ParseError("pair '" + part + "' lacks ':'");
    out.push_back({parse_node(part.substr(0, colon)), parse_node(part.substr(colon + 1))});
  }
  return out;
}

std::string cover_to_json(int n, std::span<const TerminalPair> pairs, std::span<const Path> paths, bool verified) {
  json doc;
  doc["n"] = n;
  doc["pairs"] = json::array();
  for (const auto& p : pairs) doc["pairs"].push_back({{"source", format_node(p.source)}, {"sink", format_node(p.sink)}});
  doc["paths"] = json::array();
  for (const auto& p : paths) {
    json nodes = json::array();
    for (const NodeId u : p.nodes()) nodes.push_back(format_node(u));
    doc["paths"].push_back(nodes);
  }
  doc["verified"] = verified;
  return doc.dump(2);
}

CoverDocument cover_from_json(const std::string& text) {
  CoverDocument cover;
  try {
    const json doc = json::parse(text);
    cover.n = doc.at("n").get<int>();
    for (const auto& p : doc.at("pairs")) {
      cover.pairs.push_back({parse_node(p.at("source").get<std::string>()), parse_node(p.at("sink").get<std::string>())});
    }
    for (const auto& path : doc.at("paths")) {
      NodeSeq seq;
      for (const auto& u : path) seq.push_back(parse_node(u.get<std::string>()));
      cover.paths.push_back(std::move(seq));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad cover document: ") + e.what());
  }
  return cover;
}

namespace {

std::string dot_id(NodeId u) {
  std::string s = "v";
  for (int i = 0; i < u.dimension(); ++i) s += std::to_string(u.digit(i));
  return s;
}

const char* const kPalette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown"};

}  // namespace

std::string graph_to_dot(int n, int partition_dim) {
  check_dimension(n);
  if (partition_dim != 0 && (partition_dim < 1 || partition_dim >= n)) {
    throw BadDimension("partition dimension must lie in 1..n-1");
  }
  std::ostringstream os;
  os << "graph BH" << n << " {\n  node [shape=circle, fontsize=9];\n";
  if (partition_dim) {
    for (int i = 0; i < 4; ++i) {
      os << "  subgraph cluster_" << i << " {\n    label=\"subcube " << i << "\";\n";
      for (const NodeId u : all_vertices(n)) {
        if (u.digit(partition_dim) == i) os << "    " << dot_id(u) << ";\n";
      }
      os << "  }\n";
    }
  }
  for (const NodeId u : all_vertices(n)) {
    os << "  " << dot_id(u) << " [label=\"" << format_node(u) << "\", style=filled, fillcolor="
       << (is_white(u) ? "white" : "gray") << "];\n";
  }
  for (const DimEdge& e : all_edges(n)) {
    os << "  " << dot_id(e.u) << " -- " << dot_id(e.v);
    if (partition_dim && e.dim == partition_dim) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string cover_to_dot(const CoverDocument& cover) {
  std::ostringstream os;
  os << "graph cover {\n  node [shape=circle, fontsize=9];\n";
  for (std::size_t j = 0; j < cover.paths.size(); ++j) {
    const char* colour = kPalette[j % std::size(kPalette)];
    for (const NodeId u : cover.paths[j]) {
      os << "  " << dot_id(u) << " [label=\"" << format_node(u) << "\", color=" << colour << "];\n";
    }
    for (std::size_t k = 0; k + 1 < cover.paths[j].size(); ++k) {
      os << "  " << dot_id(cover.paths[j][k]) << " -- " << dot_id(cover.paths[j][k + 1]) << " [color=" << colour
         << ", penwidth=2];\n";
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TerminalSpec spec_from(int n, const std::string& pairs_text) {
  const auto pairs = parse_pairs(pairs_text);
  if (pairs.size() != 3) throw InvalidSpec("exactly three pairs are required");
  TerminalSpec spec{n, {pairs[0], pairs[1], pairs[2]}};
  validate_spec(spec);
  return spec;
}

int cmd_construct(int n, const std::string& pairs_text, std::ostream& out, std::ostream& err) {
  TerminalSpec spec;
  try {
    spec = spec_from(n, pairs_text);
  } catch (const std::exception& e) {
    err << "invalid spec: " << e.what() << "\n";
    return kExitUsage;
  }
  if (n < 3) {
    err << "construction needs n >= 3: BH_2 has terminal sets with no paired 3-disjoint path cover\n";
    return kExitUsage;
  }
  try {
    const PathCover cover = build_3dpc(spec);
    const Report report = verify_kdpc(n, spec.pairs, std::span<const Path>(cover.paths));
    if (!report.ok()) {
      err << "verification failed: " << report.first_failure() << "\n";
      return kExitVerifyFailed;
    }
    out << cover_to_json(n, spec.pairs, cover.paths, true) << "\n";
    return kExitOk;
  } catch (const ConstructionFailed& e) {
    err << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "internal construction failure: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_oracle(int n, const std::string& pairs_text, bool find_t3, const std::string& sources_text,
               const std::string& sinks_text, std::ostream& out, std::ostream& err) {
  if (n < 1 || n > 2) {
    err << "the exhaustive oracle handles n = 1 and n = 2 only\n";
    return kExitUsage;
  }
  try {
    if (find_t3) {
      if (n != 2) throw OracleScope("--find-t3 works on BH_2");
      const auto s = parse_node_list(sources_text);
      const auto t = parse_node_list(sinks_text);
      if (s.size() != 3 || t.size() != 2) throw OracleScope("--find-t3 needs three sources and two sinks");
      for (const NodeId u : s) {
        if (u.dimension() != 2 || !is_black(u)) throw OracleScope("sources must be black vertices of BH_2");
      }
      for (const NodeId u : t) {
        if (u.dimension() != 2 || !is_white(u)) throw OracleScope("sinks must be white vertices of BH_2");
      }
      const auto found = oracle_find_t3({s[0], s[1], s[2]}, t[0], t[1]);
      json doc = json::array();
      for (const NodeId u : found) doc.push_back(format_node(u));
      out << "valid t3: " << doc.dump() << "\n";
      return kExitOk;
    }
    const TerminalSpec spec = spec_from(n, pairs_text);
    const OracleAnswer answer = oracle_exists_3dpc(n, spec.pairs);
    if (!answer.exists) {
      out << "NO paired 3-DPC exists\n";
      return kExitOk;
    }
    const Report report = verify_kdpc(n, spec.pairs, std::span<const Path>(answer.witness));
    if (!report.ok()) {
      err << "oracle witness failed verification: " << report.first_failure() << "\n";
      return kExitVerifyFailed;
    }
    out << "YES\n" << cover_to_json(n, spec.pairs, answer.witness, true) << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const TopologyError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_validate_tables(const std::string& file, bool as_json, std::ostream& out, std::ostream& err) {
  std::vector<TableRow> rows;
  try {
    rows = file.empty() ? load_tables() : parse_tables(read_file(file));
  } catch (const DecodeError& e) {
    err << "decode error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<RowVerdict> verdicts;
  try {
    verdicts = validate_all(rows);
  } catch (const UnrepairableRow& e) {
    err << "unrepairable: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  std::size_t valid = 0;
  std::size_t repaired = 0;
  json doc = json::array();
  for (const RowVerdict& v : verdicts) {
    const TableRow& r = rows[v.index];
    valid += v.valid;
    repaired += v.repaired;
    if (!as_json && v.valid) continue;
    json row{{"table", r.table}, {"row", r.row}, {"valid", v.valid}};
    if (!v.valid) {
      row["failure"] = v.report.first_failure();
      row["t3"] = format_node(v.replacement_t3);
      json paths = json::array();
      for (const Path& p : v.replacement) {
        std::string letters;
        for (const NodeId u : p.nodes()) letters += encode_letter(u);
        paths.push_back(letters);
      }
      row["replacement"] = paths;
    }
    doc.push_back(row);
  }
  if (as_json) {
    out << json{{"rows", verdicts.size()}, {"valid", valid}, {"corrupted", verdicts.size() - valid},
                {"repaired", repaired}, {"verdicts", doc}}
               .dump(2)
        << "\n";
  } else {
    out << "rows: " << verdicts.size() << "\nvalid: " << valid << "\ncorrupted: " << verdicts.size() - valid
        << "\nrepaired: " << repaired << "\nunrepairable: 0\n";
    for (const auto& row : doc) {
      out << "  table " << row["table"] << " row " << row["row"] << ": " << row["failure"].get<std::string>()
          << "\n";
    }
  }
  return kExitOk;
}

int cmd_export(int n, bool dot, int partition, const std::string& cover_file, std::ostream& out, std::ostream& err) {
  if (!dot) {
    err << "only --dot output is supported\n";
    return kExitUsage;
  }
  try {
    if (!cover_file.empty()) {
      out << cover_to_dot(cover_from_json(read_file(cover_file)));
    } else {
      out << graph_to_dot(n, partition);
    }
    return kExitOk;
  } catch (const TopologyError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_verify(const std::string& cover_file, std::ostream& out, std::ostream& err) {
  CoverDocument cover;
  try {
    cover = cover_from_json(read_file(cover_file));
  } catch (const TopologyError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  const Report report = verify_kdpc(cover.n, cover.pairs, std::span<const NodeSeq>(cover.paths));
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  out << json{{"ok", report.ok()}, {"checks", checks}}.dump(2) << "\n";
  return report.ok() ? kExitOk : kExitVerifyFailed;
}

int cmd_selftest(int n, int count, unsigned seed, std::ostream& out, std::ostream& err) {
  if (n < 3) {
    err << "selftest samples constructions, which need n >= 3\n";
    return kExitUsage;
  }
  std::mt19937 rng(seed);
  std::vector<NodeId> blacks;
  std::vector<NodeId> whites;
  for (const NodeId u : all_vertices(n)) (is_black(u) ? blacks : whites).push_back(u);
  std::map<std::string, int> per_case;
  int failures = 0;
  for (int it = 0; it < count; ++it) {
    std::shuffle(blacks.begin(), blacks.end(), rng);
    std::shuffle(whites.begin(), whites.end(), rng);
    const TerminalSpec spec{n, {TerminalPair{blacks[0], whites[0]}, {blacks[1], whites[1]}, {blacks[2], whites[2]}}};
    BuildTrace trace;
    try {
      build_3dpc_traced(spec, trace);
      ++per_case[to_string(trace.subcase)];
    } catch (const std::exception& e) {
      ++failures;
      err << "instance " << it << " failed: " << e.what() << "\n";
    }
  }
  out << "instances: " << count << "\nfailures: " << failures << "\n";
  for (const auto& [name, c] : per_case) out << "subcase " << name << ": " << c << "\n";
  return failures == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paired 3-disjoint path covers of balanced hypercubes"};
  app.require_subcommand(1);

  int n = 0;
  std::string pairs;
  auto* construct = app.add_subcommand("construct", "build and verify a paired 3-DPC of BH_n (n >= 3)");
  construct->add_option("--n", n, "dimension")->required();
  construct->add_option("--pairs", pairs, "\"s1:t1,s2:t2,s3:t3\"")->required();

  bool find_t3 = false;
  std::string sources;
  std::string sinks;
  auto* oracle = app.add_subcommand("oracle", "exhaustive existence check on BH_1 / BH_2");
  oracle->add_option("--n", n, "dimension")->required();
  oracle->add_option("--pairs", pairs, "\"s1:t1,s2:t2,s3:t3\"");
  oracle->add_flag("--find-t3", find_t3, "list every t3 completing the given sources and t1, t2");
  oracle->add_option("--sources", sources, "\"s1,s2,s3\" for --find-t3");
  oracle->add_option("--sinks", sinks, "\"t1,t2\" for --find-t3");

  std::string table_file;
  bool as_json = false;
  auto* tables = app.add_subcommand("validate-tables", "verify the BH_2 base-case tables");
  tables->add_option("--file", table_file, "table file instead of the embedded copy");
  tables->add_flag("--json", as_json, "print verdicts as JSON");

  bool dot = false;
  int partition = 0;
  std::string cover_file;
  auto* exp = app.add_subcommand("export", "DOT export of BH_n or of a cover document");
  exp->add_option("--n", n, "dimension");
  exp->add_flag("--dot", dot, "DOT output");
  exp->add_option("--partition", partition, "group vertices by subcube along this dimension");
  exp->add_option("--cover", cover_file, "cover JSON document");

  auto* verify = app.add_subcommand("verify", "check a cover JSON document");
  verify->add_option("--cover", cover_file, "cover JSON document")->required();

  int count = 100;
  unsigned seed = 1;
  auto* selftest = app.add_subcommand("selftest", "construct and verify sampled instances");
  selftest->add_option("--n", n, "dimension")->default_val(3);
  selftest->add_option("--count", count, "instances")->default_val(100);
  selftest->add_option("--seed", seed, "sampling seed")->default_val(1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, out, msg);
    err << msg.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(n, pairs, out, err);
    if (*oracle) {
      if (!find_t3 && pairs.empty()) {
        err << "oracle needs --pairs or --find-t3\n";
        return kExitUsage;
      }
      return cmd_oracle(n, pairs, find_t3, sources, sinks, out, err);
    }
    if (*tables) return cmd_validate_tables(table_file, as_json, out, err);
    if (*exp) {
      if (cover_file.empty() && n == 0) {
        err << "export needs --n or --cover\n";
        return kExitUsage;
      }
      return cmd_export(n, dot, partition, cover_file, out, err);
    }
    if (*verify) return cmd_verify(cover_file, out, err);
    if (*selftest) return cmd_selftest(n, count, seed, out, err);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace bhdpc
