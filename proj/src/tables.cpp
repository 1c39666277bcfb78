#include "bhdpc/tables.hpp"

#include <sstream>

namespace bhdpc {

namespace detail {
extern const std::string_view kTableText;
}

NodeId decode_letter(char letter) {
  if (letter < 'a' || letter > 'p') throw DecodeError(std::string("letter '") + letter + "' is outside a..p");
  const int k = letter - 'a';
  return NodeId::from_digits({k % 4, k / 4});
}

char encode_letter(NodeId u) {
  if (u.dimension() != 2) throw DecodeError("only BH_2 vertices have letter names");
  return static_cast<char>('a' + u.digit(0) + 4 * u.digit(1));
}

std::array<NodeId, 2> table_sinks(int table) {
  switch (table) {
    case 1: return {NodeId::from_digits({0, 0}), NodeId::from_digits({2, 0})};
    case 2: return {NodeId::from_digits({0, 0}), NodeId::from_digits({0, 1})};
    case 3: return {NodeId::from_digits({0, 0}), NodeId::from_digits({0, 2})};
    case 4: return {NodeId::from_digits({0, 0}), NodeId::from_digits({0, 3})};
    default: throw DecodeError("no table " + std::to_string(table));
  }
}

namespace {

char single_letter(const std::string& field, int line) {
  if (field.size() != 1) throw DecodeError("line " + std::to_string(line) + ": '" + field + "' is not one letter");
  decode_letter(field[0]);
  return field[0];
}

NodeSeq decode_path(const std::string& field, int line) {
  NodeSeq out;
  std::string token;
  auto flush = [&] {
    if (token.size() != 1) {
      throw DecodeError("line " + std::to_string(line) + ": bad path token '" + token + "' in '" + field + "'");
    }
    out.push_back(decode_letter(token[0]));
    token.clear();
  };
  for (const char ch : field) {
    if (ch == ',' || ch == '.') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<TableRow> parse_tables(std::string_view text) {
  std::vector<TableRow> rows;
  std::array<int, 5> per_table{};
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string x; fields >> x;) f.push_back(x);
    if (f.size() != 8) {
      throw DecodeError("line " + std::to_string(lineno) + ": expected 8 fields, got " + std::to_string(f.size()));
    }
    TableRow row;
    if (f[0].size() != 1 || f[0][0] < '1' || f[0][0] > '4') {
      throw DecodeError("line " + std::to_string(lineno) + ": table id must be 1..4");
    }
    row.table = f[0][0] - '0';
    row.row = ++per_table[static_cast<std::size_t>(row.table)];
    row.line = lineno;
    for (int j = 0; j < 3; ++j) row.sources[static_cast<std::size_t>(j)] = single_letter(f[static_cast<std::size_t>(1 + j)], lineno);
    row.t3 = single_letter(f[4], lineno);
    const auto sinks = table_sinks(row.table);
    row.pairs = {TerminalPair{decode_letter(row.sources[0]), sinks[0]},
                 {decode_letter(row.sources[1]), sinks[1]},
                 {decode_letter(row.sources[2]), decode_letter(row.t3)}};
    for (int j = 0; j < 3; ++j) {
      row.raw[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(5 + j)];
      row.paths[static_cast<std::size_t>(j)] = decode_path(f[static_cast<std::size_t>(5 + j)], lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DecodeError("no table rows found");
  return rows;
}

std::uint64_t table_checksum(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view embedded_table_text() { return detail::kTableText; }

std::vector<TableRow> load_tables() {
  const std::string_view text = embedded_table_text();
  if (table_checksum(text) != kEmbeddedTableChecksum) throw DecodeError("embedded table data fails its checksum");
  return parse_tables(text);
}

RowVerdict validate_row(const TableRow& row, std::size_t index) {
  RowVerdict v;
  v.index = index;
  v.report = verify_kdpc(2, row.pairs, std::span<const NodeSeq>(row.paths));
  v.valid = v.report.ok();
  if (v.valid) return v;

  const std::array<NodeId, 3> s{row.pairs[0].source, row.pairs[1].source, row.pairs[2].source};
  std::vector<NodeId> candidates{row.pairs[2].sink};
  for (const NodeId t3 : oracle_find_t3(s, row.pairs[0].sink, row.pairs[1].sink)) {
    if (t3 != row.pairs[2].sink) candidates.push_back(t3);
  }
  for (const NodeId t3 : candidates) {
    std::array<TerminalPair, 3> pairs = row.pairs;
    pairs[2].sink = t3;
    const OracleAnswer answer = oracle_exists_3dpc(2, pairs);
    if (!answer.exists) continue;
    v.repaired = true;
    v.replacement_t3 = t3;
    v.replacement = {answer.witness[0], answer.witness[1], answer.witness[2]};
    return v;
  }
  return v;
}

std::vector<RowVerdict> validate_all(const std::vector<TableRow>& rows) {
  std::vector<RowVerdict> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(validate_row(rows[i], i));
    const RowVerdict& v = out.back();
    if (!v.valid && !v.repaired) {
      throw UnrepairableRow("table " + std::to_string(rows[i].table) + " row " + std::to_string(rows[i].row) +
                            ": no paired 3-DPC for these sources with any t3");
    }
  }
  return out;
}

}  // namespace bhdpc
