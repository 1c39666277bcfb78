#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bhdpc/path.hpp"
#include "bhdpc/topology.hpp"
#include "bhdpc/verify.hpp"

namespace bhdpc {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnrepairableRow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows shipped with the library, and how many of them fail verification as written.
inline constexpr std::size_t kTableRowCount = 240;
inline constexpr std::size_t kCorruptedRowCount = 9;

/// BH_2 vertex names: a=(0,0), b=(1,0), c=(2,0), d=(3,0), e=(0,1), ..., p=(3,3).
NodeId decode_letter(char letter);
char encode_letter(NodeId u);

/// (t1, t2) shared by every row of table 1..4.
std::array<NodeId, 2> table_sinks(int table);

struct TableRow {
  int table = 0;
  int row = 0;   // 1-based within its table
  int line = 0;  // 1-based line in the source text
  std::array<char, 3> sources{};
  char t3 = 0;
  std::array<std::string, 3> raw;  // path fields as written
  std::array<TerminalPair, 3> pairs;
  std::array<NodeSeq, 3> paths;
};

/// Parses `<table> <s1> <s2> <s3> <t3> <path1> <path2> <path3>` lines; paths
/// are letters joined by ',' (a stray '.' is read as a separator). Blank lines
/// and '#' comments are skipped. Throws DecodeError.
std::vector<TableRow> parse_tables(std::string_view text);

/// The embedded rows; the text is checked against its recorded checksum.
std::vector<TableRow> load_tables();
std::string_view embedded_table_text();
std::uint64_t table_checksum(std::string_view text);
inline constexpr std::uint64_t kEmbeddedTableChecksum = 0x897de9b7b81590b2ULL;

struct RowVerdict {
  std::size_t index = 0;  // into the row list
  bool valid = false;
  Report report;
  /// For rows failing verification: an oracle cover with the same terminals,
  /// or, when that t3 admits none, with the first t3 that does.
  bool repaired = false;
  NodeId replacement_t3;
  std::array<Path, 3> replacement;
};

RowVerdict validate_row(const TableRow& row, std::size_t index = 0);
/// Throws UnrepairableRow if some failing row's terminals admit no cover for any t3.
std::vector<RowVerdict> validate_all(const std::vector<TableRow>& rows);

}  // namespace bhdpc
