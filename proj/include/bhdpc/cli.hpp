#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bhdpc/dpc3.hpp"
#include "bhdpc/verify.hpp"

namespace bhdpc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "s1:t1,s2:t2,s3:t3" with nodes in "(a0,...)" form.
std::vector<TerminalPair> parse_pairs(const std::string& text);
/// Comma-separated node list "(..),(..)".
std::vector<NodeId> parse_node_list(const std::string& text);

/// JSON cover document: {n, pairs: [{source, sink}], paths: [[node, ...]], verified}.
std::string cover_to_json(int n, std::span<const TerminalPair> pairs, std::span<const Path> paths, bool verified);
struct CoverDocument {
  int n = 0;
  std::vector<TerminalPair> pairs;
  std::vector<NodeSeq> paths;
};
/// Throws ParseError on malformed documents.
CoverDocument cover_from_json(const std::string& text);

std::string graph_to_dot(int n, int partition_dim = 0);
std::string cover_to_dot(const CoverDocument& cover);

}  // namespace bhdpc
