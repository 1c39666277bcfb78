#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhdpc/path.hpp"
#include "bhdpc/pathengine.hpp"
#include "bhdpc/topology.hpp"

namespace bhdpc {

class DimensionTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a profile lands in a subcase that cannot occur after a valid split.
class UnreachableCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ChoiceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DetourInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The constructed cover failed the independent verifier.
class ConstructionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TerminalSpec {
  int n = 0;
  std::array<TerminalPair, 3> pairs;
};

/// Throws InvalidSpec unless the six terminals are distinct vertices of BH_n
/// with black sources and white sinks.
void validate_spec(const TerminalSpec& spec);

struct CaseProfile {
  int split_dim = 1;
  std::array<int, 3> g{};  // subcube of s_j
  std::array<int, 3> h{};  // subcube of t_j
  std::array<std::array<int, 4>, 3> M{};
  std::array<int, 4> beta{};
  std::array<int, 4> f{};  // f[k] = #{i : beta_i = k}
};

enum class Subcase { Case1_1, Case1_2, Case1_3, Case2_1, Case2_2, Case2_3 };

std::string to_string(Subcase c);

/// Profile of the pairs relative to a fixed split dimension.
CaseProfile compute_profile(std::span<const TerminalPair> pairs, int split_dim);
/// Profile along the split chosen for the sinks.
CaseProfile compute_profile(const TerminalSpec& spec);

/// f_0 = 0 or f_3 < 2 is Case 1 (1.1: f_0 = f_3 = 0; 1.2: f_0 = 0 < f_3;
/// 1.3: f_0 > 0); otherwise 2.1 (f_0 = f_3 = 2), 2.2 (f_0 = 1, f_3 = 3) or 2.3.
Subcase classify(const CaseProfile& profile);

/// Alternating white/black helper nodes routing pair j from subcube g_j to h_j:
/// a^g, b^{g+1}, a^{g+1}, ..., b^h. Empty when g_j = h_j.
struct CrossingChain {
  int pair = 0;
  std::vector<NodeId> nodes;
};

struct PathCover {
  TerminalSpec spec;
  std::array<Path, 3> paths;
};

/// Pairwise-disjoint chains avoiding all terminals; the first assignment in
/// the global vertex order. Throws ChoiceExhausted.
std::array<CrossingChain, 3> select_chains(const Subcube& scope, std::span<const TerminalPair> pairs,
                                           const CaseProfile& profile);

/// Case 1 with every subcube on some pair's route (f_0 = 0).
std::array<Path, 3> construct_case1(const Subcube& scope, std::span<const TerminalPair> pairs,
                                    const CaseProfile& profile, const SearchOptions& options = {});
/// Case 1 with an empty subcube (f_0 > 0, f_3 < 2): edge split and ring detour.
std::array<Path, 3> construct_case1_detour(const Subcube& scope, std::span<const TerminalPair> pairs,
                                           const CaseProfile& profile, const SearchOptions& options = {});
/// Subcase 2.3: all sources in the subcube after the empty one.
std::array<Path, 3> construct_case23(const Subcube& scope, std::span<const TerminalPair> pairs,
                                     const CaseProfile& profile, const SearchOptions& options = {});

/// Paired 3-DPC of a subcube of dimension >= 3 by the recursive construction.
std::array<Path, 3> build_3dpc(const Subcube& scope, std::span<const TerminalPair> pairs,
                               const SearchOptions& options = {});

/// Paired 3-DPC of BH_n, n >= 3. The returned cover has passed verify_kdpc.
PathCover build_3dpc(const TerminalSpec& spec, const SearchOptions& options = {});

struct BuildTrace {
  CaseProfile profile;
  Subcase subcase = Subcase::Case1_1;
};

/// As build_3dpc, also reporting the top-level profile and subcase.
PathCover build_3dpc_traced(const TerminalSpec& spec, BuildTrace& trace, const SearchOptions& options = {});

}  // namespace bhdpc
