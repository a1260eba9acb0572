#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rig/game.hpp"

namespace rig {

struct HistoryPair {
  History left;
  History right;
  bool operator==(const HistoryPair&) const = default;
};

/// Outcome of one exact check. On failure `witness` holds a pair of histories and `detail`
/// says what the pair demonstrates.
struct Verdict {
  std::string check;
  bool passed = true;
  std::optional<HistoryPair> witness;
  std::string detail;
};

/// Per-axiom verdicts for a game, plus the optional bounded enumeration cross-check.
struct ValidationReport {
  std::vector<Verdict> verdicts;
  std::size_t cross_check_depth = 0;
  /// Names of axioms on which exact and bounded verdicts disagree (empty when they agree
  /// or when no cross-check ran).
  std::vector<std::string> cross_check_disagreements;

  bool ok() const;
  const Verdict& at(const std::string& check) const;
};

namespace axiom {
inline constexpr const char* kSameLength = "same_length";
inline constexpr const char* kReflexive = "reflexive";
inline constexpr const char* kSymmetric = "symmetric";
inline constexpr const char* kTransitive = "transitive";
inline constexpr const char* kPrefixClosed = "prefix_closed";
inline constexpr const char* kActionVisible = "action_visible";
inline constexpr const char* kInformationConsistent = "information_consistent";
}  // namespace axiom

/// Exact automata checks of the indistinguishability axioms and of information consistency.
/// When `depth` > 0 the verdicts are also compared against exhaustive enumeration of all
/// history pairs of length at most `depth`.
ValidationReport validate_game(const Game& game, std::size_t depth = 0);

/// The relation ∼ restricted to histories of length ≤ depth, enumerated by running the
/// automaton over every defined letter-pair path. Pairs are stored as (code(τ) << 32) | code(τ').
struct BoundedRelation {
  std::size_t depth = 0;
  std::size_t num_moves = 0;
  std::vector<std::unordered_set<std::uint64_t>> by_length;

  bool contains(std::size_t length, std::uint64_t left, std::uint64_t right) const {
    return by_length[length].count((left << 32) | right) != 0;
  }
};

/// Throws ResourceCapError when |Γ|^depth does not fit the 32-bit history code.
BoundedRelation enumerate_relation(const SyncRelationAutomaton& indist, std::size_t depth);

/// Brute-force verdicts of the same axioms up to `depth` (witnesses are the first found).
std::vector<Verdict> brute_force_axioms(const Game& game, const BoundedRelation& relation);

}  // namespace rig
