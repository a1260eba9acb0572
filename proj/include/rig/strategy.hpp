#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rig/game.hpp"
#include "rig/morphism.hpp"
#include "rig/rational.hpp"
#include "rig/solver.hpp"

namespace rig {

enum class Role { Player, Environment };

std::string to_string(Role role);

/// Memory automaton with exact rational emissions. A player strategy emits a distribution over
/// A per memory state; an environment strategy emits, per memory state and action, a
/// distribution over the moves supporting that action.
struct FiniteMemoryStrategy {
  Role role = Role::Player;
  std::vector<std::string> memory;
  StateId initial = 0;
  std::vector<std::vector<StateId>> update;               // update[m][c]
  std::vector<std::vector<Rational>> player_emit;          // [m][a]
  std::vector<std::vector<std::vector<Rational>>> env_emit;  // [m][a][c]

  std::size_t size() const noexcept { return memory.size(); }
  StateId advance(StateId m, MoveId c) const { return update[m][c]; }
  StateId run(std::span<const MoveId> history) const;

  /// Shape, probabilities in [0,1] summing to exactly 1, and environment support on moves with
  /// the right action. Throws InputError.
  void check(const ActMap& actmap) const;

  bool operator==(const FiniteMemoryStrategy&) const = default;
};

/// Memory = the morphism automaton; emits the uniform distribution over A_p on Y* and the
/// uniform distribution over A elsewhere. Throws NotWinningError when p0 ∉ Y*.
FiniteMemoryStrategy extract_strategy(const Arena& arena, const FixpointResult& result, const Morphism& m);

/// Memory = the morphism automaton; emits the uniform distribution over `support[p]`.
FiniteMemoryStrategy support_strategy(const Morphism& m, const ActMap& actmap,
                                      const std::vector<std::vector<ActionId>>& support);

/// One memory state, uniform over the moves supporting each action.
FiniteMemoryStrategy uniform_environment(const ActMap& actmap);

struct RankProgressReport {
  bool ok = true;
  std::string violation;
  /// Least probability, over non-target states of Y*, of playing a rank-decreasing action.
  Rational min_decrease_probability = 1;
};

/// Every p ∈ Y* \ P_F has a ∈ A_p with rank(p,a) < rank(p) and all successors of (p,a) of
/// lower rank, played with probability at least 1/|A|.
RankProgressReport check_rank_progress(const Arena& arena, const FixpointResult& result,
                                       const FiniteMemoryStrategy& strategy);

/// A pure environment strategy positional on the product (player memory, abstract state).
struct Spoiler {
  /// choice[(mem * |P| + p) * |A| + a] = move.
  std::vector<MoveId> choice;
  FiniteMemoryStrategy strategy;
  /// Exact Pr(Reach) of the induced chain, strictly below 1.
  Rational reach_probability;
};

struct SpoilerOptions {
  /// Product states allowed in the search; ResourceCapError beyond it.
  std::size_t max_product_states = 1u << 16;
};

/// The least positional spoiler in lexicographic order over (memory, state, action) slots with
/// moves ascending, or none when σ wins almost surely from (σ.initial, p_start). The search fixes
/// slots greedily; a slot value is kept when some completion still spoils, decided exactly by a
/// positive-safety fixpoint on the product.
std::optional<Spoiler> build_spoiler(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                                     const SpoilerOptions& options = {});

/// True iff no positional environment strategy keeps Pr(Reach) below 1.
bool verify_almost_sure(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                        const SpoilerOptions& options = {});

}  // namespace rig
