#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rig {

using MoveId = std::size_t;
using ActionId = std::size_t;
using StateId = std::size_t;
using Color = int;
using History = std::vector<MoveId>;

/// Marks an undefined transition of a partial automaton (the rejecting sink).
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

/// The alphabets of a game: actions A, moves Γ and the surjective map act: Γ → A.
class ActMap {
 public:
  ActMap() = default;
  /// Throws InputError unless both alphabets are nonempty with unique names and act is surjective.
  ActMap(std::vector<std::string> actions, std::vector<std::string> moves, std::vector<ActionId> act);

  std::size_t num_actions() const noexcept { return actions_.size(); }
  std::size_t num_moves() const noexcept { return moves_.size(); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }
  const std::string& move_name(MoveId c) const { return moves_.at(c); }
  const std::vector<std::string>& action_names() const noexcept { return actions_; }
  const std::vector<std::string>& move_names() const noexcept { return moves_; }

  ActionId act(MoveId c) const { return act_.at(c); }
  /// Moves supported by action `a`, in move order.
  std::span<const MoveId> moves_of(ActionId a) const { return supported_.at(a); }

  std::optional<MoveId> find_move(const std::string& name) const;
  std::optional<ActionId> find_action(const std::string& name) const;

  /// Translates move names; throws InputError("unknown move ...").
  History parse_history(std::span<const std::string> names) const;
  std::vector<std::string> history_names(std::span<const MoveId> history) const;

  bool operator==(const ActMap&) const = default;

 private:
  std::vector<std::string> actions_;
  std::vector<std::string> moves_;
  std::vector<ActionId> act_;
  std::vector<std::vector<MoveId>> supported_;
};

/// Deterministic Moore machine ⟨Q, q_ε, δ, λ⟩ over the move alphabet.
struct MooreMachine {
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::vector<StateId>> delta;  // delta[q][c], total
  std::vector<Color> output;

  std::size_t size() const noexcept { return states.size(); }
  StateId run(std::span<const MoveId> history) const { return run_from(initial, history); }
  StateId run_from(StateId q, std::span<const MoveId> history) const;
  /// Restriction to states reachable from the initial state, preserving relative order.
  MooreMachine trimmed() const;

  bool operator==(const MooreMachine&) const = default;
};

/// Deterministic automaton over letter pairs (c, c'), accepting a same-length relation on Γ*.
/// Transitions are partial; a missing transition rejects the pair.
struct SyncRelationAutomaton {
  std::vector<std::string> states;
  StateId initial = 0;
  std::size_t num_moves = 0;
  std::vector<StateId> delta;  // indexed by (s * num_moves + c) * num_moves + c'
  std::vector<bool> accepting;

  std::size_t size() const noexcept { return states.size(); }

  StateId step(StateId s, MoveId left, MoveId right) const {
    if (s == kNoState) return kNoState;
    return delta[(s * num_moves + left) * num_moves + right];
  }
  void set(StateId s, MoveId left, MoveId right, StateId target) {
    delta[(s * num_moves + left) * num_moves + right] = target;
  }
  bool accepts(StateId s) const { return s != kNoState && accepting[s]; }

  StateId run(std::span<const MoveId> left, std::span<const MoveId> right) const;
  /// τ ∼ τ'. Histories of different lengths are never related.
  bool related(std::span<const MoveId> left, std::span<const MoveId> right) const;

  /// An automaton with `num_states` states and no transitions.
  static SyncRelationAutomaton empty(std::size_t num_states, std::size_t num_moves);
  /// The equality relation on Γ*.
  static SyncRelationAutomaton identity(std::size_t num_moves);

  bool operator==(const SyncRelationAutomaton&) const = default;
};

/// A game with imperfect information ⟨A, act, ∼, λ⟩.
struct Game {
  ActMap actmap;
  MooreMachine coloring;
  SyncRelationAutomaton indist;

  /// Structural well-formedness: consistent alphabets, total Moore transitions, indices in range.
  /// Throws InputError. Semantic axioms are checked by validate_game.
  void check_well_formed() const;

  bool operator==(const Game&) const = default;
};

enum class ObjectiveKind { Reach, Safe, Buchi, CoBuchi };

/// Objective over colors {0,1} with target color 1.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::Reach;
};

std::string to_string(ObjectiveKind kind);
/// Accepts "reach", "safe", "buchi", "cobuchi".
ObjectiveKind parse_objective(const std::string& name);

/// λ(τ). Throws InputError on an unknown move id.
Color color_of(const Game& game, std::span<const MoveId> history);

/// λ̂(τ) = λ(c1) λ(c1c2) … λ(c1…ck); empty for ε.
std::vector<Color> cumulative_coloring(const Game& game, std::span<const MoveId> history);

/// Returns a game whose coloring latches 1 forever once emitted. A machine that already
/// latches is returned unchanged.
Game make_target_absorbing(const Game& game);

/// True when every state reachable from an output-1 state also outputs 1.
bool is_target_absorbing(const MooreMachine& machine);

/// Mixed-radix code of a history of known length (most significant move first).
std::uint64_t encode_history(std::span<const MoveId> history, std::size_t num_moves);
History decode_history(std::uint64_t code, std::size_t length, std::size_t num_moves);

}  // namespace rig
