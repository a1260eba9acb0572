#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rig/game.hpp"
#include "rig/validation.hpp"

namespace rig {

/// A morphism h given by its automaton: h(τ) = δ^P(p0, τ). The morphism axiom
/// "h(τ) = h(τ') implies h(τc) = h(τ'c)" holds by construction.
struct Morphism {
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::vector<StateId>> delta;  // delta[p][c], total

  std::size_t size() const noexcept { return states.size(); }
  /// Restriction to states reachable from p0 (makes h surjective onto P).
  Morphism trimmed() const;
  std::optional<StateId> find_state(const std::string& name) const;

  /// Throws InputError on shape errors.
  void check_well_formed(std::size_t num_moves) const;

  bool operator==(const Morphism&) const = default;
};

/// h(τ). Throws InputError on an unknown move id.
StateId h_eval(const Morphism& m, std::span<const MoveId> history);

/// The equivalence ≈ on P, stored as a union-find with the least member as representative.
class ApproxRelation {
 public:
  ApproxRelation() = default;
  explicit ApproxRelation(std::size_t num_states);

  void merge(StateId p, StateId q);
  StateId representative(StateId p) const { return rep_.at(p); }
  bool related(StateId p, StateId q) const { return rep_.at(p) == rep_.at(q); }
  /// (p, a) ≈ (q, b) iff p ≈ q and a = b.
  bool related(StateId p, ActionId a, StateId q, ActionId b) const { return a == b && related(p, q); }
  std::size_t size() const noexcept { return rep_.size(); }
  /// Classes in order of their least member; members ascending.
  std::vector<std::vector<StateId>> classes() const;
  std::span<const StateId> class_of(StateId p) const;

  bool operator==(const ApproxRelation& other) const { return rep_ == other.rep_; }

 private:
  void rebuild();
  std::vector<StateId> parent_;
  std::vector<StateId> rep_;
  std::vector<std::vector<StateId>> members_;  // indexed by representative
};

/// ≈ = {(h(τ), h(τ')) | τ ∼ τ'} by product reachability over (indist, P, P).
/// Throws ValidationError when the pairs do not form an equivalence (evidence of a broken
/// morphism); the message names a witness pair of histories.
ApproxRelation compute_approx(const Game& game, const Morphism& m);

/// All pairs (p, p') realised by related histories, with a shortlex-least witness for each.
std::vector<std::pair<std::pair<StateId, StateId>, HistoryPair>> realised_pairs(const Game& game, const Morphism& m);

namespace morphism_check {
inline constexpr const char* kRefinement = "refinement";
inline constexpr const char* kRectangularity = "rectangularity";
inline constexpr const char* kApproxEquivalence = "approx_equivalence";
}  // namespace morphism_check

/// h(τ) = h(τ') implies λ(τ) = λ(τ'), checked on the reachable part of P × Q.
Verdict validate_refinement(const Game& game, const Morphism& m);

/// H ∘ ∼ = ∼ ∘ H where H is the kernel of h. Both compositions are built as nondeterministic
/// letter-pair automata and determinized on the fly; the witness is the shortlex-least pair in
/// the symmetric difference. Histories of different lengths are then compared through the
/// images h([τ]∼), which must agree whenever h(τ) = h(τ').
Verdict validate_rectangularity(const Game& game, const Morphism& m);

/// compute_approx as a verdict instead of an exception.
Verdict validate_approx_equivalence(const Game& game, const Morphism& m);

/// P_F as a membership vector over P.
struct TargetSet {
  std::vector<bool> members;
  bool contains(StateId p) const { return members.at(p); }
  std::vector<StateId> list() const;
  bool operator==(const TargetSet&) const = default;
};

/// p ∈ P_F iff some reachable (p, q) of P × Q has output 1. Checks that P_F is ≈-closed and,
/// when `require_sink`, closed under δ^P. Throws ValidationError otherwise.
TargetSet compute_targets(const Game& game, const Morphism& m, const ApproxRelation& approx, bool require_sink = true);

/// Runs the three morphism validators. Throws ValidationError on the first failure.
void require_rectangular(const Game& game, const Morphism& m);

/// Latches the coloring (make_target_absorbing) and redirects every successor of a morphism
/// state with color 1 into a single absorbing state. Unchanged when the game already latches.
std::pair<Game, Morphism> latch_targets(const Game& game, const Morphism& m);

}  // namespace rig
