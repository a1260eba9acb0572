#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rig/game.hpp"
#include "rig/morphism.hpp"

namespace rig {

using Bitset = boost::dynamic_bitset<>;

/// The two-sorted universe P ∪ (P × A). Element i < |P| is state i; element |P| + p·|A| + a
/// is the pair (p, a).
class Arena {
 public:
  Arena() = default;
  /// `successors[p][a]` lists δ^P(p, c) over moves c with act(c) = a (duplicates are removed).
  Arena(std::vector<std::string> state_names, std::vector<std::string> action_names, StateId initial,
        std::vector<std::vector<std::vector<StateId>>> successors, ApproxRelation approx, TargetSet targets);

  /// Validates the game and the three morphism axioms, trims the morphism and computes ≈ and
  /// P_F. For reachability the coloring and morphism are latched first. Throws ValidationError.
  static Arena build(const Game& game, const Morphism& m, ObjectiveKind objective = ObjectiveKind::Reach);

  std::size_t num_states() const noexcept { return state_names_.size(); }
  std::size_t num_actions() const noexcept { return action_names_.size(); }
  std::size_t universe_size() const noexcept { return num_states() * (1 + num_actions()); }
  std::size_t pair_index(StateId p, ActionId a) const { return num_states() + p * num_actions() + a; }
  bool is_state(std::size_t element) const { return element < num_states(); }
  StateId state_of(std::size_t element) const {
    return is_state(element) ? element : (element - num_states()) / num_actions();
  }
  ActionId action_of(std::size_t pair_element) const { return (pair_element - num_states()) % num_actions(); }

  StateId initial() const noexcept { return initial_; }
  std::span<const StateId> successors(StateId p, ActionId a) const { return successors_[p][a]; }
  /// Pair elements (q, a) having p among their successors, ascending.
  std::span<const std::size_t> predecessors(StateId p) const { return predecessors_[p]; }
  const ApproxRelation& approx() const noexcept { return approx_; }
  const TargetSet& targets() const noexcept { return targets_; }
  /// P_F as a subset of the universe.
  Bitset target_bits() const;

  const std::vector<std::string>& state_names() const noexcept { return state_names_; }
  const std::vector<std::string>& action_names() const noexcept { return action_names_; }
  /// "p" for states, "p,a" for pairs.
  std::string element_name(std::size_t element) const;

  /// The morphism and game the arena was built from (empty for arenas built from components).
  const Morphism& morphism() const noexcept { return morphism_; }
  const Game& game() const noexcept { return game_; }

 private:
  std::vector<std::string> state_names_;
  std::vector<std::string> action_names_;
  StateId initial_ = 0;
  std::vector<std::vector<std::vector<StateId>>> successors_;
  std::vector<std::vector<std::size_t>> predecessors_;
  ApproxRelation approx_;
  TargetSet targets_;
  Morphism morphism_;
  Game game_;
};

/// {p | ∃a: (p,a) ∈ X} ∪ {(p,a) | ∀c with act(c) = a: δ^P(p,c) ∈ X}.
Bitset pre(const Arena& arena, const Bitset& x);
/// Elements whose whole ≈-class (with (p,a) ≈ (p',a) iff p ≈ p') lies in Y.
Bitset interior(const Arena& arena, const Bitset& y);
/// Elements with some ≈-equivalent element in Y.
Bitset closure(const Arena& arena, const Bitset& y);

struct FixpointResult {
  ObjectiveKind objective = ObjectiveKind::Reach;
  Bitset y_star;
  /// Rank per universe element; 0 for elements outside y_star.
  std::vector<std::size_t> ranks;
  /// A_p per state (empty outside y_star).
  std::vector<std::vector<ActionId>> action_sets;
  /// Number of inner μ computations (one per outer ν step, including the confirming one).
  std::size_t outer_iterations = 0;
  /// Nonempty layers per inner computation, in order.
  std::vector<std::size_t> inner_iterations;
  bool winning = false;

  std::size_t max_rank() const;
};

/// Y* = νY. μX. int≈(Y) ∩ (Pre(X) ∪ P_F), with ranks from the final inner run.
FixpointResult solve_reach(const Arena& arena);

/// p0 ∈ Y*.
bool is_almost_sure_winning(const Arena& arena, const FixpointResult& result);

/// Almost-sure Büchi: νY. μX. int≈(Y) ∩ (Pre(X) ∪ (P_F ∩ Pre(Y))). This reduction is not the
/// reachability fixpoint; it is cross-validated against Markov chain analysis in the tests.
FixpointResult solve_buchi(const Arena& arena);

/// Throws InputError for safety (a sure-winning question) and co-Büchi (undecidable in general).
void require_supported(ObjectiveKind objective);

/// Dispatches on the objective. Safety and co-Büchi are rejected with InputError.
FixpointResult solve(const Arena& arena, ObjectiveKind objective);

}  // namespace rig
