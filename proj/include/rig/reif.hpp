#pragma once

#include <string>
#include <vector>

#include "rig/game.hpp"
#include "rig/morphism.hpp"

namespace rig {

/// A game with partial observation on locations: the player sees the observation of each
/// location visited and the actions played, never the moves.
struct ReifGame {
  ActMap actmap;
  std::vector<std::string> locations;
  StateId initial = 0;
  std::vector<std::vector<StateId>> transition;  // transition[l][c], total
  std::vector<std::string> observation;           // per location
  std::vector<bool> winning;

  /// Shape checks, plus: winning locations must be unions of observation classes, since the
  /// coloring has to be information-consistent. Throws InputError.
  void check_well_formed() const;

  bool operator==(const ReifGame&) const = default;
};

/// Moore machine over locations with winning locations colored 1 (and made absorbing when
/// `latch`); ∼ relates two histories iff their actions agree position by position and so do the
/// observations of the locations they visit. Büchi instances pass latch = false.
Game reif_to_game(const ReifGame& rg, bool latch = true);

/// Abstract states (location, belief) reachable from (l0, {l0}); the belief is updated by the
/// post-image under moves with the same action, restricted to the observed observation.
Morphism subset_morphism(const ReifGame& rg, bool latch = true);

/// The belief part of each abstract state of subset_morphism, as sorted location lists.
std::vector<std::vector<StateId>> subset_beliefs(const ReifGame& rg, bool latch = true);

}  // namespace rig
