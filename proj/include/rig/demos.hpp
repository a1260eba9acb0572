#pragma once

#include <string>
#include <vector>

#include "rig/game.hpp"
#include "rig/morphism.hpp"
#include "rig/refinement.hpp"
#include "rig/reif.hpp"

namespace rig {

/// ∼ relating same-length histories whose actions agree and whose visited Moore states carry the
/// same observation label, position by position. Built over reachable pairs of Moore states.
SyncRelationAutomaton observation_relation(const ActMap& actmap, const MooreMachine& machine,
                                           const std::vector<std::string>& observation);

/// Matching pennies: the environment hides a coin (move index 1 or 2), the player guesses it with
/// action a or b in the next round and only learns whether the guess won.
Game matching_pennies_game();
/// The abstract states p0, p1 (coin 1 hidden), p2 (coin 2 hidden), pwin.
Morphism matching_pennies_morphism();
/// The same game as a partial-observation game with observations "none" and "win".
ReifGame matching_pennies_reif();

/// One action; the environment picks between a losing sink and the target.
Game env_loss_game();
Morphism env_loss_morphism();

/// The concrete tree game G with parameters x (player) and t (environment).
ParamTreeGame fig3_g();
/// The abstract tree game H with parameters y (player) and z (environment).
ParamTreeGame fig3_h();

/// A tree game as a Game over actions {l, r} and moves {l1, l2, r1, r2}: a player node follows
/// edge 0 on action l and edge 1 on r, an environment node follows edge i on move index i + 1,
/// and leaves are sinks colored by their label. ∼ relates histories with equal actions whose
/// nodes lie in the same groups (leaves grouped by color).
Game tree_game(const ParamTreeGame& tree);
/// The tree of `abstract` read as a morphism automaton with the move conventions of tree_game.
Morphism tree_morphism(const ParamTreeGame& abstract);

/// Walks G and H along the same paths and checks that node kinds and leaf colors agree, so that
/// h maps every node of G to the node of H with the same path. Returns an empty string on
/// success, else the first mismatch.
std::string check_tree_correspondence(const ParamTreeGame& concrete, const ParamTreeGame& abstract);

}  // namespace rig
