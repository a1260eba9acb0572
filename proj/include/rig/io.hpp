#pragma once

#include <string>

#include "json.hpp"
#include "rig/game.hpp"
#include "rig/morphism.hpp"
#include "rig/refinement.hpp"
#include "rig/reif.hpp"
#include "rig/solver.hpp"
#include "rig/strategy.hpp"
#include "rig/validation.hpp"

namespace rig {

using Json = nlohmann::ordered_json;

namespace format {
inline constexpr const char* kGame = "rig-game/1";
inline constexpr const char* kMorphism = "rig-morphism/1";
inline constexpr const char* kStrategy = "rig-strategy/1";
inline constexpr const char* kReif = "rig-reif/1";
inline constexpr const char* kParamTree = "rig-paramtree/1";
}  // namespace format

/// Parses text as JSON; syntax errors become InputError naming `source`.
Json parse_json(const std::string& text, const std::string& source);
/// Reads and parses a file. Throws InputError when unreadable.
Json read_json_file(const std::string& path);
/// Two-space indented dump with a trailing newline.
std::string dump_json(const Json& j);

// All readers throw InputError with a dotted path to the offending field.

Json game_to_json(const Game& game);
Game game_from_json(const Json& j);

/// Move names are resolved through the game's alphabet.
Json morphism_to_json(const Morphism& m, const ActMap& actmap);
Morphism morphism_from_json(const Json& j, const ActMap& actmap);

Json strategy_to_json(const FiniteMemoryStrategy& s, const ActMap& actmap);
FiniteMemoryStrategy strategy_from_json(const Json& j, const ActMap& actmap);

Json reif_to_json(const ReifGame& rg);
ReifGame reif_from_json(const Json& j);

Json paramtree_to_json(const ParamTreeGame& g);
ParamTreeGame paramtree_from_json(const Json& j);

Json history_to_json(const History& h, const ActMap& actmap);
Json verdict_to_json(const Verdict& v, const ActMap& actmap);
Json validation_to_json(const ValidationReport& report, const ActMap& actmap);
/// winning, y_star (states and pairs), ranks, action_sets, iterations.
Json fixpoint_to_json(const Arena& arena, const FixpointResult& result);

}  // namespace rig
