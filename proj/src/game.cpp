#include "rig/game.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "rig/errors.hpp"

namespace rig {

namespace {

void require_unique(const std::vector<std::string>& names, const std::string& path) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw InputError("duplicate name '" + n + "'", path);
  }
}

}  // namespace

ActMap::ActMap(std::vector<std::string> actions, std::vector<std::string> moves, std::vector<ActionId> act)
    : actions_(std::move(actions)), moves_(std::move(moves)), act_(std::move(act)) {
  if (actions_.empty()) throw InputError("action set is empty", "actions");
  if (moves_.empty()) throw InputError("move set is empty", "moves");
  if (act_.size() != moves_.size()) throw InputError("act must map every move", "act");
  require_unique(actions_, "actions");
  require_unique(moves_, "moves");
  supported_.assign(actions_.size(), {});
  for (MoveId c = 0; c < moves_.size(); ++c) {
    if (act_[c] >= actions_.size()) throw InputError("act maps to an unknown action", "act." + moves_[c]);
    supported_[act_[c]].push_back(c);
  }
  for (ActionId a = 0; a < actions_.size(); ++a) {
    if (supported_[a].empty()) {
      throw InputError("act is not surjective: action '" + actions_[a] + "' supports no move", "act");
    }
  }
}

std::optional<MoveId> ActMap::find_move(const std::string& name) const {
  auto it = std::find(moves_.begin(), moves_.end(), name);
  if (it == moves_.end()) return std::nullopt;
  return static_cast<MoveId>(it - moves_.begin());
}

std::optional<ActionId> ActMap::find_action(const std::string& name) const {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions_.begin());
}

History ActMap::parse_history(std::span<const std::string> names) const {
  History out;
  out.reserve(names.size());
  for (const auto& n : names) {
    auto c = find_move(n);
    if (!c) throw InputError("unknown move '" + n + "'");
    out.push_back(*c);
  }
  return out;
}

std::vector<std::string> ActMap::history_names(std::span<const MoveId> history) const {
  std::vector<std::string> out;
  out.reserve(history.size());
  for (MoveId c : history) out.push_back(move_name(c));
  return out;
}

StateId MooreMachine::run_from(StateId q, std::span<const MoveId> history) const {
  for (MoveId c : history) {
    if (c >= delta[q].size()) throw InputError("unknown move id " + std::to_string(c));
    q = delta[q][c];
  }
  return q;
}

MooreMachine MooreMachine::trimmed() const {
  std::vector<bool> reach(size(), false);
  std::deque<StateId> queue{initial};
  reach[initial] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId t : delta[q]) {
      if (!reach[t]) {
        reach[t] = true;
        queue.push_back(t);
      }
    }
  }
  std::vector<StateId> remap(size(), kNoState);
  MooreMachine out;
  for (StateId q = 0; q < size(); ++q) {
    if (!reach[q]) continue;
    remap[q] = out.states.size();
    out.states.push_back(states[q]);
    out.output.push_back(output[q]);
  }
  out.initial = remap[initial];
  for (StateId q = 0; q < size(); ++q) {
    if (!reach[q]) continue;
    std::vector<StateId> row;
    for (StateId t : delta[q]) row.push_back(remap[t]);
    out.delta.push_back(std::move(row));
  }
  return out;
}

StateId SyncRelationAutomaton::run(std::span<const MoveId> left, std::span<const MoveId> right) const {
  if (left.size() != right.size()) return kNoState;
  StateId s = initial;
  for (std::size_t i = 0; i < left.size() && s != kNoState; ++i) {
    if (left[i] >= num_moves || right[i] >= num_moves) throw InputError("unknown move id");
    s = step(s, left[i], right[i]);
  }
  return s;
}

bool SyncRelationAutomaton::related(std::span<const MoveId> left, std::span<const MoveId> right) const {
  return accepts(run(left, right));
}

SyncRelationAutomaton SyncRelationAutomaton::empty(std::size_t num_states, std::size_t num_moves) {
  SyncRelationAutomaton a;
  a.num_moves = num_moves;
  for (std::size_t s = 0; s < num_states; ++s) a.states.push_back("s" + std::to_string(s));
  a.delta.assign(num_states * num_moves * num_moves, kNoState);
  a.accepting.assign(num_states, false);
  return a;
}

SyncRelationAutomaton SyncRelationAutomaton::identity(std::size_t num_moves) {
  auto a = empty(1, num_moves);
  a.states[0] = "eq";
  a.accepting[0] = true;
  for (MoveId c = 0; c < num_moves; ++c) a.set(0, c, c, 0);
  return a;
}

void Game::check_well_formed() const {
  const std::size_t nm = actmap.num_moves();
  if (coloring.states.empty()) throw InputError("Moore machine has no states", "moore.states");
  if (coloring.initial >= coloring.size()) throw InputError("initial state out of range", "moore.initial");
  if (coloring.delta.size() != coloring.size() || coloring.output.size() != coloring.size()) {
    throw InputError("transition and output tables must cover every state", "moore");
  }
  for (StateId q = 0; q < coloring.size(); ++q) {
    if (coloring.delta[q].size() != nm) {
      throw InputError("transition function is not total", "moore.delta." + coloring.states[q]);
    }
    for (StateId t : coloring.delta[q]) {
      if (t >= coloring.size()) throw InputError("target out of range", "moore.delta." + coloring.states[q]);
    }
  }
  require_unique(coloring.states, "moore.states");
  if (indist.states.empty()) throw InputError("relation automaton has no states", "indist.states");
  if (indist.num_moves != nm) throw InputError("move alphabet mismatch", "indist");
  if (indist.initial >= indist.size()) throw InputError("initial state out of range", "indist.initial");
  if (indist.delta.size() != indist.size() * nm * nm || indist.accepting.size() != indist.size()) {
    throw InputError("table sizes inconsistent", "indist");
  }
  for (StateId t : indist.delta) {
    if (t != kNoState && t >= indist.size()) throw InputError("target out of range", "indist.delta");
  }
  require_unique(indist.states, "indist.states");
}

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Reach: return "reach";
    case ObjectiveKind::Safe: return "safe";
    case ObjectiveKind::Buchi: return "buchi";
    case ObjectiveKind::CoBuchi: return "cobuchi";
  }
  return "?";
}

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "reach") return ObjectiveKind::Reach;
  if (name == "safe") return ObjectiveKind::Safe;
  if (name == "buchi") return ObjectiveKind::Buchi;
  if (name == "cobuchi") return ObjectiveKind::CoBuchi;
  throw InputError("unknown objective '" + name + "'", "objective");
}

Color color_of(const Game& game, std::span<const MoveId> history) {
  for (MoveId c : history) {
    if (c >= game.actmap.num_moves()) throw InputError("unknown move id " + std::to_string(c));
  }
  return game.coloring.output[game.coloring.run(history)];
}

std::vector<Color> cumulative_coloring(const Game& game, std::span<const MoveId> history) {
  std::vector<Color> out;
  out.reserve(history.size());
  StateId q = game.coloring.initial;
  for (MoveId c : history) {
    if (c >= game.actmap.num_moves()) throw InputError("unknown move id " + std::to_string(c));
    q = game.coloring.delta[q][c];
    out.push_back(game.coloring.output[q]);
  }
  return out;
}

bool is_target_absorbing(const MooreMachine& machine) {
  for (StateId q = 0; q < machine.size(); ++q) {
    if (machine.output[q] != 1) continue;
    for (StateId t : machine.delta[q]) {
      if (machine.output[t] != 1) return false;
    }
  }
  return true;
}

Game make_target_absorbing(const Game& game) {
  if (is_target_absorbing(game.coloring)) return game;
  const MooreMachine& m = game.coloring;
  // Latched copies of all states behave identically; they collapse into one sink.
  std::string sink_name = "latched";
  while (std::find(m.states.begin(), m.states.end(), sink_name) != m.states.end()) sink_name += "'";

  MooreMachine latched;
  latched.states = m.states;
  latched.output = m.output;
  latched.initial = m.initial;
  const StateId sink = m.size();
  latched.states.push_back(sink_name);
  latched.output.push_back(1);
  for (StateId q = 0; q < m.size(); ++q) {
    if (m.output[q] == 1) {
      latched.delta.emplace_back(game.actmap.num_moves(), sink);
    } else {
      latched.delta.push_back(m.delta[q]);
    }
  }
  latched.delta.emplace_back(game.actmap.num_moves(), sink);

  Game out = game;
  out.coloring = latched.trimmed();
  return out;
}

std::uint64_t encode_history(std::span<const MoveId> history, std::size_t num_moves) {
  std::uint64_t code = 0;
  for (MoveId c : history) code = code * num_moves + c;
  return code;
}

History decode_history(std::uint64_t code, std::size_t length, std::size_t num_moves) {
  History h(length);
  for (std::size_t i = length; i-- > 0;) {
    h[i] = static_cast<MoveId>(code % num_moves);
    code /= num_moves;
  }
  return h;
}

}  // namespace rig
