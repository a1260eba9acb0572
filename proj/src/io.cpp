#include "rig/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rig/errors.hpp"

namespace rig {

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what(), source);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

namespace {

bool flat(const Json& j) {
  if (!j.is_array()) return j.is_primitive();
  for (const auto& e : j)
    if (!flat(e)) return false;
  return true;
}

bool all_primitive(const Json& j) {
  for (const auto& e : j)
    if (!e.is_primitive()) return false;
  return true;
}

/// Indented layout, except that arrays of scalars and table rows (flat arrays inside arrays)
/// stay on one line.
void dump_into(const Json& j, int depth, std::string& out, bool row = false) {
  const std::string pad(2 * (depth + 1), ' ');
  if (j.is_array() && !j.empty() && !(all_primitive(j) || (row && flat(j)))) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      dump_into(j[i], depth + 1, out, true);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(2 * depth, ' ') + "]";
  } else if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      dump_into(it.value(), depth + 1, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(2 * depth, ' ') + "}";
  } else if (j.is_array()) {
    std::string inner;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) inner += ", ";
      dump_into(j[i], depth + 1, inner);
    }
    out += "[" + inner + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  return out + "\n";
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& need(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError("expected an object", path);
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing field", join(path, key));
  return *it;
}

std::string need_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw InputError("expected a string", path);
  return v.get<std::string>();
}

const Json& need_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw InputError("expected an array", path);
  return v;
}

const Json& need_object(const Json& v, const std::string& path) {
  if (!v.is_object()) throw InputError("expected an object", path);
  return v;
}

std::vector<std::string> string_list(const Json& v, const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& e : need_array(v, path)) out.push_back(need_string(e, path + "[" + std::to_string(i++) + "]"));
  return out;
}

void check_format(const Json& j, const char* expected) {
  std::string got = need_string(need(j, "format", ""), "format");
  if (got != expected) throw InputError("unsupported format '" + got + "', expected '" + expected + "'", "format");
}

/// Name → index lookup for one namespace of symbols.
class Names {
 public:
  Names(const std::vector<std::string>& names, std::string what) : what_(std::move(what)) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!index_.emplace(names[i], i).second) throw InputError("duplicate " + what_ + " '" + names[i] + "'");
    }
  }
  std::size_t at(const Json& v, const std::string& path) const {
    std::string name = need_string(v, path);
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown " + what_ + " '" + name + "'", path);
    return it->second;
  }
  std::size_t size() const { return index_.size(); }

 private:
  std::map<std::string, std::size_t> index_;
  std::string what_;
};

std::vector<std::string> unique_names(const Json& v, const std::string& path, const std::string& what) {
  auto names = string_list(v, path);
  if (names.empty()) throw InputError("no " + what + "s", path);
  try {
    Names check(names, what);
  } catch (const InputError& e) {
    throw InputError(e.what(), path);
  }
  return names;
}

ActMap actmap_from_json(const Json& j) {
  auto actions = unique_names(need(j, "actions", ""), "actions", "action");
  auto moves = unique_names(need(j, "moves", ""), "moves", "move");
  Names action_names(actions, "action");
  const Json& act = need_object(need(j, "act", ""), "act");
  std::vector<ActionId> table;
  for (const auto& move : moves) table.push_back(action_names.at(need(act, move, "act"), "act." + move));
  for (auto it = act.begin(); it != act.end(); ++it) {
    if (std::find(moves.begin(), moves.end(), it.key()) == moves.end()) {
      throw InputError("unknown move '" + it.key() + "'", "act");
    }
  }
  try {
    return ActMap(actions, moves, table);
  } catch (const InputError& e) {
    throw InputError(e.what(), "act");
  }
}

void actmap_into(Json& j, const ActMap& actmap) {
  j["actions"] = actmap.action_names();
  j["moves"] = actmap.move_names();
  Json act = Json::object();
  for (MoveId c = 0; c < actmap.num_moves(); ++c) act[actmap.move_name(c)] = actmap.action_name(actmap.act(c));
  j["act"] = act;
}

/// Reads [[from, move, to], ...] into a total table.
std::vector<std::vector<StateId>> total_table(const Json& v, const std::string& path, const Names& states,
                                              const std::vector<std::string>& state_names, const Names& moves,
                                              const std::vector<std::string>& move_names) {
  const std::size_t num_moves = move_names.size();
  std::vector<std::vector<StateId>> table(states.size(), std::vector<StateId>(num_moves, kNoState));
  std::size_t i = 0;
  for (const auto& row : need_array(v, path)) {
    const std::string here = path + "[" + std::to_string(i++) + "]";
    if (!row.is_array() || row.size() != 3) throw InputError("expected [state, move, state]", here);
    StateId from = states.at(row[0], here + "[0]");
    MoveId c = moves.at(row[1], here + "[1]");
    StateId to = states.at(row[2], here + "[2]");
    if (table[from][c] != kNoState) throw InputError("duplicate transition", here);
    table[from][c] = to;
  }
  for (StateId q = 0; q < table.size(); ++q)
    for (MoveId c = 0; c < num_moves; ++c)
      if (table[q][c] == kNoState) throw InputError("no transition from '" + state_names[q] + "' on move '" + move_names[c] + "'", path);
  return table;
}

Json table_to_json(const std::vector<std::vector<StateId>>& table, const std::vector<std::string>& states,
                   const ActMap& actmap) {
  Json out = Json::array();
  for (StateId q = 0; q < table.size(); ++q)
    for (MoveId c = 0; c < table[q].size(); ++c)
      out.push_back(Json::array({states[q], actmap.move_name(c), states[table[q][c]]}));
  return out;
}

Rational need_rational(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  try {
    return parse_rational(need_string(v, path));
  } catch (const InputError& e) {
    throw InputError(e.what(), path);
  }
}

Role parse_role(const std::string& s, const std::string& path) {
  if (s == "player") return Role::Player;
  if (s == "environment") return Role::Environment;
  throw InputError("role must be 'player' or 'environment'", path);
}

}  // namespace

Json game_to_json(const Game& game) {
  Json j;
  j["format"] = format::kGame;
  actmap_into(j, game.actmap);
  const auto& mm = game.coloring;
  Json output = Json::object();
  for (StateId q = 0; q < mm.size(); ++q) output[mm.states[q]] = mm.output[q];
  j["moore"] = Json{{"states", mm.states},
                    {"initial", mm.states.at(mm.initial)},
                    {"delta", table_to_json(mm.delta, mm.states, game.actmap)},
                    {"output", output}};
  const auto& r = game.indist;
  Json delta = Json::array();
  Json accepting = Json::array();
  for (StateId s = 0; s < r.size(); ++s) {
    if (r.accepting[s]) accepting.push_back(r.states[s]);
    for (MoveId c = 0; c < r.num_moves; ++c)
      for (MoveId d = 0; d < r.num_moves; ++d) {
        StateId t = r.step(s, c, d);
        if (t == kNoState) continue;
        delta.push_back(Json::array(
            {r.states[s], Json::array({game.actmap.move_name(c), game.actmap.move_name(d)}), r.states[t]}));
      }
  }
  j["indist"] = Json{{"states", r.states}, {"initial", r.states.at(r.initial)}, {"delta", delta}, {"accepting", accepting}};
  return j;
}

Game game_from_json(const Json& j) {
  need_object(j, "");
  check_format(j, format::kGame);
  Game g;
  g.actmap = actmap_from_json(j);
  const std::size_t nm = g.actmap.num_moves();
  Names moves(g.actmap.move_names(), "move");

  const Json& moore = need_object(need(j, "moore", ""), "moore");
  g.coloring.states = unique_names(need(moore, "states", "moore"), "moore.states", "state");
  Names qs(g.coloring.states, "state");
  g.coloring.initial = qs.at(need(moore, "initial", "moore"), "moore.initial");
  g.coloring.delta = total_table(need(moore, "delta", "moore"), "moore.delta", qs, g.coloring.states, moves, g.actmap.move_names());
  const Json& output = need_object(need(moore, "output", "moore"), "moore.output");
  for (const auto& q : g.coloring.states) {
    const Json& v = need(output, q, "moore.output");
    if (!v.is_number_integer()) throw InputError("expected an integer color", "moore.output." + q);
    g.coloring.output.push_back(v.get<Color>());
  }
  for (auto it = output.begin(); it != output.end(); ++it) qs.at(it.key(), "moore.output");

  const Json& indist = need_object(need(j, "indist", ""), "indist");
  auto rstates = unique_names(need(indist, "states", "indist"), "indist.states", "state");
  Names rs(rstates, "state");
  g.indist = SyncRelationAutomaton::empty(rstates.size(), nm);
  g.indist.states = rstates;
  g.indist.initial = rs.at(need(indist, "initial", "indist"), "indist.initial");
  std::size_t i = 0;
  for (const auto& row : need_array(need(indist, "delta", "indist"), "indist.delta")) {
    const std::string here = "indist.delta[" + std::to_string(i++) + "]";
    if (!row.is_array() || row.size() != 3 || !row[1].is_array() || row[1].size() != 2) {
      throw InputError("expected [state, [move, move], state]", here);
    }
    StateId s = rs.at(row[0], here + "[0]");
    MoveId c = moves.at(row[1][0], here + "[1][0]");
    MoveId d = moves.at(row[1][1], here + "[1][1]");
    StateId t = rs.at(row[2], here + "[2]");
    if (g.indist.step(s, c, d) != kNoState) throw InputError("duplicate transition", here);
    g.indist.set(s, c, d, t);
  }
  i = 0;
  for (const auto& a : need_array(need(indist, "accepting", "indist"), "indist.accepting")) {
    g.indist.accepting[rs.at(a, "indist.accepting[" + std::to_string(i++) + "]")] = true;
  }
  g.check_well_formed();
  return g;
}

Json morphism_to_json(const Morphism& m, const ActMap& actmap) {
  return Json{{"format", format::kMorphism},
              {"abstract_states", m.states},
              {"initial", m.states.at(m.initial)},
              {"delta_p", table_to_json(m.delta, m.states, actmap)}};
}

Morphism morphism_from_json(const Json& j, const ActMap& actmap) {
  need_object(j, "");
  check_format(j, format::kMorphism);
  Morphism m;
  m.states = unique_names(need(j, "abstract_states", ""), "abstract_states", "abstract state");
  Names ps(m.states, "abstract state");
  Names moves(actmap.move_names(), "move");
  m.initial = ps.at(need(j, "initial", ""), "initial");
  m.delta = total_table(need(j, "delta_p", ""), "delta_p", ps, m.states, moves, actmap.move_names());
  m.check_well_formed(actmap.num_moves());
  return m;
}

Json strategy_to_json(const FiniteMemoryStrategy& s, const ActMap& actmap) {
  Json j;
  j["format"] = format::kStrategy;
  j["role"] = to_string(s.role);
  j["memory"] = s.memory;
  j["initial"] = s.memory.at(s.initial);
  j["update"] = table_to_json(s.update, s.memory, actmap);
  Json emit = Json::object();
  for (StateId m = 0; m < s.size(); ++m) {
    Json here = Json::object();
    for (ActionId a = 0; a < actmap.num_actions(); ++a) {
      if (s.role == Role::Player) {
        if (s.player_emit[m][a] != 0) here[actmap.action_name(a)] = to_string(s.player_emit[m][a]);
      } else {
        Json moves = Json::object();
        for (MoveId c = 0; c < actmap.num_moves(); ++c)
          if (s.env_emit[m][a][c] != 0) moves[actmap.move_name(c)] = to_string(s.env_emit[m][a][c]);
        here[actmap.action_name(a)] = moves;
      }
    }
    emit[s.memory[m]] = here;
  }
  j["emit"] = emit;
  return j;
}

FiniteMemoryStrategy strategy_from_json(const Json& j, const ActMap& actmap) {
  need_object(j, "");
  check_format(j, format::kStrategy);
  FiniteMemoryStrategy s;
  s.role = parse_role(need_string(need(j, "role", ""), "role"), "role");
  s.memory = unique_names(need(j, "memory", ""), "memory", "memory state");
  Names ms(s.memory, "memory state");
  Names actions(actmap.action_names(), "action");
  Names moves(actmap.move_names(), "move");
  const std::size_t na = actmap.num_actions(), nm = actmap.num_moves();
  s.initial = ms.at(need(j, "initial", ""), "initial");
  s.update = total_table(need(j, "update", ""), "update", ms, s.memory, moves, actmap.move_names());
  const Json& emit = need_object(need(j, "emit", ""), "emit");
  for (auto it = emit.begin(); it != emit.end(); ++it) ms.at(it.key(), "emit");
  if (s.role == Role::Player) {
    s.player_emit.assign(s.size(), std::vector<Rational>(na, 0));
  } else {
    s.env_emit.assign(s.size(), std::vector<std::vector<Rational>>(na, std::vector<Rational>(nm, 0)));
  }
  for (StateId m = 0; m < s.size(); ++m) {
    const std::string path = "emit." + s.memory[m];
    const Json& here = need_object(need(emit, s.memory[m], "emit"), path);
    for (auto it = here.begin(); it != here.end(); ++it) {
      ActionId a = actions.at(it.key(), path);
      const std::string apath = path + "." + it.key();
      if (s.role == Role::Player) {
        s.player_emit[m][a] = need_rational(it.value(), apath);
        continue;
      }
      const Json& dist = need_object(it.value(), apath);
      for (auto mv = dist.begin(); mv != dist.end(); ++mv) {
        s.env_emit[m][a][moves.at(mv.key(), apath)] = need_rational(mv.value(), apath + "." + mv.key());
      }
    }
  }
  s.check(actmap);
  return s;
}

Json reif_to_json(const ReifGame& rg) {
  Json j;
  j["format"] = format::kReif;
  actmap_into(j, rg.actmap);
  j["locations"] = rg.locations;
  j["initial"] = rg.locations.at(rg.initial);
  j["transition"] = table_to_json(rg.transition, rg.locations, rg.actmap);
  Json obs = Json::object();
  Json win = Json::array();
  for (StateId l = 0; l < rg.locations.size(); ++l) {
    obs[rg.locations[l]] = rg.observation[l];
    if (rg.winning[l]) win.push_back(rg.locations[l]);
  }
  j["observation"] = obs;
  j["winning"] = win;
  return j;
}

ReifGame reif_from_json(const Json& j) {
  need_object(j, "");
  check_format(j, format::kReif);
  ReifGame rg;
  rg.actmap = actmap_from_json(j);
  rg.locations = unique_names(need(j, "locations", ""), "locations", "location");
  Names ls(rg.locations, "location");
  Names moves(rg.actmap.move_names(), "move");
  rg.initial = ls.at(need(j, "initial", ""), "initial");
  rg.transition = total_table(need(j, "transition", ""), "transition", ls, rg.locations, moves, rg.actmap.move_names());
  const Json& obs = need_object(need(j, "observation", ""), "observation");
  for (const auto& l : rg.locations) rg.observation.push_back(need_string(need(obs, l, "observation"), "observation." + l));
  rg.winning.assign(rg.locations.size(), false);
  std::size_t i = 0;
  for (const auto& w : need_array(need(j, "winning", ""), "winning")) {
    rg.winning[ls.at(w, "winning[" + std::to_string(i++) + "]")] = true;
  }
  rg.check_well_formed();
  return rg;
}

namespace {

std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Player: return "player";
    case NodeKind::Environment: return "environment";
    case NodeKind::Leaf: return "leaf";
  }
  return "?";
}

}  // namespace

Json paramtree_to_json(const ParamTreeGame& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    Json node{{"id", n.id}, {"kind", kind_name(n.kind)}};
    if (n.kind == NodeKind::Leaf) {
      node["color"] = n.color;
    } else {
      Json edges = Json::array();
      for (const auto& e : n.edges) edges.push_back(Json{{"prob", e.prob.to_string()}, {"to", e.to}});
      node["edges"] = edges;
    }
    nodes.push_back(node);
  }
  return Json{{"format", format::kParamTree},
              {"name", g.name},
              {"root", g.root},
              {"player_params", g.player_params},
              {"env_params", g.env_params},
              {"groups", g.groups},
              {"nodes", nodes}};
}

ParamTreeGame paramtree_from_json(const Json& j) {
  need_object(j, "");
  check_format(j, format::kParamTree);
  ParamTreeGame g;
  g.name = need_string(need(j, "name", ""), "name");
  g.root = need_string(need(j, "root", ""), "root");
  g.player_params = string_list(need(j, "player_params", ""), "player_params");
  g.env_params = string_list(need(j, "env_params", ""), "env_params");
  std::size_t i = 0;
  for (const auto& grp : need_array(need(j, "groups", ""), "groups")) {
    g.groups.push_back(string_list(grp, "groups[" + std::to_string(i++) + "]"));
    if (g.groups.back().empty()) throw InputError("empty group", "groups");
  }
  i = 0;
  for (const auto& n : need_array(need(j, "nodes", ""), "nodes")) {
    const std::string path = "nodes[" + std::to_string(i++) + "]";
    TreeNode node;
    node.id = need_string(need(n, "id", path), path + ".id");
    std::string kind = need_string(need(n, "kind", path), path + ".kind");
    if (kind == "player") {
      node.kind = NodeKind::Player;
    } else if (kind == "environment") {
      node.kind = NodeKind::Environment;
    } else if (kind == "leaf") {
      node.kind = NodeKind::Leaf;
    } else {
      throw InputError("kind must be player, environment or leaf", path + ".kind");
    }
    if (node.kind == NodeKind::Leaf) {
      const Json& c = need(n, "color", path);
      if (!c.is_number_integer()) throw InputError("expected an integer color", path + ".color");
      node.color = c.get<Color>();
    } else {
      std::size_t k = 0;
      for (const auto& e : need_array(need(n, "edges", path), path + ".edges")) {
        const std::string epath = path + ".edges[" + std::to_string(k++) + "]";
        TreeEdge edge;
        try {
          edge.prob = AffineExpr::parse(need_string(need(e, "prob", epath), epath + ".prob"));
        } catch (const InputError& err) {
          if (!err.path().empty()) throw;
          throw InputError(err.what(), epath + ".prob");
        }
        edge.to = need_string(need(e, "to", epath), epath + ".to");
        node.edges.push_back(std::move(edge));
      }
    }
    g.nodes.push_back(std::move(node));
  }
  g.check();
  return g;
}

Json history_to_json(const History& h, const ActMap& actmap) { return actmap.history_names(h); }

Json verdict_to_json(const Verdict& v, const ActMap& actmap) {
  Json j{{"check", v.check}, {"result", v.passed ? "pass" : "fail"}};
  if (v.witness) {
    j["witness"] = Json{{"left", history_to_json(v.witness->left, actmap)},
                        {"right", history_to_json(v.witness->right, actmap)}};
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

Json validation_to_json(const ValidationReport& report, const ActMap& actmap) {
  Json verdicts = Json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_to_json(v, actmap));
  Json j{{"ok", report.ok()}, {"verdicts", verdicts}};
  if (report.cross_check_depth > 0) {
    j["cross_check"] = Json{{"depth", report.cross_check_depth}, {"disagreements", report.cross_check_disagreements}};
  }
  return j;
}

Json fixpoint_to_json(const Arena& arena, const FixpointResult& result) {
  Json states = Json::array();
  Json pairs = Json::array();
  Json ranks = Json::object();
  for (std::size_t e = 0; e < arena.universe_size(); ++e) {
    if (!result.y_star.test(e)) continue;
    if (arena.is_state(e)) {
      states.push_back(arena.state_names()[e]);
    } else {
      pairs.push_back(Json::array({arena.state_names()[arena.state_of(e)], arena.action_names()[arena.action_of(e)]}));
    }
    ranks[arena.element_name(e)] = result.ranks[e];
  }
  Json action_sets = Json::object();
  for (StateId p = 0; p < arena.num_states(); ++p) {
    if (!result.y_star.test(p)) continue;
    Json acts = Json::array();
    for (ActionId a : result.action_sets[p]) acts.push_back(arena.action_names()[a]);
    action_sets[arena.state_names()[p]] = acts;
  }
  return Json{{"objective", to_string(result.objective)},
              {"winning", result.winning},
              {"initial", arena.state_names()[arena.initial()]},
              {"universe_size", arena.universe_size()},
              {"y_star", Json{{"states", states}, {"pairs", pairs}}},
              {"ranks", ranks},
              {"max_rank", result.max_rank()},
              {"action_sets", action_sets},
              {"iterations", Json{{"outer", result.outer_iterations}, {"inner", result.inner_iterations}}}};
}

}  // namespace rig
