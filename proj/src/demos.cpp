#include "rig/demos.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "rig/errors.hpp"

namespace rig {

SyncRelationAutomaton observation_relation(const ActMap& actmap, const MooreMachine& machine,
                                           const std::vector<std::string>& observation) {
  const std::size_t nm = actmap.num_moves();
  using Key = std::pair<StateId, StateId>;
  std::map<Key, StateId> index;
  std::vector<Key> pairs;
  std::deque<Key> queue;
  std::vector<std::tuple<StateId, MoveId, MoveId, Key>> edges;
  auto intern = [&](const Key& k) {
    auto [it, inserted] = index.emplace(k, pairs.size());
    if (inserted) {
      pairs.push_back(k);
      queue.push_back(k);
    }
    return it->second;
  };
  intern(Key{machine.initial, machine.initial});
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    StateId id = index.at(k);
    for (MoveId c = 0; c < nm; ++c)
      for (MoveId d = 0; d < nm; ++d) {
        if (actmap.act(c) != actmap.act(d)) continue;
        StateId l = machine.delta[k.first][c], r = machine.delta[k.second][d];
        if (observation[l] != observation[r]) continue;
        intern(Key{l, r});
        edges.emplace_back(id, c, d, Key{l, r});
      }
  }
  auto rel = SyncRelationAutomaton::empty(pairs.size(), nm);
  for (StateId s = 0; s < pairs.size(); ++s) {
    rel.states[s] = machine.states[pairs[s].first] + "~" + machine.states[pairs[s].second];
    rel.accepting[s] = true;
  }
  for (const auto& [s, c, d, k] : edges) rel.set(s, c, d, index.at(k));
  return rel;
}

namespace {

ActMap pennies_alphabet() { return ActMap({"a", "b"}, {"a1", "a2", "b1", "b2"}, {0, 0, 1, 1}); }

// Moves: a1 = 0, a2 = 1, b1 = 2, b2 = 3. States: start, coin 1 hidden, coin 2 hidden, won.
const std::vector<std::vector<StateId>> kPenniesDelta{
    {1, 2, 1, 2},
    {3, 3, 0, 0},
    {0, 0, 3, 3},
    {3, 3, 3, 3},
};

}  // namespace

Game matching_pennies_game() {
  Game g;
  g.actmap = pennies_alphabet();
  g.coloring.states = {"q0", "q1", "q2", "q3"};
  g.coloring.initial = 0;
  g.coloring.delta = kPenniesDelta;
  g.coloring.output = {0, 0, 0, 1};
  g.indist = observation_relation(g.actmap, g.coloring, {"0", "0", "0", "1"});
  return g;
}

Morphism matching_pennies_morphism() {
  Morphism m;
  m.states = {"p0", "p1", "p2", "pwin"};
  m.initial = 0;
  m.delta = kPenniesDelta;
  return m;
}

ReifGame matching_pennies_reif() {
  ReifGame rg;
  rg.actmap = pennies_alphabet();
  rg.locations = {"start", "coin1", "coin2", "won"};
  rg.initial = 0;
  rg.transition = kPenniesDelta;
  rg.observation = {"none", "none", "none", "win"};
  rg.winning = {false, false, false, true};
  return rg;
}

Game env_loss_game() {
  Game g;
  g.actmap = ActMap({"a"}, {"lose", "win"}, {0, 0});
  g.coloring.states = {"s0", "lost", "goal"};
  g.coloring.initial = 0;
  g.coloring.delta = {{1, 2}, {1, 1}, {2, 2}};
  g.coloring.output = {0, 0, 1};
  g.indist = SyncRelationAutomaton::identity(2);
  return g;
}

Morphism env_loss_morphism() {
  Morphism m;
  m.states = {"p0", "plost", "pgoal"};
  m.initial = 0;
  m.delta = {{1, 2}, {1, 1}, {2, 2}};
  return m;
}

namespace {

TreeNode inner(std::string id, NodeKind kind, const std::string& param, std::string left, std::string right) {
  return TreeNode{std::move(id),
                  kind,
                  0,
                  {TreeEdge{AffineExpr::parse(param), std::move(left)},
                   TreeEdge{AffineExpr::parse("1-" + param), std::move(right)}}};
}

TreeNode leaf(Color c) { return TreeNode{"c" + std::to_string(c), NodeKind::Leaf, c, {}}; }

void add_leaves(ParamTreeGame& g) {
  for (Color c = 1; c <= 6; ++c) g.nodes.push_back(leaf(c));
}

}  // namespace

ParamTreeGame fig3_g() {
  using K = NodeKind;
  ParamTreeGame g;
  g.name = "G";
  g.root = "q0";
  g.player_params = {"x1", "x2", "x3"};
  g.env_params = {"t1", "t2", "t3"};
  g.nodes = {
      inner("q0", K::Environment, "t1", "q1", "q1'"),
      inner("q1", K::Player, "x1", "c1", "q2"),
      inner("q1'", K::Player, "x1", "c2", "q2'"),
      inner("q2", K::Environment, "t2", "q3", "q4"),
      inner("q2'", K::Environment, "t3", "q3'", "q4'"),
      inner("q3", K::Player, "x2", "c3", "c4"),
      inner("q4", K::Player, "x3", "c5", "c6"),
      inner("q3'", K::Player, "x3", "c3", "c4"),
      inner("q4'", K::Player, "x2", "c5", "c6"),
  };
  add_leaves(g);
  g.groups = {{"q1", "q1'"}, {"q2", "q2'"}, {"q3", "q4'"}, {"q4", "q3'"}};
  return g;
}

ParamTreeGame fig3_h() {
  using K = NodeKind;
  ParamTreeGame h;
  h.name = "H";
  h.root = "p0";
  h.player_params = {"y1", "y2"};
  h.env_params = {"z1", "z2", "z3"};
  h.nodes = {
      inner("p0", K::Environment, "z1", "p1", "p1'"),
      inner("p1", K::Player, "y1", "c1", "p2"),
      inner("p1'", K::Player, "y1", "c2", "p2'"),
      inner("p2", K::Environment, "z2", "p3", "p4"),
      inner("p2'", K::Environment, "z3", "p3", "p4"),
      inner("p3", K::Player, "y2", "c3", "c4"),
      inner("p4", K::Player, "y2", "c5", "c6"),
  };
  add_leaves(h);
  h.groups = {{"p1", "p1'"}, {"p2", "p2'"}, {"p3", "p4"}};
  return h;
}

namespace {

ActMap tree_alphabet() { return ActMap({"l", "r"}, {"l1", "l2", "r1", "r2"}, {0, 0, 1, 1}); }

/// Successor table of a tree under the tree_game move conventions.
MooreMachine tree_machine(const ParamTreeGame& tree) {
  tree.check();
  const ActMap actmap = tree_alphabet();
  std::map<std::string, StateId> index;
  MooreMachine mm;
  for (const auto& n : tree.nodes) {
    index.emplace(n.id, mm.states.size());
    mm.states.push_back(n.id);
    mm.output.push_back(n.kind == NodeKind::Leaf ? n.color : 0);
  }
  mm.initial = index.at(tree.root);
  for (StateId q = 0; q < tree.nodes.size(); ++q) {
    const TreeNode& n = tree.nodes[q];
    std::vector<StateId> row(actmap.num_moves(), q);
    if (n.kind != NodeKind::Leaf) {
      if (n.edges.size() > 2) throw InputError("tree games allow at most two edges per node", "nodes." + n.id);
      for (MoveId c = 0; c < actmap.num_moves(); ++c) {
        // Player nodes branch on the action, environment nodes on the move index.
        std::size_t branch = n.kind == NodeKind::Player ? actmap.act(c) : c % 2;
        row[c] = index.at(n.edges[std::min(branch, n.edges.size() - 1)].to);
      }
    }
    mm.delta.push_back(row);
  }
  return mm;
}

}  // namespace

Game tree_game(const ParamTreeGame& tree) {
  Game g;
  g.actmap = tree_alphabet();
  g.coloring = tree_machine(tree);
  std::map<std::string, std::string> label;
  for (std::size_t k = 0; k < tree.groups.size(); ++k)
    for (const auto& id : tree.groups[k]) label[id] = "group" + std::to_string(k);
  std::vector<std::string> observation;
  for (const auto& n : tree.nodes) {
    if (n.kind == NodeKind::Leaf) {
      observation.push_back("color" + std::to_string(n.color));
    } else {
      auto it = label.find(n.id);
      observation.push_back(it == label.end() ? "node " + n.id : it->second);
    }
  }
  g.indist = observation_relation(g.actmap, g.coloring, observation);
  return g;
}

Morphism tree_morphism(const ParamTreeGame& abstract) {
  MooreMachine mm = tree_machine(abstract).trimmed();
  Morphism m;
  m.states = mm.states;
  m.initial = mm.initial;
  m.delta = mm.delta;
  return m;
}

std::string check_tree_correspondence(const ParamTreeGame& concrete, const ParamTreeGame& abstract) {
  concrete.check();
  abstract.check();
  std::set<std::pair<std::string, std::string>> seen;
  std::function<std::string(const std::string&, const std::string&)> walk = [&](const std::string& gid,
                                                                                const std::string& hid) {
    if (!seen.emplace(gid, hid).second) return std::string();
    const TreeNode& g = concrete.node(gid);
    const TreeNode& h = abstract.node(hid);
    if (g.kind != h.kind) return "node " + gid + " and its image " + hid + " differ in kind";
    if (g.kind == NodeKind::Leaf) {
      return g.color == h.color ? std::string() : "leaf " + gid + " and its image " + hid + " differ in color";
    }
    if (g.edges.size() != h.edges.size()) return "node " + gid + " and its image " + hid + " differ in arity";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      std::string err = walk(g.edges[i].to, h.edges[i].to);
      if (!err.empty()) return err;
    }
    return std::string();
  };
  return walk(concrete.root, abstract.root);
}

}  // namespace rig
