#pragma once

// Reference computations for the tests. They share no code with the library beyond the data
// types: every set, product and chain below is rebuilt from the raw game.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "rig/game.hpp"
#include "rig/morphism.hpp"
#include "rig/reif.hpp"
#include "rig/solver.hpp"

namespace rig::testing::oracle {

/// Thrown when an exhaustive enumeration would exceed its budget; generators skip the instance.
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classical attractor on the coloring machine of a perfect-information game: the player picks
/// an action, the environment any move of that action. Indexed by Moore state.
inline std::vector<bool> attractor(const Game& g) {
  const auto& mm = g.coloring;
  const auto& am = g.actmap;
  std::vector<bool> win(mm.size());
  for (StateId q = 0; q < mm.size(); ++q) win[q] = mm.output[q] == 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (StateId q = 0; q < mm.size(); ++q) {
      if (win[q]) continue;
      for (ActionId a = 0; a < am.num_actions() && !win[q]; ++a) {
        bool all = true;
        for (MoveId c = 0; c < am.num_moves(); ++c)
          if (am.act(c) == a && !win[mm.delta[q][c]]) all = false;
        if (all) win[q] = grew = true;
      }
    }
  }
  return win;
}

/// An abstract game rebuilt from scratch: states, total move transitions, a class id per state
/// (the equivalence generated by images of related histories) and target flags.
struct Model {
  std::size_t size = 0;
  StateId initial = 0;
  std::vector<std::vector<StateId>> delta;
  std::vector<std::size_t> cls;
  std::size_t num_classes = 0;
  std::vector<bool> target;
  std::vector<ActionId> act;
  std::size_t num_actions = 0;
};

namespace detail {

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace detail

/// With `latch`, abstract states are (p, no color 1 seen yet) and everything after a color-1
/// step collapses into one absorbing target. Without it, states are the reachable p and the
/// targets are the p met together with a color-1 Moore state.
inline Model build_model(const Game& g, const Morphism& m, bool latch) {
  const auto& mm = g.coloring;
  const std::size_t nm = g.actmap.num_moves();
  // Concrete view: (p, q, seen).
  using Node = std::tuple<StateId, StateId, bool>;
  std::map<Node, std::size_t> node_index;
  std::vector<Node> nodes;
  auto add_node = [&](const Node& n) {
    auto [it, fresh] = node_index.emplace(n, nodes.size());
    if (fresh) nodes.push_back(n);
    return it->second;
  };
  add_node({m.initial, mm.initial, mm.output[mm.initial] == 1});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [p, q, seen] = nodes[i];
    for (MoveId c = 0; c < nm; ++c) {
      StateId q2 = mm.delta[q][c];
      add_node({m.delta[p][c], q2, seen || mm.output[q2] == 1});
    }
  }
  Model model;
  model.num_actions = g.actmap.num_actions();
  for (MoveId c = 0; c < nm; ++c) model.act.push_back(g.actmap.act(c));
  std::map<std::pair<StateId, bool>, StateId> id;
  auto key_of = [&](const Node& n) -> std::pair<StateId, bool> {
    auto [p, q, seen] = n;
    if (latch) return seen ? std::pair<StateId, bool>{0, true} : std::pair<StateId, bool>{p, false};
    return {p, false};
  };
  for (const auto& n : nodes) {
    auto k = key_of(n);
    if (!id.count(k)) {
      StateId x = id.size();
      id.emplace(k, x);
      model.target.push_back(latch ? k.second : false);
    }
    if (!latch && mm.output[std::get<1>(n)] == 1) model.target[id.at(k)] = true;
  }
  model.size = id.size();
  model.delta.assign(model.size, std::vector<StateId>(nm, 0));
  for (const auto& n : nodes) {
    StateId x = id.at(key_of(n));
    auto [p, q, seen] = n;
    for (MoveId c = 0; c < nm; ++c) {
      StateId q2 = mm.delta[q][c];
      Node next{m.delta[p][c], q2, seen || mm.output[q2] == 1};
      model.delta[x][c] = id.at(key_of(next));
    }
  }
  model.initial = id.at(key_of(nodes.front()));

  // Images of related histories: explore (∼-state, node, node).
  std::vector<std::size_t> parent(model.size);
  std::iota(parent.begin(), parent.end(), 0);
  using Triple = std::tuple<StateId, std::size_t, std::size_t>;
  std::set<Triple> seen_triples;
  std::vector<Triple> stack{{g.indist.initial, 0, 0}};
  seen_triples.insert(stack.front());
  while (!stack.empty()) {
    auto [s, a, b] = stack.back();
    stack.pop_back();
    if (g.indist.accepting[s]) {
      std::size_t ra = detail::find_root(parent, id.at(key_of(nodes[a])));
      std::size_t rb = detail::find_root(parent, id.at(key_of(nodes[b])));
      parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    auto [pa, qa, sa] = nodes[a];
    auto [pb, qb, sb] = nodes[b];
    for (MoveId c = 0; c < nm; ++c)
      for (MoveId d = 0; d < nm; ++d) {
        StateId t = g.indist.delta[(s * nm + c) * nm + d];
        if (t == kNoState) continue;
        std::size_t na = node_index.at({m.delta[pa][c], mm.delta[qa][c], sa || mm.output[mm.delta[qa][c]] == 1});
        std::size_t nb = node_index.at({m.delta[pb][d], mm.delta[qb][d], sb || mm.output[mm.delta[qb][d]] == 1});
        if (seen_triples.insert({t, na, nb}).second) stack.push_back({t, na, nb});
      }
  }
  std::map<std::size_t, std::size_t> class_id;
  for (StateId x = 0; x < model.size; ++x) {
    std::size_t r = detail::find_root(parent, x);
    auto [it, fresh] = class_id.emplace(r, class_id.size());
    model.cls.push_back(it->second);
  }
  model.num_classes = class_id.size();
  return model;
}

/// Bottom SCCs of a small graph through a reachability matrix; returns the states reachable
/// from `start` and, for each, whether it lies in a bottom SCC.
struct ChainShape {
  std::vector<bool> reachable;
  std::vector<bool> in_bottom;
  std::vector<std::vector<bool>> reach;
};

inline ChainShape chain_shape(const std::vector<std::vector<StateId>>& succ, StateId start) {
  const std::size_t n = succ.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (StateId x = 0; x < n; ++x) {
    r[x][x] = true;
    for (StateId y : succ[x]) r[x][y] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  ChainShape out{r[start], std::vector<bool>(n, false), r};
  for (StateId x = 0; x < n; ++x) {
    bool bottom = true;
    for (StateId y = 0; y < n; ++y)
      if (r[x][y] && !r[y][x]) bottom = false;
    out.in_bottom[x] = bottom;
  }
  return out;
}

/// Qualitative verdict of one Markov chain on the model: reachability with absorbing targets,
/// or Büchi (every reachable bottom SCC contains a target).
inline bool chain_wins(const Model& model, const std::vector<std::vector<StateId>>& succ) {
  ChainShape shape = chain_shape(succ, model.initial);
  for (StateId x = 0; x < model.size; ++x) {
    if (!shape.reachable[x] || !shape.in_bottom[x]) continue;
    bool has_target = false;
    for (StateId y = 0; y < model.size; ++y)
      if (shape.reach[x][y] && shape.reach[y][x] && model.target[y]) has_target = true;
    if (!has_target) return false;
  }
  return true;
}

/// Support patterns are bitmasks over actions, one per class.
using Pattern = std::vector<unsigned>;

struct ChainOracleResult {
  bool winning = false;
  std::optional<Pattern> witness;
  std::size_t patterns = 0;
  std::size_t chains = 0;
};

/// Does some support pattern (uniform over a nonempty action set, constant on classes) win
/// against every positional environment strategy? Patterns and adversaries are enumerated only
/// on the states they can actually reach. Throws TooLarge beyond `budget` chains.
inline ChainOracleResult exhaustive_chain_oracle(const Model& model, ObjectiveKind objective,
                                                 std::size_t budget = 2'000'000) {
  const bool reach = objective == ObjectiveKind::Reach;
  const std::size_t na = model.num_actions, nm = model.act.size();
  ChainOracleResult result;
  const unsigned full = (1u << na) - 1;
  Pattern pattern(model.num_classes, 0);
  // Targets are absorbing for reachability; the player's choice there does not matter.
  auto frozen = [&](StateId x) { return reach && model.target[x]; };

  auto moves_allowed = [&](unsigned mask) {
    std::vector<MoveId> out;
    for (MoveId c = 0; c < nm; ++c)
      if (mask >> model.act[c] & 1u) out.push_back(c);
    return out;
  };

  // Adversary enumeration for a complete pattern: choice[x * na + a] = move or none.
  std::function<bool(std::vector<std::size_t>&)> all_adversaries_lose;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  all_adversaries_lose = [&](std::vector<std::size_t>& choice) -> bool {
    // States reachable under the assigned choices; stop at the first unassigned slot.
    std::vector<bool> seen(model.size, false);
    std::vector<StateId> stack{model.initial};
    seen[model.initial] = true;
    std::optional<std::pair<StateId, ActionId>> open;
    while (!stack.empty() && !open) {
      StateId x = stack.back();
      stack.pop_back();
      if (frozen(x)) continue;
      unsigned mask = pattern[model.cls[x]];
      for (ActionId a = 0; a < na && !open; ++a) {
        if (!(mask >> a & 1u)) continue;
        std::size_t c = choice[x * na + a];
        if (c == kUnset) {
          open = {x, a};
          break;
        }
        StateId y = model.delta[x][c];
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    if (open) {
      auto [x, a] = *open;
      for (MoveId c = 0; c < nm; ++c) {
        if (model.act[c] != a) continue;
        choice[x * na + a] = c;
        bool ok = all_adversaries_lose(choice);
        choice[x * na + a] = kUnset;
        if (!ok) return false;
      }
      return true;
    }
    if (++result.chains > budget) throw TooLarge("chain budget exceeded");
    std::vector<std::vector<StateId>> succ(model.size);
    for (StateId x = 0; x < model.size; ++x) {
      if (!seen[x]) continue;
      if (frozen(x)) {
        succ[x] = {x};
        continue;
      }
      for (ActionId a = 0; a < na; ++a)
        if (pattern[model.cls[x]] >> a & 1u) succ[x].push_back(model.delta[x][choice[x * na + a]]);
    }
    return chain_wins(model, succ);
  };

  // Pattern enumeration over classes met by the reachable part.
  std::function<bool()> search = [&]() -> bool {
    std::vector<bool> seen(model.size, false);
    std::vector<StateId> stack{model.initial};
    seen[model.initial] = true;
    std::optional<std::size_t> open_class;
    while (!stack.empty() && !open_class) {
      StateId x = stack.back();
      stack.pop_back();
      if (frozen(x)) continue;
      unsigned mask = pattern[model.cls[x]];
      if (mask == 0) {
        open_class = model.cls[x];
        break;
      }
      for (MoveId c : moves_allowed(mask)) {
        StateId y = model.delta[x][c];
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    if (open_class) {
      for (unsigned mask = 1; mask <= full; ++mask) {
        pattern[*open_class] = mask;
        if (search()) return true;
      }
      pattern[*open_class] = 0;
      return false;
    }
    ++result.patterns;
    std::vector<std::size_t> choice(model.size * na, kUnset);
    if (all_adversaries_lose(choice)) {
      result.witness = pattern;
      return true;
    }
    return false;
  };
  result.winning = search();
  return result;
}

/// Does the partial pattern (0 = unassigned class) already let the environment spoil every
/// completion? That is the case when a trap is reachable with positive probability through
/// assigned non-target states. A trap is a set of non-target states in which, for every action
/// the player may play, some move stays inside; an unassigned state has to pass for all actions.
inline bool trap_reachable(const Model& model, const Pattern& pattern) {
  const std::size_t n = model.size, nm = model.act.size(), na = model.num_actions;
  const unsigned full = (1u << na) - 1;
  auto assigned = [&](StateId x) { return !model.target[x] && pattern[model.cls[x]] != 0; };
  auto mask_of = [&](StateId x) { return pattern[model.cls[x]] == 0 ? full : pattern[model.cls[x]]; };
  std::vector<bool> trap(n);
  for (StateId x = 0; x < n; ++x) trap[x] = !model.target[x];
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    for (StateId x = 0; x < n; ++x) {
      if (!trap[x]) continue;
      for (ActionId a = 0; a < na && trap[x]; ++a) {
        if (!(mask_of(x) >> a & 1u)) continue;
        bool stay = false;
        for (MoveId c = 0; c < nm; ++c)
          if (model.act[c] == a && trap[model.delta[x][c]]) stay = true;
        if (!stay) trap[x] = false, shrunk = true;
      }
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack{model.initial};
  seen[model.initial] = true;
  while (!stack.empty()) {
    StateId x = stack.back();
    stack.pop_back();
    if (trap[x]) return true;
    if (!assigned(x)) continue;
    for (MoveId c = 0; c < nm; ++c) {
      if (!(pattern[model.cls[x]] >> model.act[c] & 1u)) continue;
      StateId y = model.delta[x][c];
      if (!seen[y]) seen[y] = true, stack.push_back(y);
    }
  }
  return false;
}

struct PatternSearch {
  /// A pattern winning almost-sure reachability, if any.
  std::optional<Pattern> winning;
  /// Partial patterns (0 = unassigned) each of whose completions is spoiled by a trap.
  std::vector<Pattern> spoiled_families;
};

/// Branches on the support of the first reachable unassigned class; a branch stops as soon as
/// trap_reachable holds. A complete reachable assignment without a trap wins: the environment
/// then has no way to keep a positive probability away from the targets forever.
inline PatternSearch search_patterns(const Model& model, std::size_t budget = 1'000'000) {
  const std::size_t nm = model.act.size();
  const unsigned full = (1u << model.num_actions) - 1;
  PatternSearch out;
  Pattern pattern(model.num_classes, 0);
  std::size_t nodes = 0;
  std::function<bool()> search = [&]() -> bool {
    if (++nodes > budget) throw TooLarge("pattern search budget exceeded");
    if (trap_reachable(model, pattern)) {
      out.spoiled_families.push_back(pattern);
      return false;
    }
    std::vector<bool> seen(model.size, false);
    std::vector<StateId> stack{model.initial};
    seen[model.initial] = true;
    std::optional<std::size_t> open;
    while (!stack.empty() && !open) {
      StateId x = stack.back();
      stack.pop_back();
      if (model.target[x]) continue;
      unsigned mask = pattern[model.cls[x]];
      if (mask == 0) {
        open = model.cls[x];
        break;
      }
      for (MoveId c = 0; c < nm; ++c) {
        if (!(mask >> model.act[c] & 1u)) continue;
        StateId y = model.delta[x][c];
        if (!seen[y]) seen[y] = true, stack.push_back(y);
      }
    }
    if (!open) {
      out.winning = pattern;
      return true;
    }
    for (unsigned mask = 1; mask <= full; ++mask) {
      pattern[*open] = mask;
      if (search()) return true;
    }
    pattern[*open] = 0;
    return false;
  };
  search();
  return out;
}

/// Every complete support pattern on the classes the play can meet (classes never reached
/// stay 0), or nothing when there are more than `budget`.
inline std::optional<std::vector<Pattern>> reachable_patterns(const Model& model, std::size_t budget) {
  const std::size_t nm = model.act.size();
  const unsigned full = (1u << model.num_actions) - 1;
  std::vector<Pattern> out;
  Pattern pattern(model.num_classes, 0);
  bool over = false;
  std::function<void()> search = [&]() {
    if (over) return;
    std::vector<bool> seen(model.size, false);
    std::vector<StateId> stack{model.initial};
    seen[model.initial] = true;
    std::optional<std::size_t> open;
    while (!stack.empty() && !open) {
      StateId x = stack.back();
      stack.pop_back();
      if (model.target[x]) continue;
      unsigned mask = pattern[model.cls[x]];
      if (mask == 0) {
        open = model.cls[x];
        break;
      }
      for (MoveId c = 0; c < nm; ++c) {
        if (!(mask >> model.act[c] & 1u)) continue;
        StateId y = model.delta[x][c];
        if (!seen[y]) seen[y] = true, stack.push_back(y);
      }
    }
    if (!open) {
      if (out.size() == budget) over = true;
      else out.push_back(pattern);
      return;
    }
    for (unsigned mask = 1; mask <= full; ++mask) {
      pattern[*open] = mask;
      search();
    }
    pattern[*open] = 0;
  };
  search();
  if (over) return std::nullopt;
  return out;
}

/// Knowledge construction for a Reif game, written independently of the library: states are
/// (location, belief bitmask) from (l0, {l0}), winning locations are absorbing, and the class
/// of a state is its belief (what the player can base a decision on).
inline Model reif_knowledge_model(const ReifGame& rg) {
  const auto& am = rg.actmap;
  const std::size_t nl = rg.locations.size(), nm = am.num_moves();
  auto step = [&](StateId l, MoveId c) { return rg.winning[l] ? l : rg.transition[l][c]; };
  using Knowledge = std::pair<StateId, std::uint32_t>;
  std::map<Knowledge, StateId> index;
  std::vector<Knowledge> states;
  auto add = [&](Knowledge k) {
    auto [it, fresh] = index.emplace(k, states.size());
    if (fresh) states.push_back(k);
    return it->second;
  };
  add({rg.initial, std::uint32_t{1} << rg.initial});
  Model model;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [l, belief] = states[i];
    std::vector<StateId> row;
    for (MoveId c = 0; c < nm; ++c) {
      StateId l2 = step(l, c);
      std::uint32_t b2 = 0;
      for (StateId k = 0; k < nl; ++k) {
        if (!(belief >> k & 1u)) continue;
        for (MoveId d = 0; d < nm; ++d) {
          if (am.act(d) != am.act(c)) continue;
          StateId k2 = step(k, d);
          if (rg.observation[k2] == rg.observation[l2]) b2 |= std::uint32_t{1} << k2;
        }
      }
      row.push_back(add({l2, b2}));
    }
    model.delta.push_back(row);
  }
  model.size = states.size();
  model.initial = 0;
  model.num_actions = am.num_actions();
  for (MoveId c = 0; c < nm; ++c) model.act.push_back(am.act(c));
  std::map<std::uint32_t, std::size_t> belief_id;
  for (const auto& [l, belief] : states) {
    model.cls.push_back(belief_id.emplace(belief, belief_id.size()).first->second);
    model.target.push_back(rg.winning[l]);
  }
  model.num_classes = belief_id.size();
  return model;
}

/// Naive almost-sure reachability for a Reif game: some belief-based support pattern admits no
/// environment trap.
inline bool reif_naive_winning(const ReifGame& rg) {
  return search_patterns(reif_knowledge_model(rg)).winning.has_value();
}

/// νY. μX. int(Y) ∩ (Pre(X) ∪ T), or with T ∩ Pre(Y) for Büchi, by plain set iteration over
/// the arena's transition table, classes and targets.
inline std::vector<bool> naive_fixpoint(const Arena& arena, ObjectiveKind objective) {
  const std::size_t n = arena.num_states(), na = arena.num_actions(), u = n * (1 + na);
  auto pair_of = [&](StateId p, ActionId a) { return n + p * na + a; };
  auto classes = arena.approx().classes();
  auto pre = [&](const std::vector<bool>& x) {
    std::vector<bool> out(u, false);
    for (StateId p = 0; p < n; ++p)
      for (ActionId a = 0; a < na; ++a) {
        if (x[pair_of(p, a)]) out[p] = true;
        bool all = true;
        for (StateId t : arena.successors(p, a)) all = all && x[t];
        out[pair_of(p, a)] = all;
      }
    return out;
  };
  auto interior = [&](const std::vector<bool>& y) {
    std::vector<bool> out(u, false);
    for (const auto& cls : classes) {
      bool states_in = true;
      for (StateId p : cls) states_in = states_in && y[p];
      for (StateId p : cls) out[p] = states_in;
      for (ActionId a = 0; a < na; ++a) {
        bool in = true;
        for (StateId p : cls) in = in && y[pair_of(p, a)];
        for (StateId p : cls) out[pair_of(p, a)] = in;
      }
    }
    return out;
  };
  std::vector<bool> y(u, true);
  for (;;) {
    std::vector<bool> targets(u, false);
    auto pre_y = pre(y);
    for (StateId p = 0; p < n; ++p)
      targets[p] = arena.targets().contains(p) && (objective == ObjectiveKind::Reach || pre_y[p]);
    auto inside = interior(y);
    std::vector<bool> x(u, false);
    for (;;) {
      auto px = pre(x);
      std::vector<bool> x2(u);
      for (std::size_t e = 0; e < u; ++e) x2[e] = inside[e] && (px[e] || targets[e]);
      if (x2 == x) break;
      x = std::move(x2);
    }
    if (x == y) return y;
    y = std::move(x);
  }
}

/// Morphism axioms by enumerating every history of length ≤ depth and, depth-first, every
/// related pair the ∼ automaton accepts.
struct BruteMorphismVerdicts {
  bool refinement = true;
  bool rectangularity = true;
  bool approx_equivalence = true;
};

inline BruteMorphismVerdicts brute_force_morphism(const Game& g, const Morphism& m, std::size_t depth) {
  const std::size_t nm = g.actmap.num_moves();
  const auto& rel = g.indist;
  // h and the Moore state of every history, per length, indexed by mixed-radix code.
  std::vector<std::vector<StateId>> h(depth + 1), q(depth + 1);
  h[0] = {m.initial};
  q[0] = {g.coloring.initial};
  for (std::size_t len = 0; len < depth; ++len) {
    for (std::size_t i = 0; i < h[len].size(); ++i)
      for (MoveId c = 0; c < nm; ++c) {
        h[len + 1].push_back(m.delta[h[len][i]][c]);
        q[len + 1].push_back(g.coloring.delta[q[len][i]][c]);
      }
  }
  // images[len][code] = {h(τ') | τ ∼ τ'}
  std::vector<std::vector<std::set<StateId>>> images(depth + 1);
  for (std::size_t len = 0; len <= depth; ++len) images[len].resize(h[len].size());
  std::set<std::pair<StateId, StateId>> approx;
  std::function<void(StateId, std::size_t, std::size_t, std::size_t)> walk = [&](StateId s, std::size_t len,
                                                                                 std::size_t left, std::size_t right) {
    if (rel.accepting[s]) {
      images[len][left].insert(h[len][right]);
      approx.insert({h[len][left], h[len][right]});
    }
    if (len == depth) return;
    for (MoveId c = 0; c < nm; ++c)
      for (MoveId d = 0; d < nm; ++d) {
        StateId t = rel.delta[(s * nm + c) * nm + d];
        if (t != kNoState) walk(t, len + 1, left * nm + c, right * nm + d);
      }
  };
  walk(rel.initial, 0, 0, 0);

  BruteMorphismVerdicts out;
  std::map<StateId, Color> color_of_p;
  std::map<StateId, std::set<StateId>> image_of_p;
  for (std::size_t len = 0; len <= depth; ++len)
    for (std::size_t i = 0; i < h[len].size(); ++i) {
      StateId p = h[len][i];
      Color col = g.coloring.output[q[len][i]];
      auto [cit, fresh_c] = color_of_p.emplace(p, col);
      if (!fresh_c && cit->second != col) out.refinement = false;
      auto [iit, fresh_i] = image_of_p.emplace(p, images[len][i]);
      if (!fresh_i && iit->second != images[len][i]) out.rectangularity = false;
    }
  for (const auto& [p, r] : approx) {
    if (!approx.count({r, p}) || !approx.count({p, p})) out.approx_equivalence = false;
    for (auto it = approx.lower_bound({r, 0}); it != approx.end() && it->first == r; ++it)
      if (!approx.count({p, it->second})) out.approx_equivalence = false;
  }
  return out;
}

}  // namespace rig::testing::oracle
