#include "rig/reif.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "rig/errors.hpp"

namespace rig {

void ReifGame::check_well_formed() const {
  const std::size_t n = locations.size();
  if (n == 0) throw InputError("no locations", "locations");
  if (initial >= n) throw InputError("initial location out of range", "initial");
  if (transition.size() != n) throw InputError("transition must cover every location", "transition");
  if (observation.size() != n) throw InputError("observation must cover every location", "observation");
  if (winning.size() != n) throw InputError("winning flags must cover every location", "winning");
  std::set<std::string> seen;
  for (StateId l = 0; l < n; ++l) {
    if (!seen.insert(locations[l]).second) throw InputError("duplicate location '" + locations[l] + "'", "locations");
    if (transition[l].size() != actmap.num_moves()) {
      throw InputError("transition is not total", "transition." + locations[l]);
    }
    for (StateId t : transition[l])
      if (t >= n) throw InputError("target out of range", "transition." + locations[l]);
  }
  std::map<std::string, bool> class_winning;
  for (StateId l = 0; l < n; ++l) {
    auto [it, inserted] = class_winning.emplace(observation[l], winning[l]);
    if (!inserted && it->second != winning[l]) {
      throw InputError("winning locations must be unions of observation classes (observation '" + observation[l] +
                           "')",
                       "winning");
    }
  }
}

namespace {

/// Transition table with winning locations turned into sinks.
std::vector<std::vector<StateId>> latched_transition(const ReifGame& rg, bool latch) {
  auto t = rg.transition;
  if (!latch) return t;
  for (StateId l = 0; l < rg.locations.size(); ++l)
    if (rg.winning[l]) std::fill(t[l].begin(), t[l].end(), l);
  return t;
}

struct SubsetConstruction {
  std::vector<std::pair<StateId, std::vector<StateId>>> states;
  std::vector<std::vector<StateId>> delta;
};

SubsetConstruction build_subsets(const ReifGame& rg, bool latch) {
  rg.check_well_formed();
  const auto t = latched_transition(rg, latch);
  const auto& act = rg.actmap;
  using Key = std::pair<StateId, std::vector<StateId>>;
  SubsetConstruction out;
  std::map<Key, StateId> index;
  std::deque<Key> queue;
  auto intern = [&](Key k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    StateId id = out.states.size();
    out.states.push_back(k);
    out.delta.emplace_back(act.num_moves(), 0);
    index.emplace(k, id);
    queue.push_back(std::move(k));
    return id;
  };
  intern(Key{rg.initial, {rg.initial}});
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    StateId id = index.at(k);
    for (MoveId c = 0; c < act.num_moves(); ++c) {
      StateId next = t[k.first][c];
      const std::string& seen = rg.observation[next];
      std::vector<StateId> belief;
      for (StateId l : k.second)
        for (MoveId d : act.moves_of(act.act(c))) {
          StateId r = t[l][d];
          if (rg.observation[r] == seen) belief.push_back(r);
        }
      std::sort(belief.begin(), belief.end());
      belief.erase(std::unique(belief.begin(), belief.end()), belief.end());
      StateId target = intern(Key{next, std::move(belief)});
      out.delta[id][c] = target;
    }
  }
  return out;
}

}  // namespace

Game reif_to_game(const ReifGame& rg, bool latch) {
  rg.check_well_formed();
  const auto t = latched_transition(rg, latch);
  const auto& act = rg.actmap;
  const std::size_t nm = act.num_moves();
  Game g;
  g.actmap = act;
  g.coloring.states = rg.locations;
  g.coloring.initial = rg.initial;
  g.coloring.delta = t;
  for (StateId l = 0; l < rg.locations.size(); ++l) g.coloring.output.push_back(rg.winning[l] ? 1 : 0);

  // ∼ tracks the pair of current locations of the two histories.
  using Key = std::pair<StateId, StateId>;
  std::map<Key, StateId> index;
  std::vector<Key> pairs;
  std::deque<Key> queue;
  std::vector<std::tuple<StateId, MoveId, MoveId, Key>> edges;
  auto intern = [&](const Key& k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    StateId id = pairs.size();
    pairs.push_back(k);
    index.emplace(k, id);
    queue.push_back(k);
    return id;
  };
  intern(Key{rg.initial, rg.initial});
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    StateId id = index.at(k);
    for (MoveId c = 0; c < nm; ++c)
      for (MoveId d = 0; d < nm; ++d) {
        if (act.act(c) != act.act(d)) continue;
        StateId l = t[k.first][c], r = t[k.second][d];
        if (rg.observation[l] != rg.observation[r]) continue;
        intern(Key{l, r});
        edges.emplace_back(id, c, d, Key{l, r});
      }
  }
  g.indist = SyncRelationAutomaton::empty(pairs.size(), nm);
  for (StateId s = 0; s < pairs.size(); ++s) {
    g.indist.states[s] = rg.locations[pairs[s].first] + "~" + rg.locations[pairs[s].second];
    g.indist.accepting[s] = true;
  }
  for (const auto& [s, c, d, k] : edges) g.indist.set(s, c, d, index.at(k));
  return g;
}

Morphism subset_morphism(const ReifGame& rg, bool latch) {
  auto sc = build_subsets(rg, latch);
  Morphism m;
  for (const auto& [l, belief] : sc.states) {
    std::string name = rg.locations[l] + "{";
    for (std::size_t i = 0; i < belief.size(); ++i) name += (i ? "," : "") + rg.locations[belief[i]];
    m.states.push_back(name + "}");
  }
  m.initial = 0;
  m.delta = std::move(sc.delta);
  return m;
}

std::vector<std::vector<StateId>> subset_beliefs(const ReifGame& rg, bool latch) {
  auto sc = build_subsets(rg, latch);
  std::vector<std::vector<StateId>> out;
  for (auto& [l, belief] : sc.states) out.push_back(std::move(belief));
  return out;
}

}  // namespace rig
