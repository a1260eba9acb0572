#include "rig/morphism.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "rig/detail/shortlex.hpp"
#include "rig/errors.hpp"

namespace rig {

namespace {

using Letter = std::pair<MoveId, MoveId>;

HistoryPair split(const std::vector<Letter>& word) {
  HistoryPair out;
  for (auto [l, r] : word) {
    out.left.push_back(l);
    out.right.push_back(r);
  }
  return out;
}

std::string show(const ActMap& actmap, const History& h) {
  if (h.empty()) return "ε";
  std::string s;
  for (MoveId c : h) {
    if (!s.empty()) s += "·";
    s += actmap.move_name(c);
  }
  return s;
}

std::string show(const ActMap& actmap, const HistoryPair& w) {
  return "(" + show(actmap, w.left) + ", " + show(actmap, w.right) + ")";
}

}  // namespace

Morphism Morphism::trimmed() const {
  std::vector<bool> reach(size(), false);
  std::deque<StateId> queue{initial};
  reach[initial] = true;
  while (!queue.empty()) {
    StateId p = queue.front();
    queue.pop_front();
    for (StateId t : delta[p]) {
      if (!reach[t]) {
        reach[t] = true;
        queue.push_back(t);
      }
    }
  }
  std::vector<StateId> remap(size(), kNoState);
  Morphism out;
  for (StateId p = 0; p < size(); ++p) {
    if (!reach[p]) continue;
    remap[p] = out.states.size();
    out.states.push_back(states[p]);
  }
  out.initial = remap[initial];
  for (StateId p = 0; p < size(); ++p) {
    if (!reach[p]) continue;
    std::vector<StateId> row;
    for (StateId t : delta[p]) row.push_back(remap[t]);
    out.delta.push_back(std::move(row));
  }
  return out;
}

std::optional<StateId> Morphism::find_state(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<StateId>(it - states.begin());
}

void Morphism::check_well_formed(std::size_t num_moves) const {
  if (states.empty()) throw InputError("no abstract states", "abstract_states");
  if (initial >= size()) throw InputError("initial state out of range", "initial");
  if (delta.size() != size()) throw InputError("transition table must cover every state", "delta_p");
  std::set<std::string> seen;
  for (StateId p = 0; p < size(); ++p) {
    if (!seen.insert(states[p]).second) throw InputError("duplicate state '" + states[p] + "'", "abstract_states");
    if (delta[p].size() != num_moves) throw InputError("transition function is not total", "delta_p." + states[p]);
    for (StateId t : delta[p]) {
      if (t >= size()) throw InputError("target out of range", "delta_p." + states[p]);
    }
  }
}

StateId h_eval(const Morphism& m, std::span<const MoveId> history) {
  StateId p = m.initial;
  for (MoveId c : history) {
    if (c >= m.delta[p].size()) throw InputError("unknown move id " + std::to_string(c));
    p = m.delta[p][c];
  }
  return p;
}

ApproxRelation::ApproxRelation(std::size_t num_states) : parent_(num_states) {
  std::iota(parent_.begin(), parent_.end(), StateId{0});
  rebuild();
}

void ApproxRelation::merge(StateId p, StateId q) {
  auto find = [&](StateId x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  };
  StateId a = find(p), b = find(q);
  if (a == b) return;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  rebuild();
}

void ApproxRelation::rebuild() {
  const std::size_t n = parent_.size();
  rep_.assign(n, 0);
  members_.assign(n, {});
  for (StateId p = 0; p < n; ++p) {
    StateId x = p;
    while (parent_[x] != x) x = parent_[x];
    rep_[p] = x;
    members_[x].push_back(p);
  }
  // The least member is the root because merge always hangs the larger root below the smaller.
}

std::vector<std::vector<StateId>> ApproxRelation::classes() const {
  std::vector<std::vector<StateId>> out;
  for (StateId p = 0; p < rep_.size(); ++p) {
    if (rep_[p] == p) out.push_back(members_[p]);
  }
  return out;
}

std::span<const StateId> ApproxRelation::class_of(StateId p) const { return members_.at(rep_.at(p)); }

std::vector<std::pair<std::pair<StateId, StateId>, HistoryPair>> realised_pairs(const Game& game, const Morphism& m) {
  const auto& a = game.indist;
  using Key = std::array<StateId, 3>;
  detail::ShortlexExplorer<Key, Letter> ex;
  ex.explore(Key{a.initial, m.initial, m.initial}, [&](const Key& k, auto emit) {
    for (MoveId c = 0; c < a.num_moves; ++c)
      for (MoveId d = 0; d < a.num_moves; ++d) {
        StateId s = a.step(k[0], c, d);
        if (s != kNoState) emit(Letter{c, d}, Key{s, m.delta[k[1]][c], m.delta[k[2]][d]});
      }
  });
  std::map<std::pair<StateId, StateId>, HistoryPair> found;
  for (std::size_t n = 0; n < ex.nodes().size(); ++n) {
    const Key& k = ex.nodes()[n].key;
    if (!a.accepting[k[0]]) continue;
    auto key = std::make_pair(k[1], k[2]);
    if (!found.count(key)) found.emplace(key, split(ex.word_to(n)));
  }
  return {found.begin(), found.end()};
}

namespace {

/// Either the equivalence, or a failure description with a witness.
struct ApproxOutcome {
  ApproxRelation relation;
  std::optional<Verdict> failure;
};

ApproxOutcome approx_outcome(const Game& game, const Morphism& m) {
  auto pairs = realised_pairs(game, m);
  std::map<std::pair<StateId, StateId>, HistoryPair> index(pairs.begin(), pairs.end());
  auto fail = [&](HistoryPair w, std::string detail) {
    return ApproxOutcome{ApproxRelation(m.size()),
                         Verdict{morphism_check::kApproxEquivalence, false, std::move(w), std::move(detail)}};
  };
  // Reflexivity over the reachable part of P.
  std::vector<bool> reach(m.size(), false);
  std::deque<StateId> queue{m.initial};
  reach[m.initial] = true;
  while (!queue.empty()) {
    StateId p = queue.front();
    queue.pop_front();
    for (StateId t : m.delta[p])
      if (!reach[t]) {
        reach[t] = true;
        queue.push_back(t);
      }
  }
  for (StateId p = 0; p < m.size(); ++p) {
    if (reach[p] && !index.count({p, p})) {
      return fail({}, "reachable state " + m.states[p] + " is not related to itself");
    }
  }
  for (const auto& [key, w] : index) {
    if (!index.count({key.second, key.first})) {
      return fail(w, m.states[key.first] + " ≈ " + m.states[key.second] + " is not symmetric, realised by " +
                         show(game.actmap, w));
    }
  }
  for (const auto& [k1, w1] : index) {
    for (const auto& [k2, w2] : index) {
      if (k1.second != k2.first) continue;
      if (!index.count({k1.first, k2.second})) {
        return fail(w1, m.states[k1.first] + " ≈ " + m.states[k1.second] + " ≈ " + m.states[k2.second] +
                            " is not transitive, realised by " + show(game.actmap, w1) + " and " +
                            show(game.actmap, w2));
      }
    }
  }
  ApproxRelation rel(m.size());
  for (const auto& [key, w] : index) rel.merge(key.first, key.second);
  return ApproxOutcome{std::move(rel), std::nullopt};
}

}  // namespace

ApproxRelation compute_approx(const Game& game, const Morphism& m) {
  auto out = approx_outcome(game, m);
  if (out.failure) throw ValidationError("≈ is not an equivalence: " + out.failure->detail);
  return std::move(out.relation);
}

Verdict validate_approx_equivalence(const Game& game, const Morphism& m) {
  auto out = approx_outcome(game, m);
  if (out.failure) return *out.failure;
  return Verdict{morphism_check::kApproxEquivalence, true, std::nullopt, {}};
}

Verdict validate_refinement(const Game& game, const Morphism& m) {
  const auto& q = game.coloring;
  const std::size_t nm = game.actmap.num_moves();
  using Key = std::pair<StateId, StateId>;
  detail::ShortlexExplorer<Key, MoveId> ex;
  ex.explore(Key{m.initial, q.initial}, [&](const Key& k, auto emit) {
    for (MoveId c = 0; c < nm; ++c) emit(c, Key{m.delta[k.first][c], q.delta[k.second][c]});
  });
  // The first node per abstract state fixes the expected color; the first node disagreeing
  // with it gives the shortest second history.
  std::vector<std::optional<std::size_t>> first(m.size());
  for (std::size_t n = 0; n < ex.nodes().size(); ++n) {
    auto [p, s] = ex.nodes()[n].key;
    if (!first[p]) {
      first[p] = n;
      continue;
    }
    StateId s0 = ex.nodes()[*first[p]].key.second;
    if (q.output[s0] != q.output[s]) {
      HistoryPair w{ex.word_to(*first[p]), ex.word_to(n)};
      std::string detail = "both histories map to " + m.states[p] + " but are colored " + std::to_string(q.output[s0]) +
                           " and " + std::to_string(q.output[s]);
      return Verdict{morphism_check::kRefinement, false, std::move(w), std::move(detail)};
    }
  }
  return Verdict{morphism_check::kRefinement, true, std::nullopt, {}};
}

namespace {

/// The definition itself, across lengths: h(τ) = h(τ') implies h([τ]∼) = h([τ']∼). For a
/// history τ the set K(τ) of pairs (∼-state of (τ, τ'), h(τ')) over all τ' of the same length
/// is computed deterministically; h([τ]∼) is read off its accepting pairs.
Verdict class_image_check(const Game& game, const Morphism& m) {
  const auto& a = game.indist;
  const std::size_t nm = a.num_moves;
  using Pair = std::pair<StateId, StateId>;
  using Key = std::pair<StateId, std::vector<Pair>>;
  auto image = [&](const Key& k) {
    std::vector<StateId> out;
    for (const auto& [s, p] : k.second)
      if (a.accepting[s]) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  std::map<StateId, std::pair<std::vector<StateId>, std::size_t>> first;
  detail::ShortlexExplorer<Key, MoveId> ex;
  std::size_t discovered = 0;
  std::size_t conflict_with = 0;
  auto hit = ex.run(
      Key{m.initial, {Pair{a.initial, m.initial}}},
      [&](const Key& k, auto emit) {
        for (MoveId c = 0; c < nm; ++c) {
          std::vector<Pair> next;
          for (const auto& [s, p] : k.second)
            for (MoveId d = 0; d < nm; ++d) {
              StateId t = a.step(s, c, d);
              if (t != kNoState) next.emplace_back(t, m.delta[p][d]);
            }
          std::sort(next.begin(), next.end());
          next.erase(std::unique(next.begin(), next.end()), next.end());
          emit(c, Key{m.delta[k.first][c], std::move(next)});
        }
      },
      [&](const Key& k) {
        const std::size_t node = discovered++;
        auto img = image(k);
        auto [it, inserted] = first.emplace(k.first, std::make_pair(img, node));
        if (inserted || it->second.first == img) return false;
        conflict_with = it->second.second;
        return true;
      });
  if (!hit) return Verdict{morphism_check::kRectangularity, true, std::nullopt, {}};
  HistoryPair w{ex.word_to(conflict_with), ex.word_to(*hit)};
  std::string detail = "h maps both histories to " + m.states[ex.nodes()[*hit].key.first] +
                       " but their information sets have different images";
  return Verdict{morphism_check::kRectangularity, false, std::move(w), std::move(detail)};
}

}  // namespace

Verdict validate_rectangularity(const Game& game, const Morphism& m) {
  const auto& a = game.indist;
  const std::size_t nm = a.num_moves;
  using Triple = std::array<StateId, 3>;
  using Subset = std::vector<Triple>;
  // Left: (h(τ), h(τ'), ∼-state of (τ', τ'')), accepting when h(τ) = h(τ') and τ' ∼ τ''.
  // Right: (∼-state of (τ, τ'), h(τ'), h(τ'')), accepting when τ ∼ τ' and h(τ') = h(τ'').
  auto left_accepts = [&](const Subset& set) {
    return std::any_of(set.begin(), set.end(), [&](const Triple& t) { return t[0] == t[1] && a.accepting[t[2]]; });
  };
  auto right_accepts = [&](const Subset& set) {
    return std::any_of(set.begin(), set.end(), [&](const Triple& t) { return a.accepting[t[0]] && t[1] == t[2]; });
  };
  auto left_step = [&](const Subset& set, MoveId c, MoveId e) {
    Subset out;
    for (const auto& t : set)
      for (MoveId d = 0; d < nm; ++d) {
        StateId s = a.step(t[2], d, e);
        if (s != kNoState) out.push_back(Triple{m.delta[t[0]][c], m.delta[t[1]][d], s});
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto right_step = [&](const Subset& set, MoveId c, MoveId e) {
    Subset out;
    for (const auto& t : set)
      for (MoveId d = 0; d < nm; ++d) {
        StateId s = a.step(t[0], c, d);
        if (s != kNoState) out.push_back(Triple{s, m.delta[t[1]][d], m.delta[t[2]][e]});
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  using Key = std::pair<Subset, Subset>;
  detail::ShortlexExplorer<Key, Letter> ex;
  auto hit = ex.run(
      Key{Subset{Triple{m.initial, m.initial, a.initial}}, Subset{Triple{a.initial, m.initial, m.initial}}},
      [&](const Key& k, auto emit) {
        if (k.first.empty() && k.second.empty()) return;
        for (MoveId c = 0; c < nm; ++c)
          for (MoveId e = 0; e < nm; ++e) emit(Letter{c, e}, Key{left_step(k.first, c, e), right_step(k.second, c, e)});
      },
      [&](const Key& k) { return left_accepts(k.first) != right_accepts(k.second); });
  if (!hit) return class_image_check(game, m);
  HistoryPair w = split(ex.word_to(*hit));
  bool in_left = left_accepts(ex.nodes()[*hit].key.first);
  std::string detail = show(game.actmap, w) + (in_left ? " is in H∘∼ but not in ∼∘H" : " is in ∼∘H but not in H∘∼");
  return Verdict{morphism_check::kRectangularity, false, std::move(w), std::move(detail)};
}

std::vector<StateId> TargetSet::list() const {
  std::vector<StateId> out;
  for (StateId p = 0; p < members.size(); ++p)
    if (members[p]) out.push_back(p);
  return out;
}

TargetSet compute_targets(const Game& game, const Morphism& m, const ApproxRelation& approx, bool require_sink) {
  const auto& q = game.coloring;
  const std::size_t nm = game.actmap.num_moves();
  TargetSet out{std::vector<bool>(m.size(), false)};
  std::set<std::pair<StateId, StateId>> seen{{m.initial, q.initial}};
  std::deque<std::pair<StateId, StateId>> queue{{m.initial, q.initial}};
  while (!queue.empty()) {
    auto [p, s] = queue.front();
    queue.pop_front();
    if (q.output[s] == 1) out.members[p] = true;
    for (MoveId c = 0; c < nm; ++c) {
      std::pair<StateId, StateId> next{m.delta[p][c], q.delta[s][c]};
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  for (StateId p = 0; p < m.size(); ++p) {
    if (!out.members[p]) continue;
    for (StateId r : approx.class_of(p)) {
      if (!out.members[r]) {
        throw ValidationError("target not ≈-closed: " + m.states[p] + " ∈ P_F but " + m.states[r] + " ∉ P_F");
      }
    }
    if (!require_sink) continue;
    for (MoveId c = 0; c < nm; ++c) {
      if (!out.members[m.delta[p][c]]) {
        throw ValidationError("target not absorbing: " + m.states[p] + " --" + game.actmap.move_name(c) + "--> " +
                              m.states[m.delta[p][c]]);
      }
    }
  }
  return out;
}

void require_rectangular(const Game& game, const Morphism& m) {
  for (const Verdict& v : {validate_refinement(game, m), validate_approx_equivalence(game, m),
                           validate_rectangularity(game, m)}) {
    if (!v.passed) throw ValidationError(v.check + " failed: " + v.detail);
  }
}

std::pair<Game, Morphism> latch_targets(const Game& game, const Morphism& m) {
  if (is_target_absorbing(game.coloring)) return {game, m};
  Game latched = make_target_absorbing(game);
  // Abstract states whose histories are colored 1; refinement makes this well defined.
  std::vector<bool> winning(m.size(), false);
  {
    const auto& q = game.coloring;
    std::set<std::pair<StateId, StateId>> seen{{m.initial, q.initial}};
    std::deque<std::pair<StateId, StateId>> queue{{m.initial, q.initial}};
    while (!queue.empty()) {
      auto [p, s] = queue.front();
      queue.pop_front();
      if (q.output[s] == 1) winning[p] = true;
      for (MoveId c = 0; c < game.actmap.num_moves(); ++c) {
        std::pair<StateId, StateId> next{m.delta[p][c], q.delta[s][c]};
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }
  std::string sink_name = "latched";
  while (m.find_state(sink_name)) sink_name += "'";
  Morphism out;
  out.states = m.states;
  out.states.push_back(sink_name);
  out.initial = m.initial;
  const StateId sink = m.size();
  for (StateId p = 0; p < m.size(); ++p) {
    if (winning[p]) {
      out.delta.emplace_back(game.actmap.num_moves(), sink);
    } else {
      out.delta.push_back(m.delta[p]);
    }
  }
  out.delta.emplace_back(game.actmap.num_moves(), sink);
  return {latched, out.trimmed()};
}

}  // namespace rig
