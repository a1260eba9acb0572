#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "rig/detail/shortlex.hpp"
#include "rig/errors.hpp"
#include "rig/validation.hpp"

namespace rig {

bool ValidationReport::ok() const {
  return cross_check_disagreements.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const Verdict& ValidationReport::at(const std::string& check) const {
  for (const auto& v : verdicts) {
    if (v.check == check) return v;
  }
  throw std::out_of_range("no verdict named " + check);
}

namespace {

using Letter = std::pair<MoveId, MoveId>;
using Word = std::vector<Letter>;

HistoryPair split(const Word& word) {
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

Verdict failed(const char* check, HistoryPair witness, std::string detail) {
  return Verdict{check, false, std::move(witness), std::move(detail)};
}

Verdict passed(const char* check) { return Verdict{check, true, std::nullopt, {}}; }

/// Reachable states of the relation automaton with shortlex-least access words, and for every
/// state the length of and first letter on the shortlex-least path to an accepting state.
struct RelationShape {
  detail::ShortlexExplorer<StateId, Letter> reach;
  std::vector<std::size_t> dist_to_accept;
  std::vector<Letter> next_letter;

  static constexpr std::size_t kInf = static_cast<std::size_t>(-1);

  explicit RelationShape(const SyncRelationAutomaton& a) {
    const std::size_t m = a.num_moves;
    reach.explore(a.initial, [&](StateId s, auto emit) {
      for (MoveId c = 0; c < m; ++c)
        for (MoveId d = 0; d < m; ++d) {
          StateId t = a.step(s, c, d);
          if (t != kNoState) emit(Letter{c, d}, t);
        }
    });
    // Backward layering; the first letter is the least one that drops the distance by one.
    dist_to_accept.assign(a.size(), kInf);
    next_letter.assign(a.size(), Letter{0, 0});
    for (StateId s = 0; s < a.size(); ++s)
      if (a.accepting[s]) dist_to_accept[s] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::size_t> next = dist_to_accept;
      for (StateId s = 0; s < a.size(); ++s) {
        if (dist_to_accept[s] != kInf) continue;
        for (MoveId c = 0; c < m && next[s] == kInf; ++c)
          for (MoveId d = 0; d < m; ++d) {
            StateId t = a.step(s, c, d);
            if (t != kNoState && dist_to_accept[t] != kInf) {
              next[s] = dist_to_accept[t] + 1;
              next_letter[s] = Letter{c, d};
              changed = true;
              break;
            }
          }
      }
      dist_to_accept = std::move(next);
    }
    // Ensure next_letter is the least letter achieving the minimal distance.
    for (StateId s = 0; s < a.size(); ++s) {
      if (dist_to_accept[s] == kInf || dist_to_accept[s] == 0) continue;
      bool done = false;
      for (MoveId c = 0; c < m && !done; ++c)
        for (MoveId d = 0; d < m && !done; ++d) {
          StateId t = a.step(s, c, d);
          if (t != kNoState && dist_to_accept[t] + 1 == dist_to_accept[s]) {
            next_letter[s] = Letter{c, d};
            done = true;
          }
        }
    }
  }

  Word completion(const SyncRelationAutomaton& a, StateId s) const {
    Word w;
    while (!a.accepting[s]) {
      Letter l = next_letter[s];
      w.push_back(l);
      s = a.step(s, l.first, l.second);
    }
    return w;
  }
};

Verdict check_reflexive(const Game& game) {
  const auto& a = game.indist;
  detail::ShortlexExplorer<StateId, MoveId> ex;
  auto hit = ex.run(
      a.initial,
      [&](StateId s, auto emit) {
        for (MoveId c = 0; c < a.num_moves; ++c) emit(c, a.step(s, c, c));
      },
      [&](StateId s) { return !a.accepts(s); });
  if (!hit) return passed(axiom::kReflexive);
  History w = ex.word_to(*hit);
  return failed(axiom::kReflexive, {w, w}, show(game.actmap, w) + " is not related to itself");
}

Verdict check_symmetric(const Game& game) {
  const auto& a = game.indist;
  using Key = std::pair<StateId, StateId>;
  detail::ShortlexExplorer<Key, Letter> ex;
  auto hit = ex.run(
      Key{a.initial, a.initial},
      [&](const Key& k, auto emit) {
        if (k.first == kNoState && k.second == kNoState) return;
        for (MoveId c = 0; c < a.num_moves; ++c)
          for (MoveId d = 0; d < a.num_moves; ++d) emit(Letter{c, d}, Key{a.step(k.first, c, d), a.step(k.second, d, c)});
      },
      [&](const Key& k) { return a.accepts(k.first) != a.accepts(k.second); });
  if (!hit) return passed(axiom::kSymmetric);
  HistoryPair w = split(ex.word_to(*hit));
  if (!a.accepts(ex.nodes()[*hit].key.first)) std::swap(w.left, w.right);
  std::string detail = show(game.actmap, w.left) + " ∼ " + show(game.actmap, w.right) + " but not conversely";
  return failed(axiom::kSymmetric, std::move(w), std::move(detail));
}

Verdict check_transitive(const Game& game) {
  const auto& a = game.indist;
  const std::size_t m = a.num_moves;
  // (τ ∼ τ', τ' ∼ τ'', τ ∼ τ'') with letters ordered by (c, c'', c').
  using Key = std::array<StateId, 3>;
  using Triple = std::array<MoveId, 3>;
  detail::ShortlexExplorer<Key, Triple> ex;
  auto hit = ex.run(
      Key{a.initial, a.initial, a.initial},
      [&](const Key& k, auto emit) {
        if (k[0] == kNoState || k[1] == kNoState) return;
        for (MoveId c = 0; c < m; ++c)
          for (MoveId e = 0; e < m; ++e)
            for (MoveId d = 0; d < m; ++d)
              emit(Triple{c, e, d}, Key{a.step(k[0], c, d), a.step(k[1], d, e), a.step(k[2], c, e)});
      },
      [&](const Key& k) { return a.accepts(k[0]) && a.accepts(k[1]) && !a.accepts(k[2]); });
  if (!hit) return passed(axiom::kTransitive);
  History left, middle, right;
  for (const auto& t : ex.word_to(*hit)) {
    left.push_back(t[0]);
    right.push_back(t[1]);
    middle.push_back(t[2]);
  }
  std::string detail = show(game.actmap, left) + " ∼ " + show(game.actmap, middle) + " ∼ " + show(game.actmap, right) +
                       " but the outer pair is unrelated";
  return failed(axiom::kTransitive, {left, right}, std::move(detail));
}

Verdict check_prefix_closed(const Game& game, const RelationShape& shape) {
  const auto& a = game.indist;
  std::optional<std::size_t> best;
  std::size_t best_len = 0;
  for (std::size_t n = 0; n < shape.reach.nodes().size(); ++n) {
    StateId s = shape.reach.nodes()[n].key;
    if (a.accepting[s] || shape.dist_to_accept[s] == RelationShape::kInf) continue;
    std::size_t len = shape.reach.word_to(n).size() + shape.dist_to_accept[s];
    if (!best || len < best_len) {
      best = n;
      best_len = len;
    }
  }
  if (!best) return passed(axiom::kPrefixClosed);
  Word access = shape.reach.word_to(*best);
  Word full = access;
  Word tail = shape.completion(a, shape.reach.nodes()[*best].key);
  full.insert(full.end(), tail.begin(), tail.end());
  HistoryPair w = split(full);
  HistoryPair p = split(access);
  std::string detail = "related pair whose length-" + std::to_string(access.size()) + " prefixes " +
                       show(game.actmap, p.left) + ", " + show(game.actmap, p.right) + " are unrelated";
  return failed(axiom::kPrefixClosed, std::move(w), std::move(detail));
}

Verdict check_action_visible(const Game& game, const RelationShape& shape) {
  const auto& a = game.indist;
  const auto& act = game.actmap;
  std::optional<std::tuple<std::size_t, Letter, StateId>> best;
  std::size_t best_len = 0;
  for (std::size_t n = 0; n < shape.reach.nodes().size(); ++n) {
    StateId s = shape.reach.nodes()[n].key;
    std::size_t depth = shape.reach.word_to(n).size();
    for (MoveId c = 0; c < a.num_moves; ++c)
      for (MoveId d = 0; d < a.num_moves; ++d) {
        if (act.act(c) == act.act(d)) continue;
        StateId t = a.step(s, c, d);
        if (t == kNoState || shape.dist_to_accept[t] == RelationShape::kInf) continue;
        std::size_t len = depth + 1 + shape.dist_to_accept[t];
        if (!best || len < best_len) {
          best = std::make_tuple(n, Letter{c, d}, t);
          best_len = len;
        }
      }
  }
  if (!best) return passed(axiom::kActionVisible);
  auto [n, letter, t] = *best;
  Word full = shape.reach.word_to(n);
  full.push_back(letter);
  Word tail = shape.completion(a, t);
  full.insert(full.end(), tail.begin(), tail.end());
  std::string detail = "moves " + act.move_name(letter.first) + " and " + act.move_name(letter.second) +
                       " at position " + std::to_string(shape.reach.word_to(n).size() + 1) + " have different actions";
  return failed(axiom::kActionVisible, split(full), std::move(detail));
}

Verdict check_information_consistent(const Game& game) {
  const auto& a = game.indist;
  const auto& q = game.coloring;
  using Key = std::array<StateId, 3>;
  detail::ShortlexExplorer<Key, Letter> ex;
  auto hit = ex.run(
      Key{a.initial, q.initial, q.initial},
      [&](const Key& k, auto emit) {
        for (MoveId c = 0; c < a.num_moves; ++c)
          for (MoveId d = 0; d < a.num_moves; ++d) {
            StateId s = a.step(k[0], c, d);
            if (s != kNoState) emit(Letter{c, d}, Key{s, q.delta[k[1]][c], q.delta[k[2]][d]});
          }
      },
      [&](const Key& k) { return a.accepting[k[0]] && q.output[k[1]] != q.output[k[2]]; });
  if (!hit) return passed(axiom::kInformationConsistent);
  HistoryPair w = split(ex.word_to(*hit));
  const Key& k = ex.nodes()[*hit].key;
  std::string detail = "related histories colored " + std::to_string(q.output[k[1]]) + " and " +
                       std::to_string(q.output[k[2]]);
  return failed(axiom::kInformationConsistent, std::move(w), std::move(detail));
}

}  // namespace

BoundedRelation enumerate_relation(const SyncRelationAutomaton& indist, std::size_t depth) {
  const std::size_t m = indist.num_moves;
  double size = 1;
  for (std::size_t i = 0; i < depth; ++i) size *= static_cast<double>(m);
  if (size >= 4294967296.0) throw ResourceCapError("history space too large for bounded enumeration");
  BoundedRelation rel;
  rel.depth = depth;
  rel.num_moves = m;
  rel.by_length.resize(depth + 1);
  // Frontier: every pair with a defined run, accepted or not.
  std::vector<std::pair<std::uint64_t, StateId>> frontier{{0, indist.initial}};
  for (std::size_t len = 0;; ++len) {
    for (auto [key, s] : frontier)
      if (indist.accepting[s]) rel.by_length[len].insert(key);
    if (len == depth) break;
    std::vector<std::pair<std::uint64_t, StateId>> next;
    for (auto [key, s] : frontier) {
      std::uint64_t l = key >> 32, r = key & 0xffffffffu;
      for (MoveId c = 0; c < m; ++c)
        for (MoveId d = 0; d < m; ++d) {
          StateId t = indist.step(s, c, d);
          if (t != kNoState) next.emplace_back(((l * m + c) << 32) | (r * m + d), t);
        }
    }
    frontier = std::move(next);
  }
  return rel;
}

std::vector<Verdict> brute_force_axioms(const Game& game, const BoundedRelation& relation) {
  const std::size_t m = relation.num_moves;
  std::vector<Verdict> out;
  auto decode = [&](std::size_t len, std::uint64_t l, std::uint64_t r) {
    return HistoryPair{decode_history(l, len, m), decode_history(r, len, m)};
  };
  std::vector<std::vector<std::uint64_t>> sorted(relation.depth + 1);
  for (std::size_t len = 0; len <= relation.depth; ++len) {
    sorted[len].assign(relation.by_length[len].begin(), relation.by_length[len].end());
    std::sort(sorted[len].begin(), sorted[len].end());
  }

  out.push_back(passed(axiom::kSameLength));

  Verdict refl = passed(axiom::kReflexive);
  for (std::size_t len = 0; len <= relation.depth && refl.passed; ++len) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= m;
    for (std::uint64_t h = 0; h < count; ++h) {
      if (!relation.contains(len, h, h)) {
        refl = failed(axiom::kReflexive, decode(len, h, h), "not reflexive");
        break;
      }
    }
  }
  out.push_back(refl);

  Verdict sym = passed(axiom::kSymmetric);
  for (std::size_t len = 0; len <= relation.depth && sym.passed; ++len)
    for (std::uint64_t key : sorted[len]) {
      std::uint64_t l = key >> 32, r = key & 0xffffffffu;
      if (!relation.contains(len, r, l)) {
        sym = failed(axiom::kSymmetric, decode(len, l, r), "not symmetric");
        break;
      }
    }
  out.push_back(sym);

  Verdict trans = passed(axiom::kTransitive);
  for (std::size_t len = 0; len <= relation.depth && trans.passed; ++len) {
    std::map<std::uint64_t, std::vector<std::uint64_t>> succ;
    for (std::uint64_t key : sorted[len]) succ[key >> 32].push_back(key & 0xffffffffu);
    for (const auto& [l, mids] : succ) {
      for (std::uint64_t mid : mids) {
        auto it = succ.find(mid);
        if (it == succ.end()) continue;
        for (std::uint64_t r : it->second) {
          if (!relation.contains(len, l, r)) {
            trans = failed(axiom::kTransitive, decode(len, l, r), "not transitive");
            break;
          }
        }
        if (!trans.passed) break;
      }
      if (!trans.passed) break;
    }
  }
  out.push_back(trans);

  Verdict prefix = passed(axiom::kPrefixClosed);
  for (std::size_t len = 1; len <= relation.depth && prefix.passed; ++len)
    for (std::uint64_t key : sorted[len]) {
      std::uint64_t l = key >> 32, r = key & 0xffffffffu;
      if (!relation.contains(len - 1, l / m, r / m)) {
        prefix = failed(axiom::kPrefixClosed, decode(len, l, r), "prefix pair unrelated");
        break;
      }
    }
  out.push_back(prefix);

  Verdict visible = passed(axiom::kActionVisible);
  Verdict consistent = passed(axiom::kInformationConsistent);
  for (std::size_t len = 0; len <= relation.depth; ++len)
    for (std::uint64_t key : sorted[len]) {
      HistoryPair p = decode(len, key >> 32, key & 0xffffffffu);
      if (visible.passed) {
        for (std::size_t i = 0; i < len; ++i) {
          if (game.actmap.act(p.left[i]) != game.actmap.act(p.right[i])) {
            visible = failed(axiom::kActionVisible, p, "actions differ");
            break;
          }
        }
      }
      if (consistent.passed && color_of(game, p.left) != color_of(game, p.right)) {
        consistent = failed(axiom::kInformationConsistent, p, "colors differ");
      }
    }
  out.push_back(visible);
  out.push_back(consistent);
  return out;
}

ValidationReport validate_game(const Game& game, std::size_t depth) {
  game.check_well_formed();
  ValidationReport report;
  RelationShape shape(game.indist);
  report.verdicts.push_back(passed(axiom::kSameLength));
  report.verdicts.push_back(check_reflexive(game));
  report.verdicts.push_back(check_symmetric(game));
  report.verdicts.push_back(check_transitive(game));
  report.verdicts.push_back(check_prefix_closed(game, shape));
  report.verdicts.push_back(check_action_visible(game, shape));
  report.verdicts.push_back(check_information_consistent(game));

  if (depth > 0) {
    report.cross_check_depth = depth;
    auto brute = brute_force_axioms(game, enumerate_relation(game.indist, depth));
    for (const auto& exact : report.verdicts) {
      auto it = std::find_if(brute.begin(), brute.end(), [&](const Verdict& b) { return b.check == exact.check; });
      if (it == brute.end()) continue;
      bool disagree;
      if (exact.passed) {
        disagree = !it->passed;
      } else {
        disagree = exact.witness->left.size() <= depth && it->passed;
      }
      if (disagree) report.cross_check_disagreements.push_back(exact.check);
    }
  }
  return report;
}

}  // namespace rig
