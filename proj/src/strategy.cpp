#include "rig/strategy.hpp"

#include <algorithm>

#include "rig/errors.hpp"
#include "rig/probability.hpp"

namespace rig {

std::string to_string(Role role) { return role == Role::Player ? "player" : "environment"; }

StateId FiniteMemoryStrategy::run(std::span<const MoveId> history) const {
  StateId m = initial;
  for (MoveId c : history) m = update.at(m).at(c);
  return m;
}

void FiniteMemoryStrategy::check(const ActMap& actmap) const {
  const std::size_t na = actmap.num_actions(), nm = actmap.num_moves();
  if (memory.empty()) throw InputError("strategy has no memory states", "memory");
  if (initial >= size()) throw InputError("initial memory state out of range", "initial");
  if (update.size() != size()) throw InputError("update must cover every memory state", "update");
  for (StateId m = 0; m < size(); ++m) {
    if (update[m].size() != nm) throw InputError("update is not total", "update." + memory[m]);
    for (StateId t : update[m])
      if (t >= size()) throw InputError("update target out of range", "update." + memory[m]);
  }
  auto check_dist = [](const std::vector<Rational>& d, const std::string& path) {
    Rational total = 0;
    for (const auto& p : d) {
      if (p < 0 || p > 1) throw InputError("probability outside [0,1]", path);
      total += p;
    }
    if (total != 1) throw InputError("probabilities sum to " + to_string(total) + ", not 1", path);
  };
  if (role == Role::Player) {
    if (player_emit.size() != size()) throw InputError("emit must cover every memory state", "emit");
    for (StateId m = 0; m < size(); ++m) {
      if (player_emit[m].size() != na) throw InputError("emit must cover every action", "emit." + memory[m]);
      check_dist(player_emit[m], "emit." + memory[m]);
    }
  } else {
    if (env_emit.size() != size()) throw InputError("emit must cover every memory state", "emit");
    for (StateId m = 0; m < size(); ++m) {
      if (env_emit[m].size() != na) throw InputError("emit must cover every action", "emit." + memory[m]);
      for (ActionId a = 0; a < na; ++a) {
        const std::string path = "emit." + memory[m] + "." + actmap.action_name(a);
        if (env_emit[m][a].size() != nm) throw InputError("emit must cover every move", path);
        check_dist(env_emit[m][a], path);
        for (MoveId c = 0; c < nm; ++c) {
          if (env_emit[m][a][c] != 0 && actmap.act(c) != a) {
            throw InputError("move " + actmap.move_name(c) + " does not support the action", path);
          }
        }
      }
    }
  }
}

FiniteMemoryStrategy support_strategy(const Morphism& m, const ActMap& actmap,
                                      const std::vector<std::vector<ActionId>>& support) {
  FiniteMemoryStrategy s;
  s.role = Role::Player;
  s.memory = m.states;
  s.initial = m.initial;
  s.update = m.delta;
  s.player_emit.assign(m.size(), std::vector<Rational>(actmap.num_actions(), 0));
  for (StateId p = 0; p < m.size(); ++p) {
    if (support.at(p).empty()) throw InputError("empty support at " + m.states[p]);
    Rational share(1, support[p].size());
    for (ActionId a : support[p]) s.player_emit[p][a] = share;
  }
  return s;
}

FiniteMemoryStrategy extract_strategy(const Arena& arena, const FixpointResult& result, const Morphism& m) {
  if (!is_almost_sure_winning(arena, result)) {
    throw NotWinningError("the initial abstract state " + arena.state_names()[arena.initial()] + " is not in Y*");
  }
  if (m.size() != arena.num_states()) throw InputError("morphism does not match the arena");
  std::vector<std::vector<ActionId>> support(m.size());
  for (StateId p = 0; p < m.size(); ++p) {
    if (result.y_star.test(p)) {
      support[p] = result.action_sets[p];
      if (support[p].empty()) throw InternalError("A_p is empty at " + m.states[p]);
    } else {
      for (ActionId a = 0; a < arena.num_actions(); ++a) support[p].push_back(a);
    }
  }
  return support_strategy(m, arena.game().actmap, support);
}

FiniteMemoryStrategy uniform_environment(const ActMap& actmap) {
  FiniteMemoryStrategy s;
  s.role = Role::Environment;
  s.memory = {"*"};
  s.initial = 0;
  s.update = {std::vector<StateId>(actmap.num_moves(), 0)};
  s.env_emit.assign(1, std::vector<std::vector<Rational>>(actmap.num_actions(),
                                                          std::vector<Rational>(actmap.num_moves(), 0)));
  for (ActionId a = 0; a < actmap.num_actions(); ++a) {
    Rational share(1, actmap.moves_of(a).size());
    for (MoveId c : actmap.moves_of(a)) s.env_emit[0][a][c] = share;
  }
  return s;
}

RankProgressReport check_rank_progress(const Arena& arena, const FixpointResult& result,
                                       const FiniteMemoryStrategy& strategy) {
  RankProgressReport report;
  const Rational floor(1, arena.num_actions());
  for (StateId p = 0; p < arena.num_states(); ++p) {
    if (!result.y_star.test(p)) continue;
    const std::size_t r = result.ranks[p];
    if (r == 1) continue;
    Rational decreasing = 0;
    for (ActionId a : result.action_sets[p]) {
      const std::size_t e = arena.pair_index(p, a);
      if (result.ranks[e] == 0 || result.ranks[e] >= r) continue;
      auto succ = arena.successors(p, a);
      bool all_lower = std::all_of(succ.begin(), succ.end(), [&](StateId t) {
        return result.ranks[t] != 0 && result.ranks[t] < result.ranks[e];
      });
      if (all_lower && p < strategy.player_emit.size()) decreasing += strategy.player_emit[p][a];
    }
    if (decreasing < report.min_decrease_probability) report.min_decrease_probability = decreasing;
    if (decreasing == 0) {
      report.ok = false;
      report.violation = "no rank-decreasing action at " + arena.state_names()[p];
      return report;
    }
    if (decreasing < floor) {
      report.ok = false;
      report.violation = "rank-decreasing probability " + to_string(decreasing) + " below 1/|A| at " +
                         arena.state_names()[p];
      return report;
    }
  }
  return report;
}

namespace {

/// Exact test of "some completion of the partially fixed positional choice keeps Pr(Reach)
/// below 1": the start can reach, with positive probability, a region where the environment
/// can avoid targets forever.
class SpoilerSearch {
 public:
  SpoilerSearch(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start, const SpoilerOptions& options)
      : arena_(arena),
        sigma_(sigma),
        m_(arena.morphism()),
        act_(arena.game().actmap),
        n_(arena.num_states()),
        na_(arena.num_actions()),
        start_(sigma.initial * arena.num_states() + p_start) {
    if (m_.size() != n_) throw InputError("spoiler search needs an arena built from a game and a morphism");
    if (sigma.role != Role::Player) throw InputError("spoiler search needs a player strategy");
    if (sigma.size() * n_ > options.max_product_states) {
      throw ResourceCapError("product of strategy memory and abstract states exceeds " +
                             std::to_string(options.max_product_states));
    }
    fixed_.assign(sigma.size() * n_ * na_, kUnset);
  }

  static constexpr MoveId kUnset = static_cast<MoveId>(-1);

  std::size_t slots() const { return fixed_.size(); }
  void fix(std::size_t slot, MoveId c) { fixed_[slot] = c; }
  void unfix(std::size_t slot) { fixed_[slot] = kUnset; }
  ActionId slot_action(std::size_t slot) const { return slot % na_; }
  const std::vector<MoveId>& choice() const { return fixed_; }

  bool spoilable() const {
    const std::size_t total = sigma_.size() * n_;
    auto target = [&](std::size_t s) { return arena_.targets().contains(s % n_); };
    auto next = [&](std::size_t s, MoveId c) { return sigma_.update[s / n_][c] * n_ + m_.delta[s % n_][c]; };
    auto allowed = [&](std::size_t s, ActionId a, MoveId c) {
      MoveId f = fixed_[s * na_ + a];
      return f == kUnset || f == c;
    };
    // Safe: non-target states where every played action has an allowed move staying inside.
    std::vector<bool> safe(total);
    for (std::size_t s = 0; s < total; ++s) safe[s] = !target(s);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < total; ++s) {
        if (!safe[s]) continue;
        for (ActionId a = 0; a < na_ && safe[s]; ++a) {
          if (sigma_.player_emit[s / n_][a] == 0) continue;
          bool stay = false;
          for (MoveId c : act_.moves_of(a))
            if (allowed(s, a, c) && safe[next(s, c)]) stay = true;
          if (!stay) {
            safe[s] = false;
            changed = true;
          }
        }
      }
    }
    // Positive reachability of Safe.
    std::vector<bool> good = safe;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < total; ++s) {
        if (good[s] || target(s)) continue;
        for (ActionId a = 0; a < na_ && !good[s]; ++a) {
          if (sigma_.player_emit[s / n_][a] == 0) continue;
          for (MoveId c : act_.moves_of(a))
            if (allowed(s, a, c) && good[next(s, c)]) {
              good[s] = true;
              changed = true;
              break;
            }
        }
      }
    }
    return good[start_];
  }

 private:
  const Arena& arena_;
  const FiniteMemoryStrategy& sigma_;
  const Morphism& m_;
  const ActMap& act_;
  std::size_t n_, na_;
  std::size_t start_;
  std::vector<MoveId> fixed_;
};

FiniteMemoryStrategy spoiler_machine(const Arena& arena, const FiniteMemoryStrategy& sigma,
                                     const std::vector<MoveId>& choice, StateId p_start) {
  const auto& m = arena.morphism();
  const auto& act = arena.game().actmap;
  const std::size_t n = arena.num_states(), na = arena.num_actions();
  FiniteMemoryStrategy s;
  s.role = Role::Environment;
  for (StateId mem = 0; mem < sigma.size(); ++mem)
    for (StateId p = 0; p < n; ++p) s.memory.push_back(sigma.memory[mem] + "|" + m.states[p]);
  s.initial = sigma.initial * n + p_start;
  s.update.assign(s.memory.size(), std::vector<StateId>(act.num_moves()));
  s.env_emit.assign(s.memory.size(),
                    std::vector<std::vector<Rational>>(na, std::vector<Rational>(act.num_moves(), 0)));
  for (StateId mem = 0; mem < sigma.size(); ++mem)
    for (StateId p = 0; p < n; ++p) {
      const std::size_t k = mem * n + p;
      for (MoveId c = 0; c < act.num_moves(); ++c) s.update[k][c] = sigma.update[mem][c] * n + m.delta[p][c];
      for (ActionId a = 0; a < na; ++a) s.env_emit[k][a][choice[k * na + a]] = 1;
    }
  return s;
}

}  // namespace

std::optional<Spoiler> build_spoiler(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                                     const SpoilerOptions& options) {
  SpoilerSearch search(arena, sigma, p_start, options);
  if (!search.spoilable()) return std::nullopt;
  const auto& act = arena.game().actmap;
  for (std::size_t slot = 0; slot < search.slots(); ++slot) {
    bool placed = false;
    for (MoveId c : act.moves_of(search.slot_action(slot))) {
      search.fix(slot, c);
      if (search.spoilable()) {
        placed = true;
        break;
      }
    }
    if (!placed) throw InternalError("spoiler completion lost while fixing slot " + std::to_string(slot));
  }
  Spoiler out;
  out.choice = search.choice();
  out.strategy = spoiler_machine(arena, sigma, out.choice, p_start);
  out.reach_probability = reach_prob_limit(positional_chain(arena, sigma, out.choice, p_start));
  if (out.reach_probability >= 1) throw InternalError("spoiler does not reduce the reach probability");
  return out;
}

bool verify_almost_sure(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                        const SpoilerOptions& options) {
  return !SpoilerSearch(arena, sigma, p_start, options).spoilable();
}

}  // namespace rig
