#include "rig/solver.hpp"

#include <algorithm>

#include "rig/errors.hpp"
#include "rig/validation.hpp"

namespace rig {

Arena::Arena(std::vector<std::string> state_names, std::vector<std::string> action_names, StateId initial,
             std::vector<std::vector<std::vector<StateId>>> successors, ApproxRelation approx, TargetSet targets)
    : state_names_(std::move(state_names)),
      action_names_(std::move(action_names)),
      initial_(initial),
      successors_(std::move(successors)),
      approx_(std::move(approx)),
      targets_(std::move(targets)) {
  const std::size_t n = num_states();
  if (n == 0 || num_actions() == 0) throw InputError("arena needs at least one state and one action");
  if (initial_ >= n) throw InputError("initial state out of range");
  if (successors_.size() != n || approx_.size() != n || targets_.members.size() != n) {
    throw InputError("arena components disagree on the number of states");
  }
  predecessors_.assign(n, {});
  for (StateId p = 0; p < n; ++p) {
    if (successors_[p].size() != num_actions()) throw InputError("successor table must cover every action");
    for (ActionId a = 0; a < num_actions(); ++a) {
      auto& succ = successors_[p][a];
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      if (succ.empty()) throw InputError("action " + action_names_[a] + " has no move at " + state_names_[p]);
      for (StateId t : succ) {
        if (t >= n) throw InputError("successor out of range");
        predecessors_[t].push_back(pair_index(p, a));
      }
    }
  }
}

Arena Arena::build(const Game& input_game, const Morphism& input_morphism, ObjectiveKind objective) {
  require_supported(objective);
  input_game.check_well_formed();
  input_morphism.check_well_formed(input_game.actmap.num_moves());
  for (Color c : input_game.coloring.output) {
    if (c != 0 && c != 1) throw InputError("the solver requires colors in {0,1}", "moore.output");
  }
  auto report = validate_game(input_game);
  for (const auto& v : report.verdicts) {
    if (!v.passed) throw ValidationError("game axiom " + v.check + " failed: " + v.detail);
  }
  Game game = input_game;
  Morphism m = input_morphism.trimmed();
  if (objective == ObjectiveKind::Reach) std::tie(game, m) = latch_targets(game, m);
  require_rectangular(game, m);
  ApproxRelation approx = compute_approx(game, m);
  TargetSet targets = compute_targets(game, m, approx, objective == ObjectiveKind::Reach);

  const auto& actmap = game.actmap;
  std::vector<std::vector<std::vector<StateId>>> succ(m.size(), std::vector<std::vector<StateId>>(actmap.num_actions()));
  for (StateId p = 0; p < m.size(); ++p)
    for (MoveId c = 0; c < actmap.num_moves(); ++c) succ[p][actmap.act(c)].push_back(m.delta[p][c]);
  Arena arena(m.states, actmap.action_names(), m.initial, std::move(succ), std::move(approx), std::move(targets));
  arena.morphism_ = std::move(m);
  arena.game_ = std::move(game);
  return arena;
}

Bitset Arena::target_bits() const {
  Bitset out(universe_size());
  for (StateId p = 0; p < num_states(); ++p)
    if (targets_.members[p]) out.set(p);
  return out;
}

std::string Arena::element_name(std::size_t element) const {
  if (is_state(element)) return state_names_[element];
  return state_names_[state_of(element)] + "," + action_names_[action_of(element)];
}

Bitset pre(const Arena& arena, const Bitset& x) {
  Bitset out(arena.universe_size());
  for (StateId p = 0; p < arena.num_states(); ++p) {
    for (ActionId a = 0; a < arena.num_actions(); ++a) {
      std::size_t e = arena.pair_index(p, a);
      if (x.test(e)) out.set(p);
      auto succ = arena.successors(p, a);
      if (std::all_of(succ.begin(), succ.end(), [&](StateId t) { return x.test(t); })) out.set(e);
    }
  }
  return out;
}

Bitset interior(const Arena& arena, const Bitset& y) {
  Bitset out(arena.universe_size());
  for (const auto& cls : arena.approx().classes()) {
    if (std::all_of(cls.begin(), cls.end(), [&](StateId p) { return y.test(p); })) {
      for (StateId p : cls) out.set(p);
    }
    for (ActionId a = 0; a < arena.num_actions(); ++a) {
      if (std::all_of(cls.begin(), cls.end(), [&](StateId p) { return y.test(arena.pair_index(p, a)); })) {
        for (StateId p : cls) out.set(arena.pair_index(p, a));
      }
    }
  }
  return out;
}

Bitset closure(const Arena& arena, const Bitset& y) {
  Bitset complement = y;
  complement.flip();
  Bitset out = interior(arena, complement);
  out.flip();
  return out;
}

std::size_t FixpointResult::max_rank() const {
  std::size_t r = 0;
  for (std::size_t v : ranks) r = std::max(r, v);
  return r;
}

namespace {

struct InnerRun {
  Bitset x;
  std::vector<std::size_t> ranks;
  std::size_t layers = 0;
};

/// μX. I ∩ (Pre(X) ∪ T), computed layer by layer: layer i holds X_i \ X_{i-1}.
InnerRun least_fixpoint(const Arena& arena, const Bitset& inside, const Bitset& targets) {
  const std::size_t n = arena.num_states();
  InnerRun run{Bitset(arena.universe_size()), std::vector<std::size_t>(arena.universe_size(), 0), 0};
  std::vector<std::size_t> missing(arena.universe_size(), 0);
  for (StateId p = 0; p < n; ++p)
    for (ActionId a = 0; a < arena.num_actions(); ++a)
      missing[arena.pair_index(p, a)] = arena.successors(p, a).size();

  Bitset queued(arena.universe_size());
  std::vector<std::size_t> layer;
  for (std::size_t e = targets.find_first(); e != Bitset::npos; e = targets.find_next(e)) {
    if (inside.test(e)) {
      layer.push_back(e);
      queued.set(e);
    }
  }
  while (!layer.empty()) {
    ++run.layers;
    for (std::size_t e : layer) {
      run.x.set(e);
      run.ranks[e] = run.layers;
    }
    std::vector<std::size_t> next;
    auto offer = [&](std::size_t e) {
      if (inside.test(e) && !queued.test(e)) {
        queued.set(e);
        next.push_back(e);
      }
    };
    for (std::size_t e : layer) {
      if (arena.is_state(e)) {
        for (std::size_t pair : arena.predecessors(e)) {
          if (--missing[pair] == 0) offer(pair);
        }
      } else {
        offer(arena.state_of(e));
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  return run;
}

FixpointResult nested_fixpoint(const Arena& arena, ObjectiveKind objective) {
  const std::size_t u = arena.universe_size();
  const Bitset final_targets = arena.target_bits();
  FixpointResult result;
  result.objective = objective;
  Bitset y(u);
  y.set();
  InnerRun run;
  for (;;) {
    Bitset targets = final_targets;
    if (objective == ObjectiveKind::Buchi) targets &= pre(arena, y);
    run = least_fixpoint(arena, interior(arena, y), targets);
    ++result.outer_iterations;
    result.inner_iterations.push_back(run.layers);
    if (run.x == y) break;
    y = run.x;
    if (result.outer_iterations > u + 1) throw InternalError("outer fixpoint failed to stabilize");
  }
  result.y_star = std::move(run.x);
  result.ranks = std::move(run.ranks);
  result.action_sets.assign(arena.num_states(), {});
  for (StateId p = 0; p < arena.num_states(); ++p) {
    if (!result.y_star.test(p)) continue;
    for (ActionId a = 0; a < arena.num_actions(); ++a)
      if (result.y_star.test(arena.pair_index(p, a))) result.action_sets[p].push_back(a);
    // Reach targets are absorbing, so every action keeps them inside Y*.
    if (result.action_sets[p].empty()) throw InternalError("empty action set at " + arena.state_names()[p]);
  }
  result.winning = result.y_star.test(arena.initial());
  return result;
}

}  // namespace

FixpointResult solve_reach(const Arena& arena) { return nested_fixpoint(arena, ObjectiveKind::Reach); }

bool is_almost_sure_winning(const Arena& arena, const FixpointResult& result) {
  return result.y_star.test(arena.initial());
}

FixpointResult solve_buchi(const Arena& arena) { return nested_fixpoint(arena, ObjectiveKind::Buchi); }

void require_supported(ObjectiveKind objective) {
  switch (objective) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi: return;
    case ObjectiveKind::Safe:
      throw InputError(
          "safety reduces to sure winning with pure strategies; it is not handled by this solver", "objective");
    case ObjectiveKind::CoBuchi:
      throw InputError("almost-sure co-Büchi is undecidable in general", "objective");
  }
  throw InputError("unknown objective", "objective");
}

FixpointResult solve(const Arena& arena, ObjectiveKind objective) {
  require_supported(objective);
  return objective == ObjectiveKind::Reach ? solve_reach(arena) : solve_buchi(arena);
}

}  // namespace rig
