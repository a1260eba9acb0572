#include "rig/probability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <exception>
#include <map>
#include <random>
#include <thread>

#include "rig/errors.hpp"

namespace rig {

std::size_t ProductChain::add_state(std::string label, bool is_target) {
  labels.push_back(std::move(label));
  out.emplace_back();
  target.push_back(is_target);
  return labels.size() - 1;
}

void ProductChain::add_edge(std::size_t s, std::size_t t, const Rational& p) {
  for (auto& [to, q] : out[s]) {
    if (to == t) {
      q += p;
      return;
    }
  }
  out[s].emplace_back(t, p);
}

namespace {

using Triple = std::array<StateId, 3>;

/// Breadth-first construction of a chain over keyed states. `expand(key, emit)` calls
/// `emit(probability, successor)`.
template <class Key, class Label, class IsTarget, class Expand>
ProductChain explore_chain(const Key& start, Label label, IsTarget is_target, Expand expand, bool absorbing) {
  ProductChain chain;
  std::map<Key, std::size_t> index;
  std::deque<Key> queue;
  auto intern = [&](const Key& k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    std::size_t id = chain.add_state(label(k), is_target(k));
    index.emplace(k, id);
    queue.push_back(k);
    return id;
  };
  chain.initial = intern(start);
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    std::size_t s = index.at(k);
    if (absorbing && chain.target[s]) {
      chain.add_edge(s, s, 1);
      continue;
    }
    expand(k, [&](const Rational& p, const Key& next) {
      if (p == 0) return;
      std::size_t t = intern(next);
      chain.add_edge(s, t, p);
    });
  }
  return chain;
}

void require_morphism(const Arena& arena) {
  if (arena.morphism().size() != arena.num_states()) {
    throw InputError("this operation needs an arena built from a game and a morphism");
  }
}

}  // namespace

ProductChain build_chain(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                         bool absorbing_targets) {
  const auto& q = game.coloring;
  const auto& act = game.actmap;
  return explore_chain(
      Triple{alpha.initial, beta.initial, q.initial},
      [&](const Triple& k) { return alpha.memory[k[0]] + "|" + beta.memory[k[1]] + "|" + q.states[k[2]]; },
      [&](const Triple& k) { return q.output[k[2]] == 1; },
      [&](const Triple& k, auto emit) {
        for (ActionId a = 0; a < act.num_actions(); ++a) {
          const Rational& pa = alpha.player_emit[k[0]][a];
          if (pa == 0) continue;
          for (MoveId c : act.moves_of(a)) {
            emit(pa * beta.env_emit[k[1]][a][c], Triple{alpha.update[k[0]][c], beta.update[k[1]][c], q.delta[k[2]][c]});
          }
        }
      },
      absorbing_targets);
}

ProductChain abstract_chain(const Arena& arena, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                            StateId p_start, bool absorbing_targets) {
  require_morphism(arena);
  const auto& m = arena.morphism();
  const auto& act = arena.game().actmap;
  return explore_chain(
      Triple{alpha.initial, beta.initial, p_start},
      [&](const Triple& k) { return alpha.memory[k[0]] + "|" + beta.memory[k[1]] + "|" + m.states[k[2]]; },
      [&](const Triple& k) { return arena.targets().contains(k[2]); },
      [&](const Triple& k, auto emit) {
        for (ActionId a = 0; a < act.num_actions(); ++a) {
          const Rational& pa = alpha.player_emit[k[0]][a];
          if (pa == 0) continue;
          for (MoveId c : act.moves_of(a)) {
            emit(pa * beta.env_emit[k[1]][a][c], Triple{alpha.update[k[0]][c], beta.update[k[1]][c], m.delta[k[2]][c]});
          }
        }
      },
      absorbing_targets);
}

ProductChain positional_chain(const Arena& arena, const FiniteMemoryStrategy& sigma, std::span<const MoveId> choice,
                              StateId p_start, bool absorbing_targets) {
  require_morphism(arena);
  const auto& m = arena.morphism();
  const std::size_t n = arena.num_states(), na = arena.num_actions();
  using Key = std::pair<StateId, StateId>;
  return explore_chain(
      Key{sigma.initial, p_start}, [&](const Key& k) { return sigma.memory[k.first] + "|" + m.states[k.second]; },
      [&](const Key& k) { return arena.targets().contains(k.second); },
      [&](const Key& k, auto emit) {
        for (ActionId a = 0; a < na; ++a) {
          const Rational& pa = sigma.player_emit[k.first][a];
          if (pa == 0) continue;
          MoveId c = choice[(k.first * n + k.second) * na + a];
          emit(pa, Key{sigma.update[k.first][c], m.delta[k.second][c]});
        }
      },
      absorbing_targets);
}

std::vector<Rational> reach_prob_horizons(const ProductChain& chain, std::size_t k) {
  std::vector<Rational> out;
  out.reserve(k + 1);
  std::vector<Rational> mass(chain.size());
  mass[chain.initial] = 1;
  Rational reached = 0;
  for (std::size_t step = 0;; ++step) {
    for (std::size_t s = 0; s < chain.size(); ++s) {
      if (chain.target[s] && mass[s] != 0) {
        reached += mass[s];
        mass[s] = 0;
      }
    }
    out.push_back(reached);
    if (step == k) break;
    std::vector<Rational> next(chain.size());
    for (std::size_t s = 0; s < chain.size(); ++s) {
      if (mass[s] == 0) continue;
      for (const auto& [t, p] : chain.out[s]) next[t] += mass[s] * p;
    }
    mass = std::move(next);
  }
  return out;
}

Rational reach_prob_horizon(const ProductChain& chain, std::size_t k) { return reach_prob_horizons(chain, k).back(); }

Rational reach_prob_limit(const ProductChain& chain) {
  const std::size_t n = chain.size();
  // States that can reach a target.
  std::vector<std::vector<std::size_t>> back(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [t, p] : chain.out[s]) back[t].push_back(s);
  std::vector<bool> live(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s)
    if (chain.target[s]) {
      live[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::size_t t = queue.front();
    queue.pop_front();
    for (std::size_t s : back[t])
      if (!live[s]) {
        live[s] = true;
        queue.push_back(s);
      }
  }
  if (chain.target[chain.initial]) return 1;
  if (!live[chain.initial]) return 0;
  std::vector<std::size_t> var(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> vars;
  for (std::size_t s = 0; s < n; ++s)
    if (live[s] && !chain.target[s]) {
      var[s] = vars.size();
      vars.push_back(s);
    }
  const std::size_t k = vars.size();
  // (I - P) x = b over the transient live states.
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    a[i][i] = 1;
    for (const auto& [t, p] : chain.out[vars[i]]) {
      if (chain.target[t]) {
        a[i][k] += p;
      } else if (live[t]) {
        a[i][var[t]] -= p;
      }
    }
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && a[pivot][col] == 0) ++pivot;
    if (pivot == k) throw InternalError("singular absorption system");
    std::swap(a[col], a[pivot]);
    Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j <= k; ++j) a[col][j] *= inv;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j <= k; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return a[var[chain.initial]][k];
}

std::vector<std::vector<std::size_t>> bottom_sccs(const ProductChain& chain) {
  const std::size_t n = chain.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none), low(n, 0), comp(n, none);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;
  // Iterative Tarjan from the initial state.
  std::vector<std::pair<std::size_t, std::size_t>> call{{chain.initial, 0}};
  index[chain.initial] = low[chain.initial] = counter++;
  stack.push_back(chain.initial);
  on_stack[chain.initial] = true;
  while (!call.empty()) {
    auto& [v, i] = call.back();
    if (i < chain.out[v].size()) {
      std::size_t w = chain.out[v][i++].first;
      if (index[w] == none) {
        index[w] = low[w] = counter++;
        stack.push_back(w);
        on_stack[w] = true;
        call.emplace_back(w, 0);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
      continue;
    }
    std::size_t done = v;
    call.pop_back();
    if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    if (low[done] == index[done]) {
      std::vector<std::size_t> c;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps.size();
        c.push_back(w);
      } while (w != done);
      std::sort(c.begin(), c.end());
      comps.push_back(std::move(c));
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t id = 0; id < comps.size(); ++id) {
    bool bottom = true;
    for (std::size_t s : comps[id])
      for (const auto& [t, p] : chain.out[s])
        if (comp[t] != id) bottom = false;
    if (bottom) out.push_back(comps[id]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool every_bottom_scc_hits_target(const ProductChain& chain) {
  for (const auto& c : bottom_sccs(chain)) {
    if (std::none_of(c.begin(), c.end(), [&](std::size_t s) { return chain.target[s]; })) return false;
  }
  return true;
}

}  // namespace

bool almost_surely_reaches(const ProductChain& chain) { return every_bottom_scc_hits_target(chain); }

bool almost_surely_buchi(const ProductChain& chain) { return every_bottom_scc_hits_target(chain); }

Rational cylinder_prob(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                       std::span<const MoveId> rho, std::span<const MoveId> tau) {
  for (MoveId c : rho)
    if (c >= game.actmap.num_moves()) throw InputError("unknown move id " + std::to_string(c));
  for (MoveId c : tau)
    if (c >= game.actmap.num_moves()) throw InputError("unknown move id " + std::to_string(c));
  if (rho.size() <= tau.size()) {
    return std::equal(rho.begin(), rho.end(), tau.begin()) ? Rational(1) : Rational(0);
  }
  if (!std::equal(tau.begin(), tau.end(), rho.begin())) return 0;
  StateId ma = alpha.run(rho.first(tau.size()));
  StateId mb = beta.run(rho.first(tau.size()));
  Rational prob = 1;
  for (std::size_t i = tau.size(); i < rho.size() && prob != 0; ++i) {
    MoveId c = rho[i];
    ActionId a = game.actmap.act(c);
    prob *= alpha.player_emit[ma][a] * beta.env_emit[mb][a][c];
    ma = alpha.update[ma][c];
    mb = beta.update[mb][c];
  }
  return prob;
}

Rational worst_case_reach_horizon(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                                  std::size_t k) {
  require_morphism(arena);
  const auto& m = arena.morphism();
  const auto& act = arena.game().actmap;
  const std::size_t n = arena.num_states(), mem = sigma.size();
  std::vector<Rational> v(mem * n);
  for (StateId s = 0; s < mem; ++s)
    for (StateId p = 0; p < n; ++p) v[s * n + p] = arena.targets().contains(p) ? 1 : 0;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Rational> next(mem * n);
    for (StateId s = 0; s < mem; ++s)
      for (StateId p = 0; p < n; ++p) {
        if (arena.targets().contains(p)) {
          next[s * n + p] = 1;
          continue;
        }
        Rational total = 0;
        for (ActionId a = 0; a < act.num_actions(); ++a) {
          const Rational& pa = sigma.player_emit[s][a];
          if (pa == 0) continue;
          std::optional<Rational> worst;
          for (MoveId c : act.moves_of(a)) {
            const Rational& val = v[sigma.update[s][c] * n + m.delta[p][c]];
            if (!worst || val < *worst) worst = val;
          }
          total += pa * *worst;
        }
        next[s * n + p] = total;
      }
    v = std::move(next);
  }
  return v[sigma.initial * n + p_start];
}

PlayerPolicy as_player_policy(const FiniteMemoryStrategy& alpha) {
  return [alpha](std::span<const MoveId> history) { return alpha.player_emit[alpha.run(history)]; };
}

EnvPolicy as_env_policy(const FiniteMemoryStrategy& beta) {
  return [beta](std::span<const MoveId> history, ActionId a) { return beta.env_emit[beta.run(history)][a]; };
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(seed ^ splitmix(index));
}

std::size_t sample_index(std::uint64_t draw, std::span<const Rational> dist, std::span<const std::size_t> order) {
  static const mpz_class two53 = mpz_class(1) << 53;
  Rational u(mpz_class(static_cast<unsigned long>(draw >> 11)), two53);
  Rational cumulative = 0;
  std::size_t last = order.size();
  for (std::size_t i : order) {
    if (dist[i] == 0) continue;
    cumulative += dist[i];
    last = i;
    if (u < cumulative) return i;
  }
  if (last == order.size()) throw InputError("sampling from an empty distribution");
  return last;
}

namespace {

std::vector<std::size_t> name_order(const std::vector<std::string>& names) {
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
  return order;
}

/// `make_player()` / `make_env()` produce per-play objects with `dist(history[, a])` returning
/// the distribution and `observe(c)` advancing internal memory.
template <class MakePlayer, class MakeEnv>
SimulationResult run_simulation(const Game& game, const SimulationOptions& options, MakePlayer make_player,
                                MakeEnv make_env) {
  if (options.rounds == 0 || options.samples == 0) throw InputError("rounds and samples must be positive");
  const auto& act = game.actmap;
  const auto& q = game.coloring;
  const auto action_order = name_order(act.action_names());
  const auto move_order = name_order(act.move_names());
  const std::size_t keep = std::min(options.transcripts, options.samples);
  std::vector<History> transcripts(keep);

  auto play = [&](std::size_t sample) {
    std::mt19937_64 rng(substream_seed(options.seed, sample));
    auto player = make_player();
    auto env = make_env();
    History history;
    StateId s = q.initial;
    bool hit = q.output[s] == 1;
    for (std::size_t step = 0; step < options.rounds && !hit; ++step) {
      const auto& da = player.dist(history);
      ActionId a = sample_index(rng(), da, action_order);
      const auto& dc = env.dist(history, a);
      MoveId c = sample_index(rng(), dc, move_order);
      if (act.act(c) != a) throw InputError("environment played a move not supported by the action");
      history.push_back(c);
      player.observe(c);
      env.observe(c);
      s = q.delta[s][c];
      hit = q.output[s] == 1;
    }
    if (sample < keep) transcripts[sample] = history;
    return hit;
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, options.samples));
  std::vector<std::size_t> hits(threads, 0);
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](std::size_t t) {
    try {
      for (std::size_t i = t; i < options.samples; i += threads)
        if (play(i)) ++hits[t];
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  SimulationResult result;
  result.samples = options.samples;
  for (std::size_t h : hits) result.hits += h;
  result.estimate = static_cast<double>(result.hits) / static_cast<double>(result.samples);
  result.std_error = std::sqrt(result.estimate * (1 - result.estimate) / static_cast<double>(result.samples));
  result.transcripts = std::move(transcripts);
  return result;
}

}  // namespace

SimulationResult simulate(const Game& game, const PlayerPolicy& alpha, const EnvPolicy& beta,
                          const SimulationOptions& options) {
  struct PlayerRun {
    const PlayerPolicy* f;
    std::vector<Rational> cache;
    const std::vector<Rational>& dist(const History& h) { return cache = (*f)(h); }
    void observe(MoveId) {}
  };
  struct EnvRun {
    const EnvPolicy* f;
    std::vector<Rational> cache;
    const std::vector<Rational>& dist(const History& h, ActionId a) { return cache = (*f)(h, a); }
    void observe(MoveId) {}
  };
  return run_simulation(
      game, options, [&] { return PlayerRun{&alpha, {}}; }, [&] { return EnvRun{&beta, {}}; });
}

SimulationResult simulate(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                          const SimulationOptions& options) {
  struct PlayerRun {
    const FiniteMemoryStrategy* s;
    StateId m;
    const std::vector<Rational>& dist(const History&) const { return s->player_emit[m]; }
    void observe(MoveId c) { m = s->update[m][c]; }
  };
  struct EnvRun {
    const FiniteMemoryStrategy* s;
    StateId m;
    const std::vector<Rational>& dist(const History&, ActionId a) const { return s->env_emit[m][a]; }
    void observe(MoveId c) { m = s->update[m][c]; }
  };
  return run_simulation(
      game, options, [&] { return PlayerRun{&alpha, alpha.initial}; }, [&] { return EnvRun{&beta, beta.initial}; });
}

}  // namespace rig
