#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rig/game.hpp"
#include "rig/rational.hpp"
#include "rig/solver.hpp"
#include "rig/strategy.hpp"

namespace rig {

/// A finite Markov chain with exact transition probabilities and a target flag per state.
struct ProductChain {
  std::vector<std::string> labels;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> out;
  std::vector<bool> target;
  std::size_t initial = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t add_state(std::string label, bool is_target);
  /// Adds probability to the edge s → t, merging parallel edges.
  void add_edge(std::size_t s, std::size_t t, const Rational& p);
};

/// Chain over reachable (player memory, environment memory, Moore state) triples. With
/// `absorbing_targets` every target state gets a self-loop instead of its successors.
ProductChain build_chain(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                         bool absorbing_targets = true);

/// Chain over reachable (player memory, environment memory, abstract state) triples starting at
/// (alpha.initial, beta.initial, p_start); targets are P_F. Needs an arena built from a game.
ProductChain abstract_chain(const Arena& arena, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                            StateId p_start, bool absorbing_targets = true);

/// Chain over (player memory, abstract state) where the environment answers action a at
/// (mem, p) with the move choice[(mem * |P| + p) * |A| + a].
ProductChain positional_chain(const Arena& arena, const FiniteMemoryStrategy& sigma, std::span<const MoveId> choice,
                              StateId p_start, bool absorbing_targets = true);

/// Probability of visiting a target within k steps (a step is one move); a target start counts.
Rational reach_prob_horizon(const ProductChain& chain, std::size_t k);
/// Probabilities for every horizon 0..k in one pass.
std::vector<Rational> reach_prob_horizons(const ProductChain& chain, std::size_t k);

/// Exact Pr(Reach) by a rational linear solve on the states that can reach a target.
Rational reach_prob_limit(const ProductChain& chain);

/// Bottom strongly connected components reachable from the initial state, each sorted.
std::vector<std::vector<std::size_t>> bottom_sccs(const ProductChain& chain);

/// Pr(Reach) = 1 iff every reachable bottom SCC contains a target.
bool almost_surely_reaches(const ProductChain& chain);
/// Targets visited infinitely often with probability 1 iff every reachable bottom SCC
/// contains a target (chain built without absorbing targets).
bool almost_surely_buchi(const ProductChain& chain);

/// Pr_τ(Cyl(ρ)) under finite-memory α, β: 1 when ρ is a prefix of τ, the product of the
/// action and move probabilities along ρ when τ is a prefix of ρ, and 0 otherwise.
Rational cylinder_prob(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                       std::span<const MoveId> rho, std::span<const MoveId> tau);

/// min over all environment strategies of the probability that σ reaches P_F within k steps
/// from (σ.initial, p_start), by backward induction on (memory, abstract state).
Rational worst_case_reach_horizon(const Arena& arena, const FiniteMemoryStrategy& sigma, StateId p_start,
                                  std::size_t k);

/// History-dependent strategies for the sampler. Distributions are indexed by action / move id.
using PlayerPolicy = std::function<std::vector<Rational>(std::span<const MoveId> history)>;
using EnvPolicy = std::function<std::vector<Rational>(std::span<const MoveId> history, ActionId action)>;

PlayerPolicy as_player_policy(const FiniteMemoryStrategy& alpha);
EnvPolicy as_env_policy(const FiniteMemoryStrategy& beta);

struct SimulationOptions {
  /// Steps per sampled play.
  std::size_t rounds = 30;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// How many transcripts (the first ones by sample index) to keep.
  std::size_t transcripts = 0;
};

struct SimulationResult {
  std::size_t samples = 0;
  std::size_t hits = 0;
  double estimate = 0;
  /// Standard error of the estimate.
  double std_error = 0;
  std::vector<History> transcripts;
};

/// Seed of the generator for sample `index`: SplitMix64 applied to seed ⊕ mix(index). Each
/// sample uses its own std::mt19937_64, so results do not depend on the thread count.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Index of the sampled outcome: u = (x >> 11) / 2^53 for x drawn from the generator, and the
/// first index whose exact cumulative probability exceeds u, scanning `order`.
std::size_t sample_index(std::uint64_t draw, std::span<const Rational> dist, std::span<const std::size_t> order);

/// Monte Carlo estimate of Pr(Reach within `rounds` steps). Supports are scanned in
/// lexicographic order of action / move names.
SimulationResult simulate(const Game& game, const PlayerPolicy& alpha, const EnvPolicy& beta,
                          const SimulationOptions& options);
SimulationResult simulate(const Game& game, const FiniteMemoryStrategy& alpha, const FiniteMemoryStrategy& beta,
                          const SimulationOptions& options);

}  // namespace rig
