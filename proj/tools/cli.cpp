#include "cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rig/demos.hpp"
#include "rig/errors.hpp"
#include "rig/io.hpp"
#include "rig/probability.hpp"
#include "rig/refinement.hpp"
#include "rig/reif.hpp"
#include "rig/solver.hpp"
#include "rig/strategy.hpp"

namespace rig::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InternalError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

struct Options {
  std::string game, morphism, strategy, env_strategy, objective = "reach";
  std::string in, out, out_game, out_morphism, out_dir, certificate, check = "psi", g_file, h_file, demo;
  std::uint64_t seed = 1;
  std::size_t threads = 1, max_universe = 1u << 20, max_product = 1u << 16, grid = 8, max_grid = 256;
  std::size_t rounds = 30, samples = 10000, horizon = 30, depth = 0, transcripts = 0;
  bool exact = false;
};

/// Collects the reproducibility manifest while a command loads its inputs.
class Session {
 public:
  Session(std::string command, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), out_(out), err_(err), start_(std::chrono::steady_clock::now()) {}

  Json load(const std::string& role, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Json j = parse_json(text, path);
    inputs_[role] = Json{{"path", path}, {"sha256", sha256_hex(text)}};
    if (j.is_object() && j.contains("format") && j["format"].is_string()) formats_[role] = j["format"];
    return j;
  }

  template <typename F>
  auto parse(const std::string& path, F&& reader) {
    try {
      return reader();
    } catch (const InputError& e) {
      throw InputError(std::string(e.what()), path);
    }
  }

  void set(const std::string& key, Json value) { params_[key] = std::move(value); }

  Json manifest() const {
    Json m{{"command", command_}, {"tool_version", kToolVersion}, {"inputs", inputs_}, {"formats", formats_}};
    if (!params_.empty()) m["parameters"] = params_;
    return m;
  }

  /// Writes a JSON document with the manifest embedded.
  void write_file(const std::string& path, Json doc) const {
    doc["manifest"] = manifest();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write file", path);
    f << dump_json(doc);
  }

  int emit(Json result, int code) {
    Json doc{{"manifest", manifest()}};
    for (auto it = result.begin(); it != result.end(); ++it) doc[it.key()] = it.value();
    out_ << dump_json(doc);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    err_ << command_ << ": " << (code == kOk ? "ok" : "false verdict") << " (" << ms << " ms)\n";
    return code;
  }

  std::ostream& err() { return err_; }

 private:
  std::string command_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  Json inputs_ = Json::object();
  Json formats_ = Json::object();
  Json params_ = Json::object();
};

Game load_game(Session& s, const std::string& path) {
  if (path.empty()) throw InputError("--game is required");
  Json j = s.load("game", path);
  return s.parse(path, [&] { return game_from_json(j); });
}

Morphism load_morphism(Session& s, const std::string& path, const ActMap& actmap) {
  if (path.empty()) throw InputError("--morphism is required");
  Json j = s.load("morphism", path);
  return s.parse(path, [&] { return morphism_from_json(j, actmap); });
}

FiniteMemoryStrategy load_strategy(Session& s, const std::string& role, const std::string& path, const ActMap& actmap,
                                   Role expected) {
  Json j = s.load(role, path);
  auto strat = s.parse(path, [&] { return strategy_from_json(j, actmap); });
  if (strat.role != expected) throw InputError("expected a " + to_string(expected) + " strategy", path + ": role");
  return strat;
}

ObjectiveKind objective_of(const Options& o) {
  try {
    return parse_objective(o.objective);
  } catch (const InputError& e) {
    throw InputError(e.what(), "--objective");
  }
}

Arena build_arena(Session& s, const Options& o, const Game& game, ObjectiveKind objective) {
  Morphism m = load_morphism(s, o.morphism, game.actmap);
  const std::size_t universe = m.trimmed().size() * (1 + game.actmap.num_actions());
  if (universe > o.max_universe) {
    throw ResourceCapError("universe of " + std::to_string(universe) + " elements exceeds --max-universe " +
                           std::to_string(o.max_universe));
  }
  s.set("objective", to_string(objective));
  return Arena::build(game, m, objective);
}

int cmd_validate(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  s.set("depth", o.depth);
  ValidationReport report = validate_game(game, o.depth);
  Json result{{"game", validation_to_json(report, game.actmap)}};
  bool ok = report.ok();
  if (!o.morphism.empty()) {
    Morphism m = load_morphism(s, o.morphism, game.actmap).trimmed();
    Json verdicts = Json::array();
    for (const auto& v : {validate_refinement(game, m), validate_rectangularity(game, m),
                          validate_approx_equivalence(game, m)}) {
      verdicts.push_back(verdict_to_json(v, game.actmap));
      ok = ok && v.passed;
    }
    result["morphism"] = verdicts;
  }
  result["ok"] = ok;
  return s.emit(result, ok ? kOk : kFalseVerdict);
}

int cmd_solve(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  ObjectiveKind objective = objective_of(o);
  require_supported(objective);
  Arena arena = build_arena(s, o, game, objective);
  FixpointResult r = solve(arena, objective);
  return s.emit(fixpoint_to_json(arena, r), r.winning ? kOk : kFalseVerdict);
}

int cmd_strategy(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  ObjectiveKind objective = objective_of(o);
  require_supported(objective);
  Arena arena = build_arena(s, o, game, objective);
  FixpointResult r = solve(arena, objective);
  if (!r.winning) {
    return s.emit(Json{{"winning", false}, {"detail", "the initial abstract state is not almost-sure winning"}},
                  kFalseVerdict);
  }
  FiniteMemoryStrategy strat = extract_strategy(arena, r, arena.morphism());
  Json doc = strategy_to_json(strat, arena.game().actmap);
  if (!o.out.empty()) s.write_file(o.out, doc);
  Json result{{"winning", true}, {"memory_size", strat.size()}, {"strategy", doc}};
  if (objective == ObjectiveKind::Reach) {
    auto progress = check_rank_progress(arena, r, strat);
    result["rank_progress"] = Json{{"ok", progress.ok},
                                   {"min_decrease_probability", to_string(progress.min_decrease_probability)}};
    if (!progress.ok) result["rank_progress"]["violation"] = progress.violation;
  }
  return s.emit(result, kOk);
}

int cmd_verify(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  Arena arena = build_arena(s, o, game, ObjectiveKind::Reach);
  if (o.strategy.empty()) throw InputError("--strategy is required");
  auto sigma = load_strategy(s, "strategy", o.strategy, arena.game().actmap, Role::Player);
  s.set("max_product", o.max_product);
  auto spoiler = build_spoiler(arena, sigma, arena.initial(), SpoilerOptions{o.max_product});
  Json result{{"almost_sure", !spoiler.has_value()}};
  if (spoiler) result["spoiler_reach_probability"] = to_string(spoiler->reach_probability);
  return s.emit(result, spoiler ? kFalseVerdict : kOk);
}

int cmd_refute(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  Arena arena = build_arena(s, o, game, ObjectiveKind::Reach);
  if (o.strategy.empty()) throw InputError("--strategy is required");
  auto sigma = load_strategy(s, "strategy", o.strategy, arena.game().actmap, Role::Player);
  s.set("max_product", o.max_product);
  auto spoiler = build_spoiler(arena, sigma, arena.initial(), SpoilerOptions{o.max_product});
  if (!spoiler) return s.emit(Json{{"spoiler", nullptr}, {"almost_sure", true}}, kFalseVerdict);
  Json doc = strategy_to_json(spoiler->strategy, arena.game().actmap);
  if (!o.out.empty()) s.write_file(o.out, doc);
  return s.emit(Json{{"reach_probability", to_string(spoiler->reach_probability)}, {"spoiler", doc}}, kOk);
}

/// Player strategy from --strategy, or extracted from --morphism.
FiniteMemoryStrategy player_for(const Options& o, Session& s, const Game& game) {
  if (!o.strategy.empty()) return load_strategy(s, "strategy", o.strategy, game.actmap, Role::Player);
  if (o.morphism.empty()) throw InputError("--strategy or --morphism is required");
  Arena arena = build_arena(s, o, game, ObjectiveKind::Reach);
  FixpointResult r = solve_reach(arena);
  if (!r.winning) throw NotWinningError("no winning strategy to extract; pass --strategy");
  FiniteMemoryStrategy strat = extract_strategy(arena, r, arena.morphism());
  // The extracted strategy runs on the morphism automaton, which reads moves of the input game.
  return strat;
}

int cmd_simulate(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  auto alpha = player_for(o, s, game);
  auto beta = o.env_strategy.empty() ? uniform_environment(game.actmap)
                                     : load_strategy(s, "env_strategy", o.env_strategy, game.actmap, Role::Environment);
  if (o.rounds == 0 || o.samples == 0) throw InputError("--rounds and --samples must be positive");
  s.set("rounds", o.rounds);
  s.set("samples", o.samples);
  s.set("seed", o.seed);
  SimulationOptions opts{o.rounds, o.samples, o.seed, std::max<std::size_t>(o.threads, 1), o.transcripts};
  SimulationResult r = simulate(game, alpha, beta, opts);
  Json transcripts = Json::array();
  for (const auto& t : r.transcripts) transcripts.push_back(history_to_json(t, game.actmap));
  Rational est(static_cast<long>(r.hits), static_cast<long>(r.samples));
  return s.emit(Json{{"samples", r.samples},
                     {"hits", r.hits},
                     {"estimate", to_decimal(est, 6)},
                     {"std_error", to_decimal(Rational(r.std_error), 6)},
                     {"transcripts", transcripts}},
                kOk);
}

int cmd_prob(const Options& o, Session& s) {
  Game game = load_game(s, o.game);
  auto alpha = player_for(o, s, game);
  auto beta = o.env_strategy.empty() ? uniform_environment(game.actmap)
                                     : load_strategy(s, "env_strategy", o.env_strategy, game.actmap, Role::Environment);
  s.set("horizon", o.horizon);
  ProductChain chain = build_chain(make_target_absorbing(game), alpha, beta);
  auto horizons = reach_prob_horizons(chain, o.horizon);
  Json hs = Json::array();
  for (const auto& p : horizons) hs.push_back(to_string(p));
  Rational limit = reach_prob_limit(chain);
  return s.emit(Json{{"chain_states", chain.size()},
                     {"horizon", o.horizon},
                     {"reach_within", to_string(horizons.back())},
                     {"reach_within_decimal", to_decimal(horizons.back(), 6)},
                     {"by_horizon", hs},
                     {"reach_limit", to_string(limit)},
                     {"almost_sure", limit == 1}},
                kOk);
}

int cmd_reif(const Options& o, Session& s) {
  if (o.in.empty()) throw InputError("--in is required");
  Json j = s.load("reif", o.in);
  ReifGame rg = s.parse(o.in, [&] { return reif_from_json(j); });
  Game game = reif_to_game(rg);
  Morphism m = subset_morphism(rg);
  if (!o.out_game.empty()) s.write_file(o.out_game, game_to_json(game));
  if (!o.out_morphism.empty()) s.write_file(o.out_morphism, morphism_to_json(m, game.actmap));
  auto report = validate_game(game);
  Json verdicts = Json::array();
  bool ok = report.ok();
  for (const auto& v : {validate_refinement(game, m), validate_rectangularity(game, m),
                        validate_approx_equivalence(game, m)}) {
    verdicts.push_back(verdict_to_json(v, game.actmap));
    ok = ok && v.passed;
  }
  return s.emit(Json{{"locations", rg.locations.size()},
                     {"moore_states", game.coloring.size()},
                     {"indist_states", game.indist.size()},
                     {"abstract_states", m.size()},
                     {"game", validation_to_json(report, game.actmap)},
                     {"morphism", verdicts},
                     {"ok", ok}},
                ok ? kOk : kFalseVerdict);
}

int cmd_counterexample(const Options& o, Session& s) {
  if (o.grid == 0) throw InputError("--grid must be positive");
  if (o.grid > o.max_grid) {
    throw ResourceCapError("grid " + std::to_string(o.grid) + " exceeds --max-grid " + std::to_string(o.max_grid));
  }
  ParamTreeGame g = fig3_g(), h = fig3_h();
  if (!o.g_file.empty()) {
    Json j = s.load("G", o.g_file);
    g = s.parse(o.g_file, [&] { return paramtree_from_json(j); });
  }
  if (!o.h_file.empty()) {
    Json j = s.load("H", o.h_file);
    h = s.parse(o.h_file, [&] { return paramtree_from_json(j); });
  }
  s.set("check", o.check);
  s.set("grid", o.grid);
  CounterexampleResult r;
  if (o.check == "psi") {
    r = check_psi(g, h, o.grid);
  } else if (o.check == "psi-prime") {
    r = check_psi_prime(g, h, o.grid);
  } else {
    throw InputError("expected psi or psi-prime", "--check");
  }
  std::string replay = replay_certificate(g, h, r.certificate);
  if (!o.certificate.empty()) s.write_file(o.certificate, r.certificate);
  Json result{{"check", o.check}, {"verdict", r.verdict}, {"replay", replay.empty() ? "consistent" : replay}};
  result["cases"] = r.certificate["cases"].size();
  if (o.certificate.empty()) result["certificate"] = r.certificate;
  return s.emit(result, r.verdict && replay.empty() ? kOk : kFalseVerdict);
}

void write_plain(const std::filesystem::path& path, const Json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write file", path.string());
  f << dump_json(doc);
}

int demo_matching_pennies(const Options& o, Session& s) {
  Game game = matching_pennies_game();
  Morphism m = matching_pennies_morphism();
  if (!o.out_dir.empty()) {
    write_plain(std::filesystem::path(o.out_dir) / "matching-pennies.game.json", game_to_json(game));
    write_plain(std::filesystem::path(o.out_dir) / "matching-pennies.morphism.json", morphism_to_json(m, game.actmap));
    write_plain(std::filesystem::path(o.out_dir) / "matching-pennies.reif.json", reif_to_json(matching_pennies_reif()));
  }
  auto report = validate_game(game, 6);
  Arena arena = Arena::build(game, m);
  FixpointResult r = solve_reach(arena);
  auto strat = extract_strategy(arena, r, arena.morphism());
  bool verified = verify_almost_sure(arena, strat, arena.initial());
  ProductChain chain = build_chain(arena.game(), strat, uniform_environment(game.actmap));
  // A round of the game is two moves: hide the coin, then guess.
  auto horizons = reach_prob_horizons(chain, 60);
  bool closed_form = true;
  for (std::size_t k = 0; k <= 30; ++k) {
    Rational expected = 1 - Rational(1, 1) / Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(k));
    closed_form = closed_form && horizons[2 * k] == expected;
  }
  s.set("seed", o.seed);
  SimulationResult sim = simulate(arena.game(), strat, uniform_environment(game.actmap),
                                  SimulationOptions{60, 10000, o.seed, std::max<std::size_t>(o.threads, 1), 0});
  Json emit = Json::object();
  for (StateId p = 0; p < arena.num_states(); ++p) {
    Json d = Json::object();
    for (ActionId a = 0; a < arena.num_actions(); ++a) d[arena.action_names()[a]] = to_string(strat.player_emit[p][a]);
    emit[arena.state_names()[p]] = d;
  }
  bool ok = report.ok() && r.winning && verified && closed_form && sim.estimate >= 0.999;
  return s.emit(Json{{"demo", "matching-pennies"},
                     {"validation", report.ok()},
                     {"solve", fixpoint_to_json(arena, r)},
                     {"strategy_emit", emit},
                     {"verified_almost_sure", verified},
                     {"horizon_closed_form", closed_form},
                     {"reach_within_30_rounds", to_string(horizons[60])},
                     {"monte_carlo", Json{{"samples", sim.samples}, {"estimate", to_decimal(Rational(static_cast<long>(sim.hits), static_cast<long>(sim.samples)), 6)}}},
                     {"ok", ok}},
                ok ? kOk : kFalseVerdict);
}

int demo_env_loss(const Options& o, Session& s) {
  Game game = env_loss_game();
  Morphism m = env_loss_morphism();
  if (!o.out_dir.empty()) {
    write_plain(std::filesystem::path(o.out_dir) / "env-loss.game.json", game_to_json(game));
    write_plain(std::filesystem::path(o.out_dir) / "env-loss.morphism.json", morphism_to_json(m, game.actmap));
  }
  Arena arena = Arena::build(game, m);
  FixpointResult r = solve_reach(arena);
  auto only = support_strategy(arena.morphism(), arena.game().actmap,
                               std::vector<std::vector<ActionId>>(arena.num_states(), std::vector<ActionId>{0}));
  auto spoiler = build_spoiler(arena, only, arena.initial());
  bool ok = !r.winning && spoiler.has_value() && spoiler->reach_probability == 0;
  Json result{{"demo", "env-loss"}, {"solve", fixpoint_to_json(arena, r)}, {"ok", ok}};
  if (spoiler) {
    result["spoiler"] = strategy_to_json(spoiler->strategy, arena.game().actmap);
    result["spoiler_reach_probability"] = to_string(spoiler->reach_probability);
  }
  return s.emit(result, ok ? kOk : kFalseVerdict);
}

int demo_fig3(const Options& o, Session& s) {
  ParamTreeGame g = fig3_g(), h = fig3_h();
  Game game = tree_game(g);
  Morphism m = tree_morphism(h);
  if (!o.out_dir.empty()) {
    write_plain(std::filesystem::path(o.out_dir) / "fig3-G.json", paramtree_to_json(g));
    write_plain(std::filesystem::path(o.out_dir) / "fig3-H.json", paramtree_to_json(h));
    write_plain(std::filesystem::path(o.out_dir) / "fig3.game.json", game_to_json(game));
    write_plain(std::filesystem::path(o.out_dir) / "fig3.morphism.json", morphism_to_json(m, game.actmap));
  }
  auto report = validate_game(game, 4);
  bool ok = report.ok();
  Json verdicts = Json::array();
  for (const auto& v : {validate_refinement(game, m), validate_rectangularity(game, m),
                        validate_approx_equivalence(game, m)}) {
    verdicts.push_back(verdict_to_json(v, game.actmap));
    ok = ok && v.passed;
  }
  Json classes = Json::array();
  if (ok) {
    for (const auto& cls : compute_approx(game, m).classes()) {
      if (cls.size() < 2) continue;
      Json names = Json::array();
      for (StateId p : cls) names.push_back(m.states[p]);
      classes.push_back(names);
    }
  }
  std::string correspondence = check_tree_correspondence(g, h);
  s.set("grid", o.grid);
  auto psi = check_psi(g, h, o.grid);
  auto psi_prime = check_psi_prime(g, h, o.grid);
  bool replay = replay_certificate(g, h, psi.certificate).empty() && replay_certificate(g, h, psi_prime.certificate).empty();
  ok = ok && correspondence.empty() && psi.verdict && psi_prime.verdict && replay;
  return s.emit(Json{{"demo", "fig3"},
                     {"validation", validation_to_json(report, game.actmap)},
                     {"morphism", verdicts},
                     {"approx_classes", classes},
                     {"correspondence", correspondence.empty() ? "ok" : correspondence},
                     {"psi", psi.verdict},
                     {"psi_prime", psi_prime.verdict},
                     {"certificates_replay", replay},
                     {"ok", ok}},
                ok ? kOk : kFalseVerdict);
}

int cmd_demo(const Options& o, Session& s) {
  if (!o.out_dir.empty()) std::filesystem::create_directories(o.out_dir);
  if (o.demo == "matching-pennies") return demo_matching_pennies(o, s);
  if (o.demo == "env-loss") return demo_env_loss(o, s);
  if (o.demo == "fig3") return demo_fig3(o, s);
  throw InputError("unknown demo '" + o.demo + "' (matching-pennies, env-loss, fig3)", "demo");
}

bool use_color(std::ostream& err) {
  const char* env = std::getenv("RIG_COLOR");
  if (env != nullptr && std::string(env) == "never") return false;
  return &err == &std::cerr && isatty(STDERR_FILENO) != 0;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  if (use_color(err)) {
    err << "\033[31m" << kind << "\033[0m: " << message << "\n";
  } else {
    err << kind << ": " << message << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Almost-sure winning for games with imperfect information", "rig"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto game_opts = [&](CLI::App* c) {
    c->add_option("--game", o.game, "Game file (rig-game/1)");
    c->add_option("--morphism", o.morphism, "Morphism file (rig-morphism/1)");
    c->add_option("--max-universe", o.max_universe, "Cap on |P|·(1+|A|)")->capture_default_str();
  };
  auto* validate = app.add_subcommand("validate", "Check the game axioms and, with --morphism, the morphism axioms");
  game_opts(validate);
  validate->add_option("--depth", o.depth, "Depth of the brute-force cross-check (0 disables)")->capture_default_str();

  auto* solve_cmd = app.add_subcommand("solve", "Decide almost-sure winning");
  game_opts(solve_cmd);
  solve_cmd->add_option("--objective", o.objective, "reach | buchi")->capture_default_str();

  auto* strategy_cmd = app.add_subcommand("strategy", "Extract the uniform winning strategy");
  game_opts(strategy_cmd);
  strategy_cmd->add_option("--objective", o.objective, "reach | buchi")->capture_default_str();
  strategy_cmd->add_option("--out", o.out, "Write the strategy file here");

  auto spoiler_opts = [&](CLI::App* c) {
    game_opts(c);
    c->add_option("--strategy", o.strategy, "Player strategy file (rig-strategy/1)");
    c->add_option("--max-product", o.max_product, "Cap on product states in the spoiler search")->capture_default_str();
  };
  auto* verify = app.add_subcommand("verify", "Check a player strategy against all positional adversaries");
  spoiler_opts(verify);
  auto* refute = app.add_subcommand("refute", "Build a spoiling environment strategy");
  spoiler_opts(refute);
  refute->add_option("--out", o.out, "Write the spoiler here");

  auto chain_opts = [&](CLI::App* c) {
    game_opts(c);
    c->add_option("--strategy", o.strategy, "Player strategy (default: extracted from --morphism)");
    c->add_option("--env-strategy", o.env_strategy, "Environment strategy (default: uniform)");
  };
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of reaching the target");
  chain_opts(sim);
  sim->add_option("--rounds", o.rounds, "Moves per sampled play")->capture_default_str();
  sim->add_option("--samples", o.samples, "Number of plays")->capture_default_str();
  sim->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sim->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  sim->add_option("--transcripts", o.transcripts, "Plays to include in the output")->capture_default_str();

  auto* prob = app.add_subcommand("prob", "Exact reach probabilities of a strategy pair");
  chain_opts(prob);
  prob->add_option("--horizon", o.horizon, "Number of moves")->capture_default_str();
  prob->add_flag("--exact", o.exact, "Exact rationals (always on)");

  auto* reif = app.add_subcommand("reif", "Partial-observation games");
  auto* compile = reif->add_subcommand("compile", "Build the game and the subset-construction morphism");
  reif->require_subcommand(1);
  compile->add_option("--in", o.in, "Input file (rig-reif/1)")->required();
  compile->add_option("--out-game", o.out_game, "Write the game here");
  compile->add_option("--out-morphism", o.out_morphism, "Write the morphism here");

  auto* cex = app.add_subcommand("counterexample", "Check the non-reduction formulas on the tree games G and H");
  cex->add_option("--check", o.check, "psi | psi-prime")->capture_default_str();
  cex->add_option("--grid", o.grid, "Grid resolution for y")->capture_default_str();
  cex->add_option("--max-grid", o.max_grid, "Cap on --grid")->capture_default_str();
  cex->add_option("--certificate", o.certificate, "Write the certificate here");
  cex->add_option("--concrete", o.g_file, "Concrete tree game (default: bundled G)");
  cex->add_option("--abstract", o.h_file, "Abstract tree game (default: bundled H)");

  auto* demo = app.add_subcommand("demo", "Run a bundled example end to end");
  demo->add_option("name", o.demo, "matching-pennies | env-loss | fig3")->required();
  demo->add_option("--out-dir", o.out_dir, "Regenerate the bundled instance files here");
  demo->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  demo->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  demo->add_option("--grid", o.grid, "Grid resolution for the fig3 checks")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  std::string command = app.get_subcommands().front()->get_name();
  if (command == "reif") command = "reif compile";
  Session session(command, out, err);
  try {
    if (validate->parsed()) return cmd_validate(o, session);
    if (solve_cmd->parsed()) return cmd_solve(o, session);
    if (strategy_cmd->parsed()) return cmd_strategy(o, session);
    if (verify->parsed()) return cmd_verify(o, session);
    if (refute->parsed()) return cmd_refute(o, session);
    if (sim->parsed()) return cmd_simulate(o, session);
    if (prob->parsed()) return cmd_prob(o, session);
    if (compile->parsed()) return cmd_reif(o, session);
    if (cex->parsed()) return cmd_counterexample(o, session);
    if (demo->parsed()) return cmd_demo(o, session);
  } catch (const InputError& e) {
    report_error(err, "input error", e.what());
    return kInputError;
  } catch (const ValidationError& e) {
    report_error(err, "validation failed", e.what());
    return kInputError;
  } catch (const ResourceCapError& e) {
    report_error(err, "resource cap", e.what());
    return kResourceCap;
  } catch (const NotWinningError& e) {
    report_error(err, "not winning", e.what());
    return kFalseVerdict;
  } catch (const std::exception& e) {
    report_error(err, "internal error", e.what());
    return kInternalError;
  }
  return kInputError;
}

}  // namespace rig::cli
