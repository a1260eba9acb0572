#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rig/game.hpp"
#include "rig/polynomial.hpp"
#include "rig/rational.hpp"

namespace rig {

/// c0 + Σ c_i·v_i over named parameters.
struct AffineExpr {
  Rational constant = 0;
  std::map<std::string, Rational> coeffs;

  /// Accepts sums of terms such as "1", "x1", "1-x1", "1/2", "2*t1 - 1"; throws InputError.
  static AffineExpr parse(const std::string& text);
  std::string to_string() const;
  Polynomial to_polynomial() const;
  Rational evaluate(const std::map<std::string, Rational>& assignment) const;
  AffineExpr operator+(const AffineExpr& o) const;
  bool operator==(const AffineExpr&) const = default;
};

enum class NodeKind { Player, Environment, Leaf };

struct TreeEdge {
  AffineExpr prob;
  std::string to;
  bool operator==(const TreeEdge&) const = default;
};

struct TreeNode {
  std::string id;
  NodeKind kind = NodeKind::Leaf;
  Color color = 0;  // leaves only
  std::vector<TreeEdge> edges;
  bool operator==(const TreeNode&) const = default;
};

/// A finite acyclic game whose strategies are written as parameters on edges. Player nodes in
/// one indistinguishability group carry the same edge expressions.
struct ParamTreeGame {
  std::string name;
  std::string root;
  std::vector<TreeNode> nodes;
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> player_params;
  std::vector<std::string> env_params;

  const TreeNode& node(const std::string& id) const;
  /// Unique ids, known targets, acyclicity, outgoing expressions summing identically to 1,
  /// groups of a single node kind, player groups with equal edge expressions, player parameters
  /// confined to one group each. Throws InputError.
  void check() const;
  bool operator==(const ParamTreeGame&) const = default;
};

/// Mass per leaf color (every leaf color present, possibly 0). Throws InputError when a
/// parameter is unassigned or outside [0,1].
std::map<Color, Rational> leaf_distribution(const ParamTreeGame& g, const std::map<std::string, Rational>& assignment);

/// The same masses as polynomials in the parameters.
std::map<Color, Polynomial> leaf_distribution_symbolic(const ParamTreeGame& g);

/// {k/n | 0 ≤ k ≤ n} ∪ {0, 1/2, 1}, ascending.
std::vector<Rational> grid_values(unsigned n);

struct CounterexampleResult {
  bool verdict = false;
  nlohmann::ordered_json certificate;
};

/// The non-reduction formula ψ on the Fig 3 pair: fixes x = (1/2, 1, 0); for every y on the
/// grid picks z = (1, 1 - y2, 0) and discharges ∀t by an exact case split on t1.
CounterexampleResult check_psi(const ParamTreeGame& g, const ParamTreeGame& h, unsigned grid_n);

/// The almost-sure variant ψ': the case split on y1 ∈ {0}, {1}, (0,1) selects the target set T.
CounterexampleResult check_psi_prime(const ParamTreeGame& g, const ParamTreeGame& h, unsigned grid_n);

/// Re-evaluates every certificate case at sample points of its t-region with concrete leaf
/// distributions. Returns an empty string when consistent, else the first contradiction.
std::string replay_certificate(const ParamTreeGame& g, const ParamTreeGame& h,
                               const nlohmann::ordered_json& certificate);

}  // namespace rig
