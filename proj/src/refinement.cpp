#include "rig/refinement.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "rig/errors.hpp"

namespace rig {

using json = nlohmann::ordered_json;

AffineExpr AffineExpr::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InputError("empty expression");
  AffineExpr out;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw InputError("malformed expression '" + text + "'");
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw InputError("malformed expression '" + text + "'");
    i = j;
    Rational coeff = sign;
    std::string var;
    auto star = term.find('*');
    if (star != std::string::npos) {
      coeff *= parse_rational(term.substr(0, star));
      var = term.substr(star + 1);
    } else if (std::isdigit(static_cast<unsigned char>(term[0]))) {
      coeff *= parse_rational(term);
    } else {
      var = term;
    }
    if (var.empty()) {
      out.constant += coeff;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(var[0]))) throw InputError("malformed parameter '" + var + "'");
    for (char ch : var)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') throw InputError("malformed parameter '" + var + "'");
    out.coeffs[var] += coeff;
    if (out.coeffs[var] == 0) out.coeffs.erase(var);
  }
  return out;
}

std::string AffineExpr::to_string() const {
  std::string out;
  if (constant != 0 || coeffs.empty()) out = rig::to_string(constant);
  for (const auto& [v, c] : coeffs) {
    Rational mag = abs(c);
    std::string term = mag == 1 ? v : rig::to_string(mag) + "*" + v;
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? "-" : "+") + term;
    }
  }
  return out;
}

Polynomial AffineExpr::to_polynomial() const {
  Polynomial p(constant);
  for (const auto& [v, c] : coeffs) p += Polynomial(c) * Polynomial::variable(v);
  return p;
}

Rational AffineExpr::evaluate(const std::map<std::string, Rational>& assignment) const {
  Rational out = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw InputError("parameter " + v + " is unassigned");
    out += c * it->second;
  }
  return out;
}

AffineExpr AffineExpr::operator+(const AffineExpr& o) const {
  AffineExpr out = *this;
  out.constant += o.constant;
  for (const auto& [v, c] : o.coeffs) {
    out.coeffs[v] += c;
    if (out.coeffs[v] == 0) out.coeffs.erase(v);
  }
  return out;
}

const TreeNode& ParamTreeGame::node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return n;
  throw InputError("unknown node '" + id + "'", "nodes");
}

void ParamTreeGame::check() const {
  std::set<std::string> ids;
  for (const auto& n : nodes)
    if (!ids.insert(n.id).second) throw InputError("duplicate node '" + n.id + "'", "nodes");
  if (!ids.count(root)) throw InputError("unknown root '" + root + "'", "root");
  const std::set<std::string> player(player_params.begin(), player_params.end());
  const std::set<std::string> env(env_params.begin(), env_params.end());
  for (const auto& n : nodes) {
    const std::string path = "nodes." + n.id;
    if (n.kind == NodeKind::Leaf) {
      if (!n.edges.empty()) throw InputError("leaves have no edges", path);
      continue;
    }
    if (n.edges.empty()) throw InputError("inner node without edges", path);
    AffineExpr total;
    for (const auto& e : n.edges) {
      if (!ids.count(e.to)) throw InputError("unknown target '" + e.to + "'", path);
      for (const auto& [v, c] : e.prob.coeffs) {
        const auto& allowed = n.kind == NodeKind::Player ? player : env;
        if (!allowed.count(v)) throw InputError("parameter " + v + " not declared for this node kind", path);
      }
      total = total + e.prob;
    }
    if (!(total.coeffs.empty() && total.constant == 1)) {
      throw InputError("outgoing probabilities sum to " + total.to_string() + ", not 1", path);
    }
  }
  // Acyclicity by depth-first search.
  std::map<std::string, int> mark;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    int& m = mark[id];
    if (m == 1) throw InputError("cycle through node '" + id + "'", "nodes");
    if (m == 2) return;
    m = 1;
    for (const auto& e : node(id).edges) visit(e.to);
    mark[id] = 2;
  };
  visit(root);
  // Groups: inner nodes of one kind. Player groups carry equal edge expressions; every player
  // parameter is owned by a single group (or ungrouped node).
  std::map<std::string, std::size_t> group_of;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& first = node(groups[g].front());
    for (const auto& id : groups[g]) {
      const auto& here = node(id);
      if (here.kind == NodeKind::Leaf) throw InputError("group member '" + id + "' is a leaf", "groups");
      if (here.kind != first.kind) throw InputError("group mixes player and environment nodes", "groups");
      if (!group_of.emplace(id, g).second) throw InputError("node '" + id + "' in two groups", "groups");
      if (here.kind != NodeKind::Player) continue;
      bool same = first.edges.size() == here.edges.size();
      for (std::size_t i = 0; same && i < here.edges.size(); ++i) same = first.edges[i].prob == here.edges[i].prob;
      if (!same) throw InputError("indistinguishable nodes '" + first.id + "' and '" + id + "' differ", "groups");
    }
  }
  std::map<std::string, std::string> owner;  // parameter → group key
  for (const auto& n : nodes) {
    if (n.kind != NodeKind::Player) continue;
    auto it = group_of.find(n.id);
    std::string key = it == group_of.end() ? "node:" + n.id : "group:" + std::to_string(it->second);
    for (const auto& e : n.edges)
      for (const auto& [v, c] : e.prob.coeffs) {
        auto [o, inserted] = owner.emplace(v, key);
        if (!inserted && o->second != key) {
          throw InputError("player parameter " + v + " shared across distinguishable nodes", "nodes." + n.id);
        }
      }
  }
}

std::map<Color, Rational> leaf_distribution(const ParamTreeGame& g, const std::map<std::string, Rational>& assignment) {
  for (const auto& [v, value] : assignment) {
    if (value < 0 || value > 1) throw InputError("parameter " + v + " = " + to_string(value) + " outside [0,1]");
  }
  std::map<Color, Rational> out;
  for (const auto& n : g.nodes)
    if (n.kind == NodeKind::Leaf) out[n.color];
  std::function<void(const std::string&, const Rational&)> walk = [&](const std::string& id, const Rational& mass) {
    const TreeNode& n = g.node(id);
    if (n.kind == NodeKind::Leaf) {
      out[n.color] += mass;
      return;
    }
    for (const auto& e : n.edges) {
      Rational p = e.prob.evaluate(assignment);
      if (p != 0) walk(e.to, mass * p);
    }
  };
  walk(g.root, 1);
  return out;
}

std::map<Color, Polynomial> leaf_distribution_symbolic(const ParamTreeGame& g) {
  std::map<Color, Polynomial> out;
  for (const auto& n : g.nodes)
    if (n.kind == NodeKind::Leaf) out[n.color];
  std::function<void(const std::string&, const Polynomial&)> walk = [&](const std::string& id, const Polynomial& mass) {
    const TreeNode& n = g.node(id);
    if (n.kind == NodeKind::Leaf) {
      out[n.color] += mass;
      return;
    }
    for (const auto& e : n.edges) walk(e.to, mass * e.prob.to_polynomial());
  };
  walk(g.root, Polynomial(1));
  return out;
}

std::vector<Rational> grid_values(unsigned n) {
  if (n == 0) throw InputError("grid resolution must be positive", "grid");
  std::set<Rational> values{Rational(0), Rational(1, 2), Rational(1)};
  for (unsigned k = 0; k <= n; ++k) values.insert(Rational(k, n));
  return {values.begin(), values.end()};
}

namespace {

using Assignment = std::map<std::string, Rational>;

const Assignment kWitnessX{{"x1", Rational(1, 2)}, {"x2", Rational(1)}, {"x3", Rational(0)}};

void require_fig3_parameters(const ParamTreeGame& g, const ParamTreeGame& h) {
  g.check();
  h.check();
  auto has = [](const std::vector<std::string>& names, std::initializer_list<const char*> want) {
    std::set<std::string> s(names.begin(), names.end());
    for (const char* w : want)
      if (!s.count(w)) return false;
    return true;
  };
  if (!has(g.player_params, {"x1", "x2", "x3"}) || !has(g.env_params, {"t1", "t2", "t3"}) ||
      !has(h.player_params, {"y1", "y2"}) || !has(h.env_params, {"z1", "z2", "z3"})) {
    throw InputError("the counterexample check expects the parameters of the Fig 3 pair (x, t in G; y, z in H)");
  }
}

Assignment witness_z(const Rational& y2) { return {{"z1", Rational(1)}, {"z2", 1 - y2}, {"z3", Rational(0)}}; }

json rational_map(const Assignment& a) {
  json out = json::object();
  for (const auto& [k, v] : a) out[k] = to_string(v);
  return out;
}

Polynomial mass_of(const std::map<Color, Polynomial>& dist, const std::vector<Color>& colors) {
  Polynomial p;
  for (Color c : colors) {
    auto it = dist.find(c);
    if (it != dist.end()) p += it->second;
  }
  return p;
}

std::map<Color, Polynomial> substitute_all(const std::map<Color, Polynomial>& dist, const Assignment& a) {
  std::map<Color, Polynomial> out;
  for (const auto& [c, p] : dist) out[c] = p.substitute(a);
  return out;
}

/// The t-regions used by the case split.
enum class Region { All, T1NotOne, T1One };

std::string region_name(Region r) {
  switch (r) {
    case Region::All: return "all";
    case Region::T1NotOne: return "t1!=1";
    case Region::T1One: return "t1=1";
  }
  return "?";
}

Region parse_region(const std::string& s) {
  if (s == "all") return Region::All;
  if (s == "t1!=1") return Region::T1NotOne;
  if (s == "t1=1") return Region::T1One;
  throw InputError("unknown region '" + s + "'");
}

Polynomial restrict(const Polynomial& p, Region r) { return r == Region::T1One ? p.substitute("t1", 1) : p; }

/// True when p (over the t parameters) is provably nonzero at every point of the region with
/// t in [0,1]^3: a nonzero constant, or on t1 != 1 a nonzero multiple of (t1 - 1).
bool nonzero_on(const Polynomial& p, Region r) {
  Polynomial q = restrict(p, r);
  if (q.is_constant()) return q.constant_value() != 0;
  if (r != Region::T1NotOne) return false;
  if (q.variables() != std::set<std::string>{"t1"} || q.degree_in("t1") != 1) return false;
  Rational a = q.coefficient("t1", 1).constant_value();
  Rational b = q.coefficient("t1", 0).constant_value();
  return a != 0 && a + b == 0;
}

bool zero_on(const Polynomial& p, Region r) { return restrict(p, r).is_zero(); }

json colors_json(const std::vector<Color>& cs) {
  json out = json::array();
  for (Color c : cs) out.push_back(c);
  return out;
}

/// Masses on `colors` differ for every t in the region.
bool mass_branch(const std::map<Color, Polynomial>& g, const std::map<Color, Polynomial>& h,
                 const std::vector<Color>& colors, Region region, json& out) {
  Polynomial pg = restrict(mass_of(g, colors), region);
  Polynomial ph = restrict(mass_of(h, colors), region);
  bool ok = nonzero_on(pg - ph, region);
  out = json{{"region", region_name(region)},
             {"colors", colors_json(colors)},
             {"G", pg.to_string()},
             {"H", ph.to_string()},
             {"difference", (pg - ph).to_string()},
             {"holds", ok}};
  return ok;
}

/// Some single color among `colors` has different masses (as constants) in the region.
bool some_color_branch(const std::map<Color, Polynomial>& g, const std::map<Color, Polynomial>& h,
                       const std::vector<Color>& colors, Region region, json& out) {
  bool ok = false;
  json gm = json::object(), hm = json::object();
  for (Color c : colors) {
    Polynomial pg = restrict(mass_of(g, {c}), region);
    Polynomial ph = restrict(mass_of(h, {c}), region);
    gm[std::to_string(c)] = pg.to_string();
    hm[std::to_string(c)] = ph.to_string();
    if (nonzero_on(pg - ph, region)) ok = true;
  }
  out = json{{"region", region_name(region)}, {"colors", colors_json(colors)}, {"G", gm}, {"H", hm}, {"holds", ok}};
  return ok;
}

/// "Pr(Reach T) = 1" differs between G and H for every t in the region.
bool almost_sure_branch(const std::map<Color, Polynomial>& g, const std::map<Color, Polynomial>& h,
                        const std::vector<Color>& target, Region region, json& out) {
  std::vector<Color> rest;
  for (const auto& [c, p] : g)
    if (std::find(target.begin(), target.end(), c) == target.end()) rest.push_back(c);
  Polynomial gap_g = restrict(mass_of(g, rest), region);
  Polynomial gap_h = restrict(mass_of(h, rest), region);
  bool g_sure = zero_on(gap_g, region), g_not = nonzero_on(gap_g, region);
  bool h_sure = zero_on(gap_h, region), h_not = nonzero_on(gap_h, region);
  bool ok = (g_sure && h_not) || (g_not && h_sure);
  out = json{{"region", region_name(region)},
             {"T", colors_json(target)},
             {"gap_G", gap_g.to_string()},
             {"gap_H", gap_h.to_string()},
             {"almost_sure_G", g_sure},
             {"almost_sure_H", h_sure},
             {"holds", ok}};
  return ok;
}

json certificate_header(const char* check, unsigned grid_n) {
  return json{{"check", check},
              {"grid", grid_n},
              {"x", rational_map(kWitnessX)},
              {"z_rule", "z1 = 1, z2 = 1 - y2, z3 = 0"},
              {"z3_fixed", "0"}};
}

json pure_z2(const Rational& y2) {
  if (y2 == 0) return "1";
  if (y2 == 1) return "0";
  return nullptr;
}

}  // namespace

CounterexampleResult check_psi(const ParamTreeGame& g, const ParamTreeGame& h, unsigned grid_n) {
  require_fig3_parameters(g, h);
  const auto grid = grid_values(grid_n);
  const auto g_sym = substitute_all(leaf_distribution_symbolic(g), kWitnessX);
  const auto h_sym = leaf_distribution_symbolic(h);
  CounterexampleResult result{true, certificate_header("psi", grid_n)};
  json cases = json::array();
  for (const Rational& y1 : grid)
    for (const Rational& y2 : grid) {
      Assignment y{{"y1", y1}, {"y2", y2}};
      Assignment z = witness_z(y2);
      Assignment yz = y;
      yz.insert(z.begin(), z.end());
      const auto hy = substitute_all(h_sym, yz);
      json entry{{"y", rational_map(y)}, {"z", rational_map(z)}, {"z2_pure", pure_z2(y2)}};
      json branches = json::array();
      bool ok;
      if (y1 != Rational(1, 2)) {
        json b;
        ok = mass_branch(g_sym, hy, {1, 2}, Region::All, b);
        branches.push_back(b);
      } else {
        json b1, b2;
        bool ok1 = mass_branch(g_sym, hy, {1}, Region::T1NotOne, b1);
        bool ok2 = some_color_branch(g_sym, hy, {4, 5}, Region::T1One, b2);
        branches.push_back(b1);
        branches.push_back(b2);
        ok = ok1 && ok2;
      }
      entry["branches"] = branches;
      entry["holds"] = ok;
      result.verdict = result.verdict && ok;
      cases.push_back(entry);
    }
  // For y1 = 1/2 the t1 = 1 branch holds for every real y2, not only the grid: the H masses on
  // colors 4 and 5 sum to ((1 - y2)^2 + y2^2) / 2, whose numerator has negative discriminant.
  {
    Assignment y_half{{"y1", Rational(1, 2)}, {"z1", Rational(1)}, {"z3", Rational(0)}};
    Polynomial y2 = Polynomial::variable("y2");
    Polynomial z2 = Polynomial(1) - y2;
    std::map<Color, Polynomial> hs;
    for (const auto& [c, p] : h_sym) {
      Polynomial q = p.substitute(y_half);
      // Substitute z2 = 1 - y2 by expanding powers of z2.
      Polynomial expanded;
      Polynomial power(1);
      for (unsigned k = 0; k <= q.degree_in("z2"); ++k) {
        expanded += q.coefficient("z2", k) * power;
        power *= z2;
      }
      hs[c] = expanded;
    }
    Polynomial both = mass_of(hs, {4, 5});
    Rational a = both.coefficient("y2", 2).constant_value();
    Rational b = both.coefficient("y2", 1).constant_value();
    Rational c = both.coefficient("y2", 0).constant_value();
    Rational disc = b * b - 4 * a * c;
    bool no_root = both.variables() == std::set<std::string>{"y2"} && both.degree_in("y2") == 2 && disc < 0;
    result.certificate["all_y2"] = json{{"H_mass_4_plus_5", both.to_string()},
                                        {"discriminant", to_string(disc)},
                                        {"never_zero", no_root}};
    result.verdict = result.verdict && no_root;
  }
  result.certificate["cases"] = cases;
  result.certificate["verdict"] = result.verdict;
  return result;
}

CounterexampleResult check_psi_prime(const ParamTreeGame& g, const ParamTreeGame& h, unsigned grid_n) {
  require_fig3_parameters(g, h);
  const auto grid = grid_values(grid_n);
  const auto g_sym = substitute_all(leaf_distribution_symbolic(g), kWitnessX);
  const auto h_sym = leaf_distribution_symbolic(h);
  CounterexampleResult result{true, certificate_header("psi-prime", grid_n)};
  json cases = json::array();
  for (const Rational& y1 : grid)
    for (const Rational& y2 : grid) {
      Assignment y{{"y1", y1}, {"y2", y2}};
      Assignment z = witness_z(y2);
      Assignment yz = y;
      yz.insert(z.begin(), z.end());
      const auto hy = substitute_all(h_sym, yz);
      json entry{{"y", rational_map(y)}, {"z", rational_map(z)}};
      json branches = json::array();
      bool ok;
      if (y1 == 0) {
        entry["case"] = "y1 = 0";
        json b;
        ok = almost_sure_branch(g_sym, hy, {3, 4, 5, 6}, Region::All, b);
        branches.push_back(b);
      } else if (y1 == 1) {
        entry["case"] = "y1 = 1";
        json b;
        ok = almost_sure_branch(g_sym, hy, {1, 2}, Region::All, b);
        branches.push_back(b);
      } else {
        entry["case"] = "0 < y1 < 1";
        json b1, b2;
        bool ok1 = almost_sure_branch(g_sym, hy, {1, 3, 4, 5, 6}, Region::T1NotOne, b1);
        bool ok2 = almost_sure_branch(g_sym, hy, {1, 2, 3, 6}, Region::T1One, b2);
        branches.push_back(b1);
        branches.push_back(b2);
        ok = ok1 && ok2;
      }
      entry["branches"] = branches;
      entry["holds"] = ok;
      result.verdict = result.verdict && ok;
      cases.push_back(entry);
    }
  result.certificate["cases"] = cases;
  result.certificate["verdict"] = result.verdict;
  return result;
}

std::string replay_certificate(const ParamTreeGame& g, const ParamTreeGame& h, const json& certificate) {
  const std::string check = certificate.at("check").get<std::string>();
  const std::vector<Rational> sample{Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)};
  auto read_map = [](const json& j) {
    Assignment a;
    for (auto it = j.begin(); it != j.end(); ++it) a[it.key()] = parse_rational(it.value().get<std::string>());
    return a;
  };
  Assignment x = read_map(certificate.at("x"));
  for (const auto& entry : certificate.at("cases")) {
    Assignment yz = read_map(entry.at("y"));
    Assignment z = read_map(entry.at("z"));
    yz.insert(z.begin(), z.end());
    const auto hd = leaf_distribution(h, yz);
    for (const auto& branch : entry.at("branches")) {
      Region region = parse_region(branch.at("region").get<std::string>());
      for (const Rational& t1 : sample)
        for (const Rational& t2 : sample)
          for (const Rational& t3 : sample) {
            if (region == Region::T1NotOne && t1 == 1) continue;
            if (region == Region::T1One && t1 != 1) continue;
            Assignment xt = x;
            xt["t1"] = t1;
            xt["t2"] = t2;
            xt["t3"] = t3;
            const auto gd = leaf_distribution(g, xt);
            auto mass = [](const std::map<Color, Rational>& d, const json& colors) {
              Rational s = 0;
              for (const auto& c : colors) {
                auto it = d.find(c.get<Color>());
                if (it != d.end()) s += it->second;
              }
              return s;
            };
            bool holds;
            if (check == "psi-prime") {
              const json& t = branch.at("T");
              holds = (mass(gd, t) == 1) != (mass(hd, t) == 1);
            } else if (branch.at("G").is_object()) {
              holds = false;
              for (const auto& c : branch.at("colors")) {
                json one = json::array({c});
                if (mass(gd, one) != mass(hd, one)) holds = true;
              }
            } else {
              holds = mass(gd, branch.at("colors")) != mass(hd, branch.at("colors"));
            }
            if (!holds) {
              return "case y=" + entry.at("y").dump() + " region " + region_name(region) +
                     " fails at t=(" + to_string(t1) + "," + to_string(t2) + "," + to_string(t3) + ")";
            }
          }
    }
  }
  return {};
}

}  // namespace rig
