#include "rig/polynomial.hpp"

#include "rig/errors.hpp"

namespace rig {

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial{}, constant);
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.terms_.emplace(Monomial{{name, 1}}, Rational(1));
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m = m1;
      for (const auto& [v, e] : m2) m[v] += e;
      out.add_term(m, c1 * c2);
    }
  return out;
}

Polynomial Polynomial::substitute(const std::string& name, const Rational& value) const {
  return substitute(std::map<std::string, Rational>{{name, value}});
}

Polynomial Polynomial::substitute(const std::map<std::string, Rational>& values) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    Rational coeff = c;
    for (const auto& [v, e] : m) {
      auto it = values.find(v);
      if (it == values.end()) {
        rest.emplace(v, e);
        continue;
      }
      Rational power = 1;
      for (unsigned i = 0; i < e; ++i) power *= it->second;
      coeff *= power;
    }
    out.add_term(rest, coeff);
  }
  return out;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& values) const {
  Polynomial p = substitute(values);
  if (!p.is_constant()) throw InputError("unassigned variable " + *p.variables().begin());
  return p.constant_value();
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw InternalError("polynomial is not constant: " + to_string());
  return terms_.begin()->second;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) out.insert(v);
  return out;
}

unsigned Polynomial::degree_in(const std::string& name) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(name);
    if (it != m.end() && it->second > d) d = it->second;
  }
  return d;
}

Polynomial Polynomial::coefficient(const std::string& name, unsigned k) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(name);
    unsigned e = it == m.end() ? 0 : it->second;
    if (e != k) continue;
    Monomial rest = m;
    rest.erase(name);
    out.add_term(rest, c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first for readability.
  std::multimap<unsigned, std::pair<Monomial, Rational>, std::greater<>> ordered;
  for (const auto& [m, c] : terms_) {
    unsigned deg = 0;
    for (const auto& [v, e] : m) deg += e;
    ordered.emplace(deg, std::make_pair(m, c));
  }
  bool first = true;
  for (const auto& [deg, term] : ordered) {
    const auto& [m, c] = term;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += rig::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += rig::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace rig
