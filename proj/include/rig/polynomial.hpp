#pragma once

#include <map>
#include <set>
#include <string>

#include "rig/rational.hpp"

namespace rig {

/// Multivariate polynomial with rational coefficients over named variables.
class Polynomial {
 public:
  /// Variable name → exponent (positive exponents only).
  using Monomial = std::map<std::string, unsigned>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long constant) : Polynomial(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  static Polynomial variable(const std::string& name);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  /// Replaces a variable by a rational value.
  Polynomial substitute(const std::string& name, const Rational& value) const;
  Polynomial substitute(const std::map<std::string, Rational>& values) const;
  /// Throws InputError when a variable is unassigned.
  Rational evaluate(const std::map<std::string, Rational>& values) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Requires is_constant().
  Rational constant_value() const;
  std::set<std::string> variables() const;
  unsigned degree_in(const std::string& name) const;
  /// Coefficient of name^k, as a polynomial in the remaining variables.
  Polynomial coefficient(const std::string& name, unsigned k) const;

  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
  /// Human-readable form, e.g. "1/2*t1 - 1/2".
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

}  // namespace rig
