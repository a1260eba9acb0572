#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rig {

/// Exact rational number. All probabilities outside Monte Carlo are kept in this type.
using Rational = mpq_class;

/// Parses "n", "n/d" or "-n/d". Throws InputError on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical form: "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);

/// Decimal rendering with a fixed number of fractional digits (round half away from zero).
std::string to_decimal(const Rational& value, int digits = 6);

}  // namespace rig
