#pragma once

#include <gmpxx.h>

#include <string>

namespace causal_affects {

using Rational = mpq_class;

// Accepts "p/q", "p" or "-p/q"; the result is canonicalized.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& value);

}  // namespace causal_affects
