#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "mcfill/errors.hpp"

namespace mcfill {

// All measures, thresholds and bounds are exact rationals. No floating
// point anywhere: every checker compares strict inequalities exactly.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p/q" or "n" (optional sign, q > 0). Throws InputError.
Rational parse_rational(const std::string& text);

// Canonical "p/q" form; integers render without the "/q".
std::string format_rational(const Rational& value);

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace mcfill
