#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace migsched {

/// Exact rational used for every demand, weight, area and LP coefficient.
using Rational = mpq_class;

/// Parses "p/q", "p", or a finite decimal such as "0.25".
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

std::int64_t floor_to_int(const Rational& value);
std::int64_t ceil_to_int(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rational_min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// Closest double, for reporting only. Never used in a feasibility decision.
inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace migsched
