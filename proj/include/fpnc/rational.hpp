#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fpnc {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a plain decimal ("0.125", "-3.5e-2").
/// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

/// Exact rational for a finite double (binary expansion, no rounding).
Rational from_double(double value);

}  // namespace fpnc
