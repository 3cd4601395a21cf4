#pragma once

#include <gmpxx.h>

#include <string>

namespace ptl {

using Rational = mpq_class;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

// Parses "p", "p/q" or a decimal literal such as "0.125" exactly.
Rational parse_rational(const std::string& text);

}  // namespace ptl
