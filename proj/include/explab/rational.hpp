#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace explab {

// Exact rational arithmetic; dimensions and counting identities must never
// depend on a floating tolerance.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace explab
