#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace blab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double toDouble(const Rational& q) {
    return q.convert_to<double>();
}

inline Rational rat(long long num, long long den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

/// "p/q" with the denominator omitted when it is 1.
inline std::string ratStr(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace blab
