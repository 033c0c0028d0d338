#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "hmv/errors.hpp"

namespace hmv {

/* Exact arbitrary-precision integers and rationals. All ideal/lattice/field
 * arithmetic in this library is exact; floating point only enters through the
 * directed-rounding interval layer (interval.hpp). */

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Integer& a) { return a.sign(); }
inline int sign(const Rational& q) { return num(q).sign(); }

inline Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational qabs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Integer igcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }
inline Integer ilcm(const Integer& a, const Integer& b) { return boost::multiprecision::lcm(a, b); }

/* Floor division: largest q with q*b <= a (b > 0 or b < 0 both handled). */
inline Integer floor_div(const Integer& a, const Integer& b) {
    if (b == 0) throw InternalError("floor_div by zero");
    Integer q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Integer floor_q(const Rational& q) { return floor_div(num(q), den(q)); }
inline Integer ceil_q(const Rational& q) { return -floor_q(-q); }

/* Integer square root (floor). */
inline Integer isqrt(const Integer& a) {
    if (a < 0) throw InternalError("isqrt of negative");
    return boost::multiprecision::sqrt(a);
}

inline bool is_perfect_square(const Integer& a, Integer* root = nullptr) {
    if (a < 0) return false;
    Integer r = isqrt(a);
    if (r * r == a) {
        if (root) *root = r;
        return true;
    }
    return false;
}

/* Rational square root when exact: q = (p/r)^2 with p, r >= 0. */
inline bool rational_sqrt_exact(const Rational& q, Rational* root) {
    if (q < 0) return false;
    Integer np, dp;
    if (!is_perfect_square(num(q), &np) || !is_perfect_square(den(q), &dp)) return false;
    if (root) *root = Rational(np, dp);
    return true;
}

/* Parse "p", "-p", or "p/q" (used by the JSON formats). */
inline Rational parse_rational(const std::string& s) {
    auto bad = [&] { throw InputError("malformed rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) bad();
        return Rational(n, d);
    } catch (const std::exception&) {
        bad();
    }
    return Rational(0);  // unreachable
}

inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

}  // namespace hmv
