#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hmv/errors.hpp"
#include "hmv/rational.hpp"

namespace hmv {

/* Double-precision intervals with outward rounding.
 *
 * Arithmetic is evaluated in round-to-nearest and the result is widened by a
 * ulp margin that dominates the evaluation error: 1 ulp for IEEE-exact ops
 * (+,-,*,/,sqrt), 4 ulps for libm transcendentals (glibc is well under 2 ulp).
 * Every Interval produced from exact (rational) data certifiably contains the
 * real value, so "a.hi < b.lo" style comparisons are certificates. */

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double point) : lo(point), hi(point) {}
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw InternalError("inverted interval");
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

namespace detail {

inline double step_down(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
    return x;
}
inline double step_up(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
    return x;
}

inline Interval widen(double lo, double hi, int ulps) {
    return Interval(step_down(lo, ulps), step_up(hi, ulps));
}

}  // namespace detail

/* Exact-op margin. */
inline Interval iv_add(const Interval& a, const Interval& b) {
    return detail::widen(a.lo + b.lo, a.hi + b.hi, 1);
}
inline Interval iv_sub(const Interval& a, const Interval& b) {
    return detail::widen(a.lo - b.hi, a.hi - b.lo, 1);
}
inline Interval iv_neg(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval iv_mul(const Interval& a, const Interval& b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return detail::widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}), 1);
}

inline Interval iv_div(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && 0.0 <= b.hi) throw InternalError("interval division by zero-straddling interval");
    double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return detail::widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}), 1);
}

inline Interval operator+(const Interval& a, const Interval& b) { return iv_add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return iv_sub(a, b); }
inline Interval operator-(const Interval& a) { return iv_neg(a); }
inline Interval operator*(const Interval& a, const Interval& b) { return iv_mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return iv_div(a, b); }

inline Interval iv_abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return iv_neg(a);
    return Interval(0.0, std::max(-a.lo, a.hi));
}

inline Interval iv_sqrt(const Interval& a) {
    if (a.lo < 0.0) throw InternalError("interval sqrt of negative");
    return detail::widen(std::sqrt(a.lo), std::sqrt(a.hi), 1);  // IEEE sqrt is correctly rounded
}

/* Monotone libm wrappers, 4-ulp outward margin. */
inline Interval iv_log(const Interval& a) {
    if (a.lo <= 0.0) throw InternalError("interval log of nonpositive");
    return detail::widen(std::log(a.lo), std::log(a.hi), 4);
}
inline Interval iv_exp(const Interval& a) {
    return detail::widen(std::exp(a.lo), std::exp(a.hi), 4);
}
inline Interval iv_atanh(const Interval& a) {
    if (a.lo <= -1.0 || a.hi >= 1.0) throw InternalError("interval atanh domain");
    return detail::widen(std::atanh(a.lo), std::atanh(a.hi), 4);
}
inline Interval iv_sinh(const Interval& a) {
    return detail::widen(std::sinh(a.lo), std::sinh(a.hi), 4);
}

/* Integer powers by binary exponentiation over certified multiplies. */
inline Interval iv_pow_int(const Interval& a, long e) {
    if (e < 0) return iv_div(Interval(1.0), iv_pow_int(a, -e));
    Interval r(1.0), base = a;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1UL) r = iv_mul(r, base);
        base = iv_mul(base, base);
        k >>= 1UL;
    }
    return r;
}

/* x^(1/n) for x >= 0, n >= 1: monotone, evaluated via pow with margin. */
inline Interval iv_nth_root(const Interval& a, long n) {
    if (n <= 0) throw InternalError("iv_nth_root: n must be positive");
    if (a.lo < 0.0) throw InternalError("iv_nth_root of negative");
    if (n == 1) return a;
    if (n == 2) return iv_sqrt(a);
    double e = 1.0 / static_cast<double>(n);
    return detail::widen(std::pow(a.lo, e), std::pow(a.hi, e), 4);
}

/* Certified containment conversion from exact rationals.
 * Construction of Rational from double is exact, so the containment test is
 * an exact comparison. */
inline Interval iv_from_rational(const Rational& q) {
    double d = static_cast<double>(q);
    if (!std::isfinite(d)) throw InternalError("rational overflows double range");
    double lo = d, hi = d;
    while (Rational(lo) > q) lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    while (Rational(hi) < q) hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    return Interval(lo, hi);
}

inline Interval iv_from_rationals(const Rational& lo, const Rational& hi) {
    return Interval(iv_from_rational(lo).lo, iv_from_rational(hi).hi);
}

/* pi lies strictly between its nearest double (below) and the next double up. */
inline Interval iv_pi() {
    double p = 3.14159265358979311599796346854;  // nearest double to pi, known < pi
    return Interval(p, std::nextafter(p, std::numeric_limits<double>::infinity()));
}
inline Interval iv_two_pi() { return iv_pi() * Interval(2.0); }

/* Certified order tests; false means "not certified", not "certified false". */
inline bool certainly_less(const Interval& a, const Interval& b) { return a.hi < b.lo; }
inline bool certainly_greater(const Interval& a, const Interval& b) { return a.lo > b.hi; }

inline bool certainly_less(const Rational& q, const Interval& b) {
    return certainly_less(iv_from_rational(q), b);
}
inline bool certainly_greater(const Rational& q, const Interval& b) {
    return certainly_greater(iv_from_rational(q), b);
}

}  // namespace hmv
