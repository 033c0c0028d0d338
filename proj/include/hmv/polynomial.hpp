#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/rational.hpp"

namespace hmv {

/* Dense univariate polynomials over Q, coefficients ascending.
 * Provides the exact real-root machinery (Sturm chains, isolation, bisection
 * refinement) used for field embeddings. */

using QPoly = std::vector<Rational>;

inline void poly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Rational poly_eval(const QPoly& p, const Rational& x) {
    Rational r(0);
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

inline QPoly poly_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

inline QPoly poly_scale(const QPoly& a, const Rational& c) {
    if (c == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    poly_trim(r);
    return r;
}

inline QPoly poly_derivative(const QPoly& p) {
    if (p.size() <= 1) return {};
    QPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Rational(Integer(i));
    return r;
}

/* Euclidean remainder a mod b (b nonzero). */
inline QPoly poly_rem(QPoly a, const QPoly& b) {
    poly_trim(a);
    if (b.empty()) throw InternalError("poly_rem by zero polynomial");
    while (poly_deg(a) >= poly_deg(b)) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        poly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline QPoly poly_monic(QPoly p) {
    poly_trim(p);
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline QPoly poly_gcd(QPoly a, QPoly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        QPoly r = poly_rem(a, b);
        a = std::move(b);
        b = poly_monic(std::move(r));
    }
    return poly_monic(std::move(a));
}

inline QPoly poly_squarefree_part(const QPoly& p) {
    QPoly g = poly_gcd(p, poly_derivative(p));
    if (poly_deg(g) <= 0) return p;
    // exact division p / g
    QPoly a = p, q(poly_deg(p) - poly_deg(g) + 1, Rational(0));
    while (poly_deg(a) >= poly_deg(g) && !a.empty()) {
        Rational f = a.back() / g.back();
        std::size_t shift = a.size() - g.size();
        q[shift] = f;
        for (std::size_t i = 0; i < g.size(); ++i) a[i + shift] -= f * g[i];
        poly_trim(a);
    }
    if (!a.empty()) throw InternalError("poly_squarefree_part: inexact division");
    poly_trim(q);
    return q;
}

/* Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k). */
inline std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain;
    QPoly a = p;
    poly_trim(a);
    if (a.empty()) return chain;
    chain.push_back(a);
    QPoly b = poly_derivative(a);
    while (!b.empty()) {
        chain.push_back(b);
        QPoly r = poly_rem(chain[chain.size() - 2], b);
        for (auto& c : r) c = -c;
        b = std::move(r);
    }
    return chain;
}

namespace detail {

inline int sturm_variations(const std::vector<QPoly>& chain, const Rational& x) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sign(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

/* Sign variations at -inf (dir = -1) or +inf (dir = +1). */
inline int sturm_variations_inf(const std::vector<QPoly>& chain, int dir) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        if (p.empty()) continue;
        int s = sign(p.back());
        if (dir < 0 && (poly_deg(p) % 2 == 1)) s = -s;
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

}  // namespace detail

/* Number of distinct real roots of p. */
inline int count_real_roots(const QPoly& p) {
    QPoly sf = poly_squarefree_part(p);
    auto chain = sturm_chain(sf);
    if (chain.empty()) return 0;
    return detail::sturm_variations_inf(chain, -1) - detail::sturm_variations_inf(chain, +1);
}

/* Distinct real roots in the half-open interval (a, b]. */
inline int count_roots_in(const std::vector<QPoly>& chain, const Rational& a, const Rational& b) {
    return detail::sturm_variations(chain, a) - detail::sturm_variations(chain, b);
}

/* Cauchy root bound: all real roots lie strictly inside (-M, M). */
inline Rational cauchy_bound(const QPoly& p) {
    Rational m(0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, qabs(p[i] / p.back()));
    return m + 1;
}

struct RootInterval {
    Rational lo, hi;  // lo == hi means an exact rational root
    bool exact() const { return lo == hi; }
};

/* Isolating intervals for all distinct real roots, ascending. For non-exact
 * intervals, p(lo) != 0 != p(hi) and exactly one root lies strictly inside. */
inline std::vector<RootInterval> isolate_real_roots(const QPoly& p_in) {
    QPoly p = poly_squarefree_part(p_in);
    poly_trim(p);
    std::vector<RootInterval> out;
    if (poly_deg(p) <= 0) return out;
    auto chain = sturm_chain(p);
    Rational M = cauchy_bound(p);

    struct Seg {
        Rational lo, hi;
        int count;
    };
    std::vector<Seg> stack;
    int total = count_roots_in(chain, -M, M);
    if (total > 0) stack.push_back({-M, M, total});

    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 1 && poly_eval(p, s.lo) != 0 && poly_eval(p, s.hi) != 0) {
            // single root, could still sit exactly at hi: (lo, hi] excludes lo only
            out.push_back({s.lo, s.hi});
            continue;
        }
        Rational mid = (s.lo + s.hi) / 2;
        if (poly_eval(p, mid) == 0) {
            out.push_back({mid, mid});
            int left = count_roots_in(chain, s.lo, mid) - 1;
            int right = s.count - left - 1;
            if (left > 0) {
                // creep up toward mid until only the exact root is excluded
                Rational hi2 = s.lo;
                do { hi2 = (hi2 + mid) / 2; } while (count_roots_in(chain, s.lo, hi2) != left ||
                                                     poly_eval(p, hi2) == 0);
                stack.push_back({s.lo, hi2, left});
            }
            if (right > 0) {
                Rational lo2 = s.hi;
                do { lo2 = (mid + lo2) / 2; } while (count_roots_in(chain, lo2, s.hi) != right ||
                                                     poly_eval(p, lo2) == 0);
                stack.push_back({lo2, s.hi, right});
            }
            continue;
        }
        int left = count_roots_in(chain, s.lo, mid);
        int right = s.count - left;
        if (left > 0) stack.push_back({s.lo, mid, left});
        if (right > 0) stack.push_back({mid, s.hi, right});
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
    return out;
}

/* One bisection step keeping the (single) bracketed root inside. The interval
 * must satisfy the isolate_real_roots postcondition. */
inline RootInterval bisect_root(const QPoly& p, const RootInterval& r) {
    if (r.exact()) return r;
    Rational mid = (r.lo + r.hi) / 2;
    Rational fm = poly_eval(p, mid);
    if (fm == 0) return {mid, mid};
    int slo = sign(poly_eval(p, r.lo));
    if (sign(fm) == slo) return {mid, r.hi};
    return {r.lo, mid};
}

/* Interval Horner: encloses p([lo, hi]) given exact rational endpoints. */
inline std::pair<Rational, Rational> poly_eval_interval(const QPoly& p, const Rational& lo,
                                                        const Rational& hi) {
    Rational rlo(0), rhi(0);
    for (std::size_t i = p.size(); i-- > 0;) {
        // [rlo, rhi] * [lo, hi] + p[i]
        Rational c1 = rlo * lo, c2 = rlo * hi, c3 = rhi * lo, c4 = rhi * hi;
        Rational mn = std::min(std::min(c1, c2), std::min(c3, c4));
        Rational mx = std::max(std::max(c1, c2), std::max(c3, c4));
        rlo = mn + p[i];
        rhi = mx + p[i];
    }
    return {rlo, rhi};
}

}  // namespace hmv
