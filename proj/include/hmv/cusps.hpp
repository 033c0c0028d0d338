#pragma once

#include <optional>
#include <utility>

#include "hmv/errors.hpp"
#include "hmv/ideal.hpp"
#include "hmv/interval.hpp"
#include "hmv/numberfield.hpp"

namespace hmv {

/* Cusps are points of P^1(F), stored as a pair of field elements (alpha :
 * beta), not both zero. The canonical representative has beta = 0 mapped to
 * (1 : 0) and otherwise clears denominators of alpha/beta with the smallest
 * positive rational integer. */
struct Cusp {
    FieldElement alpha, beta;
};

inline Cusp make_cusp(const FieldElement& alpha, const FieldElement& beta) {
    if (alpha.field != beta.field) throw InternalError("cusp coordinates from different fields");
    if (alpha.is_zero() && beta.is_zero()) throw InputError("cusp (0 : 0) is not a point");
    return {alpha, beta};
}

inline Cusp canonical_cusp(const Cusp& c) {
    const FieldPtr& F = c.alpha.field;
    if (c.beta.is_zero()) return {F->one(), F->zero()};
    FieldElement r = F->mul(c.alpha, F->inverse(c.beta));
    Integer m = 1;
    for (const auto& q : r.coords) m = ilcm(m, den(q));
    return {F->scale(r, Rational(m)), F->from_rational(Rational(m))};
}

inline bool same_cusp(const Cusp& a, const Cusp& b) {
    // (alpha : beta) == (gamma : delta) iff alpha*delta - beta*gamma == 0
    const FieldPtr& F = a.alpha.field;
    return F->sub(F->mul(a.alpha, b.beta), F->mul(a.beta, b.alpha)).is_zero();
}

/* The ideal b = alpha*a + (beta) attached to a cusp representative; its class
 * is the standard invariant separating cusps of SL(O_F + a). */
inline FractionalIdeal cusp_invariant_ideal(const Cusp& c, const FractionalIdeal& module) {
    const FieldPtr& F = c.alpha.field;
    FractionalIdeal left = ideal_scale(module, c.alpha);  // zero ideal if alpha == 0
    FractionalIdeal right = principal_ideal(c.beta);
    return ideal_add(left, right);
}

/* Cross-cusp lattice data. For a cusp pair xi_1 = (alpha : beta),
 * xi_2 = (gamma : delta) with Delta = alpha*delta - beta*gamma != 0:
 *
 *   Lambda_1 = Delta * a * (b_1^{-2} cap beta^{-2} n)
 *   Lambda_2 = Delta * a * (b_2^{-2} cap delta^{-2} n)
 *
 * (a zero second coordinate drops its intersection term). The lattices depend
 * on the chosen representatives, but the product of their norm minima does
 * not, and Lambda_1 * Lambda_2 lands inside n, which forces
 * depth_product >= Nm(n). */
struct CuspPairData {
    FieldElement delta;  // the 2x2 determinant of the two representatives
    FractionalIdeal lambda1, lambda2;
    Rational depth_product;  // ideal_min(lambda1) * ideal_min(lambda2)
};

namespace detail {

inline FractionalIdeal cusp_lambda(const Cusp& c, const FieldElement& Delta,
                                   const FractionalIdeal& module, const FractionalIdeal& level) {
    const FieldPtr& F = c.alpha.field;
    FractionalIdeal b = cusp_invariant_ideal(c, module);
    FractionalIdeal binv2 = ideal_inverse(ideal_mul(b, b));
    FractionalIdeal core;
    if (c.beta.is_zero()) {
        core = binv2;
    } else {
        FieldElement beta_inv2 = F->inverse(F->mul(c.beta, c.beta));
        core = ideal_intersect(binv2, ideal_scale(level, beta_inv2));
    }
    return ideal_scale(ideal_mul(module, core), Delta);
}

}  // namespace detail

inline CuspPairData cusp_pair_data(const Cusp& c1, const Cusp& c2, const FractionalIdeal& module,
                                   const FractionalIdeal& level) {
    const FieldPtr& F = c1.alpha.field;
    if (module.is_zero()) throw ZeroIdeal("polarization module is the zero ideal");
    if (level.is_zero()) throw ZeroIdeal("level is the zero ideal");
    if (!ideal_is_integral(level)) throw InputError("level ideal must be integral");
    FieldElement Delta = F->sub(F->mul(c1.alpha, c2.beta), F->mul(c1.beta, c2.alpha));
    if (Delta.is_zero()) throw EqualCusps("cusp pair data needs two distinct cusps");
    CuspPairData out;
    out.delta = Delta;
    out.lambda1 = detail::cusp_lambda(c1, Delta, module, level);
    out.lambda2 = detail::cusp_lambda(c2, Delta, module, level);
    if (!ideal_contains(level, ideal_mul(out.lambda1, out.lambda2)))
        throw InternalError("cusp lattice product escapes the level ideal");
    out.depth_product = ideal_min(out.lambda1) * ideal_min(out.lambda2);
    return out;
}

/* ---- depth bounds --------------------------------------------------------- */

/* sqrt(Nm n): certified enclosure, exact when the norm is a perfect square. */
struct DepthBound {
    Interval value;
    std::optional<Rational> exact;
};

inline DepthBound canonical_depth_bound(const FractionalIdeal& level) {
    if (level.is_zero()) throw ZeroIdeal("depth bound of the zero ideal");
    if (!ideal_is_integral(level)) throw InputError("level ideal must be integral");
    Rational nm = ideal_norm(level);
    DepthBound b;
    Rational root;
    if (rational_sqrt_exact(nm, &root)) {
        b.exact = root;
        b.value = iv_from_rational(root);
    } else {
        b.value = iv_sqrt(iv_from_rational(nm));
    }
    return b;
}

/* Principal-level variant: the bound strengthens to Nm(n) itself. */
inline Rational principal_depth_bound(const FractionalIdeal& level) {
    if (level.is_zero()) throw ZeroIdeal("depth bound of the zero ideal");
    if (!ideal_is_integral(level)) throw InputError("level ideal must be integral");
    return ideal_norm(level);
}

namespace detail {

inline bool is_prime_integer(const Integer& p) {
    if (p < 2) return false;
    for (Integer d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace detail

/* Ramified-prime variant for level p with p^2 = (p): the bound is Nm(p). */
inline Rational ramified_depth_bound(const FractionalIdeal& prime) {
    if (prime.is_zero()) throw ZeroIdeal("depth bound of the zero ideal");
    if (!ideal_is_integral(prime)) throw NotPrime("ramified level must be an integral prime");
    Rational nm = ideal_norm(prime);
    if (nm == 1) throw NotPrime("ramified level must be a proper prime ideal, not the unit ideal");
    if (den(nm) != 1 || !detail::is_prime_integer(num(nm)))
        throw NotPrime("ideal norm is not a rational prime");
    FractionalIdeal sq = ideal_mul(prime, prime);
    if (sq != principal_ideal(prime.field->from_rational(nm)))
        throw NotPrime("prime ideal is not ramified (p^2 != (Nm p))");
    return nm;
}

/* ---- normalized norm form -------------------------------------------------- */

/* Rescaling that makes the smallest nonzero |Nm| over the lattice equal to 1:
 * the norm form is scaled by 1/ideal_min exactly, and each embedding carries
 * the n-th root of that factor (exact for perfect squares in degree 2). */
struct NormFormScale {
    Rational norm_scale;              // 1 / ideal_min(lambda)
    Interval embedding_scale;         // norm_scale^{1/n}
    std::optional<Rational> embedding_scale_exact;
};

inline NormFormScale normalized_norm_form(const FractionalIdeal& lambda) {
    if (lambda.is_zero()) throw ZeroIdeal("norm form of the zero ideal");
    NormFormScale s;
    Rational mn = ideal_min(lambda);
    s.norm_scale = Rational(1) / mn;
    int n = lambda.field->degree;
    Rational root;
    if (n == 2 && rational_sqrt_exact(s.norm_scale, &root)) {
        s.embedding_scale_exact = root;
        s.embedding_scale = iv_from_rational(root);
    } else {
        s.embedding_scale = iv_nth_root(iv_from_rational(s.norm_scale), n);
    }
    return s;
}

}  // namespace hmv
