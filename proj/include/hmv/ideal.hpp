#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/interval.hpp"
#include "hmv/linalg.hpp"
#include "hmv/numberfield.hpp"

namespace hmv {

/* Fractional ideals of O_F, stored canonically as an integer matrix in row
 * Hermite normal form over a positive denominator: the lattice is
 * (1/den) * rowspan_Z(rows), with coordinates over the integral basis.
 * gcd(all entries, den) = 1, so equal ideals have identical representations.
 *
 * The zero ideal is the empty row set; most operations reject it. */
struct FractionalIdeal {
    FieldPtr field;
    ZMat rows;    // n rows of n columns (HNF), or empty for the zero ideal
    Integer den;  // > 0

    bool is_zero() const { return rows.empty(); }
    bool operator==(const FractionalIdeal& o) const {
        if (field != o.field) throw InternalError("comparing ideals over different fields");
        return rows == o.rows && den == o.den;
    }
    bool operator!=(const FractionalIdeal& o) const { return !(*this == o); }
};

namespace detail {

/* Canonical form from a list of rational coordinate rows. */
inline FractionalIdeal canonical_ideal(FieldPtr F, const std::vector<QVec>& qrows) {
    Integer L = 1;
    for (const auto& r : qrows)
        for (const auto& c : r) L = ilcm(L, den(c));
    ZMat M;
    for (const auto& r : qrows) {
        ZVec z(r.size());
        bool nonzero = false;
        for (std::size_t j = 0; j < r.size(); ++j) {
            z[j] = num(r[j]) * (L / den(r[j]));
            if (z[j] != 0) nonzero = true;
        }
        if (nonzero) M.push_back(std::move(z));
    }
    FractionalIdeal I;
    I.field = std::move(F);
    I.den = L;
    if (M.empty()) {
        I.den = 1;
        return I;
    }
    M = hnf_rows(std::move(M));
    Integer g = L;
    for (const auto& r : M)
        for (const auto& c : r) g = igcd(g, c);
    for (auto& r : M)
        for (auto& c : r) c /= g;
    I.den = L / g;
    I.rows = std::move(M);
    if (static_cast<int>(I.rows.size()) != I.field->degree)
        throw InputError("ideal generators do not span a full-rank module");
    return I;
}

inline FieldElement row_element(const FractionalIdeal& I, std::size_t i) {
    QVec c(I.rows[i].size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = Rational(I.rows[i][j], I.den);
    return I.field->element(std::move(c));
}

inline Integer round_nearest(const Rational& q) { return floor_q(q + Rational(1, 2)); }

}  // namespace detail

/* The unit ideal O_F. */
inline FractionalIdeal ring_of_integers(FieldPtr F) {
    std::vector<QVec> rows;
    for (int i = 0; i < F->degree; ++i) {
        QVec r(F->degree, Rational(0));
        r[i] = 1;
        rows.push_back(std::move(r));
    }
    return detail::canonical_ideal(std::move(F), rows);
}

/* Ideal generated over O_F by the given elements. */
inline FractionalIdeal make_ideal(FieldPtr F, const std::vector<FieldElement>& gens) {
    std::vector<QVec> rows;
    bool all_zero = true;
    for (const auto& g : gens) {
        if (g.field != F) throw InternalError("ideal generator from a different field");
        if (g.is_zero()) continue;
        all_zero = false;
        for (int i = 0; i < F->degree; ++i) rows.push_back(F->mul(g, F->basis_element(i)).coords);
    }
    if (all_zero) {
        FractionalIdeal Z;
        Z.field = std::move(F);
        Z.den = 1;
        return Z;
    }
    return detail::canonical_ideal(std::move(F), rows);
}

inline FractionalIdeal principal_ideal(const FieldElement& g) {
    return make_ideal(g.field, {g});
}

/* Exact membership test via forward substitution on the triangular HNF. */
inline bool ideal_contains(const FractionalIdeal& I, const FieldElement& x) {
    if (x.field != I.field) throw InternalError("membership test across fields");
    if (x.is_zero()) return true;
    if (I.is_zero()) return false;
    int n = I.field->degree;
    QVec y(n);
    for (int j = 0; j < n; ++j) y[j] = x.coords[j] * I.den;
    for (int i = 0; i < n; ++i) {  // rows[i] has pivot at column i, zeros left of it
        Rational c = y[i] / I.rows[i][i];
        if (den(c) != 1) return false;
        for (int j = i; j < n; ++j) y[j] -= c * I.rows[i][j];
    }
    return true;
}

inline bool ideal_contains(const FractionalIdeal& I, const FractionalIdeal& J) {
    if (I.field != J.field) throw InternalError("containment test across fields");
    for (std::size_t i = 0; i < J.rows.size(); ++i)
        if (!ideal_contains(I, detail::row_element(J, i))) return false;
    return true;
}

inline FractionalIdeal ideal_add(const FractionalIdeal& I, const FractionalIdeal& J) {
    if (I.field != J.field) throw InternalError("ideal sum across fields");
    std::vector<QVec> rows;
    for (std::size_t i = 0; i < I.rows.size(); ++i) rows.push_back(detail::row_element(I, i).coords);
    for (std::size_t j = 0; j < J.rows.size(); ++j) rows.push_back(detail::row_element(J, j).coords);
    if (rows.empty()) return I;  // both zero
    return detail::canonical_ideal(I.field, rows);
}

inline FractionalIdeal ideal_mul(const FractionalIdeal& I, const FractionalIdeal& J) {
    if (I.field != J.field) throw InternalError("ideal product across fields");
    if (I.is_zero() || J.is_zero()) {
        FractionalIdeal Z;
        Z.field = I.field;
        Z.den = 1;
        return Z;
    }
    std::vector<QVec> rows;  // pairwise products of the Z-bases span the product
    for (std::size_t i = 0; i < I.rows.size(); ++i) {
        FieldElement a = detail::row_element(I, i);
        for (std::size_t j = 0; j < J.rows.size(); ++j)
            rows.push_back(I.field->mul(a, detail::row_element(J, j)).coords);
    }
    return detail::canonical_ideal(I.field, rows);
}

inline FractionalIdeal ideal_scale(const FractionalIdeal& I, const FieldElement& g) {
    if (I.field != g.field) throw InternalError("ideal scaling across fields");
    if (g.is_zero() || I.is_zero()) {
        FractionalIdeal Z;
        Z.field = I.field;
        Z.den = 1;
        return Z;
    }
    std::vector<QVec> rows;
    for (std::size_t i = 0; i < I.rows.size(); ++i)
        rows.push_back(I.field->mul(g, detail::row_element(I, i)).coords);
    return detail::canonical_ideal(I.field, rows);
}

inline FractionalIdeal ideal_intersect(const FractionalIdeal& I, const FractionalIdeal& J) {
    if (I.field != J.field) throw InternalError("ideal intersection across fields");
    if (I.is_zero() || J.is_zero()) {
        FractionalIdeal Z;
        Z.field = I.field;
        Z.den = 1;
        return Z;
    }
    int n = I.field->degree;
    Integer D = ilcm(I.den, J.den);
    // scale both to the common denominator D; intersect the integer lattices
    // via the stacked block matrix [[A A],[B 0]]: HNF rows whose left half is
    // zero carry a Z-basis of the intersection in their right half.
    ZMat M;
    for (const auto& r : I.rows) {
        ZVec z(2 * n);
        for (int j = 0; j < n; ++j) z[j] = z[n + j] = r[j] * (D / I.den);
        M.push_back(std::move(z));
    }
    for (const auto& r : J.rows) {
        ZVec z(2 * n, Integer(0));
        for (int j = 0; j < n; ++j) z[j] = r[j] * (D / J.den);
        M.push_back(std::move(z));
    }
    M = hnf_rows(std::move(M));
    std::vector<QVec> rows;
    for (const auto& r : M) {
        bool left_zero = true;
        for (int j = 0; j < n; ++j)
            if (r[j] != 0) left_zero = false;
        if (!left_zero) continue;
        QVec q(n);
        for (int j = 0; j < n; ++j) q[j] = Rational(r[n + j], D);
        rows.push_back(std::move(q));
    }
    if (rows.empty()) throw InternalError("nonzero ideals intersect nontrivially");
    return detail::canonical_ideal(I.field, rows);
}

/* Absolute norm: the index-style covolume |det(rows)| / den^n. Multiplicative;
 * equals [O_F : I] for integral I and |Nm(g)| for I = (g). */
inline Rational ideal_norm(const FractionalIdeal& I) {
    if (I.is_zero()) return Rational(0);
    Integer d = zmat_det(I.rows);
    Rational nm(iabs(d));
    Integer dn = 1;
    for (int i = 0; i < I.field->degree; ++i) dn *= I.den;
    return nm / Rational(dn);
}

/* I^{-1} = (O_F : I) = intersection of b^{-1} O_F over a Z-basis {b} of I.
 * The product check guards against non-invertible modules (non-maximal input
 * bases); over the maximal order every nonzero ideal passes. */
inline FractionalIdeal ideal_inverse(const FractionalIdeal& I) {
    if (I.is_zero()) throw ZeroIdeal("inverse of the zero ideal");
    FieldPtr F = I.field;
    FractionalIdeal acc;
    for (std::size_t i = 0; i < I.rows.size(); ++i) {
        FieldElement binv = F->inverse(detail::row_element(I, i));
        std::vector<QVec> rows;
        for (int j = 0; j < F->degree; ++j)
            rows.push_back(F->mul(binv, F->basis_element(j)).coords);
        FractionalIdeal term = detail::canonical_ideal(F, rows);
        acc = (i == 0) ? term : ideal_intersect(acc, term);
    }
    if (ideal_mul(I, acc) != ring_of_integers(F))
        throw InputError("ideal is not invertible over this coefficient ring");
    return acc;
}

/* Integral means contained in O_F; in canonical form that is den == 1. */
inline bool ideal_is_integral(const FractionalIdeal& I) { return I.is_zero() || I.den == 1; }

namespace detail {

/* Integer coordinates of x over the lattice basis of I, if x lies in I. */
inline std::optional<ZVec> lattice_coords(const FractionalIdeal& I, const FieldElement& x) {
    int n = I.field->degree;
    QMat A(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = Rational(I.rows[i][j], I.den);
    QVec sol = qmat_solve_left(A, x.coords);
    ZVec z(n);
    for (int i = 0; i < n; ++i) {
        if (den(sol[i]) != 1) return std::nullopt;
        z[i] = num(sol[i]);
    }
    return z;
}

}  // namespace detail

/* User-facing constructor from an HNF presentation; verifies the lattice is
 * actually an O_F-module. */
inline FractionalIdeal make_ideal_from_hnf(FieldPtr F, const ZMat& rows, const Integer& den) {
    if (den <= 0) throw InputError("ideal denominator must be positive");
    int n = F->degree;
    if (rows.empty()) {
        FractionalIdeal Z;
        Z.field = std::move(F);
        Z.den = 1;
        return Z;
    }
    if (static_cast<int>(rows.size()) != n) throw InputError("ideal must have degree-many rows");
    std::vector<QVec> qrows;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n)
            throw InputError("ideal rows must have degree-many entries");
        QVec q(n);
        for (int j = 0; j < n; ++j) q[j] = Rational(r[j], den);
        qrows.push_back(std::move(q));
    }
    FractionalIdeal I = detail::canonical_ideal(F, qrows);
    for (std::size_t i = 0; i < I.rows.size(); ++i) {
        FieldElement b = detail::row_element(I, i);
        for (int j = 0; j < n; ++j)
            if (!ideal_contains(I, F->mul(b, F->basis_element(j))))
                throw InputError("lattice is not closed under multiplication by O_F");
    }
    return I;
}

/* ---- minimum of |Nm| over nonzero lattice points (real quadratic only) ---- */

namespace detail {

/* Lagrange-reduce a Z-basis of the ideal with respect to the (exact, positive
 * definite) trace form T2(x) = Tr(x^2) = sum_i sigma_i(x)^2. */
inline std::pair<FieldElement, FieldElement> reduced_ideal_basis(const FractionalIdeal& I) {
    const FieldPtr& F = I.field;
    FieldElement r1 = row_element(I, 0), r2 = row_element(I, 1);
    auto T2 = [&](const FieldElement& x) { return F->trace(F->mul(x, x)); };
    auto Bf = [&](const FieldElement& x, const FieldElement& y) { return F->trace(F->mul(x, y)); };
    for (int guard = 0; guard < 10000; ++guard) {
        if (T2(r2) < T2(r1)) std::swap(r1, r2);
        Integer mu = round_nearest(Bf(r1, r2) / T2(r1));
        if (mu == 0) return {r1, r2};
        r2 = F->sub(r2, F->scale(r1, Rational(mu)));
    }
    throw InternalError("lattice reduction did not terminate");
}

}  // namespace detail

/* min { |Nm(x)| : x in I, x != 0 }, exact. Real quadratic fields only: the
 * unit action is folded into a bounded box via the fundamental unit, the box
 * is enumerated with certified outward rounding, and each candidate norm is
 * evaluated in exact rational arithmetic. */
inline Rational ideal_min(const FractionalIdeal& I) {
    if (I.is_zero()) throw ZeroIdeal("ideal_min of the zero ideal");
    const FieldPtr& F = I.field;
    if (F->degree != 2) throw UnsupportedDegree("ideal_min requires a real quadratic field");
    auto [r1, r2] = detail::reduced_ideal_basis(I);

    // upper bound B from the reduced basis corners (all nonzero)
    auto absnorm = [&](const FieldElement& x) { return qabs(F->norm(x)); };
    Rational B = absnorm(r1);
    B = std::min(B, absnorm(r2));
    B = std::min(B, absnorm(F->add(r1, r2)));
    B = std::min(B, absnorm(F->sub(r1, r2)));

    // fold the unit orbit: some eps-power translate of any x has
    // |sigma_2/sigma_1| in [1, rho), rho = sigma_2(eps)^2, hence
    // |sigma_1| <= sqrt(B) and |sigma_2| <= sqrt(B rho).
    const FieldElement& eps = F->units().fundamental;
    Interval rho = iv_pow_int(F->embed(eps, 1), 2);
    double S1 = iv_sqrt(iv_from_rational(B)).hi;
    double S2 = iv_sqrt(iv_from_rational(B) * rho).hi;

    // integer coefficient ranges from the interval inverse of the embedding
    // matrix, rounded outward
    Interval E00 = F->embed(r1, 0), E01 = F->embed(r1, 1);
    Interval E10 = F->embed(r2, 0), E11 = F->embed(r2, 1);
    Interval det = E00 * E11 - E01 * E10;
    if (det.contains(0.0)) throw InternalError("embedding matrix determinant not certified");
    Interval inv00 = E11 / det, inv01 = iv_neg(E01) / det;
    Interval inv10 = iv_neg(E10) / det, inv11 = E00 / det;
    Interval box1(-S1, S1), box2(-S2, S2);
    Interval u_iv = box1 * inv00 + box2 * inv10;
    Interval v_iv = box1 * inv01 + box2 * inv11;
    if (std::max(std::abs(u_iv.lo), std::abs(u_iv.hi)) > 1e9 ||
        std::max(std::abs(v_iv.lo), std::abs(v_iv.hi)) > 1e9)
        throw BoxTooLarge("ideal_min enumeration box exceeds the supported size");
    long u_lo = static_cast<long>(std::floor(u_iv.lo)), u_hi = static_cast<long>(std::ceil(u_iv.hi));
    long v_lo = static_cast<long>(std::floor(v_iv.lo)), v_hi = static_cast<long>(std::ceil(v_iv.hi));
    if ((u_hi - u_lo + 1) > 4000 || (v_hi - v_lo + 1) > 4000 ||
        (u_hi - u_lo + 1) * (v_hi - v_lo + 1) > 4000000)
        throw BoxTooLarge("ideal_min enumeration box exceeds the supported size");

    Rational best = B;
    for (long u = u_lo; u <= u_hi; ++u)
        for (long v = v_lo; v <= v_hi; ++v) {
            if (u == 0 && v == 0) continue;
            FieldElement x = F->add(F->scale(r1, Rational(u)), F->scale(r2, Rational(v)));
            Rational nm = absnorm(x);
            if (nm != 0 && nm < best) best = nm;
        }
    return best;
}

}  // namespace hmv
