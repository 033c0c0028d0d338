#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/interval.hpp"
#include "hmv/linalg.hpp"
#include "hmv/polynomial.hpp"
#include "hmv/rational.hpp"

namespace hmv {

/* Totally real number fields F = Q[x]/(min_poly) presented by a monic
 * squarefree integer polynomial with n distinct real roots, together with an
 * integral basis for the ring of integers O_F (rows of rational coordinates
 * over the power basis 1, theta, ..., theta^{n-1}).
 *
 * Elements carry exact rational coordinates over the integral basis. The n
 * real embeddings are ordered by the ascending real roots of min_poly and are
 * evaluated as intervals with exact rational endpoints, refinable to any
 * width; sign questions are decided exactly (bisection terminates because
 * min_poly is irreducible, so a nonzero element of smaller degree cannot
 * vanish at a root).
 *
 * Fields are immutable after construction; embedding refinement only narrows
 * cached root enclosures and is serialized by an internal mutex. */

class Field;
using FieldPtr = std::shared_ptr<const Field>;

struct FieldElement {
    FieldPtr field;
    QVec coords;  // over the integral basis

    FieldElement() = default;
    FieldElement(FieldPtr f, QVec c) : field(std::move(f)), coords(std::move(c)) {}

    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }
    bool operator==(const FieldElement& o) const { return coords == o.coords; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
};

struct UnitGroupData {
    FieldElement fundamental;       // eps with sigma_n(eps) > 1, |Nm(eps)| = 1
    FieldElement totally_positive;  // eps_plus: eps if Nm = +1, else eps^2
    Integer fundamental_norm;       // +1 or -1
};

FieldPtr make_field_impl(const QPoly&, const std::optional<QMat>&,
                         const std::optional<std::vector<QVec>>&);

class Field : public std::enable_shared_from_this<Field> {
  public:
    QPoly min_poly;  // monic, integer coefficients, squarefree, totally real
    QMat basis;      // integral basis rows over the power basis
    QMat basis_inv;  // inverse (power -> integral coordinates)
    int degree = 0;

    /* --- element constructors ------------------------------------------- */

    FieldElement element(QVec coords) const {
        if (static_cast<int>(coords.size()) != degree)
            throw InputError("element coordinate count != field degree");
        return FieldElement(shared_from_this(), std::move(coords));
    }
    FieldElement zero() const { return element(QVec(degree, Rational(0))); }
    FieldElement one() const { return from_power_poly({Rational(1)}); }
    FieldElement from_rational(const Rational& q) const { return from_power_poly({q}); }
    /* theta-power coordinates -> integral-basis coordinates */
    FieldElement from_power_poly(QPoly p) const {
        p.resize(degree, Rational(0));
        return element(qvec_mat(QVec(p.begin(), p.end()), basis_inv));
    }
    FieldElement basis_element(int i) const {
        QVec v(degree, Rational(0));
        v[i] = 1;
        return element(std::move(v));
    }

    QPoly to_power_poly(const FieldElement& x) const {
        QVec v = qvec_mat(x.coords, basis);
        QPoly p(v.begin(), v.end());
        poly_trim(p);
        return p;
    }

    /* --- arithmetic ------------------------------------------------------ */

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        QVec c(degree);
        for (int i = 0; i < degree; ++i) c[i] = a.coords[i] + b.coords[i];
        return element(std::move(c));
    }
    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        QVec c(degree);
        for (int i = 0; i < degree; ++i) c[i] = a.coords[i] - b.coords[i];
        return element(std::move(c));
    }
    FieldElement neg(const FieldElement& a) const {
        QVec c(degree);
        for (int i = 0; i < degree; ++i) c[i] = -a.coords[i];
        return element(std::move(c));
    }
    FieldElement scale(const FieldElement& a, const Rational& q) const {
        QVec c(degree);
        for (int i = 0; i < degree; ++i) c[i] = a.coords[i] * q;
        return element(std::move(c));
    }
    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        QPoly p = poly_rem(poly_mul(to_power_poly(a), to_power_poly(b)), min_poly);
        return from_power_poly(std::move(p));
    }
    FieldElement inverse(const FieldElement& a) const {
        if (a.is_zero()) throw InputError("field inverse of zero");
        return element(qmat_solve_left(mult_matrix(a), one().coords));
    }
    FieldElement pow(const FieldElement& a, long e) const {
        if (e < 0) return inverse(pow(a, -e));
        FieldElement r = one(), b = a;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1UL) r = mul(r, b);
            b = mul(b, b);
            k >>= 1UL;
        }
        return r;
    }

    /* multiplication-by-x matrix in integral-basis coordinates: row i is the
     * coordinate vector of x * w_i */
    QMat mult_matrix(const FieldElement& x) const {
        QMat M(degree, QVec(degree));
        QPoly px = to_power_poly(x);
        for (int i = 0; i < degree; ++i) {
            QPoly wi(basis[i].begin(), basis[i].end());
            poly_trim(wi);
            QPoly prod = poly_rem(poly_mul(px, wi), min_poly);
            prod.resize(degree, Rational(0));
            M[i] = qvec_mat(QVec(prod.begin(), prod.end()), basis_inv);
        }
        return M;
    }

    /* Nm(x) = prod_i sigma_i(x) = det of the multiplication matrix (equals the
     * resultant of min_poly and the power-basis representative, min_poly being
     * monic). */
    Rational norm(const FieldElement& x) const { return qmat_det(mult_matrix(x)); }
    Rational trace(const FieldElement& x) const {
        QMat M = mult_matrix(x);
        Rational t(0);
        for (int i = 0; i < degree; ++i) t += M[i][i];
        return t;
    }

    /* Galois conjugate, quadratic fields only: conj(x) = Tr(x) - x. */
    FieldElement galois_conjugate(const FieldElement& x) const {
        if (degree != 2) throw UnsupportedDegree("galois_conjugate requires degree 2");
        return sub(from_rational(trace(x)), x);
    }

    bool is_integral(const FieldElement& x) const {
        for (const auto& c : x.coords)
            if (den(c) != 1) return false;
        return true;
    }

    /* Field discriminant = det of the trace form Tr(w_i w_j). */
    Integer discriminant() const {
        QMat T(degree, QVec(degree));
        for (int i = 0; i < degree; ++i)
            for (int j = 0; j <= i; ++j)
                T[i][j] = T[j][i] = trace(mul(basis_element(i), basis_element(j)));
        Rational d = qmat_det(T);
        if (den(d) != 1) throw InternalError("discriminant not an integer");
        return num(d);
    }

    /* --- embeddings ------------------------------------------------------ */

    /* Rational-endpoint enclosure of sigma_i(x), width <= prec. */
    std::pair<Rational, Rational> embed_rational(const FieldElement& x, int i,
                                                 const Rational& prec) const {
        QPoly p = to_power_poly(x);
        if (poly_deg(p) <= 0) {
            Rational v = p.empty() ? Rational(0) : p[0];
            return {v, v};
        }
        std::lock_guard<std::mutex> lk(root_mutex_);
        for (int guard = 0; guard < 20000; ++guard) {
            auto [lo, hi] = poly_eval_interval(p, roots_[i].lo, roots_[i].hi);
            if (hi - lo <= prec) return {lo, hi};
            roots_[i] = bisect_root(min_poly, roots_[i]);
        }
        throw InternalError("embedding refinement did not converge");
    }

    Interval embed(const FieldElement& x, int i, double prec = 1e-14) const {
        Rational target(1, 1048576);
        for (int rounds = 0; rounds < 10; ++rounds) {
            auto [lo, hi] = embed_rational(x, i, target);
            Interval iv = iv_from_rationals(lo, hi);
            double scale = std::max({1.0, std::abs(iv.lo), std::abs(iv.hi)});
            if (iv.width() <= prec * scale) return iv;
            target /= 1048576;
        }
        auto [lo, hi] = embed_rational(x, i, Rational(1, Integer(1) << 240));
        return iv_from_rationals(lo, hi);
    }

    double embed_mid(const FieldElement& x, int i) const { return embed(x, i).mid(); }

    std::vector<Interval> embeddings(const FieldElement& x, double prec = 1e-14) const {
        std::vector<Interval> v;
        v.reserve(degree);
        for (int i = 0; i < degree; ++i) v.push_back(embed(x, i, prec));
        return v;
    }

    /* Exact sign of sigma_i(x). */
    int certified_sign(const FieldElement& x, int i) const {
        if (x.is_zero()) return 0;
        QPoly p = to_power_poly(x);
        if (poly_deg(p) <= 0) return sign(p[0]);
        Rational prec(1, 16);
        for (int guard = 0; guard < 4000; ++guard) {
            auto [lo, hi] = embed_rational(x, i, prec);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
            if (lo == hi) return sign(lo);
            prec /= 65536;
        }
        throw InternalError("certified_sign did not converge (reducible min_poly?)");
    }

    bool is_totally_positive(const FieldElement& x) const {
        if (x.is_zero()) return false;
        for (int i = 0; i < degree; ++i)
            if (certified_sign(x, i) <= 0) return false;
        return true;
    }

    /* Exact sign of sigma_i(x) - q. */
    int certified_cmp(const FieldElement& x, int i, const Rational& q) const {
        return certified_sign(sub(x, from_rational(q)), i);
    }

    /* --- units ------------------------------------------------------------ */

    const UnitGroupData& units() const {
        if (!units_)
            throw UnsupportedDegree("unit data unavailable (degree > 2 and none supplied)");
        return *units_;
    }
    bool has_units() const { return units_.has_value(); }

    const std::vector<RootInterval>& root_enclosures() const { return roots_; }

  private:
    mutable std::vector<RootInterval> roots_;  // narrowed in place under root_mutex_
    mutable std::mutex root_mutex_;
    std::optional<UnitGroupData> units_;

    void validate_ring() const;
    void compute_units(const std::optional<std::vector<QVec>>& unit_coords);
    FieldElement quadratic_module_generator() const;

    friend FieldPtr make_field_impl(const QPoly&, const std::optional<QMat>&,
                                    const std::optional<std::vector<QVec>>&);
};

/* ---- free-function element operators (same field required) -------------- */

namespace detail {
inline const FieldPtr& require_same_field(const FieldElement& a, const FieldElement& b) {
    if (!a.field || a.field != b.field)
        throw InternalError("field element operands belong to different fields");
    return a.field;
}

inline void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y) {
    Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    g = old_r;
    x = old_s;
    y = old_t;
    if (g < 0) {
        g = -g;
        x = -x;
        y = -y;
    }
}
}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return detail::require_same_field(a, b)->add(a, b);
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return detail::require_same_field(a, b)->sub(a, b);
}
inline FieldElement operator-(const FieldElement& a) { return a.field->neg(a); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return detail::require_same_field(a, b)->mul(a, b);
}
inline FieldElement operator*(const Rational& q, const FieldElement& a) {
    return a.field->scale(a, q);
}
inline FieldElement elem_inverse(const FieldElement& a) { return a.field->inverse(a); }
inline Rational elem_norm(const FieldElement& a) { return a.field->norm(a); }
inline Rational elem_trace(const FieldElement& a) { return a.field->trace(a); }

/* ---- construction internals ---------------------------------------------- */

namespace detail {

/* Monic integer polynomial: any rational root is an integer dividing the
 * constant term. Catches every reducible quadratic and cubic. */
inline bool has_rational_root(const QPoly& p) {
    if (p.size() < 2) return false;
    if (p[0] == 0) return true;  // x divides
    Integer a0 = iabs(num(p[0]));
    auto test = [&](const Integer& r) {
        return poly_eval(p, Rational(r)) == 0 || poly_eval(p, Rational(-r)) == 0;
    };
    if (a0 < (Integer(1) << 48)) {
        for (Integer d = 1; d * d <= a0; ++d) {
            if (a0 % d != 0) continue;
            if (test(d) || test(a0 / d)) return true;
        }
        return false;
    }
    for (Integer d = 1; d <= 1000; ++d)  // huge constant term: partial scan
        if (a0 % d == 0 && (test(d) || test(a0 / d))) return true;
    return false;
}

inline bool is_squarefree_int(const Integer& d) {
    if (d <= 0) return false;
    Integer m = d;
    for (Integer p = 2; p * p <= m && p < 2000000; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return false;
    }
    return true;
}

}  // namespace detail

inline void Field::validate_ring() const {
    for (const auto& c : one().coords)
        if (den(c) != 1) throw NotARing("1 has non-integral coordinates in the basis");
    for (int i = 0; i < degree; ++i)
        for (int j = i; j < degree; ++j) {
            FieldElement prod = mul(basis_element(i), basis_element(j));
            if (!is_integral(prod))
                throw NotARing("basis products leave the lattice: w_" + std::to_string(i) +
                               " * w_" + std::to_string(j) + " is non-integral");
        }
}

/* O_F = Z + Z*omega for quadratic fields: combine the two basis rows so the
 * theta-coordinate becomes the generator of the projected rank-1 module. */
inline FieldElement Field::quadratic_module_generator() const {
    Rational b0 = basis[0][1], b1 = basis[1][1];
    Integer L = ilcm(den(b0), den(b1));
    Integer B0 = num(b0) * (L / den(b0)), B1 = num(b1) * (L / den(b1));
    Integer g, x, y;
    detail::xgcd(B0, B1, g, x, y);
    if (g == 0) throw InternalError("degenerate quadratic basis");
    QVec power(2, Rational(0));
    for (int j = 0; j < 2; ++j) power[j] = Rational(x) * basis[0][j] + Rational(y) * basis[1][j];
    FieldElement omega = from_power_poly(QPoly(power.begin(), power.end()));
    // sanity: {1, omega} must span O_F
    QMat span = {one().coords, omega.coords};
    if (qabs(qmat_det(span)) != 1) throw InternalError("module generator does not span O_F");
    return omega;
}

inline void Field::compute_units(const std::optional<std::vector<QVec>>& unit_coords) {
    auto normalize_fundamental = [&](FieldElement u) {
        // choose among {+-u, +-u^{-1}} the one with sigma_n > 1
        std::vector<FieldElement> cands = {u, neg(u), inverse(u), neg(inverse(u))};
        for (const auto& c : cands) {
            if (certified_cmp(c, degree - 1, Rational(1)) > 0) return c;
        }
        throw InternalError("unit normalization failed");
    };

    if (unit_coords) {
        if (unit_coords->empty()) throw InputError("units: empty coordinate list");
        FieldElement f = element((*unit_coords)[0]);
        if (!is_integral(f)) throw InputError("units: fundamental unit is not integral");
        Rational nm = norm(f);
        if (nm != 1 && nm != -1) throw InputError("units: |Nm| != 1");
        if (f == one() || f == neg(one())) throw InputError("units: fundamental unit is torsion");
        f = normalize_fundamental(f);
        UnitGroupData U;
        U.fundamental = f;
        U.fundamental_norm = num(norm(f));
        U.totally_positive = (U.fundamental_norm == 1) ? f : mul(f, f);
        if (unit_coords->size() >= 2) {
            FieldElement tp = element((*unit_coords)[1]);
            if (!is_totally_positive(tp) || norm(tp) != 1)
                throw InputError("units: supplied totally positive generator is invalid");
            U.totally_positive = tp;
        }
        if (!is_totally_positive(U.totally_positive))
            throw InternalError("derived totally positive unit is not totally positive");
        units_ = std::move(U);
        return;
    }
    if (degree != 2) return;  // no unit data; ops needing it raise UnsupportedDegree

    /* Continued fraction of omega's larger embedding, exact (P + sqrt(D))/Q
     * recursion over integers; unit candidates are built from the convergents
     * p_k/q_k as (p_k - q_k Tr(omega)) + q_k omega = p_k - q_k conj(omega). */
    FieldElement omega = quadratic_module_generator();
    {
        QPoly p = to_power_poly(omega);
        p.resize(2, Rational(0));
        if (p[1] < 0) omega = galois_conjugate(omega);  // make sqrt-coefficient positive
    }
    QPoly p = to_power_poly(omega);
    p.resize(2, Rational(0));
    const Rational A = min_poly[1], B = min_poly[0];  // x^2 + A x + B
    Rational u = p[0] - p[1] * A / 2;
    Rational v = p[1] / 2;  // > 0
    Rational Delta = A * A - 4 * B;
    Integer m = ilcm(den(u), den(v));
    Integer P = num(u) * (m / den(u));
    Integer D;
    {
        Rational Dq = v * v * Delta * m * m;  // (v*m)^2 * Delta
        if (den(Dq) != 1) throw InternalError("unit CF: non-integral D");
        D = num(Dq);
    }
    Integer Q = m;
    if ((D - P * P) % Q != 0) {
        P *= Q;
        D *= Q * Q;
        Q *= Q;  // Q was positive
    }
    Integer t_om;
    {
        Rational tr = trace(omega);
        if (den(tr) != 1) throw InternalError("unit CF: non-integral trace");
        t_om = num(tr);
    }
    // convergent recurrences seeded with (p_{-1}, p_{-2}) = (1, 0), (q_{-1}, q_{-2}) = (0, 1)
    Integer p_prev = 0, p_cur = 1, q_prev = 1, q_cur = 0;
    FieldElement found;
    bool have = false;
    for (int it = 0; it < 200000 && !have; ++it) {
        Integer a;
        Integer sq = isqrt(D);
        if (Q > 0) {
            a = floor_div(P + sq, Q);
        } else {
            a = -(floor_div(P + sq, -Q) + 1);  // floor for negative denominator, sqrt irrational
        }
        // convergent update
        Integer p_new = a * p_cur + p_prev;
        Integer q_new = a * q_cur + q_prev;
        p_prev = p_cur;
        p_cur = p_new;
        q_prev = q_cur;
        q_cur = q_new;
        // CF step
        Integer P1 = a * Q - P;
        Integer Q1 = (D - P1 * P1) / Q;
        if (Q1 == 0) throw InternalError("unit CF: rational omega");
        P = P1;
        Q = Q1;
        // unit test on the new convergent
        FieldElement cand =
            add(from_rational(Rational(p_cur - q_cur * t_om)), scale(omega, Rational(q_cur)));
        Rational nm = norm(cand);
        if ((nm == 1 || nm == -1) && !(cand == one()) && !(cand == neg(one()))) {
            found = cand;
            have = true;
        }
    }
    if (!have) throw InternalError("fundamental unit search did not terminate");
    UnitGroupData U;
    U.fundamental = normalize_fundamental(found);
    U.fundamental_norm = num(norm(U.fundamental));
    U.totally_positive =
        (U.fundamental_norm == 1) ? U.fundamental : mul(U.fundamental, U.fundamental);
    if (!is_totally_positive(U.totally_positive))
        throw InternalError("derived totally positive unit is not totally positive");
    units_ = std::move(U);
}

inline FieldPtr make_field_impl(const QPoly& min_poly_in, const std::optional<QMat>& basis_in,
                                const std::optional<std::vector<QVec>>& unit_coords) {
    QPoly mp = min_poly_in;
    poly_trim(mp);
    int n = poly_deg(mp);
    if (n < 2) throw UnsupportedDegree("min_poly degree must be >= 2");
    for (const auto& c : mp)
        if (den(c) != 1) throw InputError("min_poly must have integer coefficients");
    if (mp.back() != 1) throw InputError("min_poly must be monic");
    if (poly_deg(poly_gcd(mp, poly_derivative(mp))) > 0)
        throw InputError("min_poly must be squarefree");
    if (count_real_roots(mp) != n)
        throw NotTotallyReal("min_poly does not have " + std::to_string(n) +
                             " distinct real roots");
    if (detail::has_rational_root(mp))
        throw NotARing("min_poly is reducible over Q (rational root)");

    auto F = std::make_shared<Field>();
    F->min_poly = mp;
    F->degree = n;

    if (basis_in) {
        if (static_cast<int>(basis_in->size()) != n)
            throw InputError("integral_basis must have degree-many rows");
        for (const auto& r : *basis_in)
            if (static_cast<int>(r.size()) != n)
                throw InputError("integral_basis rows must have degree-many coordinates");
        F->basis = *basis_in;
    } else {
        if (n != 2) throw UnsupportedDegree("built-in integral bases exist only for degree 2");
        if (mp[1] != 0) throw InputError("built-in basis requires min_poly of the form x^2 - d");
        Rational dq = -mp[0];
        if (den(dq) != 1 || dq <= 0)
            throw InputError("built-in basis requires min_poly = x^2 - d with d > 0");
        Integer d = num(dq);
        if (!detail::is_squarefree_int(d))
            throw InputError("built-in basis requires squarefree d in x^2 - d");
        if (d % 4 == 1)
            F->basis = {{Rational(1), Rational(0)}, {Rational(1, 2), Rational(1, 2)}};
        else
            F->basis = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    }
    if (qmat_det(F->basis) == 0) throw InputError("integral_basis is singular");
    F->basis_inv = qmat_inverse(F->basis);

    F->roots_ = isolate_real_roots(mp);
    if (static_cast<int>(F->roots_.size()) != n) throw InternalError("root isolation mismatch");
    F->validate_ring();
    F->compute_units(unit_coords);
    return F;
}

inline FieldPtr make_field(const QPoly& min_poly) { return make_field_impl(min_poly, {}, {}); }
inline FieldPtr make_field(const QPoly& min_poly, const QMat& integral_basis) {
    return make_field_impl(min_poly, integral_basis, {});
}
inline FieldPtr make_field(const QPoly& min_poly, const std::optional<QMat>& integral_basis,
                           const std::optional<std::vector<QVec>>& unit_coords) {
    return make_field_impl(min_poly, integral_basis, unit_coords);
}

}  // namespace hmv
