#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/ideal.hpp"
#include "hmv/interval.hpp"
#include "hmv/numberfield.hpp"

namespace hmv {

/* ---- cones over a lattice -------------------------------------------------- */

/* A strictly convex rational polyhedral cone in the positive cone of
 * lattice (x) R, stored by its primitive totally positive ray generators. */
struct Cone {
    FractionalIdeal lattice;
    std::vector<FieldElement> generators;
};

inline Cone make_cone(const FractionalIdeal& lattice, const std::vector<FieldElement>& generators) {
    if (lattice.is_zero()) throw ZeroIdeal("cone lattice is the zero ideal");
    const FieldPtr& F = lattice.field;
    int n = F->degree;
    if (generators.empty()) throw InputError("a cone needs at least one generator");
    if (static_cast<int>(generators.size()) > n)
        throw InputError("a strictly convex cone has at most as many generators as the rank");
    ZMat coords;
    for (const auto& g : generators) {
        if (g.field != F) throw InternalError("cone generator from a different field");
        if (!F->is_totally_positive(g))
            throw InputError("cone generators must be totally positive");
        auto z = detail::lattice_coords(lattice, g);
        if (!z) throw InputError("cone generator does not lie in the lattice");
        Integer g_content = 0;
        for (const auto& c : *z) g_content = igcd(g_content, c);
        if (g_content != 1) throw InputError("cone generators must be primitive lattice vectors");
        coords.push_back(*z);
    }
    QMat qcoords(coords.size(), QVec(n));
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (int j = 0; j < n; ++j) qcoords[i][j] = Rational(coords[i][j]);
    if (hnf_rows(qcoords).size() != coords.size())
        throw InputError("cone generators are linearly dependent");
    return {lattice, generators};
}

/* Exact smoothness test: the generators form a lattice basis, i.e. their
 * coordinate matrix over the lattice has determinant +-1. */
inline bool is_smooth(const Cone& tau) {
    const FieldPtr& F = tau.lattice.field;
    int n = F->degree;
    if (static_cast<int>(tau.generators.size()) != n)
        throw NotFullDimensional("smoothness test needs a full-dimensional cone");
    ZMat coords;
    for (const auto& g : tau.generators)
        coords.push_back(*detail::lattice_coords(tau.lattice, g));
    Integer d = zmat_det(coords);
    return d == 1 || d == -1;
}

/* ---- boundary hull marching (real quadratic) ------------------------------- */

namespace detail {

/* All lattice points x with sigma_1(x), sigma_2(x) in [0, hi_i], enumerated
 * through the interval inverse of the embedding matrix of a reduced basis.
 * The box is rounded outward, so the list may contain extra points slightly
 * outside; callers filter with exact predicates. */
inline std::vector<FieldElement> lattice_points_in_embedding_box(const FractionalIdeal& M,
                                                                 double hi1, double hi2) {
    const FieldPtr& F = M.field;
    auto [r1, r2] = reduced_ideal_basis(M);
    Interval E00 = F->embed(r1, 0), E01 = F->embed(r1, 1);
    Interval E10 = F->embed(r2, 0), E11 = F->embed(r2, 1);
    Interval det = E00 * E11 - E01 * E10;
    if (det.contains(0.0)) throw InternalError("embedding matrix determinant not certified");
    Interval inv00 = E11 / det, inv01 = iv_neg(E01) / det;
    Interval inv10 = iv_neg(E10) / det, inv11 = E00 / det;
    Interval box1(0.0, hi1), box2(0.0, hi2);
    Interval u_iv = box1 * inv00 + box2 * inv10;
    Interval v_iv = box1 * inv01 + box2 * inv11;
    if (std::max(std::abs(u_iv.lo), std::abs(u_iv.hi)) > 1e9 ||
        std::max(std::abs(v_iv.lo), std::abs(v_iv.hi)) > 1e9)
        throw BoxTooLarge("lattice enumeration box exceeds the supported size");
    long u_lo = static_cast<long>(std::floor(u_iv.lo)), u_hi = static_cast<long>(std::ceil(u_iv.hi));
    long v_lo = static_cast<long>(std::floor(v_iv.lo)), v_hi = static_cast<long>(std::ceil(v_iv.hi));
    if ((u_hi - u_lo + 1) > 4000 || (v_hi - v_lo + 1) > 4000 ||
        (u_hi - u_lo + 1) * (v_hi - v_lo + 1) > 4000000)
        throw BoxTooLarge("lattice enumeration box exceeds the supported size");
    std::vector<FieldElement> out;
    for (long u = u_lo; u <= u_hi; ++u)
        for (long v = v_lo; v <= v_hi; ++v) {
            if (u == 0 && v == 0) continue;
            out.push_back(F->add(F->scale(r1, Rational(u)), F->scale(r2, Rational(v))));
        }
    return out;
}

/* sign of sigma_1(x) sigma_2(y) - sigma_2(x) sigma_1(y), exactly: it is the
 * first embedding of x*conj(y) - conj(x)*y. */
inline int cross_sign(const FieldPtr& F, const FieldElement& x, const FieldElement& y) {
    FieldElement c =
        F->sub(F->mul(x, F->galois_conjugate(y)), F->mul(F->galois_conjugate(x), y));
    if (c.is_zero()) return 0;
    return F->certified_sign(c, 0);
}

/* Minimal-trace totally positive lattice point; ties broken by the larger
 * first embedding. This is a vertex of the convex hull of the totally
 * positive points and the canonical start of the boundary walk. */
inline FieldElement min_trace_positive_point(const FractionalIdeal& M) {
    const FieldPtr& F = M.field;
    for (Rational T(2);; T *= 2) {
        if (T > Rational(M.rows[0][0] * M.rows[1][1] * 4 + 4))
            throw InternalError("minimal-trace search failed to locate a lattice point");
        double box = iv_from_rational(T).hi * 1.001;
        std::vector<FieldElement> pts;
        for (auto& x : lattice_points_in_embedding_box(M, box, box)) {
            if (!F->is_totally_positive(x)) continue;
            if (F->trace(x) > T) continue;
            pts.push_back(std::move(x));
        }
        if (pts.empty()) continue;
        FieldElement best = pts[0];
        for (std::size_t i = 1; i < pts.size(); ++i) {
            Rational dt = F->trace(pts[i]) - F->trace(best);
            if (dt < 0 ||
                (dt == 0 && F->certified_sign(F->sub(pts[i], best), 0) > 0))
                best = pts[i];
        }
        return best;
    }
}

}  // namespace detail

/* One period of the boundary of the convex hull of the totally positive
 * lattice points, together with the cycle of the three-term relations
 * A_{k-1} + A_{k+1} = b_k A_k. vertices holds A_0 .. A_{p+1} where
 * A_p = w A_0 and A_{p+1} = w A_1 for the period map w (the stored unit or
 * its inverse, whichever contracts the first embedding); cycle holds
 * (b_1, ..., b_p). Top cones of the period are (A_k, A_{k+1}), k < p. */
struct Fan {
    FractionalIdeal lattice;
    FieldElement unit;
    std::vector<FieldElement> vertices;
    std::vector<Integer> cycle;
    int period = 0;
};

inline Fan cusp_resolution_fan(const FractionalIdeal& lattice, const FieldElement& unit) {
    if (lattice.is_zero()) throw ZeroIdeal("resolution fan of the zero ideal");
    const FieldPtr& F = lattice.field;
    if (F->degree != 2)
        throw UnsupportedDegree("automatic cusp resolution requires a real quadratic field");
    if (unit.field != F) throw InternalError("fan unit from a different field");
    if (!F->is_integral(unit) || qabs(F->norm(unit)) != 1)
        throw InputError("fan unit must be a unit of the ring of integers");
    if (!F->is_totally_positive(unit))
        throw InputError("fan unit must be totally positive");
    if (unit == F->one()) throw InputError("fan unit must have infinite order");

    // period map w: the power of the unit with sigma_1(w) < 1
    FieldElement w = unit;
    if (F->certified_cmp(w, 0, Rational(1)) > 0) w = F->inverse(w);

    FieldElement A0 = detail::min_trace_positive_point(lattice);

    // successor: among totally positive points with sigma_1 < sigma_1(A0) and
    // sigma_2 up to one period away, the direction from A0 of maximal angle
    // (ties to the nearest point). That is the next hull vertex.
    double hi1 = F->embed(A0, 0).hi * 1.001;
    double hi2 = F->embed(A0, 1).hi * F->embed(w, 1).hi * 2.0 + 1.0;
    std::optional<FieldElement> A1;
    for (auto& x : detail::lattice_points_in_embedding_box(lattice, hi1, hi2)) {
        if (!F->is_totally_positive(x)) continue;
        if (x == A0) continue;
        FieldElement dx = F->sub(x, A0);
        if (F->certified_sign(dx, 0) >= 0) continue;
        if (!A1) {
            A1 = x;
            continue;
        }
        FieldElement db = F->sub(*A1, A0);
        int s = detail::cross_sign(F, db, dx);
        if (s > 0 ||
            (s == 0 && F->trace(F->mul(dx, dx)) < F->trace(F->mul(db, db))))
            A1 = x;
    }
    if (!A1) throw InternalError("hull successor search found no candidate");

    Fan fan;
    fan.lattice = lattice;
    fan.unit = unit;
    fan.vertices = {A0, *A1};
    FieldElement stop0 = F->mul(w, A0), stop1 = F->mul(w, *A1);
    for (int k = 1; k <= 10000; ++k) {
        const FieldElement& prev = fan.vertices[k - 1];
        const FieldElement& cur = fan.vertices[k];
        long b = 1;
        while (!F->is_totally_positive(F->sub(F->scale(cur, Rational(b)), prev))) {
            if (++b > 1000000) throw InternalError("three-term coefficient search diverged");
        }
        fan.cycle.push_back(Integer(b));
        fan.vertices.push_back(F->sub(F->scale(cur, Rational(b)), prev));
        if (cur == stop0 && fan.vertices.back() == stop1) {
            fan.period = k;
            break;
        }
    }
    if (fan.period == 0) throw InternalError("hull marching did not close up");

    // postcondition: consecutive vertices generate the lattice (smooth cones)
    for (int k = 0; k < fan.period; ++k) {
        ZMat m = {*detail::lattice_coords(lattice, fan.vertices[k]),
                  *detail::lattice_coords(lattice, fan.vertices[k + 1])};
        Integer d = zmat_det(m);
        if (d != 1 && d != -1) throw InternalError("hull marching produced a non-smooth cone");
    }
    return fan;
}

/* The period's full-dimensional cones, re-validated through make_cone. */
inline std::vector<Cone> period_cones(const Fan& fan) {
    std::vector<Cone> out;
    for (int k = 0; k < fan.period; ++k)
        out.push_back(make_cone(fan.lattice, {fan.vertices[k], fan.vertices[k + 1]}));
    return out;
}

/* ---- Lelong numbers --------------------------------------------------------- */

/* nu = (1/2pi) Nm(lambda(tau))^{1/n} with lambda(tau) the sum of the ray
 * generators: the norm stays exact, the transcendental factor is an interval. */
struct LelongData {
    Rational norm;   // Nm(lambda(tau)), exact
    Interval value;  // (1/2pi) * norm^{1/n}
};

inline LelongData lelong_number(const Cone& tau) {
    const FieldPtr& F = tau.lattice.field;
    FieldElement lambda = F->zero();
    for (const auto& g : tau.generators) lambda = F->add(lambda, g);
    LelongData out;
    out.norm = F->norm(lambda);
    if (out.norm <= 0) throw InternalError("totally positive sum with nonpositive norm");
    out.value = iv_nth_root(iv_from_rational(out.norm), F->degree) / iv_two_pi();
    return out;
}

/* Nm(sum m_j lambda_j), exact; all orders m_j >= 1. */
inline Rational weighted_multiplicity(const std::vector<Integer>& orders, const Cone& tau) {
    if (orders.size() != tau.generators.size())
        throw InputError("one multiplicity order per cone generator required");
    const FieldPtr& F = tau.lattice.field;
    FieldElement lambda = F->zero();
    for (std::size_t j = 0; j < orders.size(); ++j) {
        if (orders[j] < 1) throw InputError("multiplicity orders must be >= 1");
        lambda = F->add(lambda, F->scale(tau.generators[j], Rational(orders[j])));
    }
    return F->norm(lambda);
}

/* ---- nef-modulo-boundary divisor coefficients ------------------------------- */

/* Per boundary ray rho: coefficient (n / 2 pi ell) (t Nm(rho))^{1/n} of the
 * ray's divisor, plus the curve self-intersection -b_k; per cusp also the
 * simplified coefficient (n / 2 pi ell) t^{1/n}. */
struct RayDivisorData {
    FieldElement ray;
    Rational ray_norm;           // Nm(rho), exact
    Interval coefficient;        // (n / 2 pi ell) (t Nm(rho))^{1/n}
    Integer self_intersection;   // -b_k
};

struct CuspDivisorData {
    std::vector<RayDivisorData> rays;
    Interval simplified_coefficient;  // (n / 2 pi ell) t^{1/n}
};

inline std::vector<CuspDivisorData> nef_divisor_coefficients(const std::vector<Fan>& fans,
                                                             const std::vector<Rational>& depths,
                                                             long overlap) {
    if (fans.size() != depths.size())
        throw InputError("one depth per cusp fan required");
    if (overlap < 1) throw InputError("overlap multiplicity must be >= 1");
    std::vector<CuspDivisorData> out;
    for (std::size_t c = 0; c < fans.size(); ++c) {
        const Fan& fan = fans[c];
        const FieldPtr& F = fan.lattice.field;
        int n = F->degree;
        const Rational& t = depths[c];
        if (t <= 0) throw InputError("cusp depth must be positive");
        Interval pref =
            iv_from_rational(Rational(n)) / (iv_two_pi() * iv_from_rational(Rational(overlap)));
        CuspDivisorData data;
        for (int k = 1; k <= fan.period; ++k) {
            RayDivisorData ray;
            ray.ray = fan.vertices[k];
            ray.ray_norm = F->norm(ray.ray);
            ray.coefficient = pref * iv_nth_root(iv_from_rational(t * ray.ray_norm), n);
            ray.self_intersection = -fan.cycle[k - 1];
            data.rays.push_back(std::move(ray));
        }
        data.simplified_coefficient = pref * iv_nth_root(iv_from_rational(t), n);
        out.push_back(std::move(data));
    }
    return out;
}

/* ---- numeric liminf cross-check --------------------------------------------- */

/* Radial estimate of
 *     liminf_{z -> x}  prod_i (sum_j S[i][j] log|z_j|)  /  log^n|z - x|
 * where S[i][j] = sigma_i(lambda_j) for the generators lambda_j of a
 * full-dimensional smooth ambient cone and x has z_j = 0 exactly at the face's
 * indices. The exact value is Nm(sum of face generators); the estimate works
 * in log space (log eps ladder), so the approach can be pushed arbitrarily
 * deep without underflow. Radial paths make the estimate one-sided. */
struct LiminfOptions {
    int directions = 8;
    std::vector<double> log_eps = {-64.0, -256.0, -1024.0, -4096.0};
    std::uint64_t seed = 0x1d2e3c4b5a69780fULL;
};

inline double lelong_liminf_estimate(const std::vector<FieldElement>& ambient,
                                     const std::vector<int>& face,
                                     const LiminfOptions& opt = {}) {
    if (ambient.empty()) throw InputError("ambient cone generators required");
    const FieldPtr& F = ambient[0].field;
    int n = F->degree;
    if (static_cast<int>(ambient.size()) != n)
        throw NotFullDimensional("liminf estimate needs a full-dimensional ambient cone");
    if (face.empty()) throw InputError("face index set must be nonempty");
    std::vector<bool> in_face(n, false);
    for (int s : face) {
        if (s < 0 || s >= n) throw InputError("face index out of range");
        if (in_face[s]) throw InputError("duplicate face index");
        in_face[s] = true;
    }
    std::vector<std::vector<double>> S(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S[i][j] = F->embed_mid(ambient[j], i);

    std::mt19937_64 rng(opt.seed);
    auto unit_real = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < opt.directions; ++d) {
        // direction v and off-face base point c, components in [1/2, 2]
        std::vector<double> logv(n), logz(n);
        double v2 = 0;
        for (int j = 0; j < n; ++j) {
            logv[j] = (2.0 * unit_real() - 1.0) * std::log(2.0);
            v2 += std::exp(2.0 * logv[j]);
        }
        std::vector<double> logc(n);
        for (int j = 0; j < n; ++j)
            logc[j] = in_face[j] ? 0.0 : (2.0 * unit_real() - 1.0) * std::log(2.0);

        double estimate = 0;
        for (double L : opt.log_eps) {
            for (int j = 0; j < n; ++j) logz[j] = in_face[j] ? L + logv[j] : logc[j];
            double num = 1;
            for (int i = 0; i < n; ++i) {
                double row = 0;
                for (int j = 0; j < n; ++j) row += S[i][j] * logz[j];
                num *= row;
            }
            double den = std::pow(L + 0.5 * std::log(v2), n);
            estimate = num / den;
        }
        best = std::min(best, estimate);
    }
    return best;
}

}  // namespace hmv
