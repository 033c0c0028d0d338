#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hmv/errors.hpp"
#include "hmv/ideal.hpp"
#include "hmv/numberfield.hpp"

namespace hmv {

/* Congruence subgroups of SL(O_F + a) for a fractional ideal a ("the
 * polarization module"): 2x2 matrices [[a, b], [c, d]] with determinant 1 and
 *
 *   full:    a, d in O_F,  b in a^{-1},  c in a
 *   gamma0:  additionally c in a*n for an integral level ideal n
 *   gamma1:  additionally a - 1 and d - 1 in n
 */
enum class GroupKind { full, gamma0, gamma1 };

struct GroupElement {
    FieldElement a, b, c, d;
    FieldElement trace() const { return a.field->add(a, d); }
    FieldElement det() const {
        return a.field->sub(a.field->mul(a, d), a.field->mul(b, c));
    }
};

struct CongruenceGroup {
    FieldPtr field;
    GroupKind kind = GroupKind::full;
    FractionalIdeal module;     // a
    FractionalIdeal module_inv; // a^{-1}, cached
    FractionalIdeal level;      // n (the unit ideal for kind == full)
    FractionalIdeal lower_left; // lattice constraining c: a or a*n
};

inline CongruenceGroup make_group(GroupKind kind, FieldPtr F, const FractionalIdeal& module,
                                  const FractionalIdeal& level) {
    if (module.field != F || level.field != F)
        throw InternalError("group data from a different field");
    if (module.is_zero()) throw ZeroIdeal("polarization module is the zero ideal");
    if (level.is_zero()) throw ZeroIdeal("level is the zero ideal");
    if (!ideal_is_integral(level)) throw InputError("level ideal must be integral");
    CongruenceGroup G;
    G.field = std::move(F);
    G.kind = kind;
    G.module = module;
    G.module_inv = ideal_inverse(module);
    G.level = (kind == GroupKind::full) ? ring_of_integers(G.field) : level;
    G.lower_left = (kind == GroupKind::full) ? module : ideal_mul(module, level);
    return G;
}

inline CongruenceGroup make_group(GroupKind kind, FieldPtr F) {
    FractionalIdeal O = ring_of_integers(F);
    return make_group(kind, std::move(F), O, O);
}

inline bool group_contains(const CongruenceGroup& G, const GroupElement& m) {
    const FieldPtr& F = G.field;
    if (!F->is_integral(m.a) || !F->is_integral(m.d)) return false;
    if (!ideal_contains(G.module_inv, m.b)) return false;
    if (!ideal_contains(G.lower_left, m.c)) return false;
    if (m.det() != F->one()) return false;
    if (G.kind == GroupKind::gamma1) {
        if (!ideal_contains(G.level, F->sub(m.a, F->one()))) return false;
        if (!ideal_contains(G.level, F->sub(m.d, F->one()))) return false;
    }
    return true;
}

/* No-elliptic-elements certificate: for gamma1 levels with |Nm(n)| > 4^n any
 * group element whose trace is bounded by 2 in every embedding is forced to
 * have trace exactly 2 (trace = 2 mod n plus the norm gap), so no elliptic
 * fixed points occur. Returns false when the criterion does not apply. */
inline bool elliptic_free(const CongruenceGroup& G) {
    if (G.kind != GroupKind::gamma1) return false;
    Rational bound(1);
    for (int i = 0; i < G.field->degree; ++i) bound *= 4;
    return ideal_norm(G.level) > bound;
}

namespace detail {

inline bool coords_within(const ZVec& z, long H) {
    for (const auto& c : z)
        if (iabs(c) > H) return false;
    return true;
}

/* All lattice points of I with coordinates in [-H, H]^n (includes zero). */
inline std::vector<FieldElement> lattice_box(const FractionalIdeal& I, long H) {
    const FieldPtr& F = I.field;
    int n = F->degree;
    std::vector<FieldElement> basis;
    for (int i = 0; i < n; ++i) basis.push_back(row_element(I, i));
    std::vector<FieldElement> out;
    std::vector<long> idx(n, -H);
    while (true) {
        FieldElement x = F->zero();
        for (int i = 0; i < n; ++i) x = F->add(x, F->scale(basis[i], Rational(idx[i])));
        out.push_back(std::move(x));
        int k = 0;
        while (k < n && ++idx[k] > H) idx[k++] = -H;
        if (k == n) break;
    }
    return out;
}

}  // namespace detail

/* All group elements whose four entries have coordinates in [-H, H] over
 * their respective lattices (O_F, a^{-1}, a or a*n). d is determined by the
 * determinant once (a, b, c) are fixed. */
inline std::vector<GroupElement> enumerate_box(const CongruenceGroup& G, long H) {
    if (H < 0) throw InputError("enumeration box bound must be nonnegative");
    const FieldPtr& F = G.field;
    int n = F->degree;
    double combos = 1.0;
    for (int i = 0; i < 3 * n; ++i) combos *= (2.0 * static_cast<double>(H) + 1.0);
    if (combos > 6.0e6) throw BoxTooLarge("group enumeration box exceeds the supported size");

    std::vector<FieldElement> as = detail::lattice_box(ring_of_integers(F), H);
    std::vector<FieldElement> bs = detail::lattice_box(G.module_inv, H);
    std::vector<FieldElement> cs = detail::lattice_box(G.lower_left, H);

    std::vector<GroupElement> out;
    const bool g1 = (G.kind == GroupKind::gamma1);
    for (const auto& a : as) {
        if (g1 && !ideal_contains(G.level, F->sub(a, F->one()))) continue;
        if (a.is_zero()) {
            // det = -bc = 1 forces b = -c^{-1}; d ranges freely over the box
            for (const auto& c : cs) {
                if (c.is_zero()) continue;
                FieldElement b = F->neg(F->inverse(c));
                auto bz = detail::lattice_coords(G.module_inv, b);
                if (!bz || !detail::coords_within(*bz, H)) continue;
                for (const auto& d : as) {
                    if (g1 && !ideal_contains(G.level, F->sub(d, F->one()))) continue;
                    out.push_back({a, b, c, d});
                }
            }
            continue;
        }
        FieldElement inv_a = F->inverse(a);
        for (const auto& c : cs) {
            for (const auto& b : bs) {
                // det = 1 forces d = (1 + b c) / a; keep it if integral and boxed
                FieldElement d = F->mul(F->add(F->one(), F->mul(b, c)), inv_a);
                if (!F->is_integral(d)) continue;
                bool boxed = true;  // O_F coords are the element coords themselves
                for (const auto& dc : d.coords)
                    if (qabs(dc) > H) boxed = false;
                if (!boxed) continue;
                if (g1 && !ideal_contains(G.level, F->sub(d, F->one()))) continue;
                out.push_back({a, b, c, d});
            }
        }
    }
    return out;
}

/* Smallest |Nm(c)| over box elements with c != 0, with a witness: an exact
 * upper bound for the group-wide minimum, exact over the box itself. */
inline std::pair<Rational, GroupElement> min_lower_left_norm(const CongruenceGroup& G, long H) {
    std::optional<Rational> best;
    GroupElement wit;
    for (auto& m : enumerate_box(G, H)) {
        if (m.c.is_zero()) continue;
        Rational nm = qabs(G.field->norm(m.c));
        if (!best || nm < *best) {
            best = nm;
            wit = std::move(m);
        }
    }
    if (!best)
        throw InputError("no group element with nonzero lower-left entry in this box");
    return {*best, wit};
}

}  // namespace hmv
