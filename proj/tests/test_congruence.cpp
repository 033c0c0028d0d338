#include <catch2/catch_amalgamated.hpp>

#include "hmv/congruence.hpp"

using namespace hmv;

static Rational Q(long n, long d = 1) { return Rational(n, d); }
static QPoly sqrt_poly(long d) { return {Q(-d), Q(0), Q(1)}; }

TEST_CASE("congruence group construction and membership") {
    auto F = make_field(sqrt_poly(5));
    FractionalIdeal O = ring_of_integers(F);
    FractionalIdeal two = principal_ideal(F->from_rational(Q(2)));
    FieldElement one = F->one(), zero = F->zero(), phi = F->basis_element(1);

    SECTION("level and module validation") {
        REQUIRE_THROWS_AS(make_group(GroupKind::gamma0, F, O, make_ideal(F, {F->zero()})),
                          ZeroIdeal);
        REQUIRE_THROWS_AS(make_group(GroupKind::gamma0, F, make_ideal(F, {F->zero()}), two),
                          ZeroIdeal);
        FractionalIdeal half = principal_ideal(F->from_rational(Q(1, 2)));
        REQUIRE_THROWS_AS(make_group(GroupKind::gamma0, F, O, half), InputError);
    }
    SECTION("full modular group membership") {
        CongruenceGroup G = make_group(GroupKind::full, F);
        REQUIRE(group_contains(G, {one, zero, zero, one}));              // identity
        REQUIRE(group_contains(G, {zero, F->neg(one), one, zero}));      // inversion
        REQUIRE(group_contains(G, {one, phi, zero, one}));               // translation
        REQUIRE(group_contains(G, {phi, zero, zero, F->neg(F->galois_conjugate(phi))}));
        // diag(phi, -conj phi) = diag(phi, 1/phi), det = phi * 1/phi = 1
        REQUIRE_FALSE(group_contains(G, {one, zero, zero, F->neg(one)}));  // det -1
        REQUIRE_FALSE(group_contains(G, {F->scale(one, Q(1, 2)), zero, zero,
                                         F->scale(one, Q(2))}));           // non-integral
    }
    SECTION("gamma0 constrains the lower-left entry") {
        CongruenceGroup G0 = make_group(GroupKind::gamma0, F, O, two);
        REQUIRE(group_contains(G0, {one, zero, F->from_rational(Q(2)), one}));
        REQUIRE_FALSE(group_contains(G0, {one, zero, one, one}));
        REQUIRE_FALSE(group_contains(G0, {one, zero, phi, one}));
        REQUIRE(group_contains(G0, {phi, one, zero, F->neg(F->galois_conjugate(phi))}));
        // [[phi, 1], [0, 1/phi]]: det 1, c = 0 in (2), diagonal units arbitrary
    }
    SECTION("gamma1 additionally pins the diagonal mod the level") {
        CongruenceGroup G1 = make_group(GroupKind::gamma1, F, O, two);
        REQUIRE(group_contains(G1, {one, zero, F->from_rational(Q(2)), one}));
        REQUIRE(group_contains(G1, {one, phi, F->zero(), one}));
        // diag(phi, 1/phi) has a - 1 = phi - 1, not in (2)
        REQUIRE_FALSE(group_contains(G1, {phi, zero, zero,
                                          F->neg(F->galois_conjugate(phi))}));
        // a = 3 = 1 + 2: fine; completes to [[3, 1], [2, 1]], det 3 - 2 = 1
        REQUIRE(group_contains(G1, {F->from_rational(Q(3)), one,
                                    F->from_rational(Q(2)), one}));
    }
    SECTION("nontrivial polarization module scales the off-diagonal lattices") {
        FractionalIdeal amod = two;  // a = (2)
        CongruenceGroup G = make_group(GroupKind::full, F, amod, O);
        // b must lie in (1/2), c in (2)
        REQUIRE(group_contains(G, {one, F->from_rational(Q(1, 2)), zero, one}));
        REQUIRE(group_contains(G, {one, zero, F->from_rational(Q(2)), one}));
        REQUIRE_FALSE(group_contains(G, {one, zero, one, one}));
        REQUIRE_FALSE(group_contains(G, {one, F->from_rational(Q(1, 4)), zero, one}));
        // det must still be exactly 1: [[1, 1/2], [2, 2]] has det 1
        REQUIRE(group_contains(G, {one, F->from_rational(Q(1, 2)),
                                   F->from_rational(Q(2)), F->from_rational(Q(2))}));
    }
}

TEST_CASE("group element enumeration in coordinate boxes") {
    auto F = make_field(sqrt_poly(5));
    FractionalIdeal O = ring_of_integers(F);
    FractionalIdeal two = principal_ideal(F->from_rational(Q(2)));

    SECTION("every enumerated element verifies membership; inverses close") {
        CongruenceGroup G = make_group(GroupKind::full, F);
        auto elems = enumerate_box(G, 1);
        REQUIRE(elems.size() > 10);
        for (const auto& m : elems) {
            REQUIRE(group_contains(G, m));
            // inverse [[d, -b], [-c, a]] is again in the group
            GroupElement inv{m.d, F->neg(m.b), F->neg(m.c), m.a};
            REQUIRE(group_contains(G, inv));
        }
    }
    SECTION("gamma0 and gamma1 enumerations are nested subsets of full") {
        CongruenceGroup Gf = make_group(GroupKind::full, F);
        CongruenceGroup G0 = make_group(GroupKind::gamma0, F, O, two);
        CongruenceGroup G1 = make_group(GroupKind::gamma1, F, O, two);
        auto e0 = enumerate_box(G0, 2);
        auto e1 = enumerate_box(G1, 2);
        REQUIRE(!e0.empty());
        REQUIRE(!e1.empty());
        for (const auto& m : e0) REQUIRE(group_contains(Gf, m));
        for (const auto& m : e1) REQUIRE(group_contains(G0, m));
        REQUIRE(e1.size() < e0.size());
    }
    SECTION("identity and translations always appear") {
        CongruenceGroup G = make_group(GroupKind::full, F);
        auto elems = enumerate_box(G, 1);
        int id_found = 0, transl_found = 0;
        for (const auto& m : elems) {
            if (m.a == F->one() && m.d == F->one() && m.c.is_zero()) {
                if (m.b.is_zero()) ++id_found;
                if (m.b == F->basis_element(1)) ++transl_found;
            }
        }
        REQUIRE(id_found == 1);
        REQUIRE(transl_found == 1);
    }
    SECTION("oversized boxes are rejected") {
        CongruenceGroup G = make_group(GroupKind::full, F);
        REQUIRE_THROWS_AS(enumerate_box(G, 50), BoxTooLarge);
    }
}

TEST_CASE("smallest lower-left norm over a box") {
    auto F = make_field(sqrt_poly(5));
    FractionalIdeal O = ring_of_integers(F);
    FractionalIdeal two = principal_ideal(F->from_rational(Q(2)));

    SECTION("full group attains 1") {
        CongruenceGroup G = make_group(GroupKind::full, F);
        auto [mn, wit] = min_lower_left_norm(G, 2);
        REQUIRE(mn == Q(1));
        REQUIRE(group_contains(G, wit));
        REQUIRE(qabs(F->norm(wit.c)) == Q(1));
    }
    SECTION("level (2) pushes the minimum to 4") {
        CongruenceGroup G0 = make_group(GroupKind::gamma0, F, O, two);
        auto [mn, wit] = min_lower_left_norm(G0, 3);
        REQUIRE(mn == Q(4));
        REQUIRE(group_contains(G0, wit));
        REQUIRE_FALSE(wit.c.is_zero());
    }
}

TEST_CASE("elliptic-freeness criterion and trace unipotence") {
    auto F = make_field(sqrt_poly(5));
    FractionalIdeal O = ring_of_integers(F);

    SECTION("criterion threshold |Nm| > 4^n") {
        FractionalIdeal two = principal_ideal(F->from_rational(Q(2)));    // Nm 4
        FractionalIdeal five = make_ideal(F, {F->from_power_poly({Q(0), Q(1)})});  // Nm 5
        FractionalIdeal seven = principal_ideal(F->from_rational(Q(7)));  // Nm 49
        REQUIRE_FALSE(elliptic_free(make_group(GroupKind::gamma1, F, O, two)));
        REQUIRE_FALSE(elliptic_free(make_group(GroupKind::gamma1, F, O, five)));
        REQUIRE(elliptic_free(make_group(GroupKind::gamma1, F, O, seven)));
        // the criterion is stated for gamma1 only
        REQUIRE_FALSE(elliptic_free(make_group(GroupKind::gamma0, F, O, seven)));
        REQUIRE_FALSE(elliptic_free(make_group(GroupKind::full, F)));
    }
    SECTION("bounded traces in a certified-free group are exactly 2") {
        FractionalIdeal seven = principal_ideal(F->from_rational(Q(7)));
        CongruenceGroup G1 = make_group(GroupKind::gamma1, F, O, seven);
        REQUIRE(elliptic_free(G1));
        auto elems = enumerate_box(G1, 2);
        REQUIRE(!elems.empty());
        int bounded = 0;
        for (const auto& m : elems) {
            FieldElement tr = m.trace();
            bool small = true;
            for (int i = 0; i < 2; ++i)
                if (F->certified_cmp(tr, i, Q(2)) > 0 || F->certified_cmp(tr, i, Q(-2)) < 0)
                    small = false;
            if (!small) continue;
            ++bounded;
            REQUIRE(tr == F->from_rational(Q(2)));
        }
        REQUIRE(bounded > 0);  // identity and the unipotent translations qualify
    }
    SECTION("without the norm gap, non-unipotent bounded traces exist") {
        // in the full group, [[0,-1],[1,0]] has trace 0
        CongruenceGroup G = make_group(GroupKind::full, F);
        GroupElement s{F->zero(), F->neg(F->one()), F->one(), F->zero()};
        REQUIRE(group_contains(G, s));
        FieldElement tr = s.trace();
        bool small = true;
        for (int i = 0; i < 2; ++i)
            if (F->certified_cmp(tr, i, Q(2)) > 0 || F->certified_cmp(tr, i, Q(-2)) < 0)
                small = false;
        REQUIRE(small);
        REQUIRE(tr != F->from_rational(Q(2)));
    }
}
