#include <catch2/catch_amalgamated.hpp>

#include "hmv/ideal.hpp"

using namespace hmv;

static Rational Q(long n, long d = 1) { return Rational(n, d); }
static QPoly sqrt_poly(long d) { return {Q(-d), Q(0), Q(1)}; }

/* Direct enumeration oracle: min |Nm| over small coefficient combinations of
 * the stored lattice basis. Independent of the production algorithm (no unit
 * folding, no reduction); sound for ideals whose minimizer has small
 * coefficients over the HNF basis. */
static Rational brute_min_norm(const FractionalIdeal& I, long K = 40) {
    Rational best(0);
    for (long u = -K; u <= K; ++u)
        for (long v = -K; v <= K; ++v) {
            if (u == 0 && v == 0) continue;
            QVec c(2);
            for (int j = 0; j < 2; ++j)
                c[j] = Rational(u * I.rows[0][j] + v * I.rows[1][j], I.den);
            Rational nm = qabs(I.field->norm(I.field->element(c)));
            if (best == 0 || nm < best) best = nm;
        }
    return best;
}

TEST_CASE("fractional ideal canonical form") {
    auto F = make_field(sqrt_poly(5));
    FieldElement two = F->from_rational(Q(2));
    FieldElement theta = F->from_power_poly({Q(0), Q(1)});  // sqrt 5

    SECTION("the unit ideal") {
        FractionalIdeal O = ring_of_integers(F);
        REQUIRE(O.den == 1);
        REQUIRE(O.rows == ZMat{{1, 0}, {0, 1}});
        REQUIRE(ideal_norm(O) == Q(1));
        REQUIRE(ideal_is_integral(O));
    }
    SECTION("principal ideals normalize independently of the generator's unit part") {
        FractionalIdeal I2 = principal_ideal(two);
        REQUIRE(I2.rows == ZMat{{2, 0}, {0, 2}});
        REQUIRE(I2.den == 1);
        REQUIRE(ideal_norm(I2) == Q(4));
        FieldElement phi = F->basis_element(1);
        REQUIRE(principal_ideal(phi) == ring_of_integers(F));         // unit
        REQUIRE(principal_ideal(F->mul(two, phi)) == I2);             // 2*phi ~ 2
    }
    SECTION("rational scaling shows up in the denominator") {
        FractionalIdeal H = principal_ideal(F->from_rational(Q(1, 2)));
        REQUIRE(H.rows == ZMat{{1, 0}, {0, 1}});
        REQUIRE(H.den == 2);
        REQUIRE(ideal_norm(H) == Q(1, 4));
        REQUIRE_FALSE(ideal_is_integral(H));
    }
    SECTION("zero ideal") {
        FractionalIdeal Z = make_ideal(F, {F->zero()});
        REQUIRE(Z.is_zero());
        REQUIRE(ideal_norm(Z) == Q(0));
        REQUIRE_THROWS_AS(ideal_inverse(Z), ZeroIdeal);
        REQUIRE_THROWS_AS(ideal_min(Z), ZeroIdeal);
        REQUIRE(ideal_contains(Z, F->zero()));
        REQUIRE_FALSE(ideal_contains(Z, F->one()));
        // zero absorbs products, is the identity for sums
        FractionalIdeal I2 = principal_ideal(two);
        REQUIRE(ideal_mul(Z, I2).is_zero());
        REQUIRE(ideal_add(Z, I2) == I2);
        REQUIRE(ideal_intersect(Z, I2).is_zero());
    }
    SECTION("membership") {
        FractionalIdeal I2 = principal_ideal(two);
        REQUIRE(ideal_contains(I2, two));
        REQUIRE(ideal_contains(I2, F->mul(two, F->basis_element(1))));
        REQUIRE_FALSE(ideal_contains(I2, F->basis_element(1)));
        REQUIRE_FALSE(ideal_contains(I2, F->one()));
        FractionalIdeal I5 = principal_ideal(theta);
        REQUIRE(ideal_contains(I5, theta));
        REQUIRE(ideal_contains(I5, F->from_rational(Q(5))));
        REQUIRE_FALSE(ideal_contains(I5, two));
    }
    SECTION("HNF input is validated for module closure") {
        REQUIRE(make_ideal_from_hnf(F, {{2, 0}, {0, 2}}, 2) == ring_of_integers(F));
        REQUIRE_THROWS_AS(make_ideal_from_hnf(F, {{1, 0}, {0, 2}}, 1), InputError);
        REQUIRE_THROWS_AS(make_ideal_from_hnf(F, {{2, 0}, {1, 1}}, 1), InputError);
        REQUIRE_THROWS_AS(make_ideal_from_hnf(F, {{1, 0}, {0, 1}}, 0), InputError);
        REQUIRE(make_ideal_from_hnf(F, {}, 1).is_zero());
    }
}

TEST_CASE("ideal arithmetic identities") {
    auto F = make_field(sqrt_poly(5));
    FieldElement two = F->from_rational(Q(2));
    FieldElement theta = F->from_power_poly({Q(0), Q(1)});
    FractionalIdeal O = ring_of_integers(F);
    FractionalIdeal I = principal_ideal(two);      // (2), inert prime
    FractionalIdeal J = principal_ideal(theta);    // (sqrt5), ramified prime

    SECTION("coprime sum, product = intersection") {
        REQUIRE(ideal_add(I, J) == O);
        FractionalIdeal P = ideal_mul(I, J);
        REQUIRE(P == ideal_intersect(I, J));
        REQUIRE(ideal_norm(P) == Q(20));
        REQUIRE(P == principal_ideal(F->mul(two, theta)));
    }
    SECTION("ramification: (sqrt5)^2 = (5)") {
        REQUIRE(ideal_mul(J, J) == principal_ideal(F->from_rational(Q(5))));
    }
    SECTION("norm is multiplicative") {
        REQUIRE(ideal_norm(ideal_mul(I, J)) == ideal_norm(I) * ideal_norm(J));
        FractionalIdeal H = principal_ideal(F->from_power_poly({Q(1, 2), Q(3, 2)}));
        REQUIRE(ideal_norm(ideal_mul(I, H)) == ideal_norm(I) * ideal_norm(H));
    }
    SECTION("inverse inverts") {
        REQUIRE(ideal_mul(I, ideal_inverse(I)) == O);
        REQUIRE(ideal_mul(J, ideal_inverse(J)) == O);
        REQUIRE(ideal_inverse(O) == O);
        FractionalIdeal Iinv = ideal_inverse(I);
        REQUIRE(Iinv == principal_ideal(F->from_rational(Q(1, 2))));
        REQUIRE(ideal_contains(Iinv, F->from_rational(Q(1, 2))));
    }
    SECTION("inverse of an intersection is the sum of inverses") {
        FractionalIdeal lhs = ideal_inverse(ideal_intersect(I, J));
        FractionalIdeal rhs = ideal_add(ideal_inverse(I), ideal_inverse(J));
        REQUIRE(lhs == rhs);
    }
    SECTION("square of a sum is the sum of squares") {
        FractionalIdeal lhs = ideal_mul(ideal_add(I, J), ideal_add(I, J));
        FractionalIdeal rhs = ideal_add(ideal_mul(I, I), ideal_mul(J, J));
        REQUIRE(lhs == rhs);
        // also with non-coprime pair (2) and (2 sqrt5)
        FractionalIdeal K = principal_ideal(F->mul(two, theta));
        FractionalIdeal lhs2 = ideal_mul(ideal_add(I, K), ideal_add(I, K));
        FractionalIdeal rhs2 = ideal_add(ideal_mul(I, I), ideal_mul(K, K));
        REQUIRE(lhs2 == rhs2);
    }
    SECTION("containment chain product <= intersection <= each <= sum") {
        FractionalIdeal P = ideal_mul(I, J), M = ideal_intersect(I, J), S = ideal_add(I, J);
        REQUIRE(ideal_contains(M, P));
        REQUIRE(ideal_contains(I, M));
        REQUIRE(ideal_contains(J, M));
        REQUIRE(ideal_contains(S, I));
        REQUIRE(ideal_contains(S, J));
    }
    SECTION("scaling by a unit is the identity") {
        REQUIRE(ideal_scale(I, F->basis_element(1)) == I);
    }
}

TEST_CASE("minimum absolute norm over an ideal") {
    SECTION("frozen values in Q(sqrt5)") {
        auto F = make_field(sqrt_poly(5));
        REQUIRE(ideal_min(ring_of_integers(F)) == Q(1));
        REQUIRE(ideal_min(principal_ideal(F->from_rational(Q(2)))) == Q(4));
        REQUIRE(ideal_min(principal_ideal(F->from_power_poly({Q(0), Q(1)}))) == Q(5));
    }
    SECTION("principal ideals attain the generator norm") {
        for (long d : {2L, 3L, 5L, 13L}) {
            auto F = make_field(sqrt_poly(d));
            for (auto pp : {QPoly{Q(3), Q(1)}, QPoly{Q(1), Q(1)}, QPoly{Q(5), Q(2)}}) {
                FieldElement g = F->from_power_poly(pp);
                INFO("d = " << d);
                REQUIRE(ideal_min(principal_ideal(g)) == qabs(F->norm(g)));
            }
        }
    }
    SECTION("matches direct enumeration") {
        for (long d : {2L, 3L, 5L, 10L, 13L}) {
            auto F = make_field(sqrt_poly(d));
            FieldElement theta = F->from_power_poly({Q(0), Q(1)});
            std::vector<FractionalIdeal> ideals = {
                ring_of_integers(F),
                principal_ideal(F->from_rational(Q(2))),
                principal_ideal(F->from_rational(Q(3))),
                principal_ideal(theta),
                principal_ideal(F->add(theta, F->one())),
                make_ideal(F, {F->from_rational(Q(2)), theta}),
                make_ideal(F, {F->from_rational(Q(3)), F->add(theta, F->one())}),
            };
            for (const auto& I : ideals) {
                INFO("d = " << d << ", norm " << to_string(ideal_norm(I)));
                REQUIRE(ideal_min(I) == brute_min_norm(I));
            }
        }
    }
    SECTION("non-principal ideal exceeds its norm") {
        // (2, sqrt10) in Q(sqrt10): norm 2, but no element has |Nm| = 2
        auto F = make_field(sqrt_poly(10));
        FieldElement theta = F->from_power_poly({Q(0), Q(1)});
        FractionalIdeal P = make_ideal(F, {F->from_rational(Q(2)), theta});
        REQUIRE(ideal_norm(P) == Q(2));
        REQUIRE(ideal_min(P) == Q(4));
        REQUIRE(ideal_mul(P, P) == principal_ideal(F->from_rational(Q(2))));
    }
    SECTION("degree restriction") {
        auto F = make_field({Q(1), Q(-2), Q(-1), Q(1)}, qmat_identity(3), std::nullopt);
        REQUIRE_THROWS_AS(ideal_min(ring_of_integers(F)), UnsupportedDegree);
    }
    SECTION("huge regulator trips the box guard") {
        auto F = make_field(sqrt_poly(151));  // fundamental unit ~ 1.7e9
        REQUIRE_THROWS_AS(ideal_min(ring_of_integers(F)), BoxTooLarge);
    }
}
