#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "kltwist/group_ring.hpp"
#include "kltwist/hecke.hpp"

using namespace kltwist;

namespace {

LaurentInt random_laurent(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(-2, 2), e(-2, 2);
    LaurentInt f;
    for (int i = 0; i < 2; ++i) f.add_term(Integer(c(rng)), e(rng));
    return f;
}

HeckeElement random_element(const AffineHeckeAlgebra& alg, std::mt19937_64& rng, int terms = 3) {
    std::uniform_int_distribution<long long> coord(-2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, alg.weyl().size() - 1);
    auto out = alg.scalar(LaurentInt());
    for (int t = 0; t < terms; ++t) {
        IntVector lam(alg.datum().lattice_dim());
        for (auto& x : lam) x = coord(rng);
        out = out + alg.basis(lam, pick(rng)).scaled(random_laurent(rng));
    }
    return out;
}

WeightPolynomial random_weight_poly(std::size_t dim, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> coord(-3, 3);
    WeightPolynomial f;
    for (int t = 0; t < 4; ++t) {
        IntVector lam(dim);
        for (auto& x : lam) x = coord(rng);
        add_term(f, lam, random_laurent(rng));
    }
    return f;
}

const LaurentInt q = v_monomial(2);

}  // namespace

TEST(GroupRing, DivisionByOneMinusIsExactInverse) {
    std::mt19937_64 rng(3);
    for (const IntVector& beta : {IntVector{2}, IntVector{-1, 2}, IntVector{1, 1, -1}, IntVector{0, -3}}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto g = random_weight_poly(beta.size(), rng);
            WeightPolynomial one_minus;
            add_term(one_minus, IntVector(beta.size(), 0), v_monomial(0));
            add_term(one_minus, beta, v_monomial(0, -1));
            EXPECT_EQ(divide_one_minus(g * one_minus, beta), g);
        }
    }
    WeightPolynomial lone;
    add_term(lone, IntVector{1}, v_monomial(0));
    EXPECT_THROW(divide_one_minus(lone, IntVector{2}), inexact_division);
}

TEST(Hecke, QuadraticRelationByHand) {
    auto alg = AffineHeckeAlgebra::create(parse_root_datum_label("A1-sc"));
    const auto Ts = alg->T_simple(0);
    // (T_s - q)(T_s + 1) = 0
    EXPECT_TRUE(((Ts - alg->scalar(q)) * (Ts + alg->one())).is_zero());
}

TEST(Hecke, CrossRelationByHand) {
    // A1 simply connected: alpha = 2 omega, so T_s theta_omega = theta_{-omega} T_s + (q - 1) theta_omega
    auto alg = AffineHeckeAlgebra::create(parse_root_datum_label("A1-sc"));
    const auto s = alg->weyl().right_multiply(0, 0);
    const auto lhs = alg->T_simple(0) * alg->theta({1});
    const auto rhs = alg->basis({-1}, s) + alg->theta({1}).scaled(q_minus_one());
    EXPECT_EQ(lhs, rhs);
    // theta_alpha: T_s theta_{2omega} = theta_{-2omega} T_s + (q - 1)(theta_{2omega} + theta_0)
    const auto lhs2 = alg->T_simple(0) * alg->theta({2});
    const auto rhs2 = alg->basis({-2}, s) + (alg->theta({2}) + alg->one()).scaled(q_minus_one());
    EXPECT_EQ(lhs2, rhs2);
}

TEST(Hecke, OrbitSumIsCentral) {
    for (const char* label : {"A1-sc", "A2-ad", "B2-sc"}) {
        auto alg = AffineHeckeAlgebra::create(parse_root_datum_label(label));
        IntVector lam(alg->datum().lattice_dim(), 0);
        lam[0] = 1;
        const auto z = orbit_sum(*alg, lam);
        for (std::size_t i = 0; i < alg->datum().rank(); ++i) {
            const auto T = alg->T_simple(i);
            EXPECT_EQ(T * z, z * T) << label;
        }
        // a non-invariant theta does not commute
        EXPECT_NE(alg->T_simple(0) * alg->theta(lam), alg->theta(lam) * alg->T_simple(0)) << label;
    }
}

TEST(Hecke, RelationSuites) {
    for (const char* label : {"A1-sc", "A1-ad", "A2-sc", "A2-ad", "B2-sc", "G2-sc", "A1-gl", "T2"}) {
        const auto rep = verify_relations(parse_root_datum_label(label), 2);
        EXPECT_TRUE(rep.all_passed()) << label << " failures " << rep.failures();
        if (parse_root_datum_label(label).rank() > 0) {
            EXPECT_GT(rep.count("cross"), 0u) << label;
            EXPECT_GT(rep.count("quadratic"), 0u) << label;
        }
    }
}

TEST(Hecke, A2AtLengthThreeIsFast) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = verify_relations(parse_root_datum_label("A2-sc"), 3);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(rep.all_passed());
    EXPECT_EQ(rep.count("braid"), 1u);
    EXPECT_LT(secs, 10.0);
}

// Property: multiplication is associative, has unit one(), and the polynomial representation is a module.
TEST(Hecke, RandomAlgebraProperties) {
    std::mt19937_64 rng(77);
    for (const char* label : {"A2-sc", "B2-ad"}) {
        auto alg = AffineHeckeAlgebra::create(parse_root_datum_label(label));
        for (int trial = 0; trial < 15; ++trial) {
            const auto a = random_element(*alg, rng), b = random_element(*alg, rng), c = random_element(*alg, rng);
            EXPECT_EQ((a * b) * c, a * (b * c)) << label;
            EXPECT_EQ(a * alg->one(), a);
            EXPECT_EQ(alg->one() * a, a);
            EXPECT_EQ(a * (b + c), a * b + a * c);
            const auto f = random_weight_poly(alg->datum().lattice_dim(), rng);
            EXPECT_EQ(alg->model_apply(a * b, f), alg->model_apply(a, alg->model_apply(b, f))) << label;
        }
    }
}

// At v = 1 the algebra degenerates to the group algebra of the extended Weyl group.
TEST(Hecke, SpecializationAtOne) {
    std::mt19937_64 rng(8);
    auto alg = AffineHeckeAlgebra::create(parse_root_datum_label("A2-sc"));
    for (int trial = 0; trial < 15; ++trial) {
        const auto a = random_element(*alg, rng), b = random_element(*alg, rng);
        EXPECT_EQ(specialize_at_one(a * b), group_algebra_multiply(alg->weyl(), specialize_at_one(a), specialize_at_one(b)));
    }
}

TEST(Hecke, MixingAlgebrasIsRejected) {
    auto a1 = AffineHeckeAlgebra::create(parse_root_datum_label("A1-sc"));
    auto a2 = AffineHeckeAlgebra::create(parse_root_datum_label("A1-sc"));
    EXPECT_THROW(a1->one() * a2->one(), std::invalid_argument);
}

TEST(CentralCharacter, OrbitAndInvariance) {
    const auto rd = parse_root_datum_label("A2-sc");
    const WeylGroup w(rd);
    const TorusPoint st = TorusPoint::steinberg(rd);
    const auto orbit = central_character_orbit(w, st);
    EXPECT_EQ(orbit.orbit().size(), 6u);
    // translating the point by W does not change the character
    for (const auto& x : w.elements()) EXPECT_EQ(central_character_orbit(w, st.weyl_translate(x)), orbit);
    // the identity point is fixed by W
    EXPECT_EQ(central_character_orbit(w, TorusPoint::unramified({0, 0})).orbit().size(), 1u);
}

TEST(CentralCharacter, GaloisCompatibility) {
    const auto rd = parse_root_datum_label("A2-sc");
    const WeylGroup w(rd);
    const TorusPoint s(5, {1, 3}, {2, 2});
    const auto f = orbit_sum_polynomial(w, {1, 0}) + orbit_sum_polynomial(w, {1, 1});
    for (const auto& g : GaloisAutomorphism::all(5)) {
        EXPECT_EQ(central_character_orbit(w, s.galois(g)), central_character_orbit(w, s).galois(g));
        // f has rational coefficients, so f(gamma s) = gamma(f(s))
        EXPECT_EQ(central_character(rd, s.galois(g), f), central_character(rd, s, f).galois(g));
    }
    WeightPolynomial theta;
    add_term(theta, IntVector{1, 0}, v_monomial(0));
    EXPECT_THROW(central_character(rd, s, theta), NotWeylInvariant);
}
