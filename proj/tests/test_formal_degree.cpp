#include <gtest/gtest.h>

#include <cmath>

#include "kltwist/formal_degree.hpp"
#include "kltwist/kl_parameters.hpp"

using namespace kltwist;

namespace {

// A1 simply connected, Steinberg point: M(h omega) = (1 + q) v^{-(h+2)}, so the truncated
// inverse degree is (1+q)/q + (1+q)^2 sum_{h=1}^{B} q^{-h-1}.
Rational sl2_steinberg_partial(const Rational& q, int bound) {
    Rational total = (1 + q) / q, p = 1 / q;
    for (int h = 1; h <= bound; ++h) {
        p /= q;
        total += (1 + q) * (1 + q) * p;
    }
    total.canonicalize();
    return total;
}

// Steinberg of the adjoint group of type A_{n-1}: d = (q-1)^n / (q^n - 1) with the Iwahori normalised to volume 1.
double pgl_steinberg_degree(int n, double q) { return std::pow(q - 1, n) / (std::pow(q, n) - 1); }

double relative_gap(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(MFunction, SL2SteinbergClosedForm) {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    for (long long h = 0; h <= 6; ++h) {
        // (v^2 + 1) v^{-(h+2)}
        const RatFun expected = (RatFun::v_power(2) + RatFun(1)) * RatFun::v_power(-(h + 2));
        EXPECT_EQ(engine.m_function({h}, st), expected) << "h=" << h;
    }
}

TEST(FormalDegree, SL2SteinbergPartialSumsExact) {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    for (const Rational& q : {Rational(2), Rational(3), make_rational(9, 4)})
        for (int bound : {0, 1, 5, 10, 20}) {
            const auto r = engine.degree_numeric(st, q, bound);
            ASSERT_TRUE(r.exact_inverse_degree.has_value());
            EXPECT_EQ(*r.exact_inverse_degree, sl2_steinberg_partial(q, bound)) << "q=" << q << " B=" << bound;
            // the exact rational function agrees as well
            EXPECT_EQ(*engine.partial_degree_inverse(st, bound).evaluate_exact(q), sl2_steinberg_partial(q, bound));
        }
    EXPECT_EQ(sl2_steinberg_partial(2, 10), make_rational(12279, 2048));
}

TEST(FormalDegree, SteinbergLimits) {
    const auto a1 = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine e1(a1);
    for (double q : {2.0, 3.0, 5.0}) {
        const auto r = e1.degree_numeric(TorusPoint::steinberg(a1), Rational(q), 40);
        EXPECT_NEAR(r.degree, (q - 1) / (2 * (q + 1)), 1e-6);
        EXPECT_TRUE(r.converged);
    }
    for (int n : {2, 3}) {
        const auto rd = pgl_datum(n);
        const FormalDegreeEngine e(rd);
        for (double q : {2.0, 3.0}) {
            const auto r = e.degree_numeric(TorusPoint::steinberg(rd), Rational(q), 40);
            EXPECT_NEAR(r.degree, pgl_steinberg_degree(n, q), 1e-6) << "n=" << n << " q=" << q;
        }
    }
}

TEST(FormalDegree, IncrementsArePositiveAndGeometric) {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto r = engine.degree_numeric(TorusPoint::steinberg(rd), 2, 40);
    for (std::size_t h = 10; h < 40; ++h) {
        EXPECT_GT(r.height_increments[h], 0.0);
        EXPECT_LE(r.height_increments[h + 1] / r.height_increments[h], 0.5 + 1e-12);
    }
    EXPECT_NEAR(r.tail_ratio, 0.5, 1e-12);
}

TEST(FormalDegree, RhoDimensionScalesTheDegree) {
    const auto rd = parse_root_datum_label("A1-ad");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    EXPECT_NEAR(engine.degree_numeric(st, 2, 40, 1e-9, 3).degree, 3 * engine.degree_numeric(st, 2, 40).degree, 1e-12);
}

TEST(FormalDegree, Guards) {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    EXPECT_THROW(engine.degree_numeric(st, 2, 201), size_guard_error);
    EXPECT_THROW(engine.degree_numeric(st, 1, 10), std::invalid_argument);
    EXPECT_THROW(FormalDegreeEngine(parse_root_datum_label("A2-gl")), std::invalid_argument);
    EXPECT_THROW(engine.degree_numeric(TorusPoint::unramified({1, 1}), 2, 10), std::invalid_argument);
}

// Independent oracle: the per-w formula in complex floating point at v = 2.
TEST(Oracle, MFunctionAgreesAtVEqualsTwo) {
    struct Case {
        const char* datum;
        TorusPoint point;
    };
    const std::vector<Case> cases = {
        {"A1-sc", TorusPoint::steinberg(parse_root_datum_label("A1-sc"))},
        {"A1-sc", TorusPoint(4, {1}, {0})},
        {"A2-sc", TorusPoint(3, {1, 2}, {2, 2})},
        {"A2-sc", TorusPoint(1, {0, 0}, {1, 3})},
        {"A2-ad", TorusPoint(5, {1, 0}, {0, 0})},  // not regular
        {"A2-ad", TorusPoint(7, {2, 3}, {0, 2})},
        {"B2-sc", TorusPoint(8, {1, 3}, {2, 2})},
        {"G2-sc", TorusPoint::steinberg(parse_root_datum_label("G2-sc"))},
    };
    for (const auto& c : cases) {
        const auto rd = parse_root_datum_label(c.datum);
        const FormalDegreeEngine engine(rd);
        for (const auto& lam : enumerate_dominant(rd, 4)) {
            const auto exact = evaluate_laurent(engine.m_function_laurent(lam, c.point), Rational(2)).embed(1);
            const auto o = float_oracle_m(rd, engine.weyl(), lam, c.point, 4.0);
            // an exact zero is compared against the size of the cancelling terms
            if (std::abs(exact) == 0.0)
                EXPECT_LE(std::abs(o.value), 1e-9 * o.magnitude) << c.datum << " " << c.point.to_string();
            else
                EXPECT_LT(relative_gap(exact, o.value), 1e-9) << c.datum << " " << c.point.to_string();
        }
    }
}

TEST(Oracle, DegreeAgreesAtFour) {
    for (const char* label : {"A1-sc", "A2-sc", "B2-ad"}) {
        const auto rd = parse_root_datum_label(label);
        const FormalDegreeEngine engine(rd);
        const auto st = TorusPoint::steinberg(rd);
        const auto r = engine.degree_numeric(st, 4, 12);
        const double o = float_oracle_degree_inverse(rd, st, 4.0, 12);
        EXPECT_LT(std::abs(r.inverse_degree - o) / o, 1e-9) << label;
    }
}

TEST(Oracle, DirectModeRefusesNonRegularPoints) {
    const auto rd = parse_root_datum_label("A2-ad");
    const WeylGroup w(rd);
    EXPECT_THROW(float_oracle_m(rd, w, {0, 0}, TorusPoint(5, {1, 0}, {0, 0}), 4.0, OracleMode::direct), NonRegularParameter);
    EXPECT_TRUE(float_oracle_m(rd, w, {0, 0}, TorusPoint(5, {1, 0}, {0, 0}), 4.0).deformed);
}

TEST(MSquared, IsRealAndGaloisStable) {
    const auto rd = parse_root_datum_label("B2-sc");
    const FormalDegreeEngine engine(rd);
    const TorusPoint s(8, {1, 3}, {2, 2});
    for (const auto& lam : enumerate_dominant(rd, 5)) {
        const auto f = engine.m_squared(lam, s).as_ratfun();
        EXPECT_EQ(f.conjugate(), f);
    }
    for (const auto& g : GaloisAutomorphism::all(8)) EXPECT_FALSE(engine.termwise_galois_failure(s, g, 6).has_value()) << g.to_string();
}

TEST(Galois, SL3CentralTwistOfSteinberg) {
    const auto rd = parse_root_datum_label("A2-sc");
    const FormalDegreeEngine engine(rd);
    const TorusPoint z(3, {1, 2}, rd.two_rho_check());
    for (const auto& g : GaloisAutomorphism::all(3)) {
        const auto v = engine.galois_verdict(z, g, 20, 2);
        EXPECT_TRUE(v.termwise_exact_equal);
        EXPECT_LT(v.numeric_degree_diff, 1e-8);
    }
    // the twisted point is again a central twist of Steinberg
    EXPECT_EQ(z.galois(GaloisAutomorphism(3, 2)).torsion(), (IntVector{2, 1}));
}

TEST(Galois, CompactPointAllAutomorphisms) {
    const auto rd = parse_root_datum_label("A2-ad");
    const FormalDegreeEngine engine(rd);
    const TorusPoint c(5, {1, 0}, {0, 0});
    const auto rep = engine.galois_invariance_report(c, GaloisAutomorphism::all(5), 15, 2);
    EXPECT_EQ(rep.galois_verdicts.size(), 4u);
    for (const auto& v : rep.galois_verdicts) EXPECT_TRUE(v.termwise_exact_equal) << v.gamma.to_string();
}

TEST(VZTable, NormSquaredConjugatesZeta) {
    VZTable t(5);
    t.add(1, 1, 2);   // 2 v zeta
    t.add(0, 0, -1);  // -1
    // (2 v zeta - 1)(2 v zeta^-1 - 1) = 4 v^2 - 2 v (zeta + zeta^-1) + 1
    const auto n = t.norm_squared().to_laurent();
    EXPECT_EQ(n.coefficient(2), CyclotomicNumber(4));
    EXPECT_EQ(n.coefficient(1), (CyclotomicNumber::zeta(5) + CyclotomicNumber::zeta(5, 4)).scaled(-2));
    EXPECT_EQ(n.coefficient(0), CyclotomicNumber(1));
    VZTable big(1);
    big.add(0, 0, std::numeric_limits<long long>::max());
    EXPECT_THROW(big.add(0, 0, 1), std::overflow_error);
}

TEST(TensorProduct, DegreesMultiply) {
    const auto a1 = parse_root_datum_label("A1-ad");
    const FormalDegreeEngine e(a1);
    const auto st = TorusPoint::steinberg(a1);
    const double d = tensor_product_degree({{&e, st, 1}, {&e, st, 2}}, 2, 40);
    EXPECT_NEAR(d, (1.0 / 3.0) * (3.0 / 5.0), 1e-9);
}

TEST(MFunction, FastConstructionMatchesReference) {
    for (const char* label : {"A1-sc", "A2-ad", "B2-sc", "G2-sc", "A3-ad"}) {
        const auto rd = parse_root_datum_label(label);
        const FormalDegreeEngine engine(rd);
        for (const auto& lam : enumerate_dominant(rd, 4))
            EXPECT_EQ(engine.m_polynomial(lam), m_polynomial_reference(rd, engine.weyl(), lam)) << label;
    }
}
