#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/matrix.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/rational.hpp"
#include "kltwist/rational_function.hpp"

using namespace kltwist;

namespace {

// Random element of Q(zeta_n) with small coefficients, written over all powers of zeta
// so the constructor has to reduce it.
CyclotomicNumber random_cyclo(std::mt19937_64& rng, long n) {
    std::uniform_int_distribution<int> c(-4, 4), d(1, 3);
    CyclotomicNumber x;
    for (long j = 0; j < n; ++j) x += CyclotomicNumber::zeta(n, j).scaled(make_rational(c(rng), d(rng)));
    return x;
}

RatFun random_ratfun(std::mt19937_64& rng, long n) {
    std::uniform_int_distribution<int> deg(0, 3);
    auto poly = [&] {
        std::vector<CyclotomicNumber> c;
        for (int i = 0, e = deg(rng); i <= e; ++i) c.push_back(random_cyclo(rng, n));
        if (c.back().is_zero()) c.back() = CyclotomicNumber(1);
        return CycloPolynomial(c);
    };
    return RatFun(poly(), poly());
}

}  // namespace

TEST(Rational, CanonicalFormAndHelpers) {
    EXPECT_EQ(make_rational(6, -4), make_rational(-3, 2));
    EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
    EXPECT_EQ(to_string(make_rational(-6, 4)), "-3/2");
    EXPECT_EQ(floor(make_rational(-7, 2)), Integer(-4));
    EXPECT_EQ(frac(make_rational(-7, 2)), make_rational(1, 2));
    Rational r;
    EXPECT_TRUE(exact_sqrt(make_rational(9, 4), r));
    EXPECT_EQ(r, make_rational(3, 2));
    EXPECT_FALSE(exact_sqrt(Rational(2), r));
    EXPECT_EQ(mod_floor(-7, 5), 3);
    EXPECT_EQ(euler_phi(12), 4);
    EXPECT_EQ(euler_phi(1), 1);
}

TEST(Rational, ZeroDenominatorRejected) { EXPECT_THROW(make_rational(1, 0), std::exception); }

TEST(Matrix, DeterminantAndInverse) {
    const auto m = IntMatrix::from_rows({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}, 3);
    EXPECT_EQ(determinant(m), Rational(4));
    const auto inv = inverse(m);
    ASSERT_TRUE(inv.has_value());
    // inverse of the A3 Cartan matrix has entries min(i,j)(4-max(i,j))/4
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ((*inv)[i][j], make_rational(static_cast<long long>(std::min(i, j) + 1) * (3 - static_cast<long long>(std::max(i, j))), 4));
    EXPECT_EQ(rank(IntMatrix::from_rows({{1, 2}, {2, 4}}, 2)), 1u);
}

TEST(Polynomial, DivisionIdentity) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rational> a(6), b(3);
        for (auto& x : a) x = c(rng);
        for (auto& x : b) x = c(rng);
        b.back() = 1 + std::abs(c(rng));
        const Polynomial<Rational> pa(a), pb(b);
        const auto [q, r] = pa.divmod(pb);
        EXPECT_EQ(q * pb + r, pa);
        EXPECT_LT(r.degree(), pb.degree());
    }
}

TEST(Laurent, ShiftAndProduct) {
    const auto f = LaurentInt::monomial(Integer(1), -2) + LaurentInt::monomial(Integer(3), 1);
    const auto g = LaurentInt::monomial(Integer(-1), 2);
    const auto h = f * g;
    EXPECT_EQ(h.min_exponent(), 0);
    EXPECT_EQ(h.coefficient(0), Integer(-1));
    EXPECT_EQ(h.coefficient(3), Integer(-3));
    EXPECT_EQ(f.shifted(2).min_exponent(), 0);
    EXPECT_TRUE(is_zero(f - f));
}

TEST(Cyclotomic, PowersOfZetaReduce) {
    for (long n : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 9L, 12L}) {
        const auto z = CyclotomicNumber::zeta(n);
        CyclotomicNumber p(1);
        for (long k = 0; k < n; ++k) p *= z;
        EXPECT_EQ(p, CyclotomicNumber(1)) << "n=" << n;
        // sum of all n-th roots of unity vanishes for n > 1
        CyclotomicNumber s;
        for (long k = 0; k < n; ++k) s += CyclotomicNumber::zeta(n, k);
        EXPECT_EQ(s.is_zero(), n > 1) << "n=" << n;
    }
}

TEST(Cyclotomic, EqualityAcrossLevels) {
    EXPECT_EQ(CyclotomicNumber::zeta(6, 2), CyclotomicNumber::zeta(3, 1));
    EXPECT_EQ(CyclotomicNumber::zeta(4, 2), CyclotomicNumber(-1));
    EXPECT_EQ(CyclotomicNumber::zeta(12, 3).lifted(24), CyclotomicNumber::zeta(4));
    EXPECT_NE(CyclotomicNumber::zeta(5), CyclotomicNumber::zeta(5, 2));
}

// Float oracle: every field operation commutes with each complex embedding.
TEST(Cyclotomic, FieldOperationsMatchEmbeddings) {
    std::mt19937_64 rng(2024);
    for (long n : {3L, 4L, 5L, 7L, 8L, 12L}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = random_cyclo(rng, n), b = random_cyclo(rng, n);
            for (long long k = 1; k < n; ++k) {
                if (gcd_ll(k, n) != 1) continue;
                const auto ea = a.embed(k), eb = b.embed(k);
                EXPECT_LT(std::abs((a + b).embed(k) - (ea + eb)), 1e-9);
                EXPECT_LT(std::abs((a * b).embed(k) - ea * eb), 1e-9 * (1 + std::abs(ea * eb)));
                if (!b.is_zero()) {
                    EXPECT_LT(std::abs((a / b).embed(k) - ea / eb), 1e-8 * (1 + std::abs(ea / eb)));
                }
                // k-th embedding is the first embedding after the Galois map zeta -> zeta^k
                EXPECT_LT(std::abs(a.galois(k).embed(1) - ea), 1e-9);
            }
            EXPECT_LT(std::abs(a.conj().embed(1) - std::conj(a.embed(1))), 1e-9);
        }
    }
}

TEST(Cyclotomic, InverseIsExact) {
    std::mt19937_64 rng(99);
    for (long n : {5L, 8L, 9L, 12L}) {
        for (int trial = 0; trial < 15; ++trial) {
            const auto a = random_cyclo(rng, n);
            if (a.is_zero()) continue;
            EXPECT_EQ(a * a.inverse(), CyclotomicNumber(1));
        }
    }
    EXPECT_THROW(CyclotomicNumber().inverse(), std::exception);
}

TEST(Cyclotomic, RationalPart) {
    const auto s = CyclotomicNumber::zeta(5) + CyclotomicNumber::zeta(5, 4);
    EXPECT_FALSE(s.rational_part().has_value());
    const auto t = s * s + s;  // (z + z^-1)^2 + (z + z^-1) = 1
    ASSERT_TRUE(t.rational_part().has_value());
    EXPECT_EQ(*t.rational_part(), Rational(1));
}

TEST(Galois, AutomorphismsAreRingHomomorphisms) {
    std::mt19937_64 rng(5);
    for (long n : {5L, 8L, 12L}) {
        for (const auto& g : GaloisAutomorphism::all(n)) {
            const auto a = random_cyclo(rng, n), b = random_cyclo(rng, n);
            EXPECT_EQ(galois_apply(g, a + b), galois_apply(g, a) + galois_apply(g, b));
            EXPECT_EQ(galois_apply(g, a * b), galois_apply(g, a) * galois_apply(g, b));
            // zeta_n -> zeta_n^k, and the fixed field of all of them is Q
            EXPECT_EQ(galois_apply(g, CyclotomicNumber::zeta(n)), CyclotomicNumber::zeta(n, g.exponent()));
        }
        CyclotomicNumber trace;
        const auto a = random_cyclo(rng, n);
        for (const auto& g : GaloisAutomorphism::all(n)) trace += galois_apply(g, a);
        EXPECT_TRUE(trace.rational_part().has_value());
    }
    EXPECT_EQ(GaloisAutomorphism::all(12).size(), 4u);
}

TEST(Galois, LiftAndRestrictAreCompatible) {
    const GaloisAutomorphism g(5, 2);
    const auto big = g.lifted(15);
    EXPECT_EQ(big.restricted(5).exponent(), 2);
    EXPECT_EQ(mod_floor(big.exponent(), 5), 2);
    EXPECT_EQ(gcd_ll(big.exponent(), 15), 1);
    EXPECT_EQ(compose(g, g).exponent(), 4);
    EXPECT_THROW(GaloisAutomorphism(6, 3), std::exception);
}

TEST(RatFun, CanonicalFormIsUnique) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = random_ratfun(rng, 5), g = random_ratfun(rng, 5);
        if (g.is_zero()) continue;
        // (f g) / g reduces back to f
        EXPECT_EQ((f * g) / g, f);
        EXPECT_EQ(f + g - g, f);
    }
    EXPECT_EQ(RatFun::v_power(2) * RatFun::v_power(-2), RatFun(1));
    EXPECT_EQ(RatFun::q_power(1), RatFun::v_power(2));
}

TEST(RatFun, ArithmeticMatchesPointEvaluation) {
    std::mt19937_64 rng(31);
    const double v0 = 1.37;
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = random_ratfun(rng, 8), g = random_ratfun(rng, 8);
        std::complex<double> ef, eg;
        try {
            ef = f.embed(v0);
            eg = g.embed(v0);
        } catch (const std::domain_error&) {
            continue;
        }
        EXPECT_LT(std::abs((f + g).embed(v0) - (ef + eg)), 1e-7 * (1 + std::abs(ef) + std::abs(eg)));
        EXPECT_LT(std::abs((f * g).embed(v0) - ef * eg), 1e-7 * (1 + std::abs(ef * eg)));
        EXPECT_LT(std::abs(f.galois(GaloisAutomorphism(8, 3)).embed(v0, 1) - f.embed(v0, 3)), 1e-7 * (1 + std::abs(ef)));
    }
}

TEST(RatFun, ExactEvaluation) {
    // (1 + q) / (q - 1) at q = 2 and q = 4
    const auto f = RatFun::q_power(1) + RatFun(1);
    const auto g = RatFun::q_power(1) - RatFun(1);
    EXPECT_EQ(*(f / g).evaluate_exact(2), Rational(3));
    EXPECT_EQ(*(f / g).evaluate_exact(4), make_rational(5, 3));
    // odd powers of v need a square q0
    EXPECT_FALSE(RatFun::v_power(1).evaluate_exact(2).has_value());
    EXPECT_EQ(*RatFun::v_power(1).evaluate_exact(4), Rational(2));
    EXPECT_FALSE(RatFun(CyclotomicNumber::zeta(3)).evaluate_exact(4).has_value());
}

TEST(RatFun, ConjugationFixesRealValues) {
    const auto z = CyclotomicNumber::zeta(7);
    const RatFun f = RatFun(z) * RatFun::v_power(1) + RatFun(z.conj());
    const auto norm = f * f.conjugate();
    EXPECT_EQ(norm.conjugate(), norm);
    EXPECT_LT(std::abs(norm.embed(1.5).imag()), 1e-12);
}
