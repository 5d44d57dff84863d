#pragma once

// Rational functions in one symbolic variable v (with q = v^2) over the
// cyclotomic numbers. Stored reduced with a monic denominator, so structural
// equality is field equality.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/polynomial.hpp"

namespace kltwist {

using CycloPolynomial = Polynomial<CyclotomicNumber>;
using CycloLaurent = LaurentPolynomial<CyclotomicNumber>;

class RatFun {
   public:
    RatFun() : den_(CyclotomicNumber(1)) {}
    RatFun(const CyclotomicNumber& c) : num_(c), den_(CyclotomicNumber(1)) {}
    RatFun(int c) : RatFun(CyclotomicNumber(c)) {}
    RatFun(CycloPolynomial num, CycloPolynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// v^k for any integer k.
    static RatFun v_power(long k) {
        if (k >= 0) return RatFun(CycloPolynomial::monomial(CyclotomicNumber(1), static_cast<std::size_t>(k)),
                                  CycloPolynomial(CyclotomicNumber(1)));
        return RatFun(CycloPolynomial(CyclotomicNumber(1)),
                      CycloPolynomial::monomial(CyclotomicNumber(1), static_cast<std::size_t>(-k)));
    }
    /// q^k = v^{2k}.
    static RatFun q_power(long k) { return v_power(2 * k); }

    static RatFun from_laurent(const CycloLaurent& f) {
        if (f.is_zero()) return RatFun();
        const long low = f.min_exponent();
        if (low >= 0) {
            std::vector<CyclotomicNumber> c(static_cast<std::size_t>(low));
            c.insert(c.end(), f.coefficients().begin(), f.coefficients().end());
            return RatFun(CycloPolynomial(std::move(c)), CycloPolynomial(CyclotomicNumber(1)));
        }
        return RatFun(CycloPolynomial(f.coefficients()),
                      CycloPolynomial::monomial(CyclotomicNumber(1), static_cast<std::size_t>(-low)));
    }

    /// Polynomial in q with rational coefficients, as a function of v.
    static RatFun from_q_polynomial(const Polynomial<Rational>& p) {
        std::vector<CyclotomicNumber> c(p.coefficients().empty() ? 0 : 2 * p.coefficients().size() - 1);
        for (std::size_t i = 0; i < p.coefficients().size(); ++i) c[2 * i] = CyclotomicNumber(p.coefficients()[i]);
        return RatFun(CycloPolynomial(std::move(c)), CycloPolynomial(CyclotomicNumber(1)));
    }

    const CycloPolynomial& numerator() const { return num_; }
    const CycloPolynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    /// The Laurent expansion when the denominator is a power of v.
    std::optional<CycloLaurent> as_laurent() const {
        if (!is_monomial(den_)) return std::nullopt;
        return CycloLaurent(-den_.degree(), num_.coefficients());
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    RatFun operator-() const {
        RatFun r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    /// Coefficientwise Galois action; v is fixed.
    RatFun galois(const GaloisAutomorphism& gamma) const {
        auto apply = [&](const CyclotomicNumber& c) { return galois_apply(gamma, c); };
        return RatFun(num_.map<CyclotomicNumber>(apply), den_.map<CyclotomicNumber>(apply));
    }

    /// Complex conjugation (zeta -> zeta^{-1}); v is real, so fixed.
    RatFun conjugate() const {
        auto apply = [](const CyclotomicNumber& c) { return c.conj(); };
        return RatFun(num_.map<CyclotomicNumber>(apply), den_.map<CyclotomicNumber>(apply));
    }

    /// True when every coefficient is rational.
    bool has_rational_coefficients() const {
        for (const auto& c : num_.coefficients())
            if (!c.rational_part()) return false;
        for (const auto& c : den_.coefficients())
            if (!c.rational_part()) return false;
        return true;
    }

    /// Value under zeta_n -> exp(2 pi i k / n), v -> v0.
    std::complex<double> embed(double v0, long long k = 1) const {
        const auto d = eval_poly(den_, v0, k);
        if (std::abs(d) == 0.0) throw std::domain_error("rational function has a pole at v0");
        return eval_poly(num_, v0, k) / d;
    }

    /// Exact value at q = q0 (v0 = sqrt(q0)) when it is visibly rational: rational coefficients and
    /// either a rational v0 or only even powers of v.
    std::optional<Rational> evaluate_exact(const Rational& q0) const {
        if (!has_rational_coefficients()) return std::nullopt;
        Rational v0;
        const bool v_rational = exact_sqrt(q0, v0);
        if (!v_rational && !(only_even_powers(num_) && only_even_powers(den_))) return std::nullopt;
        auto eval = [&](const CycloPolynomial& p) {
            Rational acc = 0;
            if (v_rational) {
                for (std::size_t i = p.coefficients().size(); i-- > 0;) acc = acc * v0 + *p.coefficients()[i].rational_part();
            } else {
                for (std::size_t i = p.coefficients().size(); i-- > 0;) {
                    if (i % 2 == 1) continue;
                    acc = acc * q0 + *p.coefficients()[i].rational_part();
                }
            }
            return acc;
        };
        const Rational d = eval(den_);
        if (is_zero_rational(d)) throw std::domain_error("rational function has a pole at q0");
        Rational r = eval(num_) / d;
        r.canonicalize();
        return r;
    }

    std::string to_string() const {
        auto poly = [](const CycloPolynomial& p) {
            if (p.is_zero()) return std::string("0");
            std::string out;
            for (std::size_t i = p.coefficients().size(); i-- > 0;) {
                const auto& c = p.coefficients()[i];
                if (c.is_zero()) continue;
                if (!out.empty()) out += " + ";
                out += "(" + c.to_string() + ")";
                if (i > 0) out += "*v" + (i > 1 ? "^" + std::to_string(i) : std::string());
            }
            return out;
        };
        if (den_.degree() == 0) return poly(num_);
        return "[" + poly(num_) + "] / [" + poly(den_) + "]";
    }

   private:
    static bool is_zero_rational(const Rational& r) { return kltwist::is_zero(r); }

    static bool is_monomial(const CycloPolynomial& p) {
        const auto& c = p.coefficients();
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (!c[i].is_zero()) return false;
        return !c.empty();
    }
    static bool only_even_powers(const CycloPolynomial& p) {
        const auto& c = p.coefficients();
        for (std::size_t i = 1; i < c.size(); i += 2)
            if (!c[i].is_zero()) return false;
        return true;
    }
    static std::complex<double> eval_poly(const CycloPolynomial& p, double v0, long long k) {
        std::complex<double> acc = 0;
        for (std::size_t i = p.coefficients().size(); i-- > 0;) acc = acc * v0 + p.coefficients()[i].embed(k);
        return acc;
    }
    static std::size_t v_order(const CycloPolynomial& p) {
        std::size_t i = 0;
        while (i < p.coefficients().size() && p.coefficients()[i].is_zero()) ++i;
        return i;
    }
    static CycloPolynomial drop_low(const CycloPolynomial& p, std::size_t k) {
        if (k == 0) return p;
        return CycloPolynomial(std::vector<CyclotomicNumber>(p.coefficients().begin() + static_cast<std::ptrdiff_t>(k),
                                                             p.coefficients().end()));
    }

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = CycloPolynomial(CyclotomicNumber(1));
            return;
        }
        if (!is_monomial(den_)) {
            auto g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_.divmod(g).first;
                den_ = den_.divmod(g).first;
            }
        } else {
            const auto k = std::min(v_order(num_), static_cast<std::size_t>(den_.degree()));
            num_ = drop_low(num_, k);
            den_ = drop_low(den_, k);
        }
        if (!(den_.leading() == CyclotomicNumber(1))) {
            const auto inv = den_.leading().inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    CycloPolynomial num_, den_;
};

inline RatFun ratfun_conjugate(const RatFun& f) { return f.conjugate(); }
inline RatFun ratfun_galois(const GaloisAutomorphism& gamma, const RatFun& f) { return f.galois(gamma); }
inline std::complex<double> float_embed(const RatFun& f, double v0, long long k = 1) { return f.embed(v0, k); }

}  // namespace kltwist
