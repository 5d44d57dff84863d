#pragma once

// Exact integers and rationals (GMP-backed) plus the small helpers the rest
// of the library needs: parsing "p/q", formatting, and arithmetic in Q/Z.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kltwist {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero(long long x) { return x == 0; }

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(Integer(std::to_string(num)), Integer(std::to_string(den)));
    r.canonicalize();
    return r;
}

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(const std::string& text) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
    if (sgn(r.get_den()) == 0) throw std::domain_error("rational with zero denominator: '" + text + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }
inline std::string to_string(const Integer& z) { return z.get_str(10); }

inline long long to_ll(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return z.get_si();
}

/// Floor of a rational.
inline Integer floor(const Rational& r) {
    Integer result;
    mpz_fdiv_q(result.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return result;
}

/// Representative of r in [0, 1).
inline Rational frac(const Rational& r) {
    Rational out = r - Rational(floor(r));
    out.canonicalize();
    return out;
}

/// Exact square root of a nonnegative rational, when it is a perfect square.
inline bool exact_sqrt(const Rational& r, Rational& out) {
    if (sgn(r) < 0) return false;
    if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) return false;
    Integer n = sqrt(r.get_num());
    Integer d = sqrt(r.get_den());
    out = Rational(n, d);
    out.canonicalize();
    return true;
}

inline long long mod_floor(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

inline long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
inline long long lcm_ll(long long a, long long b) { return (a == 0 || b == 0) ? 0 : std::lcm(a, b); }

inline long long euler_phi(long long n) {
    long long result = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

}  // namespace kltwist
