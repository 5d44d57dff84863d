#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n), elements stored in the
// power basis 1, zeta, ..., zeta^{phi(n)-1} modulo the n-th cyclotomic
// polynomial. Elements of different levels meet at the lcm level.

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kltwist/matrix.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/rational.hpp"

namespace kltwist {

namespace detail {

struct CyclotomicLevelData {
    long n = 1;
    long phi = 1;
    std::vector<long long> phi_poly;             // Phi_n, ascending, monic, length phi+1
    std::vector<std::vector<long long>> powers;  // powers[j] = zeta^j (0 <= j < n) in the power basis
};

inline std::vector<long long> compute_cyclotomic_polynomial(long n,
                                                             const std::map<long, std::vector<long long>>& known) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::vector<long long> num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(n)] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto& den = known.at(d);
        const std::size_t dn = den.size();
        std::vector<long long> quot(num.size() - dn + 1, 0);
        for (std::size_t k = quot.size(); k-- > 0;) {
            const long long c = num[k + dn - 1];  // divisor is monic
            quot[k] = c;
            if (c == 0) continue;
            for (std::size_t j = 0; j < dn; ++j) num[k + j] -= c * den[j];
        }
        num = std::move(quot);
    }
    return num;
}

inline const CyclotomicLevelData& level_data(long n) {
    static std::mutex mutex;
    static std::map<long, std::vector<long long>> polys;
    static std::map<long, CyclotomicLevelData> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    for (long d = 1; d <= n; ++d) {
        if (n % d != 0 || polys.count(d)) continue;
        polys[d] = compute_cyclotomic_polynomial(d, polys);
    }
    CyclotomicLevelData data;
    data.n = n;
    data.phi_poly = polys.at(n);
    data.phi = static_cast<long>(data.phi_poly.size()) - 1;
    data.powers.assign(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(data.phi), 0));
    // zeta^j for j < phi is a basis vector; beyond that, multiply by zeta and reduce.
    std::vector<long long> cur(static_cast<std::size_t>(data.phi), 0);
    cur[0] = 1;
    for (long j = 0; j < n; ++j) {
        data.powers[static_cast<std::size_t>(j)] = cur;
        std::vector<long long> next(static_cast<std::size_t>(data.phi), 0);
        const long long top = cur[static_cast<std::size_t>(data.phi - 1)];
        for (long i = data.phi - 1; i > 0; --i) next[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
        for (long i = 0; i < data.phi; ++i) next[static_cast<std::size_t>(i)] -= top * data.phi_poly[static_cast<std::size_t>(i)];
        cur = std::move(next);
    }
    return cache.emplace(n, std::move(data)).first->second;
}

}  // namespace detail

class CyclotomicNumber {
   public:
    CyclotomicNumber() : level_(1), coeffs_(1) {}
    CyclotomicNumber(int value) : level_(1), coeffs_{Rational(value)} {}
    CyclotomicNumber(const Rational& value) : level_(1), coeffs_{value} {}

    /// n must be >= 1 and coeffs.size() <= phi(n); shorter vectors are zero-padded.
    CyclotomicNumber(long n, std::vector<Rational> coeffs) : level_(n), coeffs_(std::move(coeffs)) {
        if (n < 1) throw std::invalid_argument("cyclotomic level must be positive");
        const auto phi = static_cast<std::size_t>(detail::level_data(n).phi);
        if (coeffs_.size() > phi) {
            *this = from_power_sums(n, coeffs_);
            return;
        }
        coeffs_.resize(phi);
    }

    /// zeta_n^k.
    static CyclotomicNumber zeta(long n, long long k = 1) {
        const auto& data = detail::level_data(n);
        const auto& p = data.powers[static_cast<std::size_t>(mod_floor(k, n))];
        std::vector<Rational> c(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) c[i] = Rational(static_cast<long>(p[i]));
        return CyclotomicNumber(n, std::move(c), raw_tag{});
    }

    /// sum_j a_j zeta_n^j for an arbitrary-length coefficient list (indices taken mod n).
    static CyclotomicNumber from_power_sums(long n, const std::vector<Rational>& a) {
        const auto& data = detail::level_data(n);
        std::vector<Rational> out(static_cast<std::size_t>(data.phi));
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (kltwist::is_zero(a[j])) continue;
            const auto& p = data.powers[j % static_cast<std::size_t>(n)];
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p[i] != 0) out[i] += a[j] * static_cast<long>(p[i]);
        }
        return CyclotomicNumber(n, std::move(out), raw_tag{});
    }

    /// Same as from_power_sums for small integer data (group ring Z[Z/n]).
    static CyclotomicNumber from_group_ring(long n, const std::vector<long long>& a) {
        const auto& data = detail::level_data(n);
        std::vector<long long> acc(static_cast<std::size_t>(data.phi), 0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0) continue;
            const auto& p = data.powers[j % static_cast<std::size_t>(n)];
            for (std::size_t i = 0; i < p.size(); ++i) acc[i] += a[j] * p[i];
        }
        std::vector<Rational> out(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = Rational(static_cast<long>(acc[i]));
        return CyclotomicNumber(n, std::move(out), raw_tag{});
    }

    long level() const { return level_; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!kltwist::is_zero(c)) return false;
        return true;
    }

    /// The same element viewed in Q(zeta_m); requires level() | m.
    CyclotomicNumber lifted(long m) const {
        if (m == level_) return *this;
        if (m % level_ != 0) throw std::invalid_argument("cannot lift cyclotomic level " + std::to_string(level_) +
                                                         " to " + std::to_string(m));
        const long step = m / level_;
        std::vector<Rational> a(static_cast<std::size_t>(m));
        for (std::size_t j = 0; j < coeffs_.size(); ++j) a[j * static_cast<std::size_t>(step)] = coeffs_[j];
        return from_power_sums(m, a);
    }

    /// Applies zeta_n -> zeta_n^k at this element's own level; gcd(k, n) must be 1.
    CyclotomicNumber galois(long long k) const {
        if (gcd_ll(mod_floor(k, level_), level_) != 1 && level_ > 1)
            throw std::invalid_argument("Galois exponent not coprime to the level");
        std::vector<Rational> a(static_cast<std::size_t>(level_));
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (kltwist::is_zero(coeffs_[j])) continue;
            a[static_cast<std::size_t>(mod_floor(static_cast<long long>(j) * k, level_))] += coeffs_[j];
        }
        return from_power_sums(level_, a);
    }

    CyclotomicNumber conj() const { return galois(-1); }

    /// The rational value when the element lies in Q, else nullopt.
    std::optional<Rational> rational_part() const {
        for (std::size_t j = 1; j < coeffs_.size(); ++j)
            if (!kltwist::is_zero(coeffs_[j])) return std::nullopt;
        return coeffs_[0];
    }

    /// Re-expresses the element at the smallest level d | level() whose field contains it.
    CyclotomicNumber reduced() const {
        if (auto r = rational_part()) return CyclotomicNumber(*r);
        for (long d = 2; d < level_; ++d) {
            if (level_ % d != 0) continue;
            const long phi_d = detail::level_data(d).phi;
            if (phi_d >= static_cast<long>(coeffs_.size())) continue;
            // Columns: images of the basis of Q(zeta_d) inside Q(zeta_n).
            RationalMatrix a(coeffs_.size(), std::vector<Rational>(static_cast<std::size_t>(phi_d)));
            for (long j = 0; j < phi_d; ++j) {
                auto col = zeta(d, j).lifted(level_);
                for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i][static_cast<std::size_t>(j)] = col.coeffs_[i];
            }
            if (auto x = solve(a, coeffs_)) return CyclotomicNumber(d, std::move(*x));
        }
        return *this;
    }

    CyclotomicNumber inverse() const {
        if (is_zero()) throw std::domain_error("cyclotomic division by zero");
        if (level_ == 1) return CyclotomicNumber(1 / coeffs_[0]);
        const auto& data = detail::level_data(level_);
        std::vector<Rational> modulus(data.phi_poly.size());
        for (std::size_t i = 0; i < modulus.size(); ++i) modulus[i] = Rational(static_cast<long>(data.phi_poly[i]));
        auto [g, s, t] = extended_gcd(Polynomial<Rational>(coeffs_), Polynomial<Rational>(std::move(modulus)));
        (void)t;
        if (g.degree() != 0) throw std::logic_error("non-invertible element in a cyclotomic field");
        return CyclotomicNumber(level_, s.coefficients());
    }

    /// Image under zeta_n -> exp(2 pi i k / n).
    std::complex<double> embed(long long k = 1) const {
        std::complex<double> acc = 0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (kltwist::is_zero(coeffs_[j])) continue;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(static_cast<long long>(j) * k, level_)) /
                                 static_cast<double>(level_);
            acc += coeffs_[j].get_d() * std::polar(1.0, angle);
        }
        return acc;
    }

    friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.level_ != b.level_) {
            const long m = lcm_ll(a.level_, b.level_);
            return a.lifted(m) + b.lifted(m);
        }
        CyclotomicNumber r = a;
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
        return r;
    }
    friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.level_ != b.level_) {
            const long m = lcm_ll(a.level_, b.level_);
            return a.lifted(m) - b.lifted(m);
        }
        CyclotomicNumber r = a;
        for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
        return r;
    }
    CyclotomicNumber operator-() const {
        CyclotomicNumber r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.level_ != b.level_) {
            if (a.level_ == 1) return b.scaled(a.coeffs_[0]);
            if (b.level_ == 1) return a.scaled(b.coeffs_[0]);
            const long m = lcm_ll(a.level_, b.level_);
            return a.lifted(m) * b.lifted(m);
        }
        if (a.level_ == 1) return CyclotomicNumber(Rational(a.coeffs_[0] * b.coeffs_[0]));
        std::vector<Rational> prod(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (kltwist::is_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                if (kltwist::is_zero(b.coeffs_[j])) continue;
                prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return from_power_sums(a.level_, prod);
    }
    friend CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) { return a * b.inverse(); }

    CyclotomicNumber& operator+=(const CyclotomicNumber& o) {
        if (level_ == o.level_) {
            for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
            return *this;
        }
        return *this = *this + o;
    }
    CyclotomicNumber& operator-=(const CyclotomicNumber& o) {
        if (level_ == o.level_) {
            for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
            return *this;
        }
        return *this = *this - o;
    }
    CyclotomicNumber& operator*=(const CyclotomicNumber& o) { return *this = *this * o; }
    CyclotomicNumber& operator/=(const CyclotomicNumber& o) { return *this = *this / o; }

    CyclotomicNumber scaled(const Rational& c) const {
        CyclotomicNumber r = *this;
        for (auto& x : r.coeffs_) x *= c;
        return r;
    }

    friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.level_ != b.level_) {
            const long m = lcm_ll(a.level_, b.level_);
            return a.lifted(m).coeffs_ == b.lifted(m).coeffs_;
        }
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

    std::string to_string() const {
        std::string out;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (kltwist::is_zero(coeffs_[j])) continue;
            std::string c = kltwist::to_string(coeffs_[j]);
            if (!out.empty()) out += (c[0] == '-') ? " - " : " + ";
            else if (c[0] == '-') out += "-";
            if (c[0] == '-') c.erase(0, 1);
            if (j == 0) out += c;
            else {
                if (c != "1") out += c + "*";
                out += "z" + std::to_string(level_);
                if (j > 1) out += "^" + std::to_string(j);
            }
        }
        return out.empty() ? "0" : out;
    }

   private:
    struct raw_tag {};
    CyclotomicNumber(long n, std::vector<Rational> coeffs, raw_tag) : level_(n), coeffs_(std::move(coeffs)) {}

    long level_;
    std::vector<Rational> coeffs_;
};

inline bool is_zero(const CyclotomicNumber& x) { return x.is_zero(); }

/// An element of Gal(Q(zeta_n)/Q), zeta_n -> zeta_n^k.
class GaloisAutomorphism {
   public:
    GaloisAutomorphism(long n, long long k) : level_(n), exponent_(n > 0 ? mod_floor(k, n) : 0) {
        if (n < 1) throw std::invalid_argument("Galois level must be positive");
        if (gcd_ll(exponent_, n) != 1 && n > 1)
            throw std::invalid_argument("Galois exponent " + std::to_string(k) + " not coprime to " + std::to_string(n));
        if (n == 1) exponent_ = 1;
    }

    static GaloisAutomorphism identity(long n = 1) { return GaloisAutomorphism(n, 1); }
    static GaloisAutomorphism conjugation(long n) { return GaloisAutomorphism(n, -1); }

    /// All of (Z/n)^x in increasing order of k.
    static std::vector<GaloisAutomorphism> all(long n) {
        std::vector<GaloisAutomorphism> out;
        for (long long k = 1; k <= n; ++k)
            if (gcd_ll(k, n) == 1 && (n == 1 || k < n)) out.emplace_back(n, k);
        return out;
    }

    long level() const { return level_; }
    long long exponent() const { return exponent_; }
    bool is_conjugation() const { return mod_floor(exponent_ + 1, level_) == 0; }
    bool is_identity() const { return mod_floor(exponent_ - 1, level_) == 0; }

    /// Canonical extension to Q(zeta_m), level() | m: the least k' = k mod n with gcd(k', m) = 1.
    GaloisAutomorphism lifted(long m) const {
        if (m == level_) return *this;
        if (m % level_ != 0) throw std::invalid_argument("cannot lift Galois level");
        for (long long k = exponent_; k <= static_cast<long long>(m) * level_ + exponent_; k += level_)
            if (k > 0 && gcd_ll(k, m) == 1) return GaloisAutomorphism(m, k);
        throw std::logic_error("no Galois lift found");
    }

    /// The restriction to Q(zeta_d), d | level().
    GaloisAutomorphism restricted(long d) const {
        if (level_ % d != 0) throw std::invalid_argument("cannot restrict Galois level");
        return GaloisAutomorphism(d, exponent_);
    }

    /// Exponent to use on an element of level d (lifting the automorphism when d does not divide its level).
    long long exponent_at(long d) const {
        if (level_ % d == 0) return mod_floor(exponent_, d);
        return lifted(lcm_ll(level_, d)).exponent_ % d;
    }

    friend GaloisAutomorphism compose(const GaloisAutomorphism& a, const GaloisAutomorphism& b) {
        const long m = lcm_ll(a.level_, b.level_);
        const auto la = a.lifted(m), lb = b.lifted(m);
        return GaloisAutomorphism(m, mod_floor(la.exponent_ * lb.exponent_, m));
    }

    friend bool operator==(const GaloisAutomorphism& a, const GaloisAutomorphism& b) {
        return a.level_ == b.level_ && a.exponent_ == b.exponent_;
    }

    std::string to_string() const { return "(" + std::to_string(level_) + "," + std::to_string(exponent_) + ")"; }

   private:
    long level_;
    long long exponent_;
};

/// gamma(a), computed at a's level (gamma is lifted canonically when a.level() does not divide its level).
inline CyclotomicNumber galois_apply(const GaloisAutomorphism& gamma, const CyclotomicNumber& a) {
    // a lies in Q(zeta_d); gamma acts there through its restriction.
    return a.galois(gamma.exponent_at(a.level()));
}

inline std::optional<Rational> rational_part(const CyclotomicNumber& a) { return a.rational_part(); }

inline std::complex<double> float_embed(const CyclotomicNumber& a, long long k = 1) { return a.embed(k); }

}  // namespace kltwist
