#pragma once

// Dense univariate polynomials and Laurent polynomials over an exact
// coefficient type T. T must be default-constructible to zero, constructible
// from int, and provide is_zero(const T&). Division-based operations
// (divmod, gcd) additionally need a field.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "kltwist/rational.hpp"

namespace kltwist {

namespace detail {
// Unqualified so that argument-dependent lookup finds is_zero for coefficient
// types declared after this header.
template <class T>
bool coeff_zero(const T& c) {
    return is_zero(c);
}
template <class U, class T>
U coeff_as(const T& c) {
    if constexpr (std::is_floating_point_v<U> && (std::is_same_v<T, Integer> || std::is_same_v<T, Rational>))
        return static_cast<U>(c.get_d());
    else
        return U(c);
}
}  // namespace detail

template <class T>
class Polynomial {
   public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    Polynomial(const T& constant) : coeffs_{constant} { trim(); }

    static Polynomial monomial(const T& c, std::size_t degree) {
        std::vector<T> v(degree + 1);
        v[degree] = c;
        return Polynomial(std::move(v));
    }
    static Polynomial x() { return monomial(T(1), 1); }

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<T>& coefficients() const { return coeffs_; }
    T coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(); }
    const T& leading() const {
        if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }
    bool is_constant() const { return coeffs_.size() <= 1; }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (detail::coeff_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                T prod = a.coeffs_[i] * b.coeffs_[j];
                out[i + j] += prod;
            }
        }
        return Polynomial(std::move(out));
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial scaled(const T& c) const {
        Polynomial r = *this;
        for (auto& x : r.coeffs_) x = x * c;
        r.trim();
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Quotient and remainder; requires an invertible leading coefficient.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        if (degree() < d.degree()) return {Polynomial(), *this};
        std::vector<T> rem = coeffs_;
        std::vector<T> quot(coeffs_.size() - d.coeffs_.size() + 1);
        const T inv_lead = T(1) / d.leading();
        const std::size_t dn = d.coeffs_.size();
        for (std::size_t k = quot.size(); k-- > 0;) {
            T c = rem[k + dn - 1] * inv_lead;
            if (detail::coeff_zero(c)) continue;
            quot[k] = c;
            for (std::size_t j = 0; j < dn; ++j) {
                T prod = c * d.coeffs_[j];
                rem[k + j] -= prod;
            }
        }
        rem.resize(dn - 1);
        return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        const T inv = T(1) / leading();
        return scaled(inv);
    }

    template <class U>
    U evaluate(const U& x) const {
        U acc{};
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + detail::coeff_as<U>(coeffs_[i]);
        return acc;
    }

    template <class U, class F>
    Polynomial<U> map(F&& f) const {
        std::vector<U> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(f(c));
        return Polynomial<U>(std::move(out));
    }

   private:
    void trim() {
        while (!coeffs_.empty() && detail::coeff_zero(coeffs_.back())) coeffs_.pop_back();
    }
    std::vector<T> coeffs_;
};

/// Monic gcd over a field.
template <class T>
Polynomial<T> gcd(Polynomial<T> a, Polynomial<T> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
template <class T>
std::tuple<Polynomial<T>, Polynomial<T>, Polynomial<T>> extended_gcd(Polynomial<T> a, Polynomial<T> b) {
    Polynomial<T> s0(T(1)), s1, t0, t1(T(1));
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        a = std::move(b);
        b = std::move(r);
        auto s2 = s0 - q * s1;
        auto t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.is_zero()) return {a, s0, t0};
    const T inv = T(1) / a.leading();
    return {a.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

/// Laurent polynomial sum_{e} c_e v^e stored densely from the lowest exponent.
template <class T>
class LaurentPolynomial {
   public:
    LaurentPolynomial() = default;
    LaurentPolynomial(const T& constant) : coeffs_{constant} { normalize(); }
    LaurentPolynomial(long low, std::vector<T> coeffs) : low_(low), coeffs_(std::move(coeffs)) { normalize(); }

    static LaurentPolynomial monomial(const T& c, long exponent) { return LaurentPolynomial(exponent, {c}); }

    bool is_zero() const { return coeffs_.empty(); }
    long min_exponent() const { return low_; }
    long max_exponent() const { return low_ + static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<T>& coefficients() const { return coeffs_; }
    T coefficient(long e) const {
        if (e < low_ || e > max_exponent()) return T();
        return coeffs_[static_cast<std::size_t>(e - low_)];
    }
    std::size_t term_count() const {
        return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(),
                                                      [](const T& c) { return !detail::coeff_zero(c); }));
    }

    /// Adds c * v^e in place.
    void add_term(const T& c, long e) {
        if (detail::coeff_zero(c)) return;
        if (coeffs_.empty()) {
            low_ = e;
            coeffs_.push_back(c);
            return;
        }
        if (e < low_) {
            coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(low_ - e), T());
            low_ = e;
        } else if (e > max_exponent()) {
            coeffs_.resize(static_cast<std::size_t>(e - low_ + 1));
        }
        coeffs_[static_cast<std::size_t>(e - low_)] += c;
        normalize();
    }

    LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        const long lo = std::min(low_, o.low_);
        const long hi = std::max(max_exponent(), o.max_exponent());
        std::vector<T> out(static_cast<std::size_t>(hi - lo + 1));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) out[static_cast<std::size_t>(low_ - lo) + i] += coeffs_[i];
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[static_cast<std::size_t>(o.low_ - lo) + i] += o.coeffs_[i];
        low_ = lo;
        coeffs_ = std::move(out);
        normalize();
        return *this;
    }
    LaurentPolynomial operator-() const {
        LaurentPolynomial r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    LaurentPolynomial& operator-=(const LaurentPolynomial& o) { return *this += -o; }
    friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
    friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (detail::coeff_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                if (detail::coeff_zero(b.coeffs_[j])) continue;
                T prod = a.coeffs_[i] * b.coeffs_[j];
                out[i + j] += prod;
            }
        }
        return LaurentPolynomial(a.low_ + b.low_, std::move(out));
    }
    LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = *this * o; }
    LaurentPolynomial scaled(const T& c) const {
        LaurentPolynomial r = *this;
        for (auto& x : r.coeffs_) x = x * c;
        r.normalize();
        return r;
    }
    LaurentPolynomial shifted(long k) const {
        LaurentPolynomial r = *this;
        if (!r.is_zero()) r.low_ += k;
        return r;
    }

    friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        if (a.coeffs_.empty()) return true;
        if (a.low_ != b.low_) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
        return true;
    }
    friend bool operator!=(const LaurentPolynomial& a, const LaurentPolynomial& b) { return !(a == b); }

    /// Splits into v^{shift} * p(v) with p an ordinary polynomial (shift = min exponent).
    Polynomial<T> polynomial_part() const { return Polynomial<T>(coeffs_); }

    template <class U, class F>
    LaurentPolynomial<U> map(F&& f) const {
        std::vector<U> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(f(c));
        return LaurentPolynomial<U>(low_, std::move(out));
    }

    /// Visits nonzero terms in increasing exponent order.
    template <class F>
    void for_each_term(F&& f) const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!detail::coeff_zero(coeffs_[i])) f(low_ + static_cast<long>(i), coeffs_[i]);
    }

   private:
    void normalize() {
        while (!coeffs_.empty() && detail::coeff_zero(coeffs_.back())) coeffs_.pop_back();
        std::size_t lead = 0;
        while (lead < coeffs_.size() && detail::coeff_zero(coeffs_[lead])) ++lead;
        if (lead == coeffs_.size()) {
            coeffs_.clear();
            low_ = 0;
            return;
        }
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
            low_ += static_cast<long>(lead);
        }
    }
    long low_ = 0;
    std::vector<T> coeffs_;
};

template <class T>
bool is_zero(const Polynomial<T>& p) {
    return p.is_zero();
}
template <class T>
bool is_zero(const LaurentPolynomial<T>& p) {
    return p.is_zero();
}

using IntegerPolynomial = Polynomial<Integer>;
using LaurentInt = LaurentPolynomial<Integer>;

}  // namespace kltwist
