#pragma once

// Points s of the dual torus X_* (x) C^* whose coordinates are a root of unity
// times a power of v = q^{1/2}. A point is stored as torsion numerators t
// (mod level) and integer v-exponents e, both in X_* coordinates, so that
//   lambda(s) = zeta_level^{<lambda,t>} v^{<lambda,e>}.
// The q-exponents of the point are e/2.

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/matrix.hpp"
#include "kltwist/rational_function.hpp"
#include "kltwist/root_datum.hpp"

namespace kltwist {

class NonRegularParameter : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

class TorusPoint {
   public:
    TorusPoint() = default;
    TorusPoint(long long level, IntVector torsion, IntVector v_exponents)
        : level_(level), torsion_(std::move(torsion)), v_exp_(std::move(v_exponents)) {
        if (level_ <= 0) throw std::invalid_argument("torsion level must be positive");
        if (torsion_.size() != v_exp_.size()) throw std::invalid_argument("torsion and q-exponent dimensions differ");
        for (auto& t : torsion_) t = mod_floor(t, level_);
    }

    /// From torsion fractions in Q/Z and half-integral q-exponents.
    static TorusPoint from_rationals(const std::vector<Rational>& torsion, const std::vector<Rational>& q_exponents) {
        if (torsion.size() != q_exponents.size()) throw std::invalid_argument("torsion and q-exponent dimensions differ");
        long long level = 1;
        for (const auto& t : torsion) level = lcm_ll(level, to_ll(Rational(t).get_den()));
        IntVector tn(torsion.size()), e(torsion.size());
        for (std::size_t i = 0; i < torsion.size(); ++i) {
            const Rational x = torsion[i] * Rational(static_cast<long>(level));
            tn[i] = to_ll(x.get_num());
            const Rational twice = q_exponents[i] * 2;
            if (twice.get_den() != 1) throw std::invalid_argument("q-exponents must be half-integers");
            e[i] = to_ll(twice.get_num());
        }
        return TorusPoint(level, tn, e);
    }

    /// The point with trivial torsion and the given v-exponents.
    static TorusPoint unramified(IntVector v_exponents) {
        IntVector t(v_exponents.size(), 0);
        return TorusPoint(1, std::move(t), std::move(v_exponents));
    }

    /// The Steinberg-type point: alpha(s) = q for every simple root.
    static TorusPoint steinberg(const RootDatum& rd) { return unramified(rd.two_rho_check()); }

    std::size_t dim() const { return torsion_.size(); }
    long long level() const { return level_; }
    const IntVector& torsion() const { return torsion_; }
    const IntVector& v_exponents() const { return v_exp_; }

    std::vector<Rational> torsion_fractions() const {
        std::vector<Rational> out;
        for (auto t : torsion_) out.push_back(make_rational(t, level_));
        return out;
    }
    std::vector<Rational> q_exponents() const {
        std::vector<Rational> out;
        for (auto e : v_exp_) out.push_back(make_rational(e, 2));
        return out;
    }

    /// Same point with the smallest level that expresses its torsion.
    TorusPoint normalized() const {
        long long g = level_;
        for (auto t : torsion_) g = gcd_ll(g, t);
        IntVector t(torsion_.size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = torsion_[i] / g;
        return TorusPoint(level_ / g, std::move(t), v_exp_);
    }
    /// Order of the compact part s_1.
    long long compact_order() const { return normalized().level(); }
    TorusPoint compact_part() const { return TorusPoint(level_, torsion_, IntVector(dim(), 0)); }
    TorusPoint at_level(long long m) const {
        if (m % level_ != 0) throw std::invalid_argument("level " + std::to_string(m) + " is not a multiple of " + std::to_string(level_));
        return TorusPoint(m, scaled(torsion_, m / level_), v_exp_);
    }

    /// (exponent of zeta_level mod level, exponent of v) of lambda(s).
    std::pair<long long, long long> character_exponents(const IntVector& weight) const {
        if (weight.size() != dim()) throw std::invalid_argument("weight dimension does not match torus point");
        return {mod_floor(dot(weight, torsion_), level_), dot(weight, v_exp_)};
    }
    RatFun character(const IntVector& weight) const {
        const auto [z, v] = character_exponents(weight);
        return RatFun(CyclotomicNumber::zeta(level_, z).reduced()) * RatFun::v_power(v);
    }
    /// alpha(s) = 1 identically.
    bool is_trivial_on(const IntVector& weight) const {
        const auto [z, v] = character_exponents(weight);
        return z == 0 && v == 0;
    }
    bool is_regular(const RootDatum& rd) const {
        for (const auto& a : rd.positive_roots())
            if (is_trivial_on(a)) return false;
        return true;
    }

    TorusPoint weyl_translate(const WeylElement& w) const {
        return TorusPoint(level_, weyl_coaction(w, torsion_), weyl_coaction(w, v_exp_));
    }

    /// zeta -> zeta^k on the compact part; the level is kept.
    TorusPoint galois(const GaloisAutomorphism& gamma) const {
        const long long k = gamma.exponent_at(static_cast<long>(level_));
        return TorusPoint(level_, scaled(torsion_, k), v_exp_);
    }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        const auto na = a.normalized(), nb = b.normalized();
        return na.level_ == nb.level_ && na.torsion_ == nb.torsion_ && na.v_exp_ == nb.v_exp_;
    }
    friend bool operator!=(const TorusPoint& a, const TorusPoint& b) { return !(a == b); }
    /// Order on normalized data, used for canonical orbit representatives.
    friend bool operator<(const TorusPoint& a, const TorusPoint& b) {
        const auto na = a.normalized(), nb = b.normalized();
        if (na.level_ != nb.level_) return na.level_ < nb.level_;
        if (na.torsion_ != nb.torsion_) return na.torsion_ < nb.torsion_;
        return na.v_exp_ < nb.v_exp_;
    }

    std::string to_string() const {
        std::string s = "{level " + std::to_string(level_) + ", torsion " + kltwist::to_string(torsion_) + ", v-exponents " +
                        kltwist::to_string(v_exp_) + "}";
        return s;
    }

   private:
    long long level_ = 1;
    IntVector torsion_, v_exp_;
};

}  // namespace kltwist
