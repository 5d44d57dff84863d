#pragma once

// Formal degrees of Iwahori-spherical discrete series through
//   d^{-1} = q^{dim B} sum_J P_J(q)^{-1} sum_{lambda in Lambda_J} |M(lambda, s)|^2,
//   M(lambda, s) = sum_w w(lambda prod_{alpha>0} (1 - q^{-1} alpha) / (1 - alpha))(s).
//
// M(lambda, .) is first computed as an exact W-invariant element of Z[u][X*],
// u = q^{-1}: clearing the Weyl denominator D = prod_{alpha>0} (1 - e^alpha),
//   D * M = sum_w (-1)^{l(w)} e^{-delta_w} w(e^lambda prod_{alpha>0} (1 - u e^alpha)),
// with delta_w the sum of the negative roots w(alpha), alpha > 0, and D is divided
// out exactly. Evaluating this polynomial at a torus point never meets a pole, so
// non-regular points need no special treatment on the exact side.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/group_ring.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/rational_function.hpp"
#include "kltwist/root_datum.hpp"
#include "kltwist/torus_point.hpp"

namespace kltwist {

namespace detail {

// Dense key (mu, power of u) for the int64 form of Z[u][X*]; semisimple data within
// the Weyl-group guard have rank at most 7, so eight slots suffice.
constexpr std::size_t flat_slots = 8;

struct FlatKey {
    std::array<std::int32_t, flat_slots> c{};
    friend bool operator==(const FlatKey& a, const FlatKey& b) { return a.c == b.c; }
};

struct FlatKeyHash {
    std::size_t operator()(const FlatKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : k.c) h = (h ^ static_cast<std::uint32_t>(x)) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

using FlatPoly = std::unordered_map<FlatKey, long long, FlatKeyHash>;

inline void flat_add(FlatPoly& f, const FlatKey& k, long long c) {
    if (c == 0) return;
    auto [it, inserted] = f.try_emplace(k, c);
    if (inserted) return;
    if (__builtin_add_overflow(it->second, c, &it->second)) throw std::overflow_error("M polynomial coefficient overflow");
    if (it->second == 0) f.erase(it);
}

inline long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// g / (1 - e^beta) on the int64 form; same string walk as divide_one_minus.
inline FlatPoly flat_divide_one_minus(const FlatPoly& g, const IntVector& beta) {
    std::size_t j = 0;
    while (j < beta.size() && beta[j] == 0) ++j;
    if (j == beta.size()) throw std::invalid_argument("division by 1 - e^0");
    const long long bj = beta[j];
    std::unordered_map<FlatKey, std::vector<std::pair<long long, long long>>, FlatKeyHash> strings;
    strings.reserve(g.size());
    for (const auto& [key, c] : g) {
        const long long k = bj > 0 ? floor_div(key.c[j], bj) : -floor_div(key.c[j], -bj);
        FlatKey rep = key;
        for (std::size_t i = 0; i < beta.size(); ++i) rep.c[i] = static_cast<std::int32_t>(rep.c[i] - k * beta[i]);
        strings[rep].emplace_back(k, c);
    }
    FlatPoly out;
    out.reserve(g.size() * 2);
    for (auto& [rep, str] : strings) {
        std::sort(str.begin(), str.end());
        long long run = 0;
        std::size_t idx = 0;
        for (long long pos = str.front().first;; ++pos) {
            if (idx < str.size() && str[idx].first == pos) {
                if (__builtin_add_overflow(run, str[idx].second, &run)) throw std::overflow_error("M polynomial coefficient overflow");
                ++idx;
            }
            if (idx == str.size()) break;
            if (run != 0) {
                FlatKey k = rep;
                for (std::size_t i = 0; i < beta.size(); ++i) k.c[i] = static_cast<std::int32_t>(k.c[i] + pos * beta[i]);
                out.emplace(k, run);
            }
        }
        if (run != 0) throw inexact_division("group-ring element is not divisible by 1 - e^beta");
    }
    return out;
}

}  // namespace detail

/// Reference construction of M(lambda, .) in Z[u][X*] with arbitrary-precision coefficients.
inline WeightPolynomial m_polynomial_reference(const RootDatum& rd, const WeylGroup& weyl, const IntVector& lambda) {
    rd.check_weight(lambda);
    if (!rd.is_dominant(lambda)) throw std::invalid_argument("M(lambda, s) needs a dominant weight");
    const LaurentInt one = LaurentInt::monomial(Integer(1), 0);
    const LaurentInt minus_u = LaurentInt::monomial(Integer(-1), 1);
    // e^lambda prod_{alpha>0} (1 - u e^alpha)
    WeightPolynomial base;
    add_term(base, lambda, one);
    for (const auto& a : rd.positive_roots()) {
        WeightPolynomial factor;
        add_term(factor, IntVector(rd.lattice_dim(), 0), one);
        add_term(factor, a, minus_u);
        base = base * factor;
    }
    WeightPolynomial numerator;
    for (const auto& w : weyl.elements()) {
        IntVector delta(rd.lattice_dim(), 0);
        for (const auto& a : rd.positive_roots()) {
            const IntVector wa = weyl_action(w, a);
            if (!rd.is_positive_root(wa)) delta = delta + wa;
        }
        const LaurentInt sign = LaurentInt::monomial(Integer(w.length % 2 == 0 ? 1 : -1), 0);
        numerator = numerator + scale(shift(weyl_apply(w, base), -delta), sign);
    }
    for (const auto& a : rd.positive_roots()) numerator = divide_one_minus(numerator, a);
    return numerator;
}

/// Integer table sum_{e, j} c_{e,j} v^e zeta_n^j: the value of an element of
/// Z[u][X*] at a torus point of level n before reduction modulo Phi_n.
class VZTable {
   public:
    VZTable() = default;
    explicit VZTable(long long level) : level_(level) {}

    long long level() const { return level_; }
    const std::map<long, std::vector<long long>>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    void add(long v_exp, long long z_exp, long long c) {
        if (c == 0) return;
        auto& row = rows_[v_exp];
        if (row.empty()) row.assign(static_cast<std::size_t>(level_), 0);
        auto& cell = row[static_cast<std::size_t>(mod_floor(z_exp, level_))];
        if (__builtin_add_overflow(cell, c, &cell)) throw std::overflow_error("group-ring table overflow");
    }
    void add(const VZTable& o) {
        for (const auto& [e, row] : o.rows_)
            for (std::size_t j = 0; j < row.size(); ++j) add(e, static_cast<long long>(j), row[j]);
    }

    /// t * conj(t); conjugation inverts zeta and fixes v.
    VZTable norm_squared() const {
        VZTable out(level_);
        for (const auto& [a, ra] : rows_)
            for (const auto& [b, rb] : rows_)
                for (std::size_t i = 0; i < ra.size(); ++i) {
                    if (ra[i] == 0) continue;
                    for (std::size_t j = 0; j < rb.size(); ++j) {
                        if (rb[j] == 0) continue;
                        long long p;
                        if (__builtin_mul_overflow(ra[i], rb[j], &p)) throw std::overflow_error("group-ring table overflow");
                        out.add(a + b, static_cast<long long>(i) - static_cast<long long>(j), p);
                    }
                }
        return out;
    }

    CycloLaurent to_laurent() const {
        CycloLaurent out;
        for (const auto& [e, row] : rows_) {
            auto c = CyclotomicNumber::from_group_ring(static_cast<long>(level_), row);
            if (!c.is_zero()) out.add_term(c, e);
        }
        return out;
    }

   private:
    long long level_ = 1;
    std::map<long, std::vector<long long>> rows_;
};

/// Value of a cyclotomic Laurent polynomial in v at v = v0, under zeta_n -> exp(2 pi i k / n).
inline std::complex<double> embed_laurent(const CycloLaurent& f, double v0, long long k = 1) {
    std::complex<double> acc = 0;
    f.for_each_term([&](long e, const CyclotomicNumber& c) { acc += c.embed(k) * std::pow(v0, static_cast<double>(e)); });
    return acc;
}

/// Exact value at a rational v0.
inline CyclotomicNumber evaluate_laurent(const CycloLaurent& f, const Rational& v0) {
    CyclotomicNumber acc;
    f.for_each_term([&](long e, const CyclotomicNumber& c) {
        Rational p = 1;
        Rational base = e >= 0 ? v0 : Rational(1) / v0;
        for (long i = 0; i < std::labs(e); ++i) p *= base;
        acc = acc + c.scaled(p);
    });
    return acc;
}

struct MSquaredTerm {
    IntVector lambda;
    RootSubset subset;
    CycloLaurent value;  // M * conj(M), a Laurent polynomial in v
    RatFun as_ratfun() const { return RatFun::from_laurent(value); }
};

struct GaloisVerdict {
    GaloisAutomorphism gamma = GaloisAutomorphism::identity();
    TorusPoint twisted;
    bool termwise_exact_equal = false;
    std::size_t compared_terms = 0;
    double numeric_degree_diff = 0.0;
};

struct FormalDegreeReport {
    std::string datum;
    TorusPoint point;
    int height_bound = 0;
    RatFun partial_inverse_degree;
    Rational q0;
    std::optional<Rational> exact_inverse_degree;  // when the value at q0 is rational
    double inverse_degree = 0.0;
    double degree = 0.0;  // includes rho_dim
    int rho_dim = 1;
    double last_increment = 0.0;
    double tail_ratio = 0.0;  // per unit height, from the last two nonzero increments
    bool converged = false;
    std::vector<double> height_increments;  // contribution of each height to the inverse degree at q0
    std::vector<GaloisVerdict> galois_verdicts;
};

class FormalDegreeEngine {
   public:
    static constexpr int max_height_bound = 200;

    explicit FormalDegreeEngine(RootDatum rd) : rd_(std::move(rd)), weyl_(rd_) {
        if (!rd_.is_semisimple())
            throw std::invalid_argument("formal-degree engine needs a semisimple root datum; project to the semisimple quotient");
        for (const auto& j : all_root_subsets(rd_)) poincare_.emplace(j, poincare_polynomial(rd_, j));
        if (rd_.lattice_dim() >= detail::flat_slots) throw size_guard_error("formal-degree engine supports rank below 8");
        prepare_numerator_terms();
    }

    const RootDatum& datum() const { return rd_; }
    const WeylGroup& weyl() const { return weyl_; }
    const IntegerPolynomial& poincare(const RootSubset& j) const { return poincare_.at(j); }

    /// M(lambda, .) in Z[u][X*], u = q^{-1}; coefficients are polynomials in u stored as LaurentInt.
    WeightPolynomial m_polynomial(const IntVector& lambda) const {
        const auto& c = cached_m(lambda);
        WeightPolynomial out;
        for (const auto& t : c.terms) {
            LaurentInt coeff;
            for (const auto& [k, x] : t.u_coeffs) coeff.add_term(Integer(static_cast<long>(x)), k);
            add_term(out, t.mu, coeff);
        }
        return out;
    }

    /// M(lambda, s) evaluated into an integer table.
    VZTable m_table(const IntVector& lambda, const TorusPoint& s) const {
        check_point(s);
        const Compact* c = &cached_m(lambda);
        VZTable t(s.level());
        for (const auto& term : c->terms) {
            const long long z = dot(term.mu, s.torsion());
            const long long e = dot(term.mu, s.v_exponents());
            for (const auto& [k, coeff] : term.u_coeffs) t.add(static_cast<long>(e - 2 * k), z, coeff);
        }
        return t;
    }

    CycloLaurent m_function_laurent(const IntVector& lambda, const TorusPoint& s) const {
        return m_table(lambda, s.normalized()).to_laurent();
    }
    RatFun m_function(const IntVector& lambda, const TorusPoint& s) const {
        return RatFun::from_laurent(m_function_laurent(lambda, s));
    }
    MSquaredTerm m_squared(const IntVector& lambda, const TorusPoint& s) const {
        return {lambda, weight_stabilizer(rd_, lambda), m_table(lambda, s.normalized()).norm_squared().to_laurent()};
    }

    /// Per subset J and per height h <= bound: sum_{lambda in Lambda_J, ht = h} |M(lambda, s)|^2.
    struct HeightSums {
        std::vector<RootSubset> subsets;
        std::vector<std::vector<CycloLaurent>> by_height;  // [subset][height]
        int bound = -1;

        CycloLaurent subset_sum(std::size_t j, int height_bound) const {
            CycloLaurent acc;
            for (int h = 0; h <= height_bound && h < static_cast<int>(by_height[j].size()); ++h) acc += by_height[j][static_cast<std::size_t>(h)];
            return acc;
        }
    };

    /// Cached by the normalized point.
    std::shared_ptr<const HeightSums> height_sums(const TorusPoint& s, int height_bound) const {
        check_point(s);
        if (height_bound < 0 || height_bound > max_height_bound)
            throw size_guard_error("height bound must lie in [0, " + std::to_string(max_height_bound) + "]");
        const TorusPoint key = s.normalized();
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = sums_cache_.find(key);
            if (it != sums_cache_.end() && it->second->bound >= height_bound) return it->second;
        }
        auto sums = std::make_shared<HeightSums>();
        sums->bound = height_bound;
        sums->subsets = all_root_subsets(rd_);
        std::map<RootSubset, std::size_t> index;
        for (std::size_t j = 0; j < sums->subsets.size(); ++j) index[sums->subsets[j]] = j;
        std::vector<std::vector<VZTable>> tables(sums->subsets.size(),
                                                 std::vector<VZTable>(static_cast<std::size_t>(height_bound) + 1, VZTable(key.level())));
        for (const auto& lam : dominant_weights(height_bound)) {
            const auto j = index.at(weight_stabilizer(rd_, lam));
            tables[j][static_cast<std::size_t>(rd_.height(lam))].add(m_table(lam, key).norm_squared());
        }
        sums->by_height.resize(tables.size());
        for (std::size_t j = 0; j < tables.size(); ++j)
            for (const auto& t : tables[j]) sums->by_height[j].push_back(t.to_laurent());
        std::lock_guard<std::mutex> lock(mutex_);
        auto& slot = sums_cache_[key];
        if (!slot || slot->bound < height_bound) slot = sums;
        return slot;
    }

    /// Truncated inverse formal degree as an exact rational function of v.
    RatFun partial_degree_inverse(const TorusPoint& s, int height_bound) const {
        const auto sums = height_sums(s, height_bound);
        const auto& full = poincare_.at(all_simple());
        CycloLaurent num;
        for (std::size_t j = 0; j < sums->subsets.size(); ++j) {
            const auto cofactor = full.divmod(poincare_.at(sums->subsets[j])).first;
            num += sums->subset_sum(j, height_bound) * q_poly_as_laurent(cofactor);
        }
        num = num.shifted(static_cast<long>(2 * rd_.dim_flag()));
        return RatFun::from_laurent(num) / RatFun::from_laurent(q_poly_as_laurent(full));
    }

    /// Inverse degree at q0 split by height, from the exact sums.
    std::vector<double> height_increments(const TorusPoint& s, int height_bound, const Rational& q0) const {
        const auto sums = height_sums(s, height_bound);
        const double q = q0.get_d(), v0 = std::sqrt(q);
        std::vector<double> inc(static_cast<std::size_t>(height_bound) + 1, 0.0);
        for (std::size_t j = 0; j < sums->subsets.size(); ++j) {
            const double pj = poincare_.at(sums->subsets[j]).evaluate<double>(q);
            for (int h = 0; h <= height_bound; ++h)
                inc[static_cast<std::size_t>(h)] += embed_laurent(sums->by_height[j][static_cast<std::size_t>(h)], v0).real() / pj;
        }
        const double pre = std::pow(q, static_cast<double>(rd_.dim_flag()));
        for (auto& x : inc) x *= pre;
        return inc;
    }

    /// Exact height increments when v0 = sqrt(q0) is rational or the sums are even in v.
    std::optional<std::vector<Rational>> exact_height_increments(const TorusPoint& s, int height_bound, const Rational& q0) const {
        const auto sums = height_sums(s, height_bound);
        std::vector<Rational> inc(static_cast<std::size_t>(height_bound) + 1);
        for (std::size_t j = 0; j < sums->subsets.size(); ++j) {
            const Rational pj = eval_q(poincare_.at(sums->subsets[j]), q0);
            for (int h = 0; h <= height_bound; ++h) {
                auto v = exact_value(sums->by_height[j][static_cast<std::size_t>(h)], q0);
                if (!v) return std::nullopt;
                inc[static_cast<std::size_t>(h)] += *v / pj;
            }
        }
        Rational pre = 1;
        for (std::size_t i = 0; i < rd_.dim_flag(); ++i) pre *= q0;
        for (auto& x : inc) {
            x *= pre;
            x.canonicalize();
        }
        return inc;
    }

    FormalDegreeReport degree_numeric(const TorusPoint& s, const Rational& q0, int height_bound, double tol = 1e-9,
                                      int rho_dim = 1) const {
        if (q0 <= 1) throw std::invalid_argument("q0 must exceed 1");
        if (rho_dim < 1) throw std::invalid_argument("rho_dim must be positive");
        FormalDegreeReport r;
        r.datum = rd_.label();
        r.point = s;
        r.height_bound = height_bound;
        r.q0 = q0;
        r.rho_dim = rho_dim;
        r.partial_inverse_degree = partial_degree_inverse(s, height_bound);
        r.height_increments = height_increments(s, height_bound, q0);
        if (auto exact = exact_height_increments(s, height_bound, q0)) {
            Rational total = 0;
            for (const auto& x : *exact) total += x;
            total.canonicalize();
            r.exact_inverse_degree = total;
            r.inverse_degree = total.get_d();
        } else {
            r.inverse_degree = 0.0;
            for (auto x : r.height_increments) r.inverse_degree += x;
        }
        if (!(r.inverse_degree > 0.0)) throw std::logic_error("inverse formal degree is not positive at q0");
        r.degree = rho_dim / r.inverse_degree;
        diagnose_tail(r, tol);
        return r;
    }

    /// Termwise comparison of sum |M(lambda, gamma s)|^2 with gamma(sum |M(lambda, s)|^2), per subset J.
    GaloisVerdict galois_verdict(const TorusPoint& s, const GaloisAutomorphism& gamma, int height_bound,
                                 const Rational& q0) const {
        GaloisVerdict g;
        g.gamma = gamma;
        g.twisted = s.galois(gamma);
        const auto a = height_sums(s, height_bound);
        const auto b = height_sums(g.twisted, height_bound);
        g.termwise_exact_equal = true;
        for (std::size_t j = 0; j < a->subsets.size(); ++j) {
            const auto lhs = RatFun::from_laurent(b->subset_sum(j, height_bound));
            const auto rhs = RatFun::from_laurent(a->subset_sum(j, height_bound)).galois(gamma);
            ++g.compared_terms;
            if (lhs != rhs) g.termwise_exact_equal = false;
        }
        g.numeric_degree_diff = std::abs(numeric_degree(s, height_bound, q0) - numeric_degree(g.twisted, height_bound, q0));
        return g;
    }

    /// Per-lambda version of the Galois identity; returns the first failing weight, if any.
    std::optional<IntVector> termwise_galois_failure(const TorusPoint& s, const GaloisAutomorphism& gamma, int height_bound) const {
        const TorusPoint t = s.galois(gamma);
        for (const auto& lam : dominant_weights(height_bound)) {
            const auto lhs = m_squared(lam, t).as_ratfun();
            const auto rhs = m_squared(lam, s).as_ratfun().galois(gamma);
            if (lhs != rhs) return lam;
        }
        return std::nullopt;
    }

    FormalDegreeReport galois_invariance_report(const TorusPoint& s, const std::vector<GaloisAutomorphism>& gammas,
                                                int height_bound, const Rational& q0, int rho_dim = 1) const {
        auto r = degree_numeric(s, q0, height_bound, 1e-9, rho_dim);
        for (const auto& g : gammas) r.galois_verdicts.push_back(galois_verdict(s, g, height_bound, q0));
        return r;
    }

    double numeric_degree(const TorusPoint& s, int height_bound, const Rational& q0) const {
        double total = 0.0;
        for (auto x : height_increments(s, height_bound, q0)) total += x;
        return 1.0 / total;
    }

    std::vector<IntVector> dominant_weights(int height_bound) const {
        std::lock_guard<std::mutex> lock(mutex_);
        if (dominant_bound_ < height_bound) {
            dominant_ = enumerate_dominant(rd_, height_bound);
            dominant_bound_ = height_bound;
        }
        std::vector<IntVector> out;
        for (const auto& w : dominant_)
            if (rd_.height(w) <= height_bound) out.push_back(w);
        return out;
    }

   private:
    struct CompactTerm {
        IntVector mu;
        std::vector<std::pair<long, long long>> u_coeffs;  // (power of u, coefficient)
    };
    struct Compact {
        std::vector<CompactTerm> terms;
    };
    // (-1)^{l(w)} e^{-delta_w} w(prod_{alpha>0} (1 - u e^alpha)), for each w
    struct NumeratorTerm {
        detail::FlatKey key;
        long long coeff;
    };

    const Compact& cached_m(const IntVector& lambda) const {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = m_cache_.find(lambda);
            if (it != m_cache_.end()) return it->second;
        }
        Compact c = build_m(lambda);
        std::lock_guard<std::mutex> lock(mutex_);
        return m_cache_.emplace(lambda, std::move(c)).first->second;
    }

    void prepare_numerator_terms() {
        const std::size_t d = rd_.lattice_dim();
        const std::size_t u_slot = d;
        detail::FlatPoly base;
        base.emplace(detail::FlatKey{}, 1);
        for (const auto& a : rd_.positive_roots()) {
            detail::FlatPoly next;
            for (const auto& [k, c] : base) {
                detail::flat_add(next, k, c);
                detail::FlatKey m = k;
                for (std::size_t i = 0; i < d; ++i) m.c[i] += static_cast<std::int32_t>(a[i]);
                m.c[u_slot] += 1;
                detail::flat_add(next, m, -c);
            }
            base = std::move(next);
        }
        numerator_terms_.resize(weyl_.size());
        for (std::size_t w = 0; w < weyl_.size(); ++w) {
            const auto& el = weyl_[w];
            IntVector delta(d, 0);
            for (const auto& a : rd_.positive_roots()) {
                const IntVector wa = weyl_action(el, a);
                if (!rd_.is_positive_root(wa)) delta = delta + wa;
            }
            const long long sign = el.length % 2 == 0 ? 1 : -1;
            for (const auto& [k, c] : base) {
                const IntVector mu = weyl_action(el, IntVector(k.c.begin(), k.c.begin() + static_cast<std::ptrdiff_t>(d))) - delta;
                detail::FlatKey key;
                for (std::size_t i = 0; i < d; ++i) key.c[i] = static_cast<std::int32_t>(mu[i]);
                key.c[u_slot] = k.c[u_slot];
                numerator_terms_[w].push_back({key, sign * c});
            }
        }
    }

    RootSubset all_simple() const {
        RootSubset s;
        for (std::size_t i = 0; i < rd_.rank(); ++i) s.push_back(i);
        return s;
    }

    void check_point(const TorusPoint& s) const {
        if (s.dim() != rd_.lattice_dim()) throw std::invalid_argument("torus point dimension does not match root datum");
    }

    Compact build_m(const IntVector& lambda) const {
        rd_.check_weight(lambda);
        if (!rd_.is_dominant(lambda)) throw std::invalid_argument("M(lambda, s) needs a dominant weight");
        const std::size_t d = rd_.lattice_dim();
        detail::FlatPoly num;
        for (std::size_t w = 0; w < weyl_.size(); ++w) {
            const IntVector wl = weyl_action(weyl_[w], lambda);
            for (const auto& t : numerator_terms_[w]) {
                detail::FlatKey k = t.key;
                for (std::size_t i = 0; i < d; ++i) k.c[i] += static_cast<std::int32_t>(wl[i]);
                detail::flat_add(num, k, t.coeff);
            }
        }
        for (const auto& a : rd_.positive_roots()) num = detail::flat_divide_one_minus(num, a);
        // group by weight, sorted so the table evaluation is deterministic
        std::map<IntVector, std::vector<std::pair<long, long long>>> by_weight;
        for (const auto& [k, c] : num)
            by_weight[IntVector(k.c.begin(), k.c.begin() + static_cast<std::ptrdiff_t>(d))].emplace_back(k.c[d], c);
        Compact out;
        out.terms.reserve(by_weight.size());
        for (auto& [mu, coeffs] : by_weight) {
            std::sort(coeffs.begin(), coeffs.end());
            out.terms.push_back({mu, std::move(coeffs)});
        }
        return out;
    }

    static CycloLaurent q_poly_as_laurent(const IntegerPolynomial& p) {
        CycloLaurent out;
        for (std::size_t i = 0; i < p.coefficients().size(); ++i)
            out.add_term(CyclotomicNumber(Rational(p.coefficients()[i])), static_cast<long>(2 * i));
        return out;
    }

    static Rational eval_q(const IntegerPolynomial& p, const Rational& q0) {
        Rational acc = 0;
        for (std::size_t i = p.coefficients().size(); i-- > 0;) acc = acc * q0 + Rational(p.coefficients()[i]);
        return acc;
    }

    /// Rational value of f at v = sqrt(q0) when it is visibly rational.
    static std::optional<Rational> exact_value(const CycloLaurent& f, const Rational& q0) {
        Rational v0;
        const bool v_rational = exact_sqrt(q0, v0);
        Rational acc = 0;
        bool ok = true;
        f.for_each_term([&](long e, const CyclotomicNumber& c) {
            if (!ok) return;
            const auto r = c.rational_part();
            if (!r || (!v_rational && e % 2 != 0)) {
                ok = false;
                return;
            }
            const Rational base = v_rational ? v0 : q0;
            const long steps = v_rational ? e : e / 2;
            Rational p = 1;
            const Rational b = steps >= 0 ? base : Rational(1) / base;
            for (long i = 0; i < std::labs(steps); ++i) p *= b;
            acc += *r * p;
        });
        if (!ok) return std::nullopt;
        acc.canonicalize();
        return acc;
    }

    static void diagnose_tail(FormalDegreeReport& r, double tol) {
        const auto& inc = r.height_increments;
        int last = -1, prev = -1;
        for (int h = static_cast<int>(inc.size()) - 1; h >= 0; --h) {
            if (std::abs(inc[static_cast<std::size_t>(h)]) > 0.0) {
                if (last < 0) last = h;
                else {
                    prev = h;
                    break;
                }
            }
        }
        if (last < 0) return;
        r.last_increment = inc[static_cast<std::size_t>(last)];
        if (prev < 0) {
            // A single nonzero height: the sum is finite.
            r.tail_ratio = 0.0;
            r.converged = true;
            return;
        }
        r.tail_ratio = std::pow(std::abs(inc[static_cast<std::size_t>(last)] / inc[static_cast<std::size_t>(prev)]),
                                1.0 / static_cast<double>(last - prev));
        const double tail = r.tail_ratio < 1.0 ? std::abs(r.last_increment) * r.tail_ratio / (1.0 - r.tail_ratio) : INFINITY;
        r.converged = r.tail_ratio < 1.0 && tail <= tol * std::abs(r.inverse_degree);
    }

    RootDatum rd_;
    WeylGroup weyl_;
    std::map<RootSubset, IntegerPolynomial> poincare_;
    mutable std::mutex mutex_;
    std::vector<std::vector<NumeratorTerm>> numerator_terms_;
    mutable std::map<IntVector, Compact> m_cache_;
    mutable std::map<TorusPoint, std::shared_ptr<const HeightSums>> sums_cache_;
    mutable std::vector<IntVector> dominant_;
    mutable int dominant_bound_ = -1;
};

/// Product of factor degrees, factor i taken at q0^{f_i}.
struct TensorFactor {
    const FormalDegreeEngine* engine;
    TorusPoint point;
    int residue_degree = 1;  // f_i
};

inline double tensor_product_degree(const std::vector<TensorFactor>& factors, const Rational& q0, int height_bound) {
    double d = 1.0;
    for (const auto& f : factors) {
        Rational qf = 1;
        for (int i = 0; i < f.residue_degree; ++i) qf *= q0;
        d *= f.engine->degree_numeric(f.point, qf, height_bound).degree;
    }
    return d;
}

// --- independent floating-point oracle ------------------------------------

enum class OracleMode { automatic, direct, deformed };

struct OracleValue {
    std::complex<double> value;
    double magnitude = 0.0;  // largest |term| in the Weyl sum, a scale for the rounding error
    bool deformed = false;
};

namespace detail {

/// zeta_n^a v0^k with v0^2 = q0, computed without rounding v0 itself where possible.
inline std::complex<double> monomial_value(long long a, long long n, long long k, double q0) {
    const double angle = 2.0 * M_PI * static_cast<double>(mod_floor(a, n)) / static_cast<double>(n);
    const long long half = k >= 0 ? k / 2 : -((-k + 1) / 2);
    double mag = std::pow(q0, static_cast<double>(half));
    if (k - 2 * half == 1) mag *= std::sqrt(q0);
    return std::polar(mag, angle);
}

}  // namespace detail

/// M(lambda, s) at q = q0 from the per-w formula in complex arithmetic. At a non-regular
/// point the per-w terms have poles; the deformed mode averages the Weyl sum over a small
/// circle s * exp(z * 2rho^vee), |z| = r, which recovers the value at z = 0 because the
/// sum is analytic in z.
inline OracleValue float_oracle_m(const RootDatum& rd, const WeylGroup& weyl, const IntVector& lambda,
                                  const TorusPoint& s, double q0, OracleMode mode = OracleMode::automatic) {
    const TorusPoint p = s.normalized();
    const bool regular = p.is_regular(rd);
    if (mode == OracleMode::direct && !regular)
        throw NonRegularParameter("alpha(s) = 1 for a positive root; per-term poles at " + s.to_string());
    const bool deform = mode == OracleMode::deformed || (mode == OracleMode::automatic && !regular);
    const long long n = p.level();

    struct Sym {
        long long z, v;
    };
    auto sym = [&](const IntVector& mu) { return Sym{mod_floor(dot(mu, p.torsion()), n), dot(mu, p.v_exponents())}; };
    const IntVector rho2 = rd.two_rho_check();

    // Per element: e^{w lambda} and the images w(alpha).
    struct WData {
        Sym lam;
        long long lam_pair;
        std::vector<Sym> roots;
        std::vector<long long> pairs;
    };
    std::vector<WData> data;
    for (const auto& w : weyl.elements()) {
        WData d;
        const IntVector wl = weyl_action(w, lambda);
        d.lam = sym(wl);
        d.lam_pair = dot(wl, rho2);
        for (const auto& a : rd.positive_roots()) {
            const IntVector wa = weyl_action(w, a);
            d.roots.push_back(sym(wa));
            d.pairs.push_back(dot(wa, rho2));
        }
        data.push_back(std::move(d));
    }

    auto evaluate = [&](std::complex<double> z, double& magnitude) {
        std::complex<double> total = 0;
        for (const auto& d : data) {
            std::complex<double> term = detail::monomial_value(d.lam.z, n, d.lam.v, q0) *
                                        std::exp(z * static_cast<double>(d.lam_pair));
            for (std::size_t i = 0; i < d.roots.size(); ++i) {
                const auto& r = d.roots[i];
                const std::complex<double> shift = std::exp(z * static_cast<double>(d.pairs[i]));
                // (1 - q^{-1} alpha) with the v-exponents merged first so exact cancellation stays exact.
                const std::complex<double> num = 1.0 - detail::monomial_value(r.z, n, r.v - 2, q0) * shift;
                const std::complex<double> den = 1.0 - detail::monomial_value(r.z, n, r.v, q0) * shift;
                term *= num / den;
            }
            magnitude = std::max(magnitude, std::abs(term));
            total += term;
        }
        return total;
    };

    OracleValue out;
    out.deformed = deform;
    if (!deform) {
        out.value = evaluate(0.0, out.magnitude);
        return out;
    }
    // Radius well inside the nearest pole of any per-w factor other than z = 0.
    double radius = 0.05;
    for (const auto& a : rd.positive_roots()) {
        const auto sa = sym(a);
        if (sa.z == 0 && sa.v == 0) continue;
        const double pr = static_cast<double>(std::abs(dot(a, rho2)));
        const double lg = std::abs(std::complex<double>(0.5 * static_cast<double>(sa.v) * std::log(q0),
                                                        2.0 * M_PI * static_cast<double>(std::min(sa.z, n - sa.z)) / static_cast<double>(n)));
        radius = std::min(radius, 0.4 * lg / pr);
    }
    constexpr int samples = 64;
    std::complex<double> acc = 0;
    for (int k = 0; k < samples; ++k) {
        const std::complex<double> z = std::polar(radius, 2.0 * M_PI * (k + 0.5) / samples);
        acc += evaluate(z, out.magnitude);
    }
    out.value = acc / static_cast<double>(samples);
    return out;
}

/// Truncated inverse degree recomputed entirely in floating point, summed in (height, lex) order.
inline double float_oracle_degree_inverse(const RootDatum& rd, const TorusPoint& s, double q0, int height_bound) {
    const WeylGroup weyl(rd);
    double total = 0.0;
    for (const auto& lam : enumerate_dominant(rd, height_bound)) {
        const auto j = weight_stabilizer(rd, lam);
        const double pj = poincare_polynomial(rd, j).evaluate<double>(q0);
        const auto m = float_oracle_m(rd, weyl, lam, s, q0).value;
        total += std::norm(m) / pj;
    }
    return std::pow(q0, static_cast<double>(rd.dim_flag())) * total;
}

inline double float_oracle_degree(const RootDatum& rd, const TorusPoint& s, double q0, int height_bound) {
    return 1.0 / float_oracle_degree_inverse(rd, s, q0, height_bound);
}

}  // namespace kltwist
