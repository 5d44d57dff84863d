#pragma once

// The affine Hecke algebra in the Bernstein presentation over Z[v, v^-1],
// q = v^2, with basis theta_lambda T_w. Products are rewritten into this basis
// with the cross relation
//   T_s theta_mu = theta_{s mu} T_s - (q - 1) (theta_{s mu} - theta_mu) / (1 - theta_{-alpha}).
// An independent check is provided by the polynomial representation on the
// group ring of X*, where theta_lambda multiplies by e^lambda and
//   T_s f = q s(f) + (q - 1) (f - s(f)) / (1 - e^{-alpha}).

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kltwist/group_ring.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/rational_function.hpp"
#include "kltwist/root_datum.hpp"
#include "kltwist/torus_point.hpp"

namespace kltwist {

inline LaurentInt v_monomial(long e, long long c = 1) { return LaurentInt::monomial(Integer(static_cast<long>(c)), e); }
inline LaurentInt q_minus_one() { return v_monomial(2) - v_monomial(0); }

class AffineHeckeAlgebra;

class HeckeElement {
   public:
    using Key = std::pair<IntVector, std::size_t>;  // (lambda, index of w)
    using Terms = std::map<Key, LaurentInt>;

    HeckeElement() = default;
    explicit HeckeElement(std::shared_ptr<const AffineHeckeAlgebra> alg) : alg_(std::move(alg)) {}
    HeckeElement(std::shared_ptr<const AffineHeckeAlgebra> alg, Terms terms) : alg_(std::move(alg)) {
        for (auto& [k, c] : terms)
            if (!c.is_zero()) terms_.emplace(k, std::move(c));
    }

    const std::shared_ptr<const AffineHeckeAlgebra>& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    LaurentInt coefficient(const IntVector& lambda, std::size_t w) const {
        auto it = terms_.find({lambda, w});
        return it == terms_.end() ? LaurentInt() : it->second;
    }

    void add(const Key& k, const LaurentInt& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) {
        a.check_same(b);
        if (!a.alg_) a.alg_ = b.alg_;
        for (const auto& [k, c] : b.terms_) a.add(k, c);
        return a;
    }
    HeckeElement operator-() const {
        HeckeElement r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    friend HeckeElement operator-(const HeckeElement& a, const HeckeElement& b) { return a + (-b); }
    HeckeElement scaled(const LaurentInt& c) const {
        HeckeElement r(alg_);
        for (const auto& [k, d] : terms_) r.add(k, d * c);
        return r;
    }
    friend HeckeElement operator*(const HeckeElement& a, const HeckeElement& b);

    friend bool operator==(const HeckeElement& a, const HeckeElement& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const HeckeElement& a, const HeckeElement& b) { return !(a == b); }

    std::string to_string() const;

   private:
    void check_same(const HeckeElement& b) const {
        if (alg_ && b.alg_ && alg_ != b.alg_) throw std::invalid_argument("Hecke elements over different root data");
    }
    std::shared_ptr<const AffineHeckeAlgebra> alg_;
    Terms terms_;
};

class AffineHeckeAlgebra : public std::enable_shared_from_this<AffineHeckeAlgebra> {
   public:
    using FiniteElement = std::map<std::size_t, LaurentInt>;

    static std::shared_ptr<AffineHeckeAlgebra> create(RootDatum rd) {
        return std::shared_ptr<AffineHeckeAlgebra>(new AffineHeckeAlgebra(std::move(rd)));
    }

    const RootDatum& datum() const { return rd_; }
    const WeylGroup& weyl() const { return weyl_; }

    HeckeElement one() const { return theta(IntVector(rd_.lattice_dim(), 0)); }
    HeckeElement scalar(const LaurentInt& c) const { return one().scaled(c); }
    HeckeElement theta(const IntVector& lambda) const {
        rd_.check_weight(lambda);
        HeckeElement e(shared_from_this());
        e.add({lambda, 0}, v_monomial(0));
        return e;
    }
    HeckeElement T(std::size_t w) const {
        HeckeElement e(shared_from_this());
        e.add({IntVector(rd_.lattice_dim(), 0), w}, v_monomial(0));
        return e;
    }
    HeckeElement T_simple(std::size_t i) const {
        if (i >= rd_.rank()) throw std::invalid_argument("simple reflection index out of range");
        return T(weyl_.right_multiply(0, i));
    }
    HeckeElement basis(const IntVector& lambda, std::size_t w) const {
        HeckeElement e(shared_from_this());
        e.add({lambda, w}, v_monomial(0));
        return e;
    }

    /// (theta_lambda - theta_{s_i lambda}) / (1 - theta_{-alpha_i}) as a sum of theta's, closed form.
    WeightPolynomial cross_fraction(std::size_t i, const IntVector& lambda) const {
        const long long k = dot(lambda, rd_.simple_coroots()[i]);
        const auto& alpha = rd_.simple_roots()[i];
        WeightPolynomial out;
        if (k > 0)
            for (long long j = 0; j < k; ++j) add_term(out, lambda - scaled(alpha, j), v_monomial(0));
        else
            for (long long j = 1; j <= -k; ++j) add_term(out, lambda + scaled(alpha, j), v_monomial(0, -1));
        return out;
    }

    /// T_{s_i} * x for x in normal form.
    HeckeElement left_multiply_simple(std::size_t i, const HeckeElement& x) const {
        HeckeElement out(shared_from_this());
        const auto qm1 = q_minus_one();
        for (const auto& [key, c] : x.terms()) {
            const auto& [mu, z] = key;
            const IntVector smu = rd_.reflect(i, mu);
            for (const auto& [u, d] : finite_left_simple(i, z)) out.add({smu, u}, c * d);
            for (const auto& [nu, d] : cross_fraction(i, smu)) out.add({nu, z}, -(c * d * qm1));
        }
        return out;
    }

    /// T_w theta_mu in normal form (cached).
    const HeckeElement& t_theta(std::size_t w, const IntVector& mu) const {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = t_theta_cache_.find({w, mu});
            if (it != t_theta_cache_.end()) return it->second;
        }
        HeckeElement acc = theta(mu);
        const auto& word = weyl_[w].word;
        for (auto it = word.rbegin(); it != word.rend(); ++it) acc = left_multiply_simple(*it, acc);
        std::lock_guard<std::mutex> lock(mutex_);
        return t_theta_cache_.emplace(std::make_pair(w, mu), std::move(acc)).first->second;
    }

    /// T_a T_b in the finite Hecke algebra (cached).
    const FiniteElement& finite_product(std::size_t a, std::size_t b) const {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = finite_cache_.find({a, b});
            if (it != finite_cache_.end()) return it->second;
        }
        FiniteElement acc{{b, v_monomial(0)}};
        const auto& word = weyl_[a].word;
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            FiniteElement next;
            for (const auto& [z, c] : acc)
                for (const auto& [u, d] : finite_left_simple(*it, z)) add_finite(next, u, c * d);
            acc = std::move(next);
        }
        std::lock_guard<std::mutex> lock(mutex_);
        return finite_cache_.emplace(std::make_pair(a, b), std::move(acc)).first->second;
    }

    /// T_s T_z.
    FiniteElement finite_left_simple(std::size_t i, std::size_t z) const {
        const std::size_t sz = weyl_.left_multiply(i, z);
        if (weyl_[sz].length > weyl_[z].length) return {{sz, v_monomial(0)}};
        FiniteElement out;
        add_finite(out, z, q_minus_one());
        add_finite(out, sz, v_monomial(2));
        return out;
    }

    HeckeElement multiply(const HeckeElement& a, const HeckeElement& b) const {
        HeckeElement out(shared_from_this());
        for (const auto& [ka, ca] : a.terms()) {
            for (const auto& [kb, cb] : b.terms()) {
                const LaurentInt c = ca * cb;
                for (const auto& [kn, cn] : t_theta(ka.second, kb.first).terms()) {
                    const IntVector lam = ka.first + kn.first;
                    for (const auto& [u, d] : finite_product(kn.second, kb.second)) out.add({lam, u}, c * cn * d);
                }
            }
        }
        return out;
    }

    // --- polynomial representation ---------------------------------------

    /// T_{s_i} acting on the group ring, division done by explicit string sums.
    WeightPolynomial model_T(std::size_t i, const WeightPolynomial& f) const {
        const auto sf = reflect(rd_, i, f);
        auto diff = divide_one_minus(f - sf, -rd_.simple_roots()[i]);
        return scale(sf, v_monomial(2)) + scale(diff, q_minus_one());
    }
    WeightPolynomial model_apply(const HeckeElement& h, const WeightPolynomial& f) const {
        WeightPolynomial out;
        for (const auto& [key, c] : h.terms()) {
            WeightPolynomial g = f;
            const auto& word = weyl_[key.second].word;
            for (auto it = word.rbegin(); it != word.rend(); ++it) g = model_T(*it, g);
            out = out + scale(shift(g, key.first), c);
        }
        return out;
    }

   private:
    explicit AffineHeckeAlgebra(RootDatum rd) : rd_(std::move(rd)), weyl_(rd_) {}

    static void add_finite(FiniteElement& f, std::size_t u, const LaurentInt& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = f.emplace(u, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) f.erase(it);
        }
    }

    RootDatum rd_;
    WeylGroup weyl_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::size_t, IntVector>, HeckeElement> t_theta_cache_;
    mutable std::map<std::pair<std::size_t, std::size_t>, FiniteElement> finite_cache_;
};

inline HeckeElement operator*(const HeckeElement& a, const HeckeElement& b) {
    a.check_same(b);
    const auto& alg = a.alg_ ? a.alg_ : b.alg_;
    if (!alg) return HeckeElement();
    return alg->multiply(a, b);
}

inline std::string laurent_to_string(const LaurentInt& c) {
    if (c.is_zero()) return "0";
    std::string out;
    c.for_each_term([&](long e, const Integer& x) {
        if (!out.empty()) out += (sgn(x) < 0 ? " - " : " + ");
        else if (sgn(x) < 0) out += "-";
        const Integer ax = abs(x);
        const bool unit = ax == 1;
        if (!unit || e == 0) out += ax.get_str();
        if (e != 0) out += std::string(unit ? "" : "*") + "v" + (e != 1 ? "^" + std::to_string(e) : "");
    });
    return out;
}

inline std::string HeckeElement::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + laurent_to_string(c) + ")*theta" + kltwist::to_string(k.first);
        if (k.second != 0 && alg_) {
            out += "*T[";
            const auto& word = alg_->weyl()[k.second].word;
            for (std::size_t i = 0; i < word.size(); ++i) out += (i ? "," : "") + std::to_string(word[i] + 1);
            out += "]";
        }
    }
    return out;
}

inline HeckeElement hecke_multiply(const HeckeElement& a, const HeckeElement& b) { return a * b; }

// --- relation verification ------------------------------------------------

struct RelationCheck {
    std::string relation;  // quadratic, braid, theta, cross, central, associativity, model, specialization
    std::string instance;
    bool passed = true;
    std::string witness;  // nonempty on failure
};

struct RelationReport {
    std::string datum;
    int length_bound = 0;
    std::vector<RelationCheck> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.passed; });
    }
    std::size_t count(const std::string& relation) const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(),
                                                      [&](const RelationCheck& c) { return c.relation == relation; }));
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const RelationCheck& c) { return !c.passed; }));
    }
};

/// Coxeter exponent m_ij from the Cartan entries.
inline int coxeter_exponent(const IntMatrix& c, std::size_t i, std::size_t j) {
    switch (c(i, j) * c(j, i)) {
        case 0: return 2;
        case 1: return 3;
        case 2: return 4;
        case 3: return 6;
    }
    throw std::logic_error("Cartan product outside finite type");
}

/// Weights with all coordinates in [-bound, bound].
inline std::vector<IntVector> weight_box(std::size_t dim, long long bound) {
    std::vector<IntVector> out;
    IntVector cur(dim, -bound);
    if (dim == 0) return {IntVector{}};
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        while (k < dim && cur[k] == bound) cur[k++] = -bound;
        if (k == dim) break;
        ++cur[k];
    }
    return out;
}

/// sum over the W-orbit of lambda of theta_mu.
inline HeckeElement orbit_sum(const AffineHeckeAlgebra& alg, const IntVector& lambda) {
    std::set<IntVector> orbit;
    for (const auto& w : alg.weyl().elements()) orbit.insert(weyl_action(w, lambda));
    HeckeElement out = alg.scalar(LaurentInt());
    for (const auto& mu : orbit) out = out + alg.theta(mu);
    return out;
}

/// Specialization v -> 1 into Z[W x| X*]: element (lambda, w) -> integer.
using GroupAlgebraElement = std::map<std::pair<IntVector, std::size_t>, Integer>;

inline GroupAlgebraElement specialize_at_one(const HeckeElement& h) {
    GroupAlgebraElement out;
    for (const auto& [k, c] : h.terms()) {
        Integer s = 0;
        for (const auto& x : c.coefficients()) s += x;
        if (s != 0) out[k] += s;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline GroupAlgebraElement group_algebra_multiply(const WeylGroup& w, const GroupAlgebraElement& a,
                                                  const GroupAlgebraElement& b) {
    GroupAlgebraElement out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            const IntVector lam = ka.first + weyl_action(w[ka.second], kb.first);
            out[{lam, w.multiply(ka.second, kb.second)}] += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline RelationReport verify_relations(const RootDatum& rd, int length_bound) {
    if (length_bound < 1) throw std::invalid_argument("length bound must be positive");
    auto alg = AffineHeckeAlgebra::create(rd);
    const auto& W = alg->weyl();
    const std::size_t r = rd.rank(), d = rd.lattice_dim();
    RelationReport rep;
    rep.datum = rd.label();
    rep.length_bound = length_bound;
    auto record = [&](std::string rel, std::string inst, const HeckeElement& lhs, const HeckeElement& rhs) {
        RelationCheck c{std::move(rel), std::move(inst), lhs == rhs, ""};
        if (!c.passed) c.witness = "lhs = " + lhs.to_string() + "; rhs = " + rhs.to_string();
        rep.checks.push_back(std::move(c));
    };
    const auto q = v_monomial(2);
    const HeckeElement one = alg->one();

    for (std::size_t i = 0; i < r; ++i) {
        const auto Ts = alg->T_simple(i);
        record("quadratic", "s" + std::to_string(i + 1), (Ts - one.scaled(q)) * (Ts + one), alg->scalar(LaurentInt()));
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            const int m = coxeter_exponent(rd.cartan_matrix(), i, j);
            HeckeElement a = one, b = one;
            for (int k = 0; k < m; ++k) {
                a = a * alg->T_simple(k % 2 == 0 ? i : j);
                b = b * alg->T_simple(k % 2 == 0 ? j : i);
            }
            record("braid", "s" + std::to_string(i + 1) + ",s" + std::to_string(j + 1) + " m=" + std::to_string(m), a, b);
        }

    const long long box = std::min<long long>(length_bound, d <= 2 ? 3 : 1);
    const auto weights = weight_box(d, box);
    const auto small = weight_box(d, 1);
    for (const auto& lam : small)
        for (const auto& mu : small)
            record("theta", to_string(lam) + "+" + to_string(mu), alg->theta(lam) * alg->theta(mu), alg->theta(lam + mu));

    // Cross relation: right-hand side through generic string division, not the closed form.
    for (std::size_t i = 0; i < r; ++i) {
        const auto Ts = alg->T_simple(i);
        for (const auto& lam : weights) {
            if (std::all_of(lam.begin(), lam.end(), [](long long x) { return x == 0; })) continue;
            if (*std::max_element(lam.begin(), lam.end()) > length_bound ||
                *std::min_element(lam.begin(), lam.end()) < -length_bound)
                continue;
            const IntVector slam = rd.reflect(i, lam);
            WeightPolynomial num;
            add_term(num, lam, v_monomial(0));
            add_term(num, slam, v_monomial(0, -1));
            const auto frac = divide_one_minus(num, -rd.simple_roots()[i]);
            HeckeElement rhs = alg->scalar(LaurentInt());
            for (const auto& [nu, c] : frac) rhs = rhs + alg->theta(nu).scaled(c * q_minus_one());
            record("cross", "s" + std::to_string(i + 1) + ", lambda=" + to_string(lam),
                   alg->theta(lam) * Ts - Ts * alg->theta(slam), rhs);
        }
    }

    std::vector<std::size_t> short_elements;
    for (std::size_t w = 0; w < W.size(); ++w)
        if (static_cast<int>(W[w].length) <= length_bound) short_elements.push_back(w);

    // Centrality of W-invariant elements: orbit sums of small dominant weights and W-fixed theta's.
    if (r > 0) {
        std::vector<HeckeElement> central;
        std::vector<std::string> names;
        if (rd.is_semisimple()) {
            for (const auto& lam : enumerate_dominant(rd, std::min(length_bound, 2))) {
                central.push_back(orbit_sum(*alg, lam));
                names.push_back("z" + to_string(lam));
            }
        }
        for (const auto& lam : small) {
            bool fixed = true;
            for (std::size_t i = 0; i < r; ++i) fixed = fixed && dot(lam, rd.simple_coroots()[i]) == 0;
            bool nonzero = std::any_of(lam.begin(), lam.end(), [](long long x) { return x != 0; });
            if (fixed && nonzero) {
                central.push_back(alg->theta(lam));
                names.push_back("theta" + to_string(lam));
            }
            if (!rd.is_semisimple() && rd.is_dominant(lam) && rd.height(lam) <= 2 && !fixed) {
                central.push_back(orbit_sum(*alg, lam));
                names.push_back("z" + to_string(lam));
            }
        }
        for (std::size_t c = 0; c < central.size(); ++c) {
            for (auto w : short_elements)
                record("central", names[c] + " vs T_w, l(w)=" + std::to_string(W[w].length), central[c] * alg->T(w),
                       alg->T(w) * central[c]);
            for (const auto& mu : small)
                record("central", names[c] + " vs theta" + to_string(mu), central[c] * alg->theta(mu),
                       alg->theta(mu) * central[c]);
        }
    }

    // Associativity, polynomial model and specialization on basis elements theta_lambda T_w.
    std::vector<HeckeElement> basis;
    for (const auto& lam : small)
        for (auto w : short_elements) basis.push_back(alg->basis(lam, w));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    const std::size_t trials = std::min<std::size_t>(200, basis.size() * basis.size());
    std::vector<WeightPolynomial> test_functions;
    for (const auto& lam : small) {
        WeightPolynomial f;
        add_term(f, lam, v_monomial(0));
        test_functions.push_back(f);
    }
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& a = basis[pick(rng)];
        const auto& b = basis[pick(rng)];
        const auto& c = basis[pick(rng)];
        const auto ab = a * b;
        record("associativity", "trial " + std::to_string(t), ab * c, a * (b * c));

        bool model_ok = true;
        std::string witness;
        for (const auto& f : test_functions) {
            if (alg->model_apply(ab, f) != alg->model_apply(a, alg->model_apply(b, f))) {
                model_ok = false;
                witness = "a = " + a.to_string() + ", b = " + b.to_string();
                break;
            }
        }
        rep.checks.push_back({"model", "trial " + std::to_string(t), model_ok, witness});

        const bool spec_ok = specialize_at_one(ab) == group_algebra_multiply(W, specialize_at_one(a), specialize_at_one(b));
        rep.checks.push_back({"specialization", "trial " + std::to_string(t), spec_ok,
                              spec_ok ? "" : "a = " + a.to_string() + ", b = " + b.to_string()});
    }
    return rep;
}

// --- central characters ---------------------------------------------------

/// The W-orbit of a torus point, sorted; the first element is the canonical representative.
class CentralCharacter {
   public:
    CentralCharacter() = default;
    explicit CentralCharacter(std::vector<TorusPoint> orbit) : orbit_(std::move(orbit)) {
        std::sort(orbit_.begin(), orbit_.end());
        orbit_.erase(std::unique(orbit_.begin(), orbit_.end()), orbit_.end());
    }
    const std::vector<TorusPoint>& orbit() const { return orbit_; }
    const TorusPoint& representative() const { return orbit_.front(); }
    CentralCharacter galois(const GaloisAutomorphism& gamma) const {
        std::vector<TorusPoint> out;
        for (const auto& p : orbit_) out.push_back(p.galois(gamma));
        return CentralCharacter(std::move(out));
    }
    friend bool operator==(const CentralCharacter& a, const CentralCharacter& b) { return a.orbit_ == b.orbit_; }
    friend bool operator!=(const CentralCharacter& a, const CentralCharacter& b) { return !(a == b); }

   private:
    std::vector<TorusPoint> orbit_;
};

inline CentralCharacter central_character_orbit(const WeylGroup& w, const TorusPoint& s) {
    std::vector<TorusPoint> orbit;
    for (const auto& x : w.elements()) orbit.push_back(s.weyl_translate(x));
    return CentralCharacter(std::move(orbit));
}

inline CentralCharacter central_character_orbit(const RootDatum& rd, const TorusPoint& s) {
    if (s.dim() != rd.lattice_dim()) throw std::invalid_argument("torus point dimension does not match root datum");
    return central_character_orbit(WeylGroup(rd), s);
}

class NotWeylInvariant : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// f(s) for a W-invariant f.
inline RatFun central_character(const RootDatum& rd, const TorusPoint& s, const WeightPolynomial& f) {
    if (!is_weyl_invariant(rd, f)) throw NotWeylInvariant("central character needs a W-invariant element");
    if (s.dim() != rd.lattice_dim()) throw std::invalid_argument("torus point dimension does not match root datum");
    RatFun out;
    for (const auto& [lam, c] : f) {
        CycloLaurent coeff;
        c.for_each_term([&](long e, const Integer& x) { coeff.add_term(CyclotomicNumber(Rational(x)), e); });
        out += RatFun::from_laurent(coeff) * s.character(lam);
    }
    return out;
}

/// sum of e^mu over the W-orbit of lambda.
inline WeightPolynomial orbit_sum_polynomial(const WeylGroup& w, const IntVector& lambda) {
    std::set<IntVector> orbit;
    for (const auto& x : w.elements()) orbit.insert(weyl_action(x, lambda));
    WeightPolynomial out;
    for (const auto& mu : orbit) add_term(out, mu, v_monomial(0));
    return out;
}

}  // namespace kltwist
