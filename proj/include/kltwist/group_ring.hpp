#pragma once

// Finitely supported functions X* -> C, i.e. elements sum c_mu e^mu of the
// group ring of the weight lattice, with the few operations the Hecke and
// formal-degree code share: Weyl action, monomial shifts, and exact division
// by (1 - e^beta).

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kltwist/matrix.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/root_datum.hpp"

namespace kltwist {

template <class C>
using GroupRing = std::map<IntVector, C>;

using WeightPolynomial = GroupRing<LaurentInt>;

template <class C>
void add_term(GroupRing<C>& f, const IntVector& mu, const C& c) {
    if (detail::coeff_zero(c)) return;
    auto [it, inserted] = f.emplace(mu, c);
    if (!inserted) {
        it->second += c;
        if (detail::coeff_zero(it->second)) f.erase(it);
    }
}

template <class C>
GroupRing<C> operator+(GroupRing<C> a, const GroupRing<C>& b) {
    for (const auto& [mu, c] : b) add_term(a, mu, c);
    return a;
}

template <class C>
GroupRing<C> operator-(GroupRing<C> a, const GroupRing<C>& b) {
    for (const auto& [mu, c] : b) add_term(a, mu, C(-c));
    return a;
}

template <class C>
GroupRing<C> operator*(const GroupRing<C>& a, const GroupRing<C>& b) {
    GroupRing<C> out;
    for (const auto& [mu, c] : a)
        for (const auto& [nu, d] : b) add_term(out, mu + nu, C(c * d));
    return out;
}

template <class C>
GroupRing<C> scale(const GroupRing<C>& a, const C& c) {
    GroupRing<C> out;
    for (const auto& [mu, d] : a) add_term(out, mu, C(d * c));
    return out;
}

template <class C>
GroupRing<C> shift(const GroupRing<C>& a, const IntVector& lambda) {
    GroupRing<C> out;
    for (const auto& [mu, d] : a) out.emplace(mu + lambda, d);
    return out;
}

template <class C>
GroupRing<C> reflect(const RootDatum& rd, std::size_t i, const GroupRing<C>& a) {
    GroupRing<C> out;
    for (const auto& [mu, d] : a) add_term(out, rd.reflect(i, mu), d);
    return out;
}

template <class C>
GroupRing<C> weyl_apply(const WeylElement& w, const GroupRing<C>& a) {
    GroupRing<C> out;
    for (const auto& [mu, d] : a) add_term(out, weyl_action(w, mu), d);
    return out;
}

template <class C>
bool is_weyl_invariant(const RootDatum& rd, const GroupRing<C>& a) {
    for (std::size_t i = 0; i < rd.rank(); ++i)
        if (reflect(rd, i, a) != a) return false;
    return true;
}

class inexact_division : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Exact quotient g / (1 - e^beta). Along each coset mu + Z beta the quotient is a
/// running sum, Q_mu = sum_{k >= 0} g_{mu - k beta}; divisibility means every
/// string sums to zero, which is checked.
template <class C>
GroupRing<C> divide_one_minus(const GroupRing<C>& g, const IntVector& beta) {
    std::size_t j = 0;
    while (j < beta.size() && beta[j] == 0) ++j;
    if (j == beta.size()) throw std::invalid_argument("division by 1 - e^0");
    const long long bj = beta[j];
    auto floor_div = [](long long a, long long b) {
        long long q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    };
    // coset representative -> (position -> coefficient)
    std::map<IntVector, std::map<long long, C>> strings;
    for (const auto& [mu, c] : g) {
        // mu = rep + k beta with rep_j in [0, |beta_j|)
        const long long k = bj > 0 ? floor_div(mu[j], bj) : -floor_div(mu[j], -bj);
        strings[mu - scaled(beta, k)][k] = c;
    }
    GroupRing<C> out;
    for (const auto& [rep, str] : strings) {
        C run{};
        long long pos = str.begin()->first;
        const long long last = str.rbegin()->first;
        while (pos <= last) {
            auto it = str.find(pos);
            if (it != str.end()) run += it->second;
            if (pos == last) break;
            if (!detail::coeff_zero(run)) out.emplace(rep + scaled(beta, pos), run);
            ++pos;
        }
        if (!detail::coeff_zero(run)) throw inexact_division("group-ring element is not divisible by 1 - e^beta");
    }
    return out;
}

}  // namespace kltwist
