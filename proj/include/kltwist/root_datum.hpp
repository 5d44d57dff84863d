#pragma once

// Root data of split reductive groups, their Weyl groups, parabolic
// Poincare polynomials and truncated enumeration of dominant weights.
//
// Conventions: X* is identified with Z^d, X_* with its dual Z^d under the dot
// product. The Cartan matrix entry (i, j) is <alpha_i, alpha_j^vee>.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kltwist/matrix.hpp"
#include "kltwist/polynomial.hpp"

namespace kltwist {

enum class LatticeKind { simply_connected, adjoint, general_linear };

struct CartanTypeSpec {
    char family = 'A';
    int rank = 1;
    LatticeKind lattice = LatticeKind::simply_connected;
};

struct ExplicitDatumSpec {
    std::vector<IntVector> simple_roots;
    std::vector<IntVector> simple_coroots;
    std::size_t lattice_dim = 0;  // only consulted when there are no roots
};

using RootDatumSpec = std::variant<CartanTypeSpec, ExplicitDatumSpec>;

class size_guard_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A sorted list of simple-root indices.
using RootSubset = std::vector<std::size_t>;

class RootDatum {
   public:
    std::size_t rank() const { return simple_roots_.size(); }
    std::size_t lattice_dim() const { return dim_; }
    const std::vector<IntVector>& simple_roots() const { return simple_roots_; }
    const std::vector<IntVector>& simple_coroots() const { return simple_coroots_; }
    const IntMatrix& cartan_matrix() const { return cartan_; }
    const std::vector<IntVector>& positive_roots() const { return positive_roots_; }
    const std::vector<IntVector>& positive_coroots() const { return positive_coroots_; }
    /// Positive roots in the basis of simple roots.
    const std::vector<IntVector>& positive_root_coordinates() const { return positive_root_coords_; }
    std::size_t dim_flag() const { return positive_roots_.size(); }
    bool is_semisimple() const { return rank() == dim_; }
    const std::string& label() const { return label_; }

    long long pairing(const IntVector& weight, const IntVector& coweight) const { return dot(weight, coweight); }

    IntVector reflect(std::size_t i, const IntVector& weight) const {
        return weight - scaled(simple_roots_[i], dot(weight, simple_coroots_[i]));
    }
    IntVector coreflect(std::size_t i, const IntVector& coweight) const {
        return coweight - scaled(simple_coroots_[i], dot(simple_roots_[i], coweight));
    }

    /// Pairings <weight, alpha_i^vee> with the simple coroots.
    IntVector simple_pairings(const IntVector& weight) const {
        check_weight(weight);
        IntVector c(rank());
        for (std::size_t i = 0; i < rank(); ++i) c[i] = dot(weight, simple_coroots_[i]);
        return c;
    }
    bool is_dominant(const IntVector& weight) const {
        for (auto c : simple_pairings(weight))
            if (c < 0) return false;
        return true;
    }
    /// Truncation height: the sum of pairings with the simple coroots.
    long long height(const IntVector& weight) const {
        long long h = 0;
        for (auto c : simple_pairings(weight)) h += c;
        return h;
    }
    bool is_positive_root(const IntVector& v) const {
        return std::find(positive_roots_.begin(), positive_roots_.end(), v) != positive_roots_.end();
    }
    /// 2 rho^vee, the sum of the positive coroots.
    IntVector two_rho_check() const {
        IntVector s(dim_, 0);
        for (const auto& c : positive_coroots_) s = s + c;
        return s;
    }

    void check_weight(const IntVector& weight) const {
        if (weight.size() != dim_)
            throw std::invalid_argument("weight of dimension " + std::to_string(weight.size()) +
                                        " for a root datum of lattice dimension " + std::to_string(dim_));
    }

    friend bool operator==(const RootDatum& a, const RootDatum& b) {
        return a.dim_ == b.dim_ && a.simple_roots_ == b.simple_roots_ && a.simple_coroots_ == b.simple_coroots_;
    }

    friend RootDatum build_root_datum(const RootDatumSpec& spec);

   private:
    std::string label_;
    std::size_t dim_ = 0;
    std::vector<IntVector> simple_roots_, simple_coroots_;
    IntMatrix cartan_;
    std::vector<IntVector> positive_roots_, positive_coroots_, positive_root_coords_;
};

namespace detail {

inline IntMatrix named_cartan_matrix(char family, int n) {
    auto bad = [&] {
        return std::invalid_argument(std::string("unsupported Cartan type ") + family + std::to_string(n));
    };
    if (n < 1 || n > 8) throw bad();
    IntMatrix c = IntMatrix::identity(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) c(i, i) = 2;
    auto link = [&](int i, int j) {  // 0-based, simply laced edge
        c(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = -1;
        c(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = -1;
    };
    switch (family) {
        case 'A':
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            break;
        case 'B':
        case 'C':
            if (n < 2) throw bad();
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            // B: alpha_n short, <alpha_{n-1}, alpha_n^vee> = -2. C is the transpose.
            if (family == 'B') c(static_cast<std::size_t>(n - 2), static_cast<std::size_t>(n - 1)) = -2;
            else c(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 2)) = -2;
            break;
        case 'D':
            if (n < 3) throw bad();
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
            link(n - 3, n - 1);
            break;
        case 'E':
            if (n < 6) throw bad();
            link(0, 2);
            link(1, 3);
            for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
            break;
        case 'F':
            if (n != 4) throw bad();
            link(0, 1);
            link(2, 3);
            c(1, 2) = -2;
            c(2, 1) = -1;
            break;
        case 'G':
            if (n != 2) throw bad();
            c(0, 1) = -1;
            c(1, 0) = -3;
            break;
        default:
            throw bad();
    }
    return c;
}

inline bool is_finite_type_cartan(const IntMatrix& c) {
    const std::size_t n = c.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (c(i, i) != 2) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c(i, j) > 0) return false;
            if ((c(i, j) == 0) != (c(j, i) == 0)) return false;
        }
    }
    // Finite type iff every principal minor is positive.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        IntMatrix sub(idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = c(idx[a], idx[b]);
        if (sgn(determinant(sub)) <= 0) return false;
    }
    return true;
}

inline std::string lattice_suffix(LatticeKind k) {
    switch (k) {
        case LatticeKind::simply_connected: return "sc";
        case LatticeKind::adjoint: return "ad";
        case LatticeKind::general_linear: return "gl";
    }
    return "?";
}

}  // namespace detail

inline RootDatum build_root_datum(const RootDatumSpec& spec) {
    RootDatum rd;
    if (const auto* named = std::get_if<CartanTypeSpec>(&spec)) {
        const auto c = detail::named_cartan_matrix(named->family, named->rank);
        const auto n = static_cast<std::size_t>(named->rank);
        rd.label_ = std::string(1, named->family) + std::to_string(named->rank) + "-" + detail::lattice_suffix(named->lattice);
        switch (named->lattice) {
            case LatticeKind::simply_connected:
                rd.dim_ = n;
                for (std::size_t i = 0; i < n; ++i) {
                    rd.simple_roots_.push_back(c.row(i));
                    IntVector e(n, 0);
                    e[i] = 1;
                    rd.simple_coroots_.push_back(e);
                }
                break;
            case LatticeKind::adjoint:
                rd.dim_ = n;
                for (std::size_t i = 0; i < n; ++i) {
                    IntVector e(n, 0);
                    e[i] = 1;
                    rd.simple_roots_.push_back(e);
                    IntVector col(n);
                    for (std::size_t k = 0; k < n; ++k) col[k] = c(k, i);
                    rd.simple_coroots_.push_back(col);
                }
                break;
            case LatticeKind::general_linear:
                if (named->family != 'A') throw std::invalid_argument("general-linear lattice requires type A");
                rd.dim_ = n + 1;
                for (std::size_t i = 0; i < n; ++i) {
                    IntVector e(n + 1, 0);
                    e[i] = 1;
                    e[i + 1] = -1;
                    rd.simple_roots_.push_back(e);
                    rd.simple_coroots_.push_back(e);
                }
                break;
        }
    } else {
        const auto& ex = std::get<ExplicitDatumSpec>(spec);
        if (ex.simple_roots.size() != ex.simple_coroots.size())
            throw std::invalid_argument("number of simple roots and simple coroots differ");
        if (ex.simple_roots.size() > 8) throw std::invalid_argument("rank above 8 is not supported");
        rd.dim_ = ex.simple_roots.empty() ? ex.lattice_dim : ex.simple_roots.front().size();
        for (std::size_t i = 0; i < ex.simple_roots.size(); ++i)
            if (ex.simple_roots[i].size() != rd.dim_ || ex.simple_coroots[i].size() != rd.dim_)
                throw std::invalid_argument("inconsistent pairing dimensions in explicit root datum");
        if (!ex.simple_roots.empty() && ex.lattice_dim != 0 && ex.lattice_dim != rd.dim_)
            throw std::invalid_argument("lattice_dim disagrees with root vectors");
        rd.simple_roots_ = ex.simple_roots;
        rd.simple_coroots_ = ex.simple_coroots;
        rd.label_ = ex.simple_roots.empty() ? "T" + std::to_string(rd.dim_) : "explicit";
    }

    const std::size_t r = rd.simple_roots_.size();
    rd.cartan_ = IntMatrix(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) rd.cartan_(i, j) = dot(rd.simple_roots_[i], rd.simple_coroots_[j]);
    if (!detail::is_finite_type_cartan(rd.cartan_))
        throw std::invalid_argument("pairing matrix is not a Cartan matrix of finite type");

    // Orbit of the simple (root, coroot) pairs under the simple reflections, in simple-root coordinates.
    std::map<IntVector, IntVector> roots;  // root coords -> coroot coords
    std::queue<IntVector> frontier;
    for (std::size_t i = 0; i < r; ++i) {
        IntVector e(r, 0);
        e[i] = 1;
        roots.emplace(e, e);
        frontier.push(e);
    }
    const auto& c = rd.cartan_;
    while (!frontier.empty()) {
        const IntVector root = frontier.front();
        frontier.pop();
        const IntVector coroot = roots.at(root);
        for (std::size_t j = 0; j < r; ++j) {
            long long p = 0, pc = 0;
            for (std::size_t i = 0; i < r; ++i) {
                p += root[i] * c(i, j);     // <beta, alpha_j^vee>
                pc += coroot[i] * c(j, i);  // <alpha_j, beta^vee>
            }
            IntVector nr = root, nc = coroot;
            nr[j] -= p;
            nc[j] -= pc;
            if (roots.emplace(nr, nc).second) {
                if (roots.size() > 10000) throw size_guard_error("root system too large");
                frontier.push(nr);
            }
        }
    }
    struct Pos {
        IntVector coords, coroot;
        long long height;
    };
    std::vector<Pos> pos;
    for (const auto& [coords, coroot] : roots) {
        if (std::all_of(coords.begin(), coords.end(), [](long long x) { return x >= 0; })) {
            long long h = 0;
            for (auto x : coords) h += x;
            pos.push_back({coords, coroot, h});
        }
    }
    std::sort(pos.begin(), pos.end(), [](const Pos& a, const Pos& b) {
        return a.height != b.height ? a.height < b.height : a.coords < b.coords;
    });
    for (const auto& p : pos) {
        IntVector root(rd.dim_, 0), coroot(rd.dim_, 0);
        for (std::size_t i = 0; i < r; ++i) {
            root = root + scaled(rd.simple_roots_[i], p.coords[i]);
            coroot = coroot + scaled(rd.simple_coroots_[i], p.coroot[i]);
        }
        rd.positive_root_coords_.push_back(p.coords);
        rd.positive_roots_.push_back(root);
        rd.positive_coroots_.push_back(coroot);
    }
    return rd;
}

/// Parses labels such as "A2-sc", "B3-ad", "A1-gl"; a bare "T3" is a 3-dimensional torus.
inline RootDatum parse_root_datum_label(const std::string& label) {
    if (label.size() >= 2 && label[0] == 'T') {
        ExplicitDatumSpec torus;
        torus.lattice_dim = static_cast<std::size_t>(std::stoul(label.substr(1)));
        return build_root_datum(torus);
    }
    const auto dash = label.find('-');
    if (label.size() < 2 || dash == std::string::npos) throw std::invalid_argument("bad root datum label '" + label + "'");
    CartanTypeSpec spec;
    spec.family = label[0];
    spec.rank = std::stoi(label.substr(1, dash - 1));
    const auto lat = label.substr(dash + 1);
    if (lat == "sc") spec.lattice = LatticeKind::simply_connected;
    else if (lat == "ad") spec.lattice = LatticeKind::adjoint;
    else if (lat == "gl") spec.lattice = LatticeKind::general_linear;
    else throw std::invalid_argument("unknown lattice '" + lat + "' (expected sc, ad or gl)");
    return build_root_datum(spec);
}

// --- Weyl group ---------------------------------------------------------------

struct WeylElement {
    IntMatrix action;    // on X*
    IntMatrix coaction;  // on X_*, the contragredient
    std::vector<std::size_t> word;
    std::size_t length = 0;
};

inline IntVector weyl_action(const WeylElement& w, const IntVector& weight) {
    if (weight.size() != w.action.cols()) throw std::invalid_argument("Weyl action: dimension mismatch");
    return w.action.apply(weight);
}

inline IntVector weyl_coaction(const WeylElement& w, const IntVector& coweight) {
    if (coweight.size() != w.coaction.cols()) throw std::invalid_argument("Weyl coaction: dimension mismatch");
    return w.coaction.apply(coweight);
}

/// The finite Weyl group with multiplication tables. Element 0 is the identity.
class WeylGroup {
   public:
    static constexpr std::size_t default_guard = 100000;

    explicit WeylGroup(const RootDatum& rd, std::size_t guard = default_guard) {
        const std::size_t d = rd.lattice_dim(), r = rd.rank();
        for (std::size_t i = 0; i < r; ++i) {
            IntMatrix s = IntMatrix::identity(d);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) s(a, b) -= rd.simple_roots()[i][a] * rd.simple_coroots()[i][b];
            generators_.push_back(s);
        }
        elements_.push_back({IntMatrix::identity(d), IntMatrix::identity(d), {}, 0});
        index_.emplace(elements_[0].action, 0);
        for (std::size_t head = 0; head < elements_.size(); ++head) {
            for (std::size_t i = 0; i < r; ++i) {
                IntMatrix a = elements_[head].action * generators_[i];
                if (index_.count(a)) continue;
                if (elements_.size() >= guard)
                    throw size_guard_error("Weyl group exceeds the size guard of " + std::to_string(guard));
                WeylElement w;
                w.action = a;
                w.coaction = elements_[head].coaction * generators_[i].transpose();
                w.word = elements_[head].word;
                w.word.push_back(i);
                w.length = elements_[head].length + 1;
                index_.emplace(w.action, elements_.size());
                elements_.push_back(std::move(w));
            }
        }
        left_.assign(r, std::vector<std::size_t>(elements_.size()));
        right_.assign(r, std::vector<std::size_t>(elements_.size()));
        inverse_.resize(elements_.size());
        for (std::size_t w = 0; w < elements_.size(); ++w) {
            for (std::size_t i = 0; i < r; ++i) {
                left_[i][w] = index_.at(generators_[i] * elements_[w].action);
                right_[i][w] = index_.at(elements_[w].action * generators_[i]);
            }
            std::size_t inv = 0;
            for (auto it = elements_[w].word.rbegin(); it != elements_[w].word.rend(); ++it) inv = right_[*it][inv];
            inverse_[w] = inv;
        }
    }

    std::size_t size() const { return elements_.size(); }
    const std::vector<WeylElement>& elements() const { return elements_; }
    const WeylElement& operator[](std::size_t i) const { return elements_[i]; }
    std::size_t index_of(const IntMatrix& action) const { return index_.at(action); }
    std::size_t left_multiply(std::size_t i, std::size_t w) const { return left_[i][w]; }
    std::size_t right_multiply(std::size_t w, std::size_t i) const { return right_[i][w]; }
    std::size_t inverse(std::size_t w) const { return inverse_[w]; }
    std::size_t multiply(std::size_t a, std::size_t b) const {
        std::size_t out = a;
        for (auto i : elements_[b].word) out = right_[i][out];
        return out;
    }
    std::size_t longest() const {
        return static_cast<std::size_t>(std::max_element(elements_.begin(), elements_.end(),
                                                         [](const WeylElement& a, const WeylElement& b) {
                                                             return a.length < b.length;
                                                         }) -
                                        elements_.begin());
    }

   private:
    std::vector<IntMatrix> generators_;
    std::vector<WeylElement> elements_;
    std::map<IntMatrix, std::size_t> index_;
    std::vector<std::vector<std::size_t>> left_, right_;
    std::vector<std::size_t> inverse_;
};

inline std::vector<WeylElement> weyl_elements(const RootDatum& rd, std::size_t guard = WeylGroup::default_guard) {
    return WeylGroup(rd, guard).elements();
}

/// Number of positive roots sent to negative roots.
inline std::size_t inversion_count(const RootDatum& rd, const WeylElement& w) {
    std::size_t n = 0;
    for (const auto& a : rd.positive_roots())
        if (rd.is_positive_root(-weyl_action(w, a))) ++n;
    return n;
}

/// sum_{w in W_J} q^{l(w)}.
inline IntegerPolynomial poincare_polynomial(const RootDatum& rd, const RootSubset& subset,
                                             std::size_t guard = WeylGroup::default_guard) {
    for (auto j : subset)
        if (j >= rd.rank()) throw std::invalid_argument("simple root index out of range");
    const std::size_t d = rd.lattice_dim();
    std::vector<IntMatrix> gens;
    for (auto i : subset) {
        IntMatrix s = IntMatrix::identity(d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) s(a, b) -= rd.simple_roots()[i][a] * rd.simple_coroots()[i][b];
        gens.push_back(s);
    }
    std::map<IntMatrix, std::size_t> seen{{IntMatrix::identity(d), 0}};
    std::vector<std::pair<IntMatrix, std::size_t>> order{{IntMatrix::identity(d), 0}};
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (const auto& g : gens) {
            IntMatrix a = order[head].first * g;
            if (seen.count(a)) continue;
            if (order.size() >= guard) throw size_guard_error("parabolic subgroup exceeds the size guard");
            seen.emplace(a, order[head].second + 1);
            order.emplace_back(a, order[head].second + 1);
        }
    }
    std::vector<Integer> coeffs;
    for (const auto& [m, len] : order) {
        if (coeffs.size() <= len) coeffs.resize(len + 1);
        coeffs[len] += 1;
    }
    return IntegerPolynomial(std::move(coeffs));
}

/// {i : <weight, alpha_i^vee> = 0} for a dominant weight.
inline RootSubset weight_stabilizer(const RootDatum& rd, const IntVector& weight) {
    const auto c = rd.simple_pairings(weight);
    RootSubset out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < 0) throw std::invalid_argument("weight " + to_string(weight) + " is not dominant");
        if (c[i] == 0) out.push_back(i);
    }
    return out;
}

/// All dominant weights of height <= bound, sorted by height then lexicographically.
inline std::vector<IntVector> enumerate_dominant(const RootDatum& rd, long long height_bound) {
    if (!rd.is_semisimple())
        throw std::invalid_argument(
            "dominant-weight enumeration needs a semisimple root datum (central directions make the set "
            "infinite); project the parameter to the semisimple quotient first");
    if (height_bound < 0) return {};
    const std::size_t r = rd.rank();
    IntMatrix pm(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t a = 0; a < r; ++a) pm(i, a) = rd.simple_coroots()[i][a];
    const auto inv = inverse(pm);
    if (!inv) throw std::logic_error("simple coroots of a semisimple datum are dependent");

    std::vector<IntVector> out;
    IntVector c(r, 0);
    auto emit = [&] {
        IntVector weight(r);
        for (std::size_t a = 0; a < r; ++a) {
            Rational x = 0;
            for (std::size_t i = 0; i < r; ++i) x += (*inv)[a][i] * static_cast<long>(c[i]);
            if (x.get_den() != 1) return;
            weight[a] = to_ll(x.get_num());
        }
        out.push_back(weight);
    };
    auto rec = [&](auto&& self, std::size_t i, long long budget) -> void {
        if (i == r) {
            emit();
            return;
        }
        for (long long k = 0; k <= budget; ++k) {
            c[i] = k;
            self(self, i + 1, budget - k);
        }
        c[i] = 0;
    };
    rec(rec, 0, height_bound);
    std::sort(out.begin(), out.end(), [&](const IntVector& a, const IntVector& b) {
        const auto ha = rd.height(a), hb = rd.height(b);
        return ha != hb ? ha < hb : a < b;
    });
    return out;
}

/// Lambda_J truncated at the height bound: dominant weights whose stabilizer is exactly W_J.
inline std::vector<IntVector> enumerate_lambda(const RootDatum& rd, const RootSubset& subset, long long height_bound) {
    std::vector<IntVector> out;
    for (auto& w : enumerate_dominant(rd, height_bound))
        if (weight_stabilizer(rd, w) == subset) out.push_back(std::move(w));
    return out;
}

/// All subsets of the simple roots, in increasing bitmask order.
inline std::vector<RootSubset> all_root_subsets(const RootDatum& rd) {
    std::vector<RootSubset> out;
    const std::size_t r = rd.rank();
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        RootSubset s;
        for (std::size_t i = 0; i < r; ++i)
            if (mask & (1u << i)) s.push_back(i);
        out.push_back(s);
    }
    return out;
}

}  // namespace kltwist
