#pragma once

// Kazhdan-Lusztig parameters (s, N, rho) for GL_n: N is a Jordan nilpotent
// given by a partition, s = s_1 * phi(v) with torsion part s_1 and q-exponents
// from the Jacobson-Morozov cocharacter of N.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/hecke.hpp"
#include "kltwist/matrix.hpp"
#include "kltwist/root_datum.hpp"
#include "kltwist/torus_point.hpp"

namespace kltwist {

using Partition = std::vector<int>;

inline void validate_partition(const Partition& p) {
    if (p.empty()) throw std::invalid_argument("empty partition");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && p[i] > p[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
    }
}

inline int partition_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

/// All partitions of n, in reverse lexicographic order ((n) first).
inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    Partition cur;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(remaining, max_part); k >= 1; --k) {
            cur.push_back(k);
            self(self, remaining - k, k);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

inline std::string partition_to_string(const Partition& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

class NilpotentMatrix {
   public:
    NilpotentMatrix() = default;
    explicit NilpotentMatrix(Partition p) : partition_(std::move(p)) {
        validate_partition(partition_);
        n_ = static_cast<std::size_t>(partition_size(partition_));
        matrix_ = IntMatrix(n_, n_);
        std::size_t start = 0;
        for (int part : partition_) {
            for (int k = 0; k + 1 < part; ++k) matrix_(start + static_cast<std::size_t>(k), start + static_cast<std::size_t>(k) + 1) = 1;
            start += static_cast<std::size_t>(part);
        }
    }
    std::size_t size() const { return n_; }
    const Partition& partition() const { return partition_; }
    const IntMatrix& matrix() const { return matrix_; }

    /// The Jordan type read off from the ranks of N, N^2, ...
    static Partition partition_from_matrix(const IntMatrix& m) {
        const std::size_t n = m.rows();
        std::vector<long long> ranks{static_cast<long long>(n)};
        IntMatrix power = IntMatrix::identity(n);
        while (ranks.back() > 0) {
            power = power * m;
            const auto r = static_cast<long long>(rank(power));
            if (r == ranks.back()) throw std::invalid_argument("matrix is not nilpotent");
            ranks.push_back(r);
        }
        // #{parts >= k} = rank(N^{k-1}) - rank(N^k)
        std::vector<long long> at_least;
        for (std::size_t k = 1; k < ranks.size(); ++k) at_least.push_back(ranks[k - 1] - ranks[k]);
        Partition p;
        const long long parts = at_least.empty() ? 0 : at_least[0];
        for (long long j = 0; j < parts; ++j) {
            int len = 0;
            for (auto c : at_least)
                if (c > j) ++len;
            p.push_back(len);
        }
        return p;
    }

   private:
    std::size_t n_ = 0;
    Partition partition_;
    IntMatrix matrix_;
};

/// Concatenated weight strings (l-1)/2, (l-3)/2, ..., (1-l)/2 over the parts.
inline std::vector<Rational> jm_cocharacter(const Partition& p) {
    validate_partition(p);
    std::vector<Rational> out;
    for (int part : p)
        for (int j = 0; j < part; ++j) out.push_back(make_rational(part - 1 - 2 * j, 2));
    return out;
}

/// Twice the cocharacter, i.e. the v-exponents.
inline IntVector jm_v_exponents(const Partition& p) {
    IntVector out;
    for (const auto& x : jm_cocharacter(p)) out.push_back(to_ll(Rational(x * 2).get_num()));
    return out;
}

inline RootDatum gl_datum(int n) {
    if (n < 1) throw std::invalid_argument("GL_n needs n >= 1");
    if (n == 1) {
        ExplicitDatumSpec torus;
        torus.lattice_dim = 1;
        return build_root_datum(torus);
    }
    return build_root_datum(CartanTypeSpec{'A', n - 1, LatticeKind::general_linear});
}

inline RootDatum pgl_datum(int n) {
    if (n < 1) throw std::invalid_argument("PGL_n needs n >= 1");
    if (n == 1) return build_root_datum(ExplicitDatumSpec{});
    return build_root_datum(CartanTypeSpec{'A', n - 1, LatticeKind::adjoint});
}

struct ValidityCertificate {
    bool valid = false;
    std::optional<std::pair<std::size_t, std::size_t>> violation;  // 1-based (i, j) with N_ij = 1
    std::string reason;
};

struct KLParameter {
    int n = 0;
    TorusPoint s;
    NilpotentMatrix N;
    int rho_dim = 1;
    ValidityCertificate validity;

    const Partition& partition() const { return N.partition(); }
    long long torsion_level() const { return s.level(); }
    bool valid() const { return validity.valid; }

    friend bool operator==(const KLParameter& a, const KLParameter& b) {
        return a.n == b.n && a.s.level() == b.s.level() && a.s.torsion() == b.s.torsion() &&
               a.s.v_exponents() == b.s.v_exponents() && a.partition() == b.partition() && a.rho_dim == b.rho_dim;
    }
    friend bool operator!=(const KLParameter& a, const KLParameter& b) { return !(a == b); }

    std::string to_string() const {
        std::string t = "[";
        for (std::size_t i = 0; i < s.dim(); ++i)
            t += (i ? "," : "") + kltwist::to_string(make_rational(s.torsion()[i], s.level()));
        return "GL" + std::to_string(n) + " p=" + partition_to_string(partition()) + " torsion=" + t + "]";
    }
};

inline ValidityCertificate check_validity(const TorusPoint& s, const NilpotentMatrix& N) {
    ValidityCertificate cert;
    const auto& m = N.matrix();
    for (std::size_t i = 0; i < N.size(); ++i)
        for (std::size_t j = 0; j < N.size(); ++j) {
            if (m(i, j) == 0) continue;
            if (s.torsion()[i] != s.torsion()[j]) {
                cert.violation = {{i + 1, j + 1}};
                cert.reason = "torsion differs along a Jordan string";
                return cert;
            }
            if (s.v_exponents()[i] - s.v_exponents()[j] != 2) {
                cert.violation = {{i + 1, j + 1}};
                cert.reason = "s_i / s_j is not q";
                return cert;
            }
        }
    cert.valid = true;
    return cert;
}

/// Torsion given as numerators over a common level.
inline KLParameter build_parameter(int n, const Partition& p, long long level, const IntVector& torsion_num,
                                   int rho_dim = 1) {
    if (rho_dim < 1) throw std::invalid_argument("rho_dim must be positive");
    validate_partition(p);
    if (partition_size(p) != n) throw std::invalid_argument("partition " + partition_to_string(p) + " is not a partition of " + std::to_string(n));
    if (torsion_num.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("torsion vector must have length n");
    KLParameter k;
    k.n = n;
    k.N = NilpotentMatrix(p);
    k.s = TorusPoint(level, torsion_num, jm_v_exponents(p));
    k.rho_dim = rho_dim;
    k.validity = check_validity(k.s, k.N);
    return k;
}

/// Torsion given as fractions in Q/Z.
inline KLParameter build_parameter(int n, const Partition& p, const std::vector<Rational>& torsion, int rho_dim = 1) {
    if (torsion.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("torsion vector must have length n");
    long long level = 1;
    for (const auto& t : torsion) level = lcm_ll(level, to_ll(Rational(t).get_den()));
    IntVector num;
    for (const auto& t : torsion) num.push_back(to_ll(Rational(frac(t) * Rational(static_cast<long>(level))).get_num()));
    return build_parameter(n, p, level, num, rho_dim);
}

class InvalidParameter : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline void require_valid(const KLParameter& k) {
    if (!k.valid()) throw InvalidParameter("parameter " + k.to_string() + " violates Ad(s)N = qN: " + k.validity.reason);
}

/// dim {X in gl_n : Ad(s)X = X, [N, X] = 0}.
inline std::size_t centralizer_dimension(const KLParameter& k) {
    require_valid(k);
    const std::size_t n = static_cast<std::size_t>(k.n);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> var;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (k.s.torsion()[i] == k.s.torsion()[j] && k.s.v_exponents()[i] == k.s.v_exponents()[j])
                var.emplace(std::make_pair(i, j), var.size());
    const auto& N = k.N.matrix();
    RationalMatrix eqs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::vector<Rational> row(var.size());
            bool nonzero = false;
            for (std::size_t c = 0; c < n; ++c) {
                if (N(a, c) != 0) {
                    auto it = var.find({c, b});
                    if (it != var.end()) {
                        row[it->second] += static_cast<long>(N(a, c));
                        nonzero = true;
                    }
                }
                if (N(c, b) != 0) {
                    auto it = var.find({a, c});
                    if (it != var.end()) {
                        row[it->second] -= static_cast<long>(N(c, b));
                        nonzero = true;
                    }
                }
            }
            if (nonzero) eqs.push_back(std::move(row));
        }
    return var.size() - row_reduce(eqs);
}

inline bool is_essentially_discrete(const KLParameter& k) { return centralizer_dimension(k) == 1; }

/// Single Jordan block with constant torsion.
inline bool combinatorial_discreteness(const KLParameter& k) {
    require_valid(k);
    if (k.partition().size() != 1) return false;
    const auto& t = k.s.torsion();
    return std::all_of(t.begin(), t.end(), [&](long long x) { return x == t.front(); });
}

inline CentralCharacter parameter_central_character(const KLParameter& k) {
    return central_character_orbit(gl_datum(k.n), k.s);
}

struct GaloisTwistResult {
    KLParameter input;
    GaloisAutomorphism gamma;
    KLParameter output;
    bool validity_preserved = false;
    bool discreteness_preserved = false;
    bool central_character_compatible = false;

    bool all_preserved() const { return validity_preserved && discreteness_preserved && central_character_compatible; }
};

/// Torsion multiplied by k modulo the parameter's level; exponents, partition and rho_dim kept.
inline KLParameter twist_parameter(const GaloisAutomorphism& gamma, const KLParameter& k) {
    KLParameter out = k;
    out.s = k.s.galois(gamma);
    out.validity = check_validity(out.s, out.N);
    return out;
}

inline GaloisTwistResult galois_twist(const GaloisAutomorphism& gamma, const KLParameter& k) {
    GaloisTwistResult r{k, gamma, twist_parameter(gamma, k)};
    r.validity_preserved = r.output.valid() == k.valid();
    if (k.valid() && r.output.valid())
        r.discreteness_preserved = is_essentially_discrete(k) == is_essentially_discrete(r.output);
    else
        r.discreteness_preserved = !k.valid() && !r.output.valid();
    const WeylGroup w(gl_datum(k.n));
    r.central_character_compatible = central_character_orbit(w, r.output.s) == central_character_orbit(w, k.s).galois(gamma);
    return r;
}

/// Jordan strings reordered by (length desc, torsion asc).
inline KLParameter normal_form(const KLParameter& k) {
    struct String {
        int length;
        IntVector torsion;
    };
    std::vector<String> strings;
    std::size_t start = 0;
    for (int part : k.partition()) {
        strings.push_back({part, IntVector(k.s.torsion().begin() + static_cast<std::ptrdiff_t>(start),
                                           k.s.torsion().begin() + static_cast<std::ptrdiff_t>(start + static_cast<std::size_t>(part)))});
        start += static_cast<std::size_t>(part);
    }
    std::stable_sort(strings.begin(), strings.end(), [](const String& a, const String& b) {
        return a.length != b.length ? a.length > b.length : a.torsion < b.torsion;
    });
    IntVector t;
    for (const auto& s : strings) t.insert(t.end(), s.torsion.begin(), s.torsion.end());
    return build_parameter(k.n, k.partition(), k.s.level(), t, k.rho_dim);
}

constexpr int max_enumeration_n = 6;
constexpr long long max_enumeration_level = 12;

/// All valid parameters of GL_n with torsion of order dividing the level, one per conjugacy class.
inline std::vector<KLParameter> enumerate_parameters(int n, long long level) {
    if (n < 1 || n > max_enumeration_n) throw size_guard_error("enumeration needs 1 <= n <= " + std::to_string(max_enumeration_n));
    if (level < 1 || level > max_enumeration_level)
        throw size_guard_error("enumeration needs 1 <= torsion level <= " + std::to_string(max_enumeration_level));
    std::vector<KLParameter> out;
    for (const auto& p : partitions_of(n)) {
        // One nondecreasing torsion choice per run of equal parts.
        std::vector<long long> per_string(p.size(), 0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == p.size()) {
                IntVector t;
                for (std::size_t a = 0; a < p.size(); ++a) t.insert(t.end(), static_cast<std::size_t>(p[a]), per_string[a]);
                out.push_back(build_parameter(n, p, level, t));
                return;
            }
            const long long lo = (i > 0 && p[i] == p[i - 1]) ? per_string[i - 1] : 0;
            for (long long x = lo; x < level; ++x) {
                per_string[i] = x;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }
    return out;
}

/// Image in PGL_n: coordinates <alpha_i, s> on the root lattice.
inline std::pair<RootDatum, TorusPoint> adjoint_projection(const KLParameter& k) {
    const std::size_t n = static_cast<std::size_t>(k.n);
    IntVector t, e;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        t.push_back(k.s.torsion()[i] - k.s.torsion()[i + 1]);
        e.push_back(k.s.v_exponents()[i] - k.s.v_exponents()[i + 1]);
    }
    return {pgl_datum(k.n), TorusPoint(k.s.level(), t, e)};
}

}  // namespace kltwist
