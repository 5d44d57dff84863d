// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kltwist/kltwist.hpp"

using namespace kltwist;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
   public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Projected PGL_n points of every enumerated GL_n parameter, with one engine per n.
struct Corpus {
    std::map<int, std::unique_ptr<FormalDegreeEngine>> engines;
    struct Item {
        KLParameter param;
        TorusPoint point;
    };
    std::vector<Item> items;

    Corpus(const std::vector<int>& ns, const std::vector<long long>& levels) {
        for (int n : ns) {
            engines.emplace(n, std::make_unique<FormalDegreeEngine>(pgl_datum(n)));
            for (auto level : levels)
                for (const auto& p : enumerate_parameters(n, level)) items.push_back({p, adjoint_projection(p).second});
        }
    }
    const FormalDegreeEngine& engine(int n) const { return *engines.at(n); }
};

// d^{-1} = 2(q+1)/(q-1) for the Steinberg point of the simply connected A1 datum (geometric series).
double sl2_steinberg_degree(double q) { return (q - 1) / (2 * (q + 1)); }

// Truncated closed form: (1+q)/q + (1+q)^2 sum_{h=1}^{B} q^{-h-1}.
Rational sl2_steinberg_partial(const Rational& q, int bound) {
    Rational total = (1 + q) / q, p = 1 / q;
    for (int h = 1; h <= bound; ++h) {
        p /= q;
        total += (1 + q) * (1 + q) * p;
    }
    total.canonicalize();
    return total;
}

Outcome steinberg_degree() {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    Outcome o{true, ""};
    for (int q : {2, 3}) {
        const Stopwatch clock;
        const auto r = engine.degree_numeric(st, q, 40);
        const double secs = clock.seconds();
        const double err = std::abs(r.degree - sl2_steinberg_degree(q));
        o.pass = o.pass && err < 1e-6 && secs < 1.0;
        o.detail += "q=" + std::to_string(q) + " d=" + fmt("%.12g", r.degree) + " err=" + fmt("%.2e", err) + " t=" + fmt("%.3f", secs) + "s ";
    }
    return o;
}

Outcome termwise_galois() {
    const Stopwatch clock;
    const Corpus corpus({1, 2, 3}, {3, 4, 5, 8});
    std::size_t checks = 0, failures = 0;
    std::string first;
    for (const auto& it : corpus.items) {
        const auto& engine = corpus.engine(it.param.n);
        for (const auto& g : GaloisAutomorphism::all(static_cast<long>(it.param.torsion_level()))) {
            const auto a = engine.height_sums(it.point, 30);
            const auto b = engine.height_sums(it.point.galois(g), 30);
            for (std::size_t j = 0; j < a->subsets.size(); ++j) {
                ++checks;
                const auto lhs = RatFun::from_laurent(b->subset_sum(j, 30));
                const auto rhs = RatFun::from_laurent(a->subset_sum(j, 30)).galois(g);
                if (lhs != rhs) {
                    if (failures++ == 0) first = it.param.to_string() + " " + g.to_string();
                }
            }
        }
    }
    const double secs = clock.seconds();
    Outcome o{failures == 0 && secs < 60.0, std::to_string(corpus.items.size()) + " parameters, " + std::to_string(checks) +
                                               " exact comparisons, " + std::to_string(failures) + " failures, t=" + fmt("%.2f", secs) + "s"};
    if (!first.empty()) o.detail += ", first failure " + first;
    return o;
}

Outcome degree_equality() {
    const auto rd = parse_root_datum_label("A2-sc");
    const FormalDegreeEngine engine(rd);
    double worst = 0.0;
    std::size_t pairs = 0;
    // Steinberg twisted by the central characters of order 3
    for (const IntVector& t : {IntVector{1, 2}, IntVector{2, 1}}) {
        const TorusPoint s(3, t, rd.two_rho_check());
        const double d = engine.degree_numeric(s, 2, 40).degree;
        for (const auto& g : GaloisAutomorphism::all(3)) {
            const double dg = engine.degree_numeric(s.galois(g), 2, 40).degree;
            worst = std::max(worst, std::abs(d - dg));
            ++pairs;
        }
    }
    return {worst < 1e-8, std::to_string(pairs) + " (point, gamma) pairs, max |d - d_gamma| = " + fmt("%.3e", worst)};
}

Outcome discreteness_stability() {
    const Stopwatch clock;
    std::size_t checks = 0, disagreements = 0;
    for (int n : {2, 3})
        for (long long level = 1; level <= 6; ++level)
            for (const auto& p : enumerate_parameters(n, level)) {
                const bool before = is_essentially_discrete(p);
                for (const auto& g : GaloisAutomorphism::all(static_cast<long>(level))) {
                    ++checks;
                    if (before != is_essentially_discrete(twist_parameter(g, p))) ++disagreements;
                }
            }
    const double secs = clock.seconds();
    return {disagreements == 0 && secs < 30.0,
            std::to_string(checks) + " twists, " + std::to_string(disagreements) + " disagreements, t=" + fmt("%.2f", secs) + "s"};
}

Outcome central_character_compatibility() {
    std::size_t checks = 0, failures = 0;
    for (int n : {2, 3}) {
        const WeylGroup w(gl_datum(n));
        for (long long level = 1; level <= 6; ++level)
            for (const auto& p : enumerate_parameters(n, level)) {
                const auto orbit = central_character_orbit(w, p.s);
                for (const auto& g : GaloisAutomorphism::all(static_cast<long>(level))) {
                    ++checks;
                    if (central_character_orbit(w, p.s.galois(g)) != orbit.galois(g)) ++failures;
                }
            }
    }
    return {failures == 0, std::to_string(checks) + " orbit comparisons, " + std::to_string(failures) + " failures"};
}

Outcome hecke_relations() {
    const Stopwatch clock;
    Outcome o{true, ""};
    for (const char* label : {"A1-sc", "A1-ad", "A2-sc", "A2-ad"}) {
        const auto rep = verify_relations(parse_root_datum_label(label), 3);
        o.pass = o.pass && rep.all_passed() && rep.count("quadratic") > 0 && rep.count("cross") > 0 && rep.count("central") > 0;
        if (rep.datum.front() == 'A' && rep.datum[1] == '2') o.pass = o.pass && rep.count("braid") > 0;
        o.detail += std::string(label) + " " + std::to_string(rep.checks.size() - rep.failures()) + "/" + std::to_string(rep.checks.size()) + " ";
    }
    const double secs = clock.seconds();
    o.pass = o.pass && secs < 10.0;
    o.detail += "t=" + fmt("%.2f", secs) + "s";
    return o;
}

Outcome oracle_equivalence() {
    constexpr int m_bound = 8, degree_bound = 10;
    const Rational v0 = 2;
    std::size_t m_checks = 0, d_checks = 0, failures = 0;
    double worst = 0.0;
    std::string first;
    auto check = [&](const FormalDegreeEngine& engine, const TorusPoint& s, const std::string& name) {
        const auto& rd = engine.datum();
        for (const auto& lam : enumerate_dominant(rd, m_bound)) {
            ++m_checks;
            const auto exact = evaluate_laurent(engine.m_function_laurent(lam, s), v0).embed(1);
            const auto o = float_oracle_m(rd, engine.weyl(), lam, s, 4.0);
            // an exact zero is measured against the size of the cancelling terms
            const double gap = std::abs(exact) == 0.0 ? std::abs(o.value) / std::max(o.magnitude, 1e-300)
                                                      : std::abs(exact - o.value) / std::abs(exact);
            worst = std::max(worst, gap);
            if (!(gap <= 1e-9) && failures++ == 0) first = name;
        }
        ++d_checks;
        const double e = engine.degree_numeric(s, 4, degree_bound).inverse_degree;
        const double o = float_oracle_degree_inverse(rd, s, 4.0, degree_bound);
        const double gap = std::abs(e - o) / std::abs(e);
        worst = std::max(worst, gap);
        if (!(gap <= 1e-9) && failures++ == 0) first = name + " degree";
    };
    {
        const auto rd = parse_root_datum_label("A1-sc");
        const FormalDegreeEngine engine(rd);
        check(engine, TorusPoint::steinberg(rd), "A1-sc steinberg");
    }
    {
        const auto rd = parse_root_datum_label("A2-sc");
        const FormalDegreeEngine engine(rd);
        for (const IntVector& t : {IntVector{0, 0}, IntVector{1, 2}, IntVector{2, 1}})
            check(engine, TorusPoint(3, t, rd.two_rho_check()), "A2-sc " + TorusPoint(3, t, rd.two_rho_check()).to_string());
    }
    const Corpus corpus({1, 2, 3}, {3, 4, 5, 8});
    for (const auto& it : corpus.items) check(corpus.engine(it.param.n), it.point, it.param.to_string());
    Outcome out{failures == 0, std::to_string(m_checks) + " M values, " + std::to_string(d_checks) + " degree values, max relative gap " +
                                   fmt("%.2e", worst) + ", " + std::to_string(failures) + " failures"};
    if (!first.empty()) out.detail += ", first at " + first;
    return out;
}

Outcome convergence() {
    const auto rd = parse_root_datum_label("A1-sc");
    const FormalDegreeEngine engine(rd);
    const auto st = TorusPoint::steinberg(rd);
    const auto r = engine.degree_numeric(st, 2, 40);
    double worst = 0.0;
    for (std::size_t h = 10; h < 40; ++h) worst = std::max(worst, r.height_increments[h + 1] / r.height_increments[h]);
    const auto partial = engine.degree_numeric(st, 2, 10).exact_inverse_degree;
    const bool exact_ok = partial && *partial == make_rational(12279, 2048) && *partial == sl2_steinberg_partial(2, 10);
    return {worst <= 0.5 + 1e-12 && exact_ok,
            "max increment ratio on heights 10-40 = " + fmt("%.12g", worst) + ", partial at bound 10 = " + (partial ? to_string(*partial) : "n/a")};
}

Outcome type_a_crosscheck() {
    std::size_t checks = 0, disagreements = 0;
    for (int n = 1; n <= 5; ++n)
        for (long long level = 1; level <= max_enumeration_level; ++level)
            for (const auto& p : enumerate_parameters(n, level)) {
                ++checks;
                if (is_essentially_discrete(p) != combinatorial_discreteness(p)) ++disagreements;
            }
    return {disagreements == 0, std::to_string(checks) + " parameters (levels 1-" + std::to_string(max_enumeration_level) + "), " +
                                    std::to_string(disagreements) + " disagreements"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Steinberg formal degree, simply connected A1, q=2 and q=3", steinberg_degree},
        {"termwise Galois identity, n<=3, levels {3,4,5,8}, bound 30", termwise_galois},
        {"formal-degree equality under Galois, central order-3 twists of Steinberg (A2-sc)", degree_equality},
        {"discreteness stability, GL2/GL3, levels <= 6", discreteness_stability},
        {"central-character compatibility, GL2/GL3, levels <= 6", central_character_compatibility},
        {"Hecke relation suite, A1 and A2, length bound 3", hecke_relations},
        {"exact engine vs floating-point oracle at q=4", oracle_equivalence},
        {"convergence diagnostics, simply connected A1 Steinberg at q=2", convergence},
        {"centralizer vs combinatorial discreteness, n<=5", type_a_crosscheck},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].first << " -- " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
