#pragma once

// JSON forms of the library's values. Exact data is written first, as strings
// "p/q"; decimals, where present, are advisory and use 12 significant digits.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kltwist/cyclotomic.hpp"
#include "kltwist/formal_degree.hpp"
#include "kltwist/hecke.hpp"
#include "kltwist/kl_parameters.hpp"
#include "kltwist/rational_function.hpp"
#include "kltwist/root_datum.hpp"
#include "kltwist/torus_point.hpp"

namespace kltwist {

using Json = nlohmann::ordered_json;

constexpr int schema_version = 1;

inline std::string decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const CyclotomicNumber& c) {
    const auto red = c.reduced();
    Json coeffs = Json::array();
    for (const auto& x : red.coefficients()) coeffs.push_back(to_string(x));
    return Json{{"n", red.level()}, {"coeffs", coeffs}};
}

inline CyclotomicNumber cyclotomic_from_json(const Json& j) {
    std::vector<Rational> coeffs;
    for (const auto& x : j.at("coeffs")) coeffs.push_back(parse_rational(x.get<std::string>()));
    return CyclotomicNumber(j.at("n").get<long>(), coeffs);
}

inline Json to_json(const CycloPolynomial& p) {
    Json a = Json::array();
    for (const auto& c : p.coefficients()) a.push_back(to_json(c));
    return a;
}

inline Json to_json(const RatFun& f) {
    return Json{{"variable", "v"}, {"numerator", to_json(f.numerator())}, {"denominator", to_json(f.denominator())}};
}

inline RatFun ratfun_from_json(const Json& j) {
    auto poly = [](const Json& a) {
        std::vector<CyclotomicNumber> c;
        for (const auto& x : a) c.push_back(cyclotomic_from_json(x));
        return CycloPolynomial(std::move(c));
    };
    return RatFun(poly(j.at("numerator")), poly(j.at("denominator")));
}

inline Json to_json(const CycloLaurent& f) {
    Json coeffs = Json::array();
    for (const auto& c : f.coefficients()) coeffs.push_back(to_json(c));
    return Json{{"low", f.min_exponent()}, {"coeffs", coeffs}};
}

inline Json to_json(const LaurentInt& f) {
    Json coeffs = Json::array();
    for (const auto& c : f.coefficients()) coeffs.push_back(c.get_str());
    return Json{{"low", f.min_exponent()}, {"coeffs", coeffs}};
}

inline Json to_json(const IntegerPolynomial& p) {
    Json a = Json::array();
    for (const auto& c : p.coefficients()) a.push_back(c.get_str());
    return a;
}

inline Json to_json(const GaloisAutomorphism& g) { return Json{{"n", g.level()}, {"k", g.exponent()}}; }

inline Json to_json(const TorusPoint& s) {
    return Json{{"level", s.level()}, {"torsion_num", s.torsion()}, {"v_exponents", s.v_exponents()}};
}

inline TorusPoint torus_point_from_json(const Json& j) {
    return TorusPoint(j.at("level").get<long long>(), j.at("torsion_num").get<IntVector>(), j.at("v_exponents").get<IntVector>());
}

inline Json to_json(const RootDatum& rd) {
    return Json{{"label", rd.label()},
                {"rank", rd.rank()},
                {"lattice_dim", rd.lattice_dim()},
                {"simple_roots", rd.simple_roots()},
                {"simple_coroots", rd.simple_coroots()},
                {"dim_flag", rd.dim_flag()},
                {"is_semisimple", rd.is_semisimple()}};
}

/// {"type": "A", "rank": 2, "lattice": "sc"} or {"simple_roots": [...], "simple_coroots": [...]}.
inline RootDatum root_datum_from_json(const Json& j) {
    if (j.contains("simple_roots")) {
        ExplicitDatumSpec spec;
        spec.simple_roots = j.at("simple_roots").get<std::vector<IntVector>>();
        spec.simple_coroots = j.at("simple_coroots").get<std::vector<IntVector>>();
        if (j.contains("lattice_dim")) spec.lattice_dim = j.at("lattice_dim").get<std::size_t>();
        return build_root_datum(spec);
    }
    const auto type = j.at("type").get<std::string>();
    if (type.size() != 1) throw std::invalid_argument("root datum type must be a single letter");
    CartanTypeSpec spec;
    spec.family = type[0];
    spec.rank = j.at("rank").get<int>();
    const auto lat = j.value("lattice", std::string("sc"));
    if (lat == "sc") spec.lattice = LatticeKind::simply_connected;
    else if (lat == "ad") spec.lattice = LatticeKind::adjoint;
    else if (lat == "gl") spec.lattice = LatticeKind::general_linear;
    else throw std::invalid_argument("unknown lattice '" + lat + "'");
    return build_root_datum(spec);
}

inline Json to_json(const KLParameter& k) {
    return Json{{"n", k.n},
                {"partition", k.partition()},
                {"torsion_level", k.s.level()},
                {"torsion_num", k.s.torsion()},
                {"rho_dim", k.rho_dim}};
}

inline KLParameter kl_parameter_from_json(const Json& j) {
    return build_parameter(j.at("n").get<int>(), j.at("partition").get<Partition>(), j.at("torsion_level").get<long long>(),
                           j.at("torsion_num").get<IntVector>(), j.value("rho_dim", 1));
}

inline Json to_json(const HeckeElement& h) {
    Json a = Json::array();
    for (const auto& [k, c] : h.terms()) {
        std::vector<std::size_t> word;
        if (h.algebra()) word = h.algebra()->weyl()[k.second].word;
        a.push_back(Json{{"lambda", k.first}, {"w_word", word}, {"coeff", to_json(c)}});
    }
    return a;
}

inline Json to_json(const RelationReport& r) {
    Json checks = Json::array();
    std::map<std::string, std::pair<std::size_t, std::size_t>> summary;  // relation -> (passed, total)
    for (const auto& c : r.checks) {
        auto& s = summary[c.relation];
        s.second++;
        if (c.passed) s.first++;
        if (!c.passed) checks.push_back(Json{{"relation", c.relation}, {"instance", c.instance}, {"witness", c.witness}});
    }
    Json sum = Json::object();
    for (const auto& [rel, s] : summary) sum[rel] = Json{{"passed", s.first}, {"total", s.second}};
    return Json{{"datum", r.datum}, {"length_bound", r.length_bound}, {"all_passed", r.all_passed()}, {"summary", sum}, {"failures", checks}};
}

inline Json to_json(const CentralCharacter& c) {
    Json orbit = Json::array();
    for (const auto& p : c.orbit()) orbit.push_back(to_json(p));
    return Json{{"representative", to_json(c.representative())}, {"orbit", orbit}};
}

inline Json to_json(const GaloisVerdict& g) {
    return Json{{"gamma", to_json(g.gamma)},
                {"twisted_point", to_json(g.twisted)},
                {"termwise_exact_equal", g.termwise_exact_equal},
                {"compared_terms", g.compared_terms},
                {"numeric_degree_diff", decimal(g.numeric_degree_diff)}};
}

inline Json to_json(const FormalDegreeReport& r) {
    Json j{{"datum", r.datum},
           {"point", to_json(r.point)},
           {"height_bound", r.height_bound},
           {"height_function", "sum of pairings with simple coroots"},
           {"q0", to_string(r.q0)},
           {"partial_inverse_degree", to_json(r.partial_inverse_degree)}};
    j["partial_inverse_degree_at_q0"] = r.exact_inverse_degree ? Json(to_string(*r.exact_inverse_degree)) : Json(nullptr);
    if (r.exact_inverse_degree) {
        Rational d = Rational(r.rho_dim) / *r.exact_inverse_degree;
        d.canonicalize();
        j["partial_degree_at_q0"] = to_string(d);
    } else {
        j["partial_degree_at_q0"] = nullptr;
    }
    j["rho_dim"] = r.rho_dim;
    j["inverse_degree_decimal"] = decimal(r.inverse_degree);
    j["degree_decimal"] = decimal(r.degree);
    j["tail"] = Json{{"last_increment", decimal(r.last_increment)}, {"ratio_per_height", decimal(r.tail_ratio)}, {"converged", r.converged}};
    Json verdicts = Json::array();
    for (const auto& g : r.galois_verdicts) verdicts.push_back(to_json(g));
    j["galois_verdicts"] = verdicts;
    return j;
}

}  // namespace kltwist
