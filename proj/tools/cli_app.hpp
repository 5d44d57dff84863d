#pragma once

// Command-line front end. Exit codes: 0 every verdict positive, 1 some verdict
// falsified, 2 usage or guard error, 3 engine defect.

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kltwist/kltwist.hpp"

namespace kltwist::cli {

enum ExitCode { ok = 0, falsified = 1, usage = 2, defect = 3 };

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
}

inline IntVector parse_int_list(const std::string& text) {
    IntVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw UsageError("not an integer list: '" + text + "'");
        }
    }
    return out;
}

/// Runs fn(i) for i < count on a small pool; results are written by index, so order is canonical.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Output {
    std::string path;
    std::ostream* default_stream;

    void write(const std::string& text) const {
        if (path.empty() || path == "-") {
            *default_stream << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write '" + path + "'");
        f << text;
    }
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json envelope(const std::string& command) { return Json{{"schema_version", schema_version}, {"command", command}}; }

inline Rational parse_q(const std::string& text) {
    Rational q;
    try {
        q = parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError("--q must be a rational number, got '" + text + "'");
    }
    if (q <= 1) throw UsageError("--q must exceed 1");
    return q;
}

inline std::vector<GaloisAutomorphism> gamma_list(long long level, const IntVector& ks) {
    if (ks.empty()) return GaloisAutomorphism::all(static_cast<long>(level));
    std::vector<GaloisAutomorphism> out;
    for (auto k : ks) {
        if (gcd_ll(k, level) != 1) throw UsageError("gamma exponent " + std::to_string(k) + " is not a unit mod " + std::to_string(level));
        out.emplace_back(static_cast<long>(level), k);
    }
    return out;
}

inline void check_bound(int bound) {
    if (bound < 0 || bound > FormalDegreeEngine::max_height_bound)
        throw UsageError("--bound must lie in [0, " + std::to_string(FormalDegreeEngine::max_height_bound) + "]");
}

// --- enumerate ----------------------------------------------------------------

struct EnumerateRow {
    KLParameter param;
    std::size_t centralizer = 0;
    bool discrete = false;
    bool combinatorial = false;
};

inline int cmd_enumerate(const std::vector<int>& ns, const std::vector<long long>& levels, const std::string& format,
                         const Output& out) {
    std::vector<EnumerateRow> rows;
    for (int n : ns)
        for (long long level : levels)
            for (auto& p : enumerate_parameters(n, level)) {
                EnumerateRow r{p, centralizer_dimension(p)};
                r.discrete = r.centralizer == 1;
                r.combinatorial = combinatorial_discreteness(p);
                rows.push_back(std::move(r));
            }
    bool all_agree = true;
    for (const auto& r : rows) all_agree = all_agree && r.discrete == r.combinatorial;
    if (format == "csv") {
        std::string s = "index,n,partition,torsion_level,torsion_num,rho_dim,centralizer_dim,discrete,combinatorial_discrete\n";
        for (std::size_t idx = 0; idx < rows.size(); ++idx) {
            const auto& r = rows[idx];
            std::string parts, tors;
            for (std::size_t i = 0; i < r.param.partition().size(); ++i) parts += (i ? " " : "") + std::to_string(r.param.partition()[i]);
            for (std::size_t i = 0; i < r.param.s.dim(); ++i) tors += (i ? " " : "") + std::to_string(r.param.s.torsion()[i]);
            s += std::to_string(idx) + "," + std::to_string(r.param.n) + "," + parts + "," + std::to_string(r.param.s.level()) + "," + tors + "," +
                 std::to_string(r.param.rho_dim) + "," + std::to_string(r.centralizer) + "," + (r.discrete ? "true" : "false") +
                 "," + (r.combinatorial ? "true" : "false") + "\n";
        }
        out.write(s);
    } else {
        Json j = envelope("enumerate");
        Json arr = Json::array();
        for (std::size_t idx = 0; idx < rows.size(); ++idx) {
            const auto& r = rows[idx];
            Json row{{"index", idx}};
            row.update(to_json(r.param));
            row["centralizer_dim"] = r.centralizer;
            row["discrete"] = r.discrete;
            row["combinatorial_discrete"] = r.combinatorial;
            arr.push_back(row);
        }
        j["parameters"] = arr;
        j["criteria_agree"] = all_agree;
        out.write(dump(j));
    }
    return all_agree ? ok : falsified;
}

// --- degree -------------------------------------------------------------------

struct PointSpec {
    std::string type;
    std::string datum_file;
    std::string param_file;
    bool steinberg = false;
    long long level = 1;
    std::string torsion;
    std::string v_exponents;
    int rho_dim = 1;
};

struct ResolvedPoint {
    RootDatum rd;
    TorusPoint s;
    int rho_dim = 1;
    Json description;
};

inline ResolvedPoint resolve_point(const PointSpec& p) {
    if (!p.param_file.empty()) {
        const auto k = kl_parameter_from_json(read_json_file(p.param_file));
        require_valid(k);
        auto [rd, s] = adjoint_projection(k);
        return {rd, s, k.rho_dim, Json{{"parameter", to_json(k)}, {"projected_to", rd.label()}}};
    }
    if (p.type.empty() == p.datum_file.empty()) throw UsageError("give exactly one of --type, --datum or --param");
    RootDatum rd = p.type.empty() ? root_datum_from_json(read_json_file(p.datum_file)) : parse_root_datum_label(p.type);
    IntVector t = p.torsion.empty() ? IntVector(rd.lattice_dim(), 0) : parse_int_list(p.torsion);
    IntVector e;
    if (p.steinberg) {
        e = rd.two_rho_check();
        if (!p.v_exponents.empty()) throw UsageError("--steinberg and --v-exponents are exclusive");
    } else if (!p.v_exponents.empty()) {
        e = parse_int_list(p.v_exponents);
    } else {
        e = IntVector(rd.lattice_dim(), 0);
    }
    if (t.size() != rd.lattice_dim() || e.size() != rd.lattice_dim())
        throw UsageError("point coordinates must have length " + std::to_string(rd.lattice_dim()));
    if (p.level < 1) throw UsageError("--level must be positive");
    TorusPoint s(p.level, t, e);
    return {rd, s, p.rho_dim, Json{{"datum", to_json(rd)}}};
}

inline int cmd_degree(const PointSpec& spec, const std::vector<std::string>& qs, int bound, double tol, const Output& out) {
    check_bound(bound);
    auto rp = resolve_point(spec);
    const FormalDegreeEngine engine(rp.rd);
    Json j = envelope("degree");
    j["input"] = rp.description;
    Json reports = Json::array();
    bool nonneg_monotone = true;
    for (const auto& qtext : qs) {
        const auto q0 = parse_q(qtext);
        auto r = engine.degree_numeric(rp.s, q0, bound, tol, rp.rho_dim);
        for (auto x : r.height_increments) nonneg_monotone = nonneg_monotone && x >= -1e-15 * std::abs(r.inverse_degree);
        reports.push_back(to_json(r));
    }
    j["reports"] = reports;
    j["partial_sums_monotone"] = nonneg_monotone;
    out.write(dump(j));
    return nonneg_monotone ? ok : falsified;
}

// --- galois-check -------------------------------------------------------------

inline int cmd_galois_check_parameters(const std::vector<int>& ns, const std::vector<long long>& levels, const IntVector& ks,
                                       int bound, const Rational& q0, const Output& out) {
    check_bound(bound);
    struct Item {
        KLParameter param;
        GaloisAutomorphism gamma;
    };
    std::vector<Item> items;
    for (int n : ns)
        for (long long level : levels)
            for (const auto& p : enumerate_parameters(n, level))
                for (const auto& g : gamma_list(level, ks)) items.push_back({p, g});
    std::map<int, std::unique_ptr<FormalDegreeEngine>> engines;
    for (int n : ns) engines.emplace(n, std::make_unique<FormalDegreeEngine>(pgl_datum(n)));

    std::vector<Json> rows(items.size());
    std::vector<char> good(items.size(), 0);
    parallel_for(items.size(), [&](std::size_t i) {
        const auto& [p, g] = items[i];
        const auto tw = galois_twist(g, p);
        const auto [rd, s] = adjoint_projection(p);
        const auto& engine = *engines.at(p.n);
        const auto v = engine.galois_verdict(s, g, bound, q0);
        const bool discrete = is_essentially_discrete(p);
        // The projected twist must be the projection of the twisted parameter.
        const bool projection_ok = adjoint_projection(tw.output).second == v.twisted;
        const bool degree_ok = !discrete || v.numeric_degree_diff < 1e-8;
        Json row = to_json(p);
        row["gamma"] = to_json(g);
        row["twisted"] = to_json(tw.output);
        row["discrete"] = discrete;
        row["validity_preserved"] = tw.validity_preserved;
        row["discreteness_preserved"] = tw.discreteness_preserved;
        row["central_character_compatible"] = tw.central_character_compatible;
        row["termwise_exact_equal"] = v.termwise_exact_equal;
        row["numeric_degree_diff"] = decimal(v.numeric_degree_diff);
        rows[i] = row;
        good[i] = tw.all_preserved() && v.termwise_exact_equal && projection_ok && degree_ok;
    });
    Json j = envelope("galois-check");
    j["height_bound"] = bound;
    j["q0"] = to_string(q0);
    j["rows"] = rows;
    const bool all_good = std::all_of(good.begin(), good.end(), [](char c) { return c != 0; });
    j["all_verdicts_positive"] = all_good;
    out.write(dump(j));
    return all_good ? ok : falsified;
}

inline int cmd_galois_check_point(const PointSpec& spec, const IntVector& ks, int bound, const Rational& q0, const Output& out) {
    check_bound(bound);
    auto rp = resolve_point(spec);
    const FormalDegreeEngine engine(rp.rd);
    const auto gammas = gamma_list(rp.s.level(), ks);
    const auto report = engine.galois_invariance_report(rp.s, gammas, bound, q0, rp.rho_dim);
    const WeylGroup w(rp.rd);
    bool all_good = true;
    Json cc = Json::array();
    for (const auto& g : gammas) {
        const bool compatible = central_character_orbit(w, rp.s.galois(g)) == central_character_orbit(w, rp.s).galois(g);
        cc.push_back(Json{{"gamma", to_json(g)}, {"central_character_compatible", compatible}});
        all_good = all_good && compatible;
    }
    for (const auto& v : report.galois_verdicts) all_good = all_good && v.termwise_exact_equal;
    Json j = envelope("galois-check");
    j["input"] = rp.description;
    j["report"] = to_json(report);
    j["central_characters"] = cc;
    j["all_verdicts_positive"] = all_good;
    out.write(dump(j));
    return all_good ? ok : falsified;
}

// --- hecke-verify ---------------------------------------------------------------

inline int cmd_hecke_verify(const std::string& type, const std::string& datum_file, int bound, const Output& out) {
    if (type.empty() == datum_file.empty()) throw UsageError("give exactly one of --type or --datum");
    const RootDatum rd = type.empty() ? root_datum_from_json(read_json_file(datum_file)) : parse_root_datum_label(type);
    if (rd.rank() > 3) throw UsageError("relation verification supports rank <= 3");
    if (bound < 1 || bound > 6) throw UsageError("--bound must lie in [1, 6]");
    const auto rep = verify_relations(rd, bound);
    Json j = envelope("hecke-verify");
    j["report"] = to_json(rep);
    out.write(dump(j));
    return rep.all_passed() ? ok : falsified;
}

// --- export ---------------------------------------------------------------------

inline int cmd_export(const std::vector<int>& ns, const std::vector<long long>& levels, int bound, const std::vector<std::string>& qs,
                      const Output& out) {
    check_bound(bound);
    std::vector<Rational> q0s;
    for (const auto& q : qs) q0s.push_back(parse_q(q));
    std::vector<KLParameter> params;
    for (int n : ns)
        for (long long level : levels)
            for (auto& p : enumerate_parameters(n, level)) params.push_back(std::move(p));
    std::map<int, std::unique_ptr<FormalDegreeEngine>> engines;
    for (int n : ns) engines.emplace(n, std::make_unique<FormalDegreeEngine>(pgl_datum(n)));
    std::vector<Json> rows(params.size());
    parallel_for(params.size(), [&](std::size_t i) {
        const auto& p = params[i];
        const auto [rd, s] = adjoint_projection(p);
        const auto& engine = *engines.at(p.n);
        Json row = to_json(p);
        row["centralizer_dim"] = centralizer_dimension(p);
        row["discrete"] = is_essentially_discrete(p);
        row["central_character"] = to_json(parameter_central_character(p));
        row["projected_datum"] = rd.label();
        row["projected_point"] = to_json(s);
        const auto sums = engine.height_sums(s, bound);
        Json per_subset = Json::array();
        for (std::size_t j = 0; j < sums->subsets.size(); ++j)
            per_subset.push_back(Json{{"subset", sums->subsets[j]}, {"sum_m_squared", to_json(sums->subset_sum(j, bound))}});
        row["m_squared_sums"] = per_subset;
        row["partial_inverse_degree"] = to_json(engine.partial_degree_inverse(s, bound));
        Json vals = Json::array();
        for (const auto& q0 : q0s) {
            const auto r = engine.degree_numeric(s, q0, bound);
            vals.push_back(Json{{"q0", to_string(q0)},
                                {"partial_inverse_degree_at_q0", r.exact_inverse_degree ? Json(to_string(*r.exact_inverse_degree)) : Json(nullptr)},
                                {"inverse_degree_decimal", decimal(r.inverse_degree)},
                                {"degree_decimal", decimal(r.degree)}});
        }
        row["values"] = vals;
        rows[i] = row;
    });
    Json j = envelope("export");
    j["height_bound"] = bound;
    j["parameters"] = rows;
    out.write(dump(j));
    return ok;
}

// --- entry point ------------------------------------------------------------------

inline std::vector<int> as_int_list(const Json& j) {
    if (j.is_array()) return j.get<std::vector<int>>();
    return {j.get<int>()};
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Galois twists of Iwahori-spherical discrete series: parameters, Hecke relations, formal degrees"};
    app.require_subcommand(1);
    std::string output_path;
    std::string config_path;
    app.add_option("--config", config_path, "campaign configuration (JSON); replaces the subcommand flags");

    int n = 2;
    long long level = 1;
    std::string format = "json";
    int bound = 30;
    std::vector<std::string> qs{"2"};
    std::string gammas;
    double tol = 1e-9;
    PointSpec point;

    auto* enumerate = app.add_subcommand("enumerate", "list KL parameters of GL_n with discreteness");
    enumerate->add_option("--n", n, "size n of GL_n")->required();
    enumerate->add_option("--level", level, "torsion level")->required();
    enumerate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    enumerate->add_option("--output", output_path, "output file (default stdout)");

    auto add_point_options = [&](CLI::App* sub) {
        sub->add_option("--type", point.type, "root datum label, e.g. A1-sc, A2-ad, B2-sc");
        sub->add_option("--datum", point.datum_file, "root datum JSON file");
        sub->add_option("--param", point.param_file, "GL_n parameter JSON file");
        sub->add_flag("--steinberg", point.steinberg, "use v-exponents 2 rho^vee");
        sub->add_option("--torsion", point.torsion, "torsion numerators, comma separated (X_* coordinates)");
        sub->add_option("--v-exponents", point.v_exponents, "v-exponents, comma separated (X_* coordinates)");
        sub->add_option("--rho-dim", point.rho_dim, "component-group multiplicity")->check(CLI::PositiveNumber);
    };

    auto* degree = app.add_subcommand("degree", "formal degree from the truncated sum");
    add_point_options(degree);
    degree->add_option("--level", point.level, "torsion level of the point");
    degree->add_option("--q", qs, "q0 values (rational, > 1), comma separated")->delimiter(',');
    degree->add_option("--bound", bound, "height bound");
    degree->add_option("--tol", tol, "convergence tolerance");
    degree->add_option("--output", output_path, "output file (default stdout)");

    auto* galois = app.add_subcommand("galois-check", "Galois invariance verdicts");
    galois->add_option("--n", n, "size n of GL_n (parameter campaign)");
    add_point_options(galois);
    galois->add_option("--level", level, "torsion level");
    galois->add_option("--gamma", gammas, "exponents k, comma separated (default: all units)");
    galois->add_option("--q", qs, "q0 (rational, > 1)");
    galois->add_option("--bound", bound, "height bound");
    galois->add_option("--output", output_path, "output file (default stdout)");

    auto* hecke = app.add_subcommand("hecke-verify", "check the Bernstein relations");
    std::string htype, hdatum;
    int hbound = 3;
    hecke->add_option("--type", htype, "root datum label");
    hecke->add_option("--datum", hdatum, "root datum JSON file");
    hecke->add_option("--bound", hbound, "length bound");
    hecke->add_option("--output", output_path, "output file (default stdout)");

    auto* exp = app.add_subcommand("export", "dump exact values for enumerated parameters");
    exp->add_option("--n", n, "size n of GL_n")->required();
    exp->add_option("--level", level, "torsion level")->required();
    exp->add_option("--bound", bound, "height bound");
    exp->add_option("--q", qs, "q0 values (rational, > 1), comma separated")->delimiter(',');
    exp->add_option("--output", output_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        std::vector<int> ns{n};
        std::vector<long long> levels{level};
        if (!config_path.empty()) {
            const Json cfg = read_json_file(config_path);
            try {
                if (cfg.contains("n")) ns = as_int_list(cfg.at("n"));
                if (cfg.contains("levels")) levels = cfg.at("levels").get<std::vector<long long>>();
                if (cfg.contains("bound")) bound = cfg.at("bound").get<int>();
                if (cfg.contains("q")) qs = cfg.at("q").get<std::vector<std::string>>();
                if (cfg.contains("gammas") && cfg.at("gammas").is_array()) {
                    gammas.clear();
                    for (auto k : cfg.at("gammas").get<IntVector>()) gammas += std::to_string(k) + ",";
                }
                if (cfg.contains("format")) format = cfg.at("format").get<std::string>();
                if (cfg.contains("output")) output_path = cfg.at("output").get<std::string>();
                if (cfg.contains("datum")) {
                    const auto& d = cfg.at("datum");
                    if (d.is_string()) point.type = d.get<std::string>();
                }
            } catch (const Json::exception& e) {
                throw UsageError(std::string("malformed config: ") + e.what());
            }
            for (int x : ns)
                if (x < 1 || x > max_enumeration_n) throw UsageError("config n outside [1, " + std::to_string(max_enumeration_n) + "]");
            for (auto l : levels)
                if (l < 1 || l > max_enumeration_level) throw UsageError("config level outside [1, " + std::to_string(max_enumeration_level) + "]");
            if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
            check_bound(bound);
        }
        const Output sink{output_path, &out};
        if (app.got_subcommand(enumerate)) return cmd_enumerate(ns, levels, format, sink);
        if (app.got_subcommand(degree)) return cmd_degree(point, qs, bound, tol, sink);
        if (app.got_subcommand(galois)) {
            if (qs.size() != 1) throw UsageError("galois-check takes one --q");
            const auto q0 = parse_q(qs.front());
            const IntVector ks = parse_int_list(gammas);
            if (!point.type.empty() || !point.datum_file.empty() || !point.param_file.empty()) {
                point.level = level;
                return cmd_galois_check_point(point, ks, bound, q0, sink);
            }
            return cmd_galois_check_parameters(ns, levels, ks, bound, q0, sink);
        }
        if (app.got_subcommand(hecke)) return cmd_hecke_verify(htype, hdatum, hbound, sink);
        if (app.got_subcommand(exp)) return cmd_export(ns, levels, bound, qs, sink);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const size_guard_error& e) {
        err << "guard: " << e.what() << "\n";
        return usage;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "engine defect: " << e.what() << "\n";
        return defect;
    }
    return usage;
}

}  // namespace kltwist::cli
