#ifndef QCURVE_CLI_HPP
#define QCURVE_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "curve.hpp"
#include "duality.hpp"
#include "json_io.hpp"
#include "latex.hpp"
#include "parse.hpp"
#include "verify.hpp"

namespace qcurve::cli
{

struct Options {
    long p = 0;
    long q = 0;
    std::string times;
    bool symbolic = false;
    std::optional<long> order;
    std::string format;
    std::string route = "inversion";
    std::string curve;
    std::string suite = "all";
    std::optional<long> kp;
    bool fourier = false;
};

inline std::string trim(std::string s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// "t1=0,t5=3/5,t7=5/7": unset entries are 0, or symbols under --symbolic with top p/(p+q).
inline TimeVector build_times(const Options &o)
{
    if (o.p < 1 || o.q < 1) {
        throw input_error("-p and -q must be positive integers");
    }
    if (o.times.empty() && !o.symbolic) {
        throw input_error("give --times or --symbolic");
    }
    long N = o.p + o.q;
    std::vector<std::pair<TimeSymbol, Scalar>> entries;
    std::set<unsigned> seen;
    std::optional<Family> fam;
    std::stringstream ss(o.times);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw input_error("time entry '" + item + "' must look like t3=1/2");
        }
        TimeSymbol s = TimeSymbol::parse(trim(item.substr(0, eq)));
        if (fam && *fam != s.family) {
            throw input_error("--times mixes t and that entries");
        }
        fam = s.family;
        if (static_cast<long>(s.index) > N) {
            throw input_error("time index " + std::to_string(s.index) + " exceeds p+q = " + std::to_string(N));
        }
        if (!seen.insert(s.index).second) {
            throw input_error("time " + s.str() + " given twice");
        }
        entries.emplace_back(s, parse_scalar(trim(item.substr(eq + 1))));
    }
    Family family = fam.value_or(Family::plain);
    TimeVector tv = o.symbolic ? symbolic_times(o.p, o.q, family, Scalar(Rational(o.p, N))) : TimeVector{o.p, o.q, std::vector<Scalar>(static_cast<std::size_t>(N)), family};
    for (const auto &[s, v] : entries) {
        tv.t[s.index - 1] = v;
    }
    return tv;
}

inline Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw input_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline QuantumCurve named_curve(const std::string &name)
{
    if (name == "airy") {
        return airy_curve();
    }
    if (name.starts_with("weyl-")) {
        std::string n = name.substr(5);
        if (n.empty() || n.size() > 4 || n.find_first_not_of("0123456789") != std::string::npos || std::stol(n) < 1) {
            throw input_error("weyl curves are named weyl-q with q a positive integer");
        }
        return weyl_curve(std::stol(n));
    }
    throw input_error("unknown curve '" + name + "'");
}

inline QuantumCurve parse_curve(const Json &doc)
{
    if (doc.is_object() && doc.contains("name")) {
        if (!doc.at("name").is_string()) {
            throw input_error("curve name must be a string");
        }
        return named_curve(doc.at("name").get<std::string>());
    }
    return curve_from(doc);
}

inline QuantumCurve resolve_curve(const std::string &spec)
{
    if (spec.empty()) {
        throw input_error("--curve is required");
    }
    if (spec.front() == '@') {
        return parse_curve(read_json_file(spec.substr(1)));
    }
    return named_curve(spec);
}

inline std::string render_rows(const std::vector<std::pair<std::string, std::string>> &rows)
{
    std::string s;
    for (const auto &[k, v] : rows) {
        s += k + " = " + v + "\n";
    }
    return s;
}

inline std::string emit_json(const Json &j)
{
    return j.dump() + "\n";
}

inline std::string do_dualize(const Options &o)
{
    DualityResult r = dualize_times(build_times(o), parse_route(o.route), o.order);
    if (o.format == "latex") {
        return duality_latex(r) + "\n";
    }
    if (o.format == "text") {
        std::vector<std::pair<std::string, std::string>> rows;
        for (long k = 1; k <= r.target.size(); ++k) {
            rows.emplace_back(TimeSymbol{r.target.family, static_cast<unsigned>(k)}.str(), r.target.at(k).str());
        }
        return render_rows(rows);
    }
    return emit_json(duality_json(r));
}

inline std::string do_fkn(const Options &o)
{
    TimeVector tv = build_times(o);
    require_coprime(tv.p, tv.q);
    NormalizedCoeffs a = normalized_coeffs(tv);
    long N = tv.size();
    std::vector<Scalar> ahat;
    for (long n = 1; n < N; ++n) {
        ahat.push_back(fkn_coefficient(tv.q, tv.p, a, n));
    }
    if (o.format == "json") {
        Json ja = Json::array(), jh = Json::array();
        for (long n = 1; n < N; ++n) {
            ja.push_back(scalar_json(a.at(n)));
            jh.push_back(scalar_json(ahat[n - 1]));
        }
        return emit_json(Json{{"p", tv.p}, {"q", tv.q}, {"a", ja}, {"ahat", jh}});
    }
    std::vector<std::pair<std::string, std::string>> rows;
    bool tex = o.format == "latex";
    for (long n = 1; n < N; ++n) {
        rows.emplace_back(tex ? "a_{" + std::to_string(n) + "}" : "a" + std::to_string(n), tex ? a.at(n).latex() : a.at(n).str());
    }
    for (long n = 1; n < N; ++n) {
        rows.emplace_back(tex ? "\\hat a_{" + std::to_string(n) + "}" : "ahat" + std::to_string(n), tex ? ahat[n - 1].latex() : ahat[n - 1].str());
    }
    return tex ? equations_latex(rows) + "\n" : render_rows(rows);
}

inline std::string do_companion(const Options &o)
{
    CompanionMatrix m = companion_matrix(resolve_curve(o.curve));
    if (o.format == "latex") {
        return m.latex() + "\n";
    }
    if (o.format == "text") {
        std::string s;
        for (const auto &row : m.entries) {
            s += "[";
            for (std::size_t i = 0; i < row.size(); ++i) {
                s += (i ? ", " : "") + row[i].str();
            }
            s += "]\n";
        }
        return s;
    }
    return emit_json(companion_json(m));
}

inline std::string do_psdo(const Options &o)
{
    QuantumCurve c = resolve_curve(o.curve);
    long depth = o.order.value_or(std::max(8L, o.kp.value_or(0)));
    if (depth < 1) {
        throw input_error("--order must be positive");
    }
    PsDO out = psdo_root(c.P, c.p, depth);
    if (o.kp) {
        if (*o.kp < 1) {
            throw input_error("--kp must be positive");
        }
        out = kp_rhs_q(out, c.P, *o.kp);
    }
    if (o.format == "latex") {
        return psdo_latex(out) + "\n";
    }
    if (o.format == "text") {
        return out.str() + "\n";
    }
    return emit_json(psdo_json(out));
}

inline std::string do_correction(const Options &o)
{
    TimeVector tv = build_times(o);
    Scalar v = correction_term(tv);
    CorrectionCase cc = correction_vanishing_case(tv.p, tv.q);
    if (o.format == "latex") {
        return v.latex() + "\n";
    }
    if (o.format == "text") {
        std::string s = "correction = " + v.str() + "\n";
        s += std::string("case (i): ") + (cc.case_i ? "yes" : "no") + "\n";
        s += std::string("case (ii): ") + (cc.case_ii ? "yes" : "no") + "\n";
        return s;
    }
    Json spec = Json::array();
    for (long k : cc.specialize) {
        spec.push_back(k);
    }
    return emit_json(Json{{"p", tv.p}, {"q", tv.q}, {"value", scalar_json(v)}, {"case_i", cc.case_i}, {"case_ii", cc.case_ii}, {"specialize", spec}});
}

inline std::string do_normal_form(const Options &o)
{
    TimeVector tv = build_times(o);
    NormalFormConnection nf = normal_form_from_times(tv);
    if (o.fourier) {
        nf = local_fourier_normal_form(nf, tv.q, o.order);
    }
    if (o.format == "latex") {
        return normal_form_latex(nf) + "\n";
    }
    if (o.format == "text") {
        return "ram = " + std::to_string(nf.ram) + "\nphi = " + nf.phi.str() + "\n";
    }
    return emit_json(normal_form_json(nf));
}

inline std::pair<std::string, bool> do_verify(const Options &o)
{
    std::vector<SuiteReport> reps = run_suite(o.suite);
    bool ok = true;
    for (const auto &r : reps) {
        ok = ok && r.pass();
    }
    if (o.format == "json") {
        Json arr = Json::array();
        for (const auto &r : reps) {
            Json checks = Json::array();
            for (const auto &l : r.lines) {
                checks.push_back(Json{{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
            }
            arr.push_back(Json{{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}});
        }
        return {emit_json(Json{{"pass", ok}, {"suites", arr}}), ok};
    }
    if (o.format == "latex") {
        throw input_error("verify reports are text or json");
    }
    std::string s;
    for (const auto &r : reps) {
        long passed = 0;
        for (const auto &l : r.lines) {
            s += std::string(l.pass ? "pass " : "FAIL ") + r.suite + " " + l.detail + "\n";
            passed += l.pass;
        }
        s += r.suite + ": " + std::to_string(passed) + "/" + std::to_string(r.lines.size()) + " matched\n";
    }
    return {s, ok};
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Quantum curve duality toolkit", "qcurve"};
    app.require_subcommand(1, 1);
    Options o;

    auto formats = CLI::IsMember({"json", "latex", "text"});
    auto add_times = [&](CLI::App *s) {
        s->add_option("-p", o.p, "first index")->required();
        s->add_option("-q", o.q, "second index")->required();
        s->add_option("--times", o.times, "sparse times, e.g. \"t1=0,t7=5/7\"");
        s->add_flag("--symbolic", o.symbolic, "leave unset times symbolic");
    };
    auto add_format = [&](CLI::App *s) { s->add_option("--format", o.format, "json, latex or text")->check(formats); };

    CLI::App *dualize = app.add_subcommand("dualize", "map (p,q) times to (q,p) times");
    add_times(dualize);
    dualize->add_option("--order", o.order, "inversion depth");
    dualize->add_option("--route", o.route, "inversion, fkn or both")->check(CLI::IsMember({"inversion", "fkn", "both"}));
    add_format(dualize);

    CLI::App *fkn = app.add_subcommand("fkn", "closed-form a-coefficients of the dual model");
    add_times(fkn);
    add_format(fkn);

    CLI::App *companion = app.add_subcommand("companion", "companion matrix M(u) of a curve");
    companion->add_option("--curve", o.curve, "airy, weyl-q or @file.json")->required();
    add_format(companion);

    CLI::App *psdo = app.add_subcommand("psdo", "p-th root L of P, or [P^(n/p)_+, P] with --kp n");
    psdo->add_option("--curve", o.curve, "airy, weyl-q or @file.json")->required();
    psdo->add_option("--order", o.order, "truncation depth in D^-1");
    psdo->add_option("--kp", o.kp, "flow index n");
    add_format(psdo);

    CLI::App *correction = app.add_subcommand("correction", "correction term and its vanishing cases");
    add_times(correction);
    add_format(correction);

    CLI::App *normal = app.add_subcommand("normal-form", "normal-form connection built from times");
    add_times(normal);
    normal->add_option("--order", o.order, "inversion depth for --fourier");
    normal->add_flag("--fourier", o.fourier, "apply the local Fourier transform");
    add_format(normal);

    CLI::App *verify = app.add_subcommand("verify", "built-in exact verification suites");
    verify->add_option("--suite", o.suite, "fkn-25, involution, psdo-root or all")->check(CLI::IsMember({"fkn-25", "involution", "psdo-root", "all"}));
    add_format(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        std::string doc;
        int code = 0;
        if (verify->parsed()) {
            if (o.format.empty()) {
                o.format = "text";
            }
            auto [s, ok] = do_verify(o);
            doc = s;
            code = ok ? 0 : 2;
        } else {
            if (o.format.empty()) {
                o.format = "json";
            }
            if (dualize->parsed()) {
                doc = do_dualize(o);
            } else if (fkn->parsed()) {
                doc = do_fkn(o);
            } else if (companion->parsed()) {
                doc = do_companion(o);
            } else if (psdo->parsed()) {
                doc = do_psdo(o);
            } else if (correction->parsed()) {
                doc = do_correction(o);
            } else {
                doc = do_normal_form(o);
            }
        }
        out << doc;
        return code;
    } catch (const input_error &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const domain_error &e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qcurve::cli

#endif
