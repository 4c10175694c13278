#ifndef QCURVE_JSON_IO_HPP
#define QCURVE_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "curve.hpp"
#include "duality.hpp"
#include "parse.hpp"
#include "psdo.hpp"
#include "series.hpp"

namespace qcurve
{

using Json = nlohmann::ordered_json;

namespace detail
{

inline const Json &field(const Json &j, const char *k)
{
    if (!j.is_object() || !j.contains(k)) {
        throw input_error(std::string("missing field '") + k + "'");
    }
    return j.at(k);
}

inline long get_long(const Json &j, const char *k)
{
    const Json &v = field(j, k);
    if (!v.is_number_integer()) {
        throw input_error(std::string("field '") + k + "' must be an integer");
    }
    return v.get<long>();
}

inline const Json &get_array(const Json &j, const char *k)
{
    const Json &v = field(j, k);
    if (!v.is_array()) {
        throw input_error(std::string("field '") + k + "' must be an array");
    }
    return v;
}

inline Json bound_json(long v, long none)
{
    return v == none ? Json(nullptr) : Json(v);
}

inline long bound_from(const Json &v, long none)
{
    if (v.is_null()) {
        return none;
    }
    if (!v.is_number_integer()) {
        throw input_error("window bound must be an integer or null");
    }
    return v.get<long>();
}

} // namespace detail

inline Json scalar_json(const Scalar &s)
{
    return s.str();
}

inline Scalar scalar_from(const Json &j)
{
    if (!j.is_string()) {
        throw input_error("scalar must be a string such as \"3/5\" or \"t1 - 2*t2^2\"");
    }
    return parse_scalar(j.get<std::string>());
}

inline Json series_json(const PuiseuxSeries &f)
{
    Json terms = Json::array();
    const auto &ts = f.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        terms.push_back(Json{{"k", it->first}, {"coeff", scalar_json(it->second)}});
    }
    return Json{{"indet", f.indet()}, {"ram", f.ram()}, {"lo", detail::bound_json(f.lo(), neg_inf)}, {"terms", terms}};
}

inline PuiseuxSeries series_from(const Json &j)
{
    const Json &ind = detail::field(j, "indet");
    if (!ind.is_string()) {
        throw input_error("indet must be a string");
    }
    PuiseuxSeries f(ind.get<std::string>(), detail::get_long(j, "ram"));
    for (const auto &t : detail::get_array(j, "terms")) {
        f.add(detail::get_long(t, "k"), scalar_from(detail::field(t, "coeff")));
    }
    long lo = detail::bound_from(detail::field(j, "lo"), neg_inf);
    f.tighten();
    if (lo != neg_inf) {
        f.truncate_below(lo);
    }
    return f;
}

inline Json psdo_json(const PsDO &A)
{
    Json terms = Json::array();
    const auto &ts = A.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        Json cs = Json::array();
        for (const auto &c : it->second.coeffs()) {
            cs.push_back(scalar_json(c));
        }
        terms.push_back(Json{{"d", it->first}, {"coeff", cs}, {"xtrunc", detail::bound_json(it->second.trust(), exact_trust)}});
    }
    return Json{{"xtrunc", detail::bound_json(A.xtrunc(), exact_trust)}, {"depth", detail::bound_json(A.depth(), neg_inf)}, {"terms", terms}};
}

inline PsDO psdo_from(const Json &j)
{
    PsDO A;
    long shared = j.is_object() && j.contains("xtrunc") ? detail::bound_from(j.at("xtrunc"), exact_trust) : exact_trust;
    for (const auto &t : detail::get_array(j, "terms")) {
        std::vector<Scalar> cs;
        for (const auto &c : detail::get_array(t, "coeff")) {
            cs.push_back(scalar_from(c));
        }
        long trust = t.contains("xtrunc") ? detail::bound_from(t.at("xtrunc"), exact_trust) : shared;
        A.add(detail::get_long(t, "d"), XSeries(cs, trust));
    }
    long depth = j.contains("depth") ? detail::bound_from(j.at("depth"), neg_inf) : neg_inf;
    if (depth != neg_inf) {
        A.truncate_below(depth);
    }
    return A;
}

inline std::string family_name(Family f)
{
    return f == Family::plain ? "t" : "that";
}

inline Family family_from(const Json &j)
{
    if (j == "t") {
        return Family::plain;
    }
    if (j == "that") {
        return Family::hat;
    }
    throw input_error("family must be \"t\" or \"that\"");
}

inline Json times_array(const TimeVector &tv)
{
    Json a = Json::array();
    for (const auto &x : tv.t) {
        a.push_back(scalar_json(x));
    }
    return a;
}

inline Json time_vector_json(const TimeVector &tv)
{
    return Json{{"p", tv.p}, {"q", tv.q}, {"family", family_name(tv.family)}, {"times", times_array(tv)}};
}

inline TimeVector times_from_array(long p, long q, Family fam, const Json &a)
{
    if (!a.is_array()) {
        throw input_error("times must be an array");
    }
    TimeVector tv{p, q, {}, fam};
    for (const auto &x : a) {
        tv.t.push_back(scalar_from(x));
    }
    time_vector_check(tv);
    return tv;
}

inline TimeVector time_vector_from(const Json &j)
{
    return times_from_array(detail::get_long(j, "p"), detail::get_long(j, "q"), family_from(detail::field(j, "family")), detail::field(j, "times"));
}

inline Json curve_json(const QuantumCurve &c)
{
    return Json{{"p", c.p}, {"q", c.q}, {"P", psdo_json(c.P)}, {"Q", psdo_json(c.Q)}};
}

inline QuantumCurve curve_from(const Json &j)
{
    long p = j.contains("p") ? detail::get_long(j, "p") : 0;
    long q = j.contains("q") ? detail::get_long(j, "q") : 0;
    return curve_validate(psdo_from(detail::field(j, "P")), psdo_from(detail::field(j, "Q")), p, q);
}

inline Json companion_json(const CompanionMatrix &m)
{
    Json rows = Json::array();
    for (const auto &row : m.entries) {
        Json r = Json::array();
        for (const auto &e : row) {
            r.push_back(e.str());
        }
        rows.push_back(r);
    }
    return Json{{"p", m.p}, {"entries", rows}};
}

inline CompanionMatrix companion_from(const Json &j)
{
    CompanionMatrix m{detail::get_long(j, "p"), {}};
    for (const auto &row : detail::get_array(j, "entries")) {
        if (!row.is_array() || static_cast<long>(row.size()) != m.p) {
            throw input_error("companion rows must have p entries");
        }
        std::vector<UPoly> r;
        for (const auto &e : row) {
            if (!e.is_string()) {
                throw input_error("companion entries must be strings");
            }
            r.push_back(parse_upoly(e.get<std::string>()));
        }
        m.entries.push_back(r);
    }
    if (static_cast<long>(m.entries.size()) != m.p) {
        throw input_error("companion matrix must have p rows");
    }
    return m;
}

inline Json normal_form_json(const NormalFormConnection &nf)
{
    return Json{{"ram", nf.ram}, {"phi", series_json(nf.phi)}};
}

inline NormalFormConnection normal_form_from(const Json &j)
{
    return NormalFormConnection{detail::get_long(j, "ram"), series_from(detail::field(j, "phi"))};
}

inline Json duality_json(const DualityResult &r)
{
    return Json{{"p", r.source.p},
                {"q", r.source.q},
                {"source_family", family_name(r.source.family)},
                {"source_times", times_array(r.source)},
                {"target_times", times_array(r.target)},
                {"dropped_gauge", series_json(r.dropped_gauge)},
                {"route", route_name(r.route)}};
}

inline DualityResult duality_from(const Json &j)
{
    long p = detail::get_long(j, "p"), q = detail::get_long(j, "q");
    Family fam = family_from(detail::field(j, "source_family"));
    const Json &route = detail::field(j, "route");
    if (!route.is_string()) {
        throw input_error("route must be a string");
    }
    return DualityResult{times_from_array(p, q, fam, detail::field(j, "source_times")), times_from_array(q, p, dual_family(fam), detail::field(j, "target_times")),
                         series_from(detail::field(j, "dropped_gauge")), parse_route(route.get<std::string>())};
}

inline Json phased_json(const PhasedConnection &pc)
{
    Json terms = Json::array();
    for (const auto &t : pc.terms) {
        terms.push_back(Json{{"exponent", t.exponent.str()}, {"coeff", scalar_json(t.coeff)}, {"phase", t.phase.str()}});
    }
    return Json{{"ram", pc.ram}, {"terms", terms}};
}

inline PhasedConnection phased_from(const Json &j)
{
    PhasedConnection pc{detail::get_long(j, "ram"), {}};
    for (const auto &t : detail::get_array(j, "terms")) {
        auto rat = [&](const char *k) {
            const Json &v = detail::field(t, k);
            if (!v.is_string()) {
                throw input_error(std::string(k) + " must be a rational string");
            }
            return Rational::parse(v.get<std::string>());
        };
        pc.terms.push_back(PhasedTerm{rat("exponent"), scalar_from(detail::field(t, "coeff")), rat("phase")});
    }
    return pc;
}

} // namespace qcurve

#endif
