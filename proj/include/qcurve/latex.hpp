#ifndef QCURVE_LATEX_HPP
#define QCURVE_LATEX_HPP

#include <sstream>
#include <string>

#include "curve.hpp"
#include "duality.hpp"
#include "psdo.hpp"
#include "series.hpp"

namespace qcurve
{

namespace detail
{

inline std::string rational_latex(const Rational &a)
{
    if (a.is_integer()) {
        return a.str();
    }
    std::string s = "\\frac{" + mpz_class(abs(a.num())).get_str() + "}{" + a.den().get_str() + "}";
    return a.sign() < 0 ? "-" + s : s;
}

// Appends "c x" to os with the sign pulled out; x may be empty.
inline void signed_term(std::ostringstream &os, bool &first, const Scalar &c, const std::string &x)
{
    bool compound = c.terms().size() > 1;
    bool neg = !compound && c.terms().begin()->second.sign() < 0;
    Scalar a = neg ? -c : c;
    std::string cs = a.latex();
    if (compound && (!x.empty() || !first)) {
        cs = "\\left(" + cs + "\\right)";
    }
    std::string body = x.empty() ? cs : (cs == "1" ? x : cs + " " + x);
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + ")) << body;
    first = false;
}

} // namespace detail

inline std::string series_latex(const PuiseuxSeries &f)
{
    std::ostringstream os;
    bool first = true;
    auto power = [&](long k) -> std::string {
        Rational e(k, f.ram());
        if (e.is_zero()) {
            return "";
        }
        if (e.is_one()) {
            return f.indet();
        }
        return f.indet() + "^{" + detail::rational_latex(e) + "}";
    };
    const auto &ts = f.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        detail::signed_term(os, first, it->second, power(it->first));
    }
    if (first) {
        os << "0";
    }
    if (!f.exact()) {
        std::string o = power(f.lo() - 1);
        os << " + O(" << (o.empty() ? "1" : o) << ")";
    }
    return os.str();
}

inline std::string xseries_latex(const XSeries &c)
{
    std::ostringstream os;
    bool first = true;
    const auto &cs = c.coeffs();
    for (long i = 0; i < static_cast<long>(cs.size()); ++i) {
        if (cs[i].is_zero()) {
            continue;
        }
        detail::signed_term(os, first, cs[i], i == 0 ? "" : (i == 1 ? "x" : "x^{" + std::to_string(i) + "}"));
    }
    if (first) {
        os << "0";
    }
    if (!c.exact()) {
        os << " + O(x^{" << c.trust() + 1 << "})";
    }
    return os.str();
}

inline std::string psdo_latex(const PsDO &A)
{
    std::ostringstream os;
    bool first = true;
    const auto &ts = A.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        long d = it->first;
        std::string dp = d == 0 ? "" : (d == 1 ? "\\partial" : "\\partial^{" + std::to_string(d) + "}");
        const XSeries &c = it->second;
        bool single = c.exact() && c.coeffs().size() == 1;
        if (single) {
            detail::signed_term(os, first, c.coeffs()[0], dp);
            continue;
        }
        std::string body = xseries_latex(c);
        os << (first ? "" : " + ") << (dp.empty() ? "\\left(" + body + "\\right)" : "\\left(" + body + "\\right) " + dp);
        first = false;
    }
    if (first) {
        os << "0";
    }
    if (!A.exact()) {
        os << " + O(\\partial^{" << A.depth() - 1 << "})";
    }
    return os.str();
}

inline std::string equations_latex(const std::vector<std::pair<std::string, std::string>> &rows)
{
    std::ostringstream os;
    os << "\\begin{eqnarray*}\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << rows[i].first << " &=& " << rows[i].second << (i + 1 < rows.size() ? " \\\\\n" : "\n");
    }
    os << "\\end{eqnarray*}";
    return os.str();
}

// One equation per target time, ascending index.
inline std::string duality_latex(const DualityResult &r)
{
    std::vector<std::pair<std::string, std::string>> rows;
    for (long k = 1; k <= r.target.size(); ++k) {
        rows.emplace_back(TimeSymbol{r.target.family, static_cast<unsigned>(k)}.latex(), r.target.at(k).latex());
    }
    return equations_latex(rows);
}

inline std::string normal_form_latex(const NormalFormConnection &nf)
{
    return "\\frac{d}{dz} + \\left(" + series_latex(nf.phi) + "\\right)";
}

} // namespace qcurve

#endif
