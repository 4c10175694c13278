#ifndef QCURVE_POLY_HPP
#define QCURVE_POLY_HPP

#include <algorithm>
#include <compare>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace qcurve
{

enum class Family { plain, hat };

struct TimeSymbol {
    Family family = Family::plain;
    unsigned index = 1;

    auto operator<=>(const TimeSymbol &) const = default;

    std::string str() const
    {
        return (family == Family::hat ? "that" : "t") + std::to_string(index);
    }

    std::string latex() const
    {
        return (family == Family::hat ? "\\hat t_{" : "t_{") + std::to_string(index) + "}";
    }

    static TimeSymbol parse(std::string_view s)
    {
        TimeSymbol ts;
        std::string_view rest;
        if (s.starts_with("that")) {
            ts.family = Family::hat;
            rest = s.substr(4);
        } else if (s.starts_with("t")) {
            rest = s.substr(1);
        } else {
            throw input_error("bad time symbol '" + std::string(s) + "'");
        }
        if (rest.empty() || rest.size() > 6 || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw input_error("bad time symbol '" + std::string(s) + "'");
        }
        ts.index = static_cast<unsigned>(std::stoul(std::string(rest)));
        if (ts.index == 0) {
            throw input_error("time index must be positive");
        }
        return ts;
    }
};

inline Family dual_family(Family f)
{
    return f == Family::plain ? Family::hat : Family::plain;
}

// Sorted by symbol, exponents strictly positive.
using Monomial = std::vector<std::pair<TimeSymbol, unsigned>>;

inline unsigned total_degree(const Monomial &m)
{
    unsigned d = 0;
    for (const auto &[s, e] : m) {
        d += e;
    }
    return d;
}

// Graded lexicographic: total degree first, then the exponent of the smallest symbol.
struct GradedLex {
    bool operator()(const Monomial &a, const Monomial &b) const
    {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) {
            return da < db;
        }
        std::size_t i = 0;
        for (; i < a.size() && i < b.size(); ++i) {
            if (a[i].first != b[i].first) {
                // The monomial containing the smaller symbol is larger.
                return b[i].first < a[i].first;
            }
            if (a[i].second != b[i].second) {
                return a[i].second < b[i].second;
            }
        }
        return a.size() < b.size();
    }
};

inline Monomial monomial_mul(const Monomial &a, const Monomial &b)
{
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

// Sparse multivariate polynomial over Q in time symbols. Also serves as the
// exact coefficient type: a rational is a constant polynomial.
class Poly
{
public:
    using Terms = std::map<Monomial, Rational, GradedLex>;

    Poly() = default;
    Poly(const Rational &c)
    {
        if (!c.is_zero()) {
            terms_.emplace(Monomial{}, c);
        }
    }
    Poly(long c) : Poly(Rational(c)) {}
    Poly(int c) : Poly(Rational(static_cast<long>(c))) {}

    static Poly symbol(TimeSymbol s, unsigned e = 1)
    {
        Poly p;
        if (e == 0) {
            return Poly(1);
        }
        p.terms_.emplace(Monomial{{s, e}}, Rational(1));
        return p;
    }

    static Poly from_terms(const std::vector<std::pair<Monomial, Rational>> &ts)
    {
        Poly p;
        for (const auto &[m, c] : ts) {
            p.add_term(m, c);
        }
        return p;
    }

    const Terms &terms() const
    {
        return terms_;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rational constant() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    // Value of a constant polynomial; throws otherwise.
    Rational as_rational() const
    {
        if (!is_constant()) {
            throw domain_error("symbolic value where a rational is required: " + str());
        }
        return constant();
    }
    unsigned degree() const
    {
        return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
    }

    void add_term(const Monomial &m, const Rational &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    Poly operator-() const
    {
        Poly r = *this;
        for (auto &[m, c] : r.terms_) {
            c = -c;
        }
        return r;
    }
    Poly &operator+=(const Poly &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, c);
        }
        return *this;
    }
    Poly &operator-=(const Poly &o)
    {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, -c);
        }
        return *this;
    }
    Poly &operator*=(const Rational &r)
    {
        if (r.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto &[m, c] : terms_) {
            c *= r;
        }
        return *this;
    }
    Poly &operator/=(const Rational &r)
    {
        return *this *= r.inv();
    }
    friend Poly operator+(Poly a, const Poly &b)
    {
        return a += b;
    }
    friend Poly operator-(Poly a, const Poly &b)
    {
        return a -= b;
    }
    friend Poly operator*(const Poly &a, const Poly &b)
    {
        if (a.is_constant()) {
            return b * a.constant();
        }
        if (b.is_constant()) {
            return a * b.constant();
        }
        Poly r;
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                r.add_term(monomial_mul(ma, mb), ca * cb);
            }
        }
        return r;
    }
    Poly &operator*=(const Poly &o)
    {
        return *this = *this * o;
    }
    friend Poly operator*(Poly a, const Rational &r)
    {
        return a *= r;
    }
    friend Poly operator*(const Rational &r, Poly a)
    {
        return a *= r;
    }
    friend Poly operator/(Poly a, const Rational &r)
    {
        return a /= r;
    }
    friend bool operator==(const Poly &a, const Poly &b)
    {
        return a.terms_ == b.terms_;
    }

    Poly pow(unsigned e) const
    {
        Poly r(1), b = *this;
        while (e > 0) {
            if (e & 1u) {
                r *= b;
            }
            e >>= 1u;
            if (e > 0) {
                b *= b;
            }
        }
        return r;
    }

    // Divides by a scalar that must be a nonzero constant.
    Poly div(const Poly &d) const
    {
        if (!d.is_constant() || d.is_zero()) {
            throw domain_error("division by non-invertible scalar " + d.str());
        }
        return *this / d.constant();
    }

    std::vector<TimeSymbol> symbols() const
    {
        std::vector<TimeSymbol> out;
        for (const auto &[m, c] : terms_) {
            for (const auto &[s, e] : m) {
                if (std::find(out.begin(), out.end(), s) == out.end()) {
                    out.push_back(s);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Poly substitute(const std::map<TimeSymbol, Poly> &bindings) const
    {
        Poly r;
        for (const auto &[m, c] : terms_) {
            Poly term(c);
            Monomial rest;
            for (const auto &[s, e] : m) {
                auto it = bindings.find(s);
                if (it == bindings.end()) {
                    rest.emplace_back(s, e);
                } else {
                    term *= it->second.pow(e);
                }
            }
            if (!rest.empty()) {
                Poly mono;
                mono.terms_.emplace(rest, Rational(1));
                term *= mono;
            }
            r += term;
        }
        return r;
    }

    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            const auto &[m, c] = *it;
            Rational a = c;
            if (first) {
                if (a.sign() < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) {
                    a = -a;
                }
            }
            first = false;
            if (m.empty()) {
                os << a.str();
                continue;
            }
            if (!a.is_one()) {
                os << a.str() << "*";
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i) {
                    os << "*";
                }
                os << m[i].first.str();
                if (m[i].second != 1) {
                    os << "^" << m[i].second;
                }
            }
        }
        return os.str();
    }

    std::string latex() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto &[m, c] : terms_) {
            Rational a = c;
            bool neg = a.sign() < 0;
            if (neg) {
                a = -a;
            }
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            first = false;
            std::string cs = a.is_integer() ? a.str() : "\\frac{" + mpz_class(a.num()).get_str() + "}{" + mpz_class(a.den()).get_str() + "}";
            if (m.empty()) {
                os << cs;
                continue;
            }
            if (!a.is_one()) {
                os << cs << " \\cdot ";
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i) {
                    os << " \\cdot ";
                }
                os << m[i].first.latex();
                if (m[i].second != 1) {
                    os << "^{" << m[i].second << "}";
                }
            }
        }
        return os.str();
    }

    friend std::ostream &operator<<(std::ostream &os, const Poly &p)
    {
        return os << p.str();
    }

private:
    Terms terms_;
};

using Scalar = Poly;

inline bool is_rational(const Scalar &s)
{
    return s.is_constant();
}

// Exact root of a scalar: only rational constants are supported.
inline std::optional<Scalar> scalar_root(const Scalar &s, unsigned long b)
{
    if (b == 1) {
        return s;
    }
    if (!s.is_constant()) {
        if (s == Poly(1)) {
            return s;
        }
        return std::nullopt;
    }
    auto r = s.constant().root(b);
    if (!r) {
        return std::nullopt;
    }
    return Scalar(*r);
}

} // namespace qcurve

#endif
