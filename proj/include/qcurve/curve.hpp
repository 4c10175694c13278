#ifndef QCURVE_CURVE_HPP
#define QCURVE_CURVE_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "psdo.hpp"
#include "series.hpp"

namespace qcurve
{

struct QuantumCurve {
    PsDO P;
    PsDO Q;
    long p = 0;
    long q = 0;
    bool normalized = false;
    bool coprime = false;
};

inline bool is_monic(const PsDO &A)
{
    if (A.is_zero()) {
        return false;
    }
    XSeries lead = A.terms().rbegin()->second;
    return lead.exact() && lead.coeffs().size() == 1 && lead.coeffs()[0] == Scalar(1);
}

// Validates [P, Q] = 1. Expected orders are checked when positive.
inline QuantumCurve curve_validate(const PsDO &P, const PsDO &Q, long p = 0, long q = 0)
{
    if (!P.exact() || !Q.exact() || !P.is_differential() || !Q.is_differential() || P.is_zero() || Q.is_zero()) {
        throw input_error("curve operators must be exact differential operators");
    }
    QuantumCurve c{P, Q, P.order(), Q.order(), false, false};
    if ((p > 0 && c.p != p) || (q > 0 && c.q != q)) {
        throw shape_error("bi-degree (" + std::to_string(c.p) + "," + std::to_string(c.q) + ") does not match the declared (" +
                          std::to_string(p) + "," + std::to_string(q) + ")");
    }
    if (!string_check(P, Q).is_zero()) {
        throw not_a_curve("[P,Q] - 1 = " + string_check(P, Q).str());
    }
    c.normalized = is_normalized(P, c.p);
    c.coprime = gcd_long(c.p, c.q) == 1;
    return c;
}

inline PsDO airy_P()
{
    return PsDO::d(2) - PsDO::x();
}

inline QuantumCurve airy_curve()
{
    return curve_validate(airy_P(), PsDO::d(1), 2, 1);
}

// (∂, ∂^q + x)
inline QuantumCurve weyl_curve(long q)
{
    if (q < 1) {
        throw input_error("q must be positive");
    }
    return curve_validate(PsDO::d(1), PsDO::d(q) + PsDO::x(), 1, q);
}

inline PuiseuxSeries z_power(long k)
{
    return PuiseuxSeries::monomial("z", Scalar(1), k);
}

// Exact polynomial in z, degrees ascending.
inline std::vector<Scalar> z_poly_coeffs(const PuiseuxSeries &w)
{
    if (!w.exact()) {
        throw shape_error("expected an exact polynomial in z");
    }
    PuiseuxSeries n = w.normalized();
    if (n.indet() != "z" || n.ram() != 1) {
        throw shape_error("expected a polynomial in z");
    }
    std::vector<Scalar> out;
    for (const auto &[k, c] : n.terms()) {
        if (k < 0) {
            throw shape_error("negative power of z in a polynomial");
        }
        if (out.size() <= static_cast<std::size_t>(k)) {
            out.resize(static_cast<std::size_t>(k) + 1);
        }
        out[k] = c;
    }
    return out;
}

// c[j][k] with w = sum c[j][k] P^k z^j.
struct PBasisCoeffs {
    long p = 0;
    std::vector<std::vector<Scalar>> c;

    Scalar at(long j, long k) const
    {
        if (j < 0 || j >= static_cast<long>(c.size()) || k < 0 || k >= static_cast<long>(c[j].size())) {
            return Scalar(0);
        }
        return c[j][k];
    }
};

class PBasis
{
public:
    PBasis(const PsDO &P, long p) : P_(P), p_(p)
    {
        if (p < 1 || P.order() != p || !P.exact() || !P.is_differential() || !is_monic(P)) {
            throw normalization_error("P-basis needs a monic differential operator of order p");
        }
    }

    // weyl_act(P^k, z^j)
    const PuiseuxSeries &element(long j, long k)
    {
        auto key = std::make_pair(j, k);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        PuiseuxSeries v = k == 0 ? z_power(j) : weyl_act(P_, element(j, k - 1));
        return cache_.emplace(key, v).first->second;
    }

    PBasisCoeffs expand(const PuiseuxSeries &w)
    {
        PBasisCoeffs out{p_, std::vector<std::vector<Scalar>>(static_cast<std::size_t>(p_))};
        std::vector<Scalar> r = z_poly_coeffs(w);
        while (!r.empty()) {
            long d = static_cast<long>(r.size()) - 1;
            Scalar lc = r.back();
            long j = d % p_, k = d / p_;
            auto &row = out.c[j];
            if (row.size() <= static_cast<std::size_t>(k)) {
                row.resize(static_cast<std::size_t>(k) + 1);
            }
            row[k] += lc;
            std::vector<Scalar> b = z_poly_coeffs(element(j, k));
            for (std::size_t i = 0; i < b.size(); ++i) {
                r[i] -= lc * b[i];
            }
            while (!r.empty() && r.back().is_zero()) {
                r.pop_back();
            }
        }
        return out;
    }

    PuiseuxSeries assemble(const PBasisCoeffs &c)
    {
        PuiseuxSeries out("z");
        for (long j = 0; j < static_cast<long>(c.c.size()); ++j) {
            for (long k = 0; k < static_cast<long>(c.c[j].size()); ++k) {
                if (!c.c[j][k].is_zero()) {
                    out = ps_add(out, ps_scale(element(j, k), c.c[j][k]));
                }
            }
        }
        return out;
    }

private:
    PsDO P_;
    long p_;
    std::map<std::pair<long, long>, PuiseuxSeries> cache_;
};

inline PBasisCoeffs p_basis_expand(const PuiseuxSeries &w, const PsDO &P, long p)
{
    PBasis b(P, p);
    return b.expand(w);
}

// Univariate polynomial in u, coefficients ascending.
struct UPoly {
    std::vector<Scalar> c;

    void trim()
    {
        while (!c.empty() && c.back().is_zero()) {
            c.pop_back();
        }
    }
    bool is_zero() const
    {
        return c.empty();
    }
    friend bool operator==(const UPoly &a, const UPoly &b)
    {
        return a.c == b.c;
    }

    std::string str() const
    {
        if (c.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (long k = static_cast<long>(c.size()) - 1; k >= 0; --k) {
            const Scalar &a = c[k];
            if (a.is_zero()) {
                continue;
            }
            bool compound = a.terms().size() > 1;
            bool neg = !compound && a.terms().begin()->second.sign() < 0;
            std::string cs = neg ? (-a).str() : a.str();
            if (compound) {
                cs = "(" + cs + ")";
            }
            std::string us = k == 0 ? "" : (k == 1 ? "u" : "u^" + std::to_string(k));
            std::string body = us.empty() ? cs : (cs == "1" ? us : cs + "*" + us);
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + ")) << body;
            first = false;
        }
        return os.str();
    }

    std::string latex() const
    {
        if (c.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (long k = static_cast<long>(c.size()) - 1; k >= 0; --k) {
            if (c[k].is_zero()) {
                continue;
            }
            bool compound = c[k].terms().size() > 1;
            bool neg = !compound && c[k].terms().begin()->second.sign() < 0;
            std::string cs = (neg ? -c[k] : c[k]).latex();
            if (compound) {
                cs = "\\left(" + cs + "\\right)";
            }
            std::string us = k == 0 ? "" : (k == 1 ? "u" : "u^{" + std::to_string(k) + "}");
            std::string body = us.empty() ? cs : (cs == "1" ? us : cs + " " + us);
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + ")) << body;
            first = false;
        }
        return os.str();
    }
};

// entries[j][i] is the coefficient polynomial M_i^j of Q e_i = sum_j M_i^j(P) e_j,
// so column i holds the image of e_i = z^i.
struct CompanionMatrix {
    long p = 0;
    std::vector<std::vector<UPoly>> entries;

    friend bool operator==(const CompanionMatrix &a, const CompanionMatrix &b)
    {
        return a.p == b.p && a.entries == b.entries;
    }

    std::string latex() const
    {
        std::ostringstream os;
        os << "M(u) = \\begin{pmatrix}";
        for (long j = 0; j < p; ++j) {
            for (long i = 0; i < p; ++i) {
                os << (i ? " & " : " ") << entries[j][i].latex();
            }
            os << (j + 1 < p ? " \\\\" : " ");
        }
        os << "\\end{pmatrix}";
        return os.str();
    }
};

inline CompanionMatrix companion_matrix(const QuantumCurve &c)
{
    PBasis basis(c.P, c.p);
    CompanionMatrix m{c.p, std::vector<std::vector<UPoly>>(static_cast<std::size_t>(c.p), std::vector<UPoly>(static_cast<std::size_t>(c.p)))};
    for (long i = 0; i < c.p; ++i) {
        PBasisCoeffs e = basis.expand(weyl_act(c.Q, z_power(i)));
        for (long j = 0; j < c.p; ++j) {
            m.entries[j][i].c = e.c[j];
            m.entries[j][i].trim();
        }
    }
    return m;
}

// sum_j M_i^j(P) e_j, with u acting as P.
inline PuiseuxSeries companion_image(const QuantumCurve &c, const CompanionMatrix &m, long i)
{
    PBasis basis(c.P, c.p);
    PBasisCoeffs e{c.p, std::vector<std::vector<Scalar>>(static_cast<std::size_t>(c.p))};
    for (long j = 0; j < c.p; ++j) {
        e.c[j] = m.entries[j][i].c;
    }
    return basis.assemble(e);
}

inline bool companion_reconstructs(const QuantumCurve &c, const CompanionMatrix &m)
{
    for (long i = 0; i < c.p; ++i) {
        if (!(companion_image(c, m, i) == weyl_act(c.Q, z_power(i)))) {
            return false;
        }
    }
    return true;
}

// Times t_1..t_{p+q} of the (p,q) model. Family picks the display symbols.
struct TimeVector {
    long p = 0;
    long q = 0;
    std::vector<Scalar> t;
    Family family = Family::plain;

    long size() const
    {
        return p + q;
    }
    const Scalar &at(long k) const
    {
        if (k < 1 || k > static_cast<long>(t.size())) {
            throw input_error("time index " + std::to_string(k) + " out of range");
        }
        return t[k - 1];
    }
    const Scalar &top() const
    {
        return at(p + q);
    }
    friend bool operator==(const TimeVector &a, const TimeVector &b)
    {
        return a.p == b.p && a.q == b.q && a.family == b.family && a.t == b.t;
    }
};

inline void time_vector_check(const TimeVector &tv)
{
    if (tv.p < 1 || tv.q < 1) {
        throw input_error("p and q must be positive");
    }
    if (static_cast<long>(tv.t.size()) != tv.p + tv.q) {
        throw input_error("time vector needs exactly p+q = " + std::to_string(tv.p + tv.q) + " entries, got " + std::to_string(tv.t.size()));
    }
}

// Symbolic t_1..t_{N-1} with a given top time.
inline TimeVector symbolic_times(long p, long q, Family fam, const Scalar &top)
{
    TimeVector tv{p, q, {}, fam};
    for (long k = 1; k < p + q; ++k) {
        tv.t.push_back(Poly::symbol({fam, static_cast<unsigned>(k)}));
    }
    tv.t.push_back(top);
    return tv;
}

// d/dz + phi(z), pushed forward along z -> z^ram.
struct NormalFormConnection {
    long ram = 1;
    PuiseuxSeries phi{"z"};

    friend bool operator==(const NormalFormConnection &a, const NormalFormConnection &b)
    {
        return a.ram == b.ram && a.phi == b.phi;
    }
};

// phi = -((1-p)/2) z^-1 - sum_i i t_i z^(i-1)
inline NormalFormConnection normal_form_from_times(const TimeVector &tv)
{
    time_vector_check(tv);
    NormalFormConnection nf{tv.p, PuiseuxSeries("z")};
    nf.phi.add(-1, Scalar(-Rational(1 - tv.p, 2)));
    for (long i = 1; i <= tv.size(); ++i) {
        nf.phi.add(i - 1, tv.at(i) * Rational(-i));
    }
    nf.phi.tighten();
    return nf;
}

// z^p and (1/(p z^(p-1))) d/dz - sum (k/p) t_k z^(k-p).
struct StabilizerOperator {
    long p = 1;
    PuiseuxSeries potential{"z"};

    PuiseuxSeries apply_mult(const PuiseuxSeries &f) const
    {
        return ps_mul(z_power(p), f);
    }
    PuiseuxSeries apply_diff(const PuiseuxSeries &f) const
    {
        PuiseuxSeries d = ps_mul(PuiseuxSeries::monomial("z", Scalar(Rational(1, p)), 1 - p), ps_derivative(f));
        return ps_sub(d, ps_mul(potential, f));
    }
    std::string str() const
    {
        std::string s = p == 1 ? "d/dz" : "(1/" + std::to_string(p) + ")*z^(" + std::to_string(1 - p) + ")*d/dz";
        if (potential.is_zero()) {
            return s;
        }
        return s + " - (" + potential.str() + ")";
    }
};

inline StabilizerOperator stabilizer_operator(long p, const TimeVector &tv)
{
    time_vector_check(tv);
    if (p != tv.p) {
        throw input_error("stabilizer index must equal the model's p");
    }
    StabilizerOperator s{p, PuiseuxSeries("z")};
    for (long k = 1; k <= tv.size(); ++k) {
        s.potential.add(k - p, tv.at(k) * Rational(k, p));
    }
    s.potential.tighten();
    return s;
}

} // namespace qcurve

#endif
