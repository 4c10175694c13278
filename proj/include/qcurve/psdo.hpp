#ifndef QCURVE_PSDO_HPP
#define QCURVE_PSDO_HPP

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace qcurve
{

inline constexpr long exact_trust = LONG_MAX / 4;

// Power series in x. Coefficients of x^0..x^trust are known; trust ==
// exact_trust marks an exact polynomial, trust == -1 a fully unknown value.
class XSeries
{
public:
    XSeries() = default;
    XSeries(const Scalar &c) : c_{c}
    {
        trim();
    }
    XSeries(std::vector<Scalar> c, long trust = exact_trust) : c_(std::move(c)), trust_(trust)
    {
        trim();
    }

    static XSeries x_power(unsigned m, const Scalar &c = Scalar(1))
    {
        std::vector<Scalar> v(m + 1);
        v[m] = c;
        return XSeries(v);
    }

    const std::vector<Scalar> &coeffs() const
    {
        return c_;
    }
    long trust() const
    {
        return trust_;
    }
    bool exact() const
    {
        return trust_ == exact_trust;
    }
    bool unknown() const
    {
        return trust_ < 0;
    }
    // Exactly zero (not merely zero on the trusted part).
    bool is_zero() const
    {
        return exact() && c_.empty();
    }
    bool known_zero() const
    {
        return c_.empty();
    }
    long degree() const
    {
        return static_cast<long>(c_.size()) - 1;
    }
    Scalar at(long i) const
    {
        if (i < 0 || i >= static_cast<long>(c_.size())) {
            return Scalar(0);
        }
        return c_[i];
    }

    XSeries derivative() const
    {
        if (unknown()) {
            return *this;
        }
        std::vector<Scalar> v;
        for (std::size_t i = 1; i < c_.size(); ++i) {
            v.push_back(c_[i] * Rational(static_cast<long>(i)));
        }
        return XSeries(v, exact() ? exact_trust : trust_ - 1);
    }

    XSeries derivative(long k) const
    {
        XSeries r = *this;
        for (long i = 0; i < k && !(r.exact() && r.c_.empty()); ++i) {
            r = r.derivative();
            if (r.unknown()) {
                break;
            }
        }
        return r;
    }

    friend XSeries operator+(const XSeries &a, const XSeries &b)
    {
        std::vector<Scalar> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = a.at(static_cast<long>(i)) + b.at(static_cast<long>(i));
        }
        return XSeries(v, std::min(a.trust_, b.trust_));
    }
    friend XSeries operator-(const XSeries &a)
    {
        std::vector<Scalar> v = a.c_;
        for (auto &x : v) {
            x = -x;
        }
        return XSeries(v, a.trust_);
    }
    friend XSeries operator-(const XSeries &a, const XSeries &b)
    {
        return a + (-b);
    }
    friend XSeries operator*(const XSeries &a, const XSeries &b)
    {
        long t = std::min(a.trust_, b.trust_);
        if (a.is_zero() || b.is_zero()) {
            return XSeries();
        }
        std::size_t n = a.c_.size() + b.c_.size() - 1;
        if (t != exact_trust) {
            n = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0L, t + 1)));
        }
        std::vector<Scalar> v(n);
        for (std::size_t i = 0; i < a.c_.size() && i < n; ++i) {
            if (a.c_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.c_.size() && i + j < n; ++j) {
                v[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return XSeries(v, t);
    }
    friend XSeries operator*(const XSeries &a, const Rational &r)
    {
        std::vector<Scalar> v = a.c_;
        for (auto &x : v) {
            x *= r;
        }
        return XSeries(v, a.trust_);
    }

    // Equality on the part both operands trust.
    bool agrees(const XSeries &o) const
    {
        long t = std::min(trust_, o.trust_);
        long n = std::max(degree(), o.degree());
        if (t != exact_trust) {
            n = std::min(n, t);
        }
        for (long i = 0; i <= n; ++i) {
            if (at(i) != o.at(i)) {
                return false;
            }
        }
        return true;
    }
    friend bool operator==(const XSeries &a, const XSeries &b)
    {
        return a.trust_ == b.trust_ && a.c_ == b.c_;
    }

    XSeries with_trust(long t) const
    {
        return XSeries(c_, std::min(trust_, t));
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (long i = degree(); i >= 0; --i) {
            const Scalar &c = c_[i];
            if (c.is_zero()) {
                continue;
            }
            std::string cs = c.str();
            bool compound = c.terms().size() > 1;
            bool neg = !compound && c.terms().begin()->second.sign() < 0;
            if (neg) {
                cs = (-c).str();
            }
            std::string body;
            std::string xs = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
            if (xs.empty()) {
                body = compound ? "(" + cs + ")" : cs;
            } else if (cs == "1") {
                body = xs;
            } else {
                body = (compound ? "(" + cs + ")" : cs) + "*" + xs;
            }
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + ")) << body;
            first = false;
        }
        if (first) {
            os << "0";
        }
        if (!exact()) {
            os << " + O(x^" << trust_ + 1 << ")";
        }
        return os.str();
    }

private:
    void trim()
    {
        if (!exact()) {
            if (trust_ < 0) {
                c_.clear();
                trust_ = -1;
            } else if (static_cast<long>(c_.size()) > trust_ + 1) {
                c_.resize(static_cast<std::size_t>(trust_ + 1));
            }
        }
        while (!c_.empty() && c_.back().is_zero()) {
            c_.pop_back();
        }
    }

    std::vector<Scalar> c_;
    long trust_ = exact_trust;
};

// Pseudodifferential operator sum a_d(x) ∂^d, coefficients on the left.
// Degrees below depth are unknown; depth == neg_inf means nothing was truncated.
class PsDO
{
public:
    PsDO() = default;

    static PsDO constant(const Scalar &c)
    {
        PsDO r;
        r.set(0, XSeries(c));
        return r;
    }
    static PsDO d(long n, const XSeries &c = XSeries(Scalar(1)))
    {
        PsDO r;
        r.set(n, c);
        return r;
    }
    static PsDO x()
    {
        return d(0, XSeries::x_power(1));
    }

    const std::map<long, XSeries> &terms() const
    {
        return terms_;
    }
    long depth() const
    {
        return depth_;
    }
    bool exact() const
    {
        return depth_ == neg_inf;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    long order() const
    {
        if (terms_.empty()) {
            return neg_inf;
        }
        return terms_.rbegin()->first;
    }
    long xtrunc() const
    {
        long t = exact_trust;
        for (const auto &[k, c] : terms_) {
            t = std::min(t, c.trust());
        }
        return t;
    }
    XSeries coeff(long n) const
    {
        if (!exact() && n < depth_) {
            throw window_error("degree " + std::to_string(n) + " below operator depth");
        }
        auto it = terms_.find(n);
        return it == terms_.end() ? XSeries() : it->second;
    }
    bool is_differential() const
    {
        return terms_.empty() || (terms_.begin()->first >= 0 && (exact() || depth_ <= 0));
    }

    void set(long n, const XSeries &c)
    {
        if (c.is_zero()) {
            terms_.erase(n);
        } else {
            terms_[n] = c;
        }
    }
    void add(long n, const XSeries &c)
    {
        auto it = terms_.find(n);
        if (it == terms_.end()) {
            set(n, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }
    void truncate_below(long dpt)
    {
        if (depth_ == neg_inf || dpt > depth_) {
            depth_ = dpt;
        }
        for (auto it = terms_.begin(); it != terms_.end() && it->first < depth_;) {
            it = terms_.erase(it);
        }
    }
    void set_depth_raw(long dpt)
    {
        depth_ = dpt;
    }

    friend bool operator==(const PsDO &, const PsDO &) = default;

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto &[n, c] = *it;
            std::string cs = c.str();
            bool simple = c.exact() && c.coeffs().size() == 1 && c.coeffs()[0].is_constant();
            std::string dstr = n == 0 ? "" : (n == 1 ? "D" : "D^" + (n < 0 ? "(" + std::to_string(n) + ")" : std::to_string(n)));
            std::string body;
            bool neg = false;
            if (simple) {
                Rational v = c.coeffs()[0].constant();
                neg = v.sign() < 0;
                std::string vs = neg ? (-v).str() : v.str();
                body = dstr.empty() ? vs : (vs == "1" ? dstr : vs + "*" + dstr);
            } else {
                body = "(" + cs + ")" + (dstr.empty() ? "" : "*" + dstr);
            }
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + ")) << body;
            first = false;
        }
        if (first) {
            os << "0";
        }
        if (!exact()) {
            os << " + O(D^(" << depth_ - 1 << "))";
        }
        return os.str();
    }

private:
    std::map<long, XSeries> terms_;
    long depth_ = neg_inf;
};

inline PsDO operator+(const PsDO &a, const PsDO &b)
{
    PsDO r = a;
    for (const auto &[n, c] : b.terms()) {
        r.add(n, c);
    }
    long dpt = std::max(a.depth(), b.depth());
    if (dpt != neg_inf) {
        r.truncate_below(dpt);
    }
    return r;
}

inline PsDO operator-(const PsDO &a)
{
    PsDO r;
    for (const auto &[n, c] : a.terms()) {
        r.set(n, -c);
    }
    r.set_depth_raw(a.depth());
    return r;
}

inline PsDO operator-(const PsDO &a, const PsDO &b)
{
    return a + (-b);
}

inline PsDO scale(const PsDO &a, const Rational &s)
{
    PsDO r;
    for (const auto &[n, c] : a.terms()) {
        r.set(n, c * s);
    }
    r.set_depth_raw(s.is_zero() ? neg_inf : a.depth());
    return r;
}

// Binomial coefficient C(n, k) for an integer n of any sign.
inline Rational int_binomial(long n, long k)
{
    Rational r(1);
    for (long i = 0; i < k; ++i) {
        r *= Rational(n - i, i + 1);
    }
    return r;
}

// Generalized Leibniz product. Degrees below floor are discarded.
inline PsDO psdo_mul(const PsDO &A, const PsDO &B, long floor = neg_inf)
{
    PsDO r;
    if ((A.is_zero() && A.exact()) || (B.is_zero() && B.exact())) {
        return r;
    }
    long window = std::max(add_bound(A.depth(), B.order()), add_bound(A.order(), B.depth()));
    long cut = std::max(window, floor);
    long unknown_top = neg_inf;
    for (const auto &[i, a] : A.terms()) {
        for (const auto &[j, b] : B.terms()) {
            XSeries bk = b;
            for (long k = 0;; ++k) {
                long deg = i + j - k;
                if (cut != neg_inf && deg < cut) {
                    break;
                }
                if (deg <= unknown_top) {
                    break;
                }
                if (i >= 0 && k > i) {
                    break;
                }
                if (k > 0) {
                    bk = bk.derivative();
                }
                if (bk.is_zero()) {
                    break;
                }
                if (bk.unknown() || a.unknown()) {
                    unknown_top = std::max(unknown_top, deg);
                    break;
                }
                Rational binom = int_binomial(i, k);
                r.add(deg, (a * bk) * binom);
            }
        }
    }
    long dpt = std::max(cut, unknown_top == neg_inf ? neg_inf : unknown_top + 1);
    if (dpt != neg_inf) {
        r.truncate_below(dpt);
    }
    return r;
}

inline PsDO operator*(const PsDO &a, const PsDO &b)
{
    return psdo_mul(a, b);
}

inline PsDO psdo_commutator(const PsDO &A, const PsDO &B, long floor = neg_inf)
{
    return psdo_mul(A, B, floor) - psdo_mul(B, A, floor);
}

inline PsDO diff_part(const PsDO &A)
{
    if (!A.exact() && A.depth() > 0) {
        throw window_error("differential part not determined by the trusted window");
    }
    PsDO r;
    for (const auto &[n, c] : A.terms()) {
        if (n >= 0) {
            r.set(n, c);
        }
    }
    return r;
}

inline PsDO neg_part(const PsDO &A)
{
    PsDO r;
    for (const auto &[n, c] : A.terms()) {
        if (n < 0) {
            r.set(n, c);
        }
    }
    r.set_depth_raw(A.depth());
    return r;
}

// A^n keeping degrees >= floor, with intermediate floors adjusted by order.
inline PsDO psdo_pow(const PsDO &A, unsigned n, long floor = neg_inf)
{
    if (n == 0) {
        return PsDO::constant(Scalar(1));
    }
    long ord = A.order();
    PsDO acc = A;
    for (unsigned k = 2; k <= n; ++k) {
        long f = floor == neg_inf ? neg_inf : floor - static_cast<long>(n - k) * ord;
        acc = psdo_mul(acc, A, f);
    }
    if (floor != neg_inf) {
        acc.truncate_below(floor);
    }
    return acc;
}

// Agreement on every degree and x-power both operands trust.
inline bool psdo_agree(const PsDO &A, const PsDO &B, long min_degree = neg_inf, long max_x = exact_trust)
{
    long lo = std::max({A.depth(), B.depth(), min_degree});
    std::vector<long> keys;
    for (const auto &[n, c] : A.terms()) {
        keys.push_back(n);
    }
    for (const auto &[n, c] : B.terms()) {
        keys.push_back(n);
    }
    for (long n : keys) {
        if (lo != neg_inf && n < lo) {
            continue;
        }
        XSeries a = A.terms().count(n) ? A.terms().at(n) : XSeries();
        XSeries b = B.terms().count(n) ? B.terms().at(n) : XSeries();
        if (max_x != exact_trust) {
            a = a.with_trust(max_x);
            b = b.with_trust(max_x);
        }
        if (!a.agrees(b)) {
            return false;
        }
    }
    return true;
}

inline bool is_normalized(const PsDO &P, long p)
{
    if (P.order() != p || !P.is_differential()) {
        return false;
    }
    XSeries lead = P.coeff(p);
    if (!(lead.exact() && lead.coeffs().size() == 1 && lead.coeffs()[0] == Scalar(1))) {
        return false;
    }
    return p < 1 || P.coeff(p - 1).is_zero();
}

// L = P^(1/p) = ∂ + sum_{j>=1} u_j ∂^(-j), trusted down to ∂^(-depth).
inline PsDO psdo_root(const PsDO &P, long p, long depth)
{
    if (p < 1) {
        throw normalization_error("root order must be positive");
    }
    if (!is_normalized(P, p)) {
        throw normalization_error("operator is not of the form D^p + a_(p-2) D^(p-2) + ...");
    }
    PsDO L = PsDO::d(1);
    for (long j = 1; j <= depth; ++j) {
        long deg = p - 1 - j;
        PsDO Lp = psdo_pow(L, static_cast<unsigned>(p), deg);
        XSeries target = P.terms().count(deg) ? P.terms().at(deg) : XSeries();
        XSeries have = Lp.terms().count(deg) ? Lp.terms().at(deg) : XSeries();
        XSeries u = (target - have) * Rational(1, p);
        L.set(-j, u);
    }
    L.truncate_below(-depth);
    return L;
}

inline PsDO kp_rhs_q(const PsDO &L, const PsDO &Q, long n)
{
    PsDO Ln = psdo_pow(L, static_cast<unsigned>(n), 0);
    if (!Ln.exact() && Ln.depth() > 0) {
        throw window_error("L is too shallow to determine its differential part");
    }
    PsDO B = diff_part(Ln);
    return psdo_commutator(B, Q);
}

inline PsDO kp_rhs(const PsDO &L, long n)
{
    return kp_rhs_q(L, L, n);
}

inline bool is_monic_order_zero(const PsDO &S)
{
    if (S.order() != 0) {
        return false;
    }
    XSeries lead = S.coeff(0);
    return lead.exact() && lead.coeffs().size() == 1 && lead.coeffs()[0] == Scalar(1);
}

// Inverse of a monic order-zero operator, trusted down to ∂^(-depth).
inline PsDO psdo_inverse_monic(const PsDO &S, long depth)
{
    if (!is_monic_order_zero(S)) {
        throw normalization_error("operator is not monic of order zero");
    }
    PsDO V = PsDO::constant(Scalar(1));
    for (long m = 1; m <= depth; ++m) {
        PsDO SV = psdo_mul(S, V, -m);
        XSeries have = SV.terms().count(-m) ? SV.terms().at(-m) : XSeries();
        V.set(-m, -have);
    }
    V.truncate_below(-depth);
    if (!S.exact()) {
        V.truncate_below(S.depth());
    }
    return V;
}

// (S ∂^n S^-1)_- S, with S^-1 taken down to ∂^(-depth).
inline PsDO sato_rhs(const PsDO &S, long n, long depth)
{
    PsDO Si = psdo_inverse_monic(S, depth);
    PsDO conj = psdo_mul(psdo_mul(S, PsDO::d(n)), Si);
    return psdo_mul(neg_part(conj), S);
}

inline PsDO string_check(const PsDO &P, const PsDO &Q)
{
    return psdo_commutator(P, Q) - PsDO::constant(Scalar(1));
}

// ∂ acts as z, x as -d/dz; x^m ∂^n f = (-d/dz)^m (z^n f).
inline PuiseuxSeries weyl_act(const PsDO &A, const PuiseuxSeries &f)
{
    if (f.indet() != "z") {
        throw input_error("weyl action needs a series in z");
    }
    PuiseuxSeries out("z", f.ram());
    for (const auto &[n, c] : A.terms()) {
        if (!c.exact()) {
            throw shape_error("weyl action needs polynomial x-coefficients");
        }
        PuiseuxSeries g = ps_mul(PuiseuxSeries::monomial("z", Scalar(1), n), f);
        for (long m = 0; m <= c.degree(); ++m) {
            if (m > 0) {
                g = ps_neg(ps_derivative(g));
            }
            if (!c.at(m).is_zero()) {
                out = ps_add(out, ps_scale(g, c.at(m)));
            }
        }
    }
    if (!A.exact()) {
        if (!f.is_zero()) {
            // Unknown operator terms reach exponents below (depth - 1) + lead(f), x-powers lower them further.
            Rational bound = Rational(A.depth() - 1) + f.leading_exponent();
            long R = out.ram();
            Rational b = bound * Rational(R);
            out.truncate_below(floor_div(b.num().get_si(), b.den().get_si()) + 1);
        }
    }
    return out;
}

} // namespace qcurve

#endif
