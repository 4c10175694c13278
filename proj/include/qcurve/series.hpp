#ifndef QCURVE_SERIES_HPP
#define QCURVE_SERIES_HPP

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace qcurve
{

// Marks a window bound that extends to minus infinity (nothing truncated).
inline constexpr long neg_inf = LONG_MIN / 8;

inline long add_bound(long a, long b)
{
    return (a == neg_inf || b == neg_inf) ? neg_inf : a + b;
}

struct SeriesOrder {
    long depth = 1;
};

// Truncated series in descending fractional powers of one indeterminate.
// Key k stands for exponent k/ram. Keys in [lo, hi] are trusted, keys above hi
// vanish, keys below lo are unknown. lo == neg_inf means the series is exact.
class PuiseuxSeries
{
public:
    PuiseuxSeries() = default;
    explicit PuiseuxSeries(std::string indet, long ram = 1) : indet_(std::move(indet)), ram_(ram)
    {
        if (ram_ <= 0) {
            throw input_error("ramification must be positive");
        }
    }

    static PuiseuxSeries monomial(const std::string &indet, const Scalar &c, long k, long ram = 1)
    {
        PuiseuxSeries f(indet, ram);
        f.set(k, c);
        f.tighten();
        return f;
    }

    // Builds z^e with rational e.
    static PuiseuxSeries power(const std::string &indet, const Scalar &c, const Rational &e)
    {
        long ram = e.den().get_si();
        return monomial(indet, c, e.num().get_si(), ram);
    }

    const std::string &indet() const
    {
        return indet_;
    }
    long ram() const
    {
        return ram_;
    }
    long lo() const
    {
        return lo_;
    }
    long hi() const
    {
        return hi_;
    }
    bool exact() const
    {
        return lo_ == neg_inf;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    const std::map<long, Scalar> &terms() const
    {
        return terms_;
    }

    // Raw setters used by builders and parsers; callers keep invariants.
    void set(long k, const Scalar &c)
    {
        if (c.is_zero()) {
            terms_.erase(k);
        } else {
            terms_[k] = c;
        }
        if (hi_ == neg_inf || k > hi_) {
            if (!c.is_zero()) {
                hi_ = k;
            }
        }
    }
    void add(long k, const Scalar &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            set(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }
    void set_window(long lo, long hi)
    {
        lo_ = lo;
        hi_ = hi;
        for (auto it = terms_.begin(); it != terms_.end();) {
            it = (it->first < lo_ || it->first > hi_) ? terms_.erase(it) : std::next(it);
        }
        tighten();
    }
    void truncate_below(long lo)
    {
        if (lo_ == neg_inf || lo > lo_) {
            lo_ = lo;
        }
        for (auto it = terms_.begin(); it != terms_.end() && it->first < lo_;) {
            it = terms_.erase(it);
        }
        tighten();
    }

    // hi becomes the top stored key; an empty series collapses to hi == lo.
    void tighten()
    {
        if (!terms_.empty()) {
            hi_ = terms_.rbegin()->first;
            if (lo_ != neg_inf && hi_ < lo_) {
                hi_ = lo_;
            }
        } else {
            hi_ = lo_;
        }
    }

    long leading_key() const
    {
        if (terms_.empty()) {
            throw leading_term_error("series has no trusted nonzero term");
        }
        return terms_.rbegin()->first;
    }
    Rational leading_exponent() const
    {
        return Rational(leading_key(), ram_);
    }
    const Scalar &leading_coeff() const
    {
        if (terms_.empty()) {
            throw leading_term_error("series has no trusted nonzero term");
        }
        return terms_.rbegin()->second;
    }

    Rational lo_exponent() const
    {
        if (exact()) {
            throw window_error("exact series has no lower bound");
        }
        return Rational(lo_, ram_);
    }

    // Same series on a finer grid; R must be a multiple of ram.
    PuiseuxSeries reram(long R) const
    {
        if (R % ram_ != 0) {
            throw shape_error("ramification " + std::to_string(R) + " is not a multiple of " + std::to_string(ram_));
        }
        long m = R / ram_;
        PuiseuxSeries r(indet_, R);
        for (const auto &[k, c] : terms_) {
            r.terms_.emplace(k * m, c);
        }
        r.lo_ = lo_ == neg_inf ? neg_inf : lo_ * m;
        r.hi_ = hi_ == neg_inf ? neg_inf : hi_ * m;
        return r;
    }

    // Smallest ramification that carries the same terms.
    PuiseuxSeries normalized() const
    {
        long g = ram_;
        for (const auto &[k, c] : terms_) {
            g = gcd_long(g, k);
        }
        PuiseuxSeries r(indet_, ram_ / g);
        for (const auto &[k, c] : terms_) {
            r.terms_.emplace(k / g, c);
        }
        r.lo_ = lo_ == neg_inf ? neg_inf : ceil_div(lo_, g);
        r.tighten();
        return r;
    }

    Scalar coefficient(const Rational &e) const
    {
        if (!exact() && e < Rational(lo_, ram_)) {
            throw window_error("exponent " + e.str() + " lies below the trusted window");
        }
        Rational kr = e * Rational(ram_);
        if (!kr.is_integer()) {
            return Scalar(0);
        }
        auto it = terms_.find(kr.num().get_si());
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    bool trusted(const Rational &e) const
    {
        return exact() || e >= Rational(lo_, ram_);
    }

    PuiseuxSeries map_coeffs(const auto &fn) const
    {
        PuiseuxSeries r(indet_, ram_);
        for (const auto &[k, c] : terms_) {
            Scalar v = fn(c);
            if (!v.is_zero()) {
                r.terms_.emplace(k, v);
            }
        }
        r.lo_ = lo_;
        r.tighten();
        return r;
    }

    // Structural equality after ramification normalization.
    friend bool operator==(const PuiseuxSeries &a, const PuiseuxSeries &b)
    {
        auto na = a.normalized(), nb = b.normalized();
        return na.indet_ == nb.indet_ && na.ram_ == nb.ram_ && na.lo_ == nb.lo_ && na.hi_ == nb.hi_ && na.terms_ == nb.terms_;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        auto exp_str = [&](long k) {
            Rational e(k, ram_);
            if (e.is_zero()) {
                return std::string();
            }
            if (e.is_one()) {
                return indet_;
            }
            if (e.is_integer() && e.sign() > 0) {
                return indet_ + "^" + e.str();
            }
            return indet_ + "^(" + e.str() + ")";
        };
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto &[k, c] = *it;
            std::string cs = c.str();
            bool compound = c.terms().size() > 1;
            bool neg = !compound && c.terms().begin()->second.sign() < 0;
            std::string body;
            if (neg) {
                cs = (-c).str();
            }
            std::string x = exp_str(k);
            if (x.empty()) {
                body = compound ? "(" + cs + ")" : cs;
            } else if (cs == "1") {
                body = x;
            } else {
                body = (compound ? "(" + cs + ")" : cs) + "*" + x;
            }
            if (first) {
                os << (neg ? "-" : "") << body;
            } else {
                os << (neg ? " - " : " + ") << body;
            }
            first = false;
        }
        if (first) {
            os << "0";
        }
        if (!exact()) {
            std::string o = exp_str(lo_ - 1);
            os << " + O(" << (o.empty() ? "1" : o) << ")";
        }
        return os.str();
    }

private:
    std::string indet_ = "s";
    long ram_ = 1;
    std::map<long, Scalar> terms_;
    long lo_ = neg_inf;
    long hi_ = neg_inf;
};

inline void check_indet(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    if (f.indet() != g.indet()) {
        throw input_error("indeterminate mismatch: " + f.indet() + " vs " + g.indet());
    }
}

inline PuiseuxSeries ps_add(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    check_indet(f, g);
    long R = lcm_long(f.ram(), g.ram());
    PuiseuxSeries a = f.reram(R), b = g.reram(R);
    for (const auto &[k, c] : b.terms()) {
        a.add(k, c);
    }
    long lo = std::max(a.lo(), b.lo());
    a.truncate_below(lo);
    if (lo == neg_inf) {
        a.tighten();
    }
    return a;
}

inline PuiseuxSeries ps_scale(const PuiseuxSeries &f, const Scalar &c)
{
    return f.map_coeffs([&](const Scalar &x) { return x * c; });
}

inline PuiseuxSeries ps_neg(const PuiseuxSeries &f)
{
    return ps_scale(f, Scalar(-1));
}

inline PuiseuxSeries ps_sub(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    return ps_add(f, ps_neg(g));
}

// d/d(indet), term by term; the window moves down by one.
inline PuiseuxSeries ps_derivative(const PuiseuxSeries &f)
{
    PuiseuxSeries r(f.indet(), f.ram());
    for (const auto &[k, c] : f.terms()) {
        if (k != 0) {
            r.set(k - f.ram(), c * Rational(k, f.ram()));
        }
    }
    if (!f.exact()) {
        r.truncate_below(f.lo() - f.ram());
    }
    r.tighten();
    return r;
}

inline PuiseuxSeries operator+(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    return ps_add(f, g);
}
inline PuiseuxSeries operator-(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    return ps_sub(f, g);
}

inline PuiseuxSeries ps_mul(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    check_indet(f, g);
    long R = lcm_long(f.ram(), g.ram());
    PuiseuxSeries a = f.reram(R), b = g.reram(R);
    PuiseuxSeries r(f.indet(), R);
    bool zero_a = a.is_zero() && a.exact(), zero_b = b.is_zero() && b.exact();
    if (zero_a || zero_b) {
        return r;
    }
    long lo = std::max(add_bound(a.lo(), b.hi()), add_bound(a.hi(), b.lo()));
    for (const auto &[ka, ca] : a.terms()) {
        for (const auto &[kb, cb] : b.terms()) {
            if (lo != neg_inf && ka + kb < lo) {
                continue;
            }
            r.add(ka + kb, ca * cb);
        }
    }
    if (lo != neg_inf) {
        r.truncate_below(lo);
    }
    r.tighten();
    return r;
}

inline PuiseuxSeries operator*(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    return ps_mul(f, g);
}

namespace detail
{

// Coefficients p_0..p_N of (1 + W)^e where W = sum_{j>=1} w[j] x^j, using
// the recurrence n p_n = sum_{k=1}^n ((e+1)k - n) w_k p_{n-k}.
inline std::vector<Scalar> binomial_power(const std::vector<Scalar> &w, const Rational &e, long N)
{
    std::vector<Scalar> p(static_cast<std::size_t>(N + 1));
    p[0] = Scalar(1);
    for (long n = 1; n <= N; ++n) {
        Scalar acc;
        for (long k = 1; k <= n && k < static_cast<long>(w.size()); ++k) {
            if (w[k].is_zero() || p[n - k].is_zero()) {
                continue;
            }
            Rational f = (e + Rational(1)) * Rational(k) - Rational(n);
            if (f.is_zero()) {
                continue;
            }
            acc += (w[k] * p[n - k]) * f;
        }
        p[n] = acc / Rational(n);
    }
    return p;
}

inline Scalar scalar_rational_power(const Scalar &c, const Rational &e)
{
    if (e.is_integer()) {
        long n = e.num().get_si();
        if (n >= 0) {
            return c.pow(static_cast<unsigned>(n));
        }
        if (!c.is_constant()) {
            throw leading_term_error("non-invertible leading coefficient " + c.str());
        }
        return Scalar(c.constant().pow(n));
    }
    if (c == Scalar(1)) {
        return c;
    }
    if (!c.is_constant()) {
        throw branch_error("no exact root of symbolic leading coefficient " + c.str());
    }
    if (c.is_zero()) {
        throw leading_term_error("zero leading coefficient");
    }
    auto r = c.constant().pow_rational(e.num().get_si(), e.den().get_si());
    if (!r) {
        throw branch_error("leading coefficient " + c.str() + " has no exact power " + e.str() + " in Q");
    }
    return Scalar(*r);
}

} // namespace detail

namespace detail
{

// f^e keeping exponents >= floor (ignored for exact finite results).
inline PuiseuxSeries pow_floor(const PuiseuxSeries &f, const Rational &e, const Rational &floor)
{
    if (f.is_zero()) {
        if (e.sign() > 0 && f.exact()) {
            return f;
        }
        throw shape_error("power of a series without a trusted leading term");
    }
    if (e.is_zero()) {
        return PuiseuxSeries::monomial(f.indet(), Scalar(1), 0, 1);
    }
    long r = f.ram();
    long m = f.leading_key();
    Scalar c = f.leading_coeff();
    if (e.is_integer() && e.sign() > 0 && f.terms().size() > 1) {
        PuiseuxSeries acc = PuiseuxSeries::monomial(f.indet(), Scalar(1), 0, 1);
        for (long i = 0; i < e.num().get_si(); ++i) {
            acc = ps_mul(acc, f);
        }
        return acc;
    }
    Scalar cpow = scalar_rational_power(c, e);
    Rational lead_e = e * Rational(m, r);
    long R = lcm_long(r, lead_e.den().get_si());
    long lead = (lead_e * Rational(R)).num().get_si();
    long scale = R / r;
    if (f.exact() && f.terms().size() == 1) {
        return PuiseuxSeries::monomial(f.indet(), cpow, lead, R);
    }
    if (!c.is_constant()) {
        throw branch_error("cannot normalize a series with symbolic leading coefficient " + c.str());
    }
    // Relative steps of 1/r below the leading term.
    Rational span = (lead_e - floor) * Rational(r);
    long N = std::max(0L, floor_div(span.num().get_si(), span.den().get_si()));
    if (!f.exact()) {
        N = std::min(N, m - f.lo());
    }
    std::vector<Scalar> w(static_cast<std::size_t>(N + 1));
    for (const auto &[k, ck] : f.terms()) {
        long j = m - k;
        if (j > 0 && j <= N) {
            w[static_cast<std::size_t>(j)] = ck.div(c);
        }
    }
    auto p = binomial_power(w, e, N);
    PuiseuxSeries out(f.indet(), R);
    for (long n = 0; n <= N; ++n) {
        if (!p[n].is_zero()) {
            out.set(lead - n * scale, cpow * p[n]);
        }
    }
    out.truncate_below(lead - N * scale);
    return out;
}

} // namespace detail

// f^e on the principal branch. The binomial tail is cut after order.depth
// steps (of the result's ramification) below the leading term.
inline PuiseuxSeries ps_pow_rational(const PuiseuxSeries &f, const Rational &e, SeriesOrder order = {16})
{
    if (f.is_zero() || e.is_zero()) {
        return detail::pow_floor(f, e, Rational(0));
    }
    Rational lead_e = e * f.leading_exponent();
    long R = lcm_long(f.ram(), lead_e.den().get_si());
    return detail::pow_floor(f, e, lead_e - Rational(order.depth, R));
}

// f∘g. g must have a positive leading exponent. Exact inputs are cut after
// order.depth steps below the leading exponent of the result.
inline PuiseuxSeries ps_compose(const PuiseuxSeries &f, const PuiseuxSeries &g, SeriesOrder order = {16})
{
    if (g.is_zero() || g.leading_exponent().sign() <= 0) {
        throw shape_error("inner series must have positive leading exponent");
    }
    if (f.is_zero()) {
        if (!f.exact()) {
            throw window_error("composition with a fully unknown outer series");
        }
        return PuiseuxSeries(g.indet(), 1);
    }
    Rational lg = g.leading_exponent();
    long R = 1;
    for (const auto &[k, c] : f.terms()) {
        R = lcm_long(R, g.ram() * Rational(k, f.ram()).den().get_si());
    }
    Rational lead = Rational(f.leading_key(), f.ram()) * lg;
    // Smallest result key that is still reported.
    long floor_key = (lead * Rational(R)).num().get_si() - order.depth;
    bool exact = f.exact() && g.exact();
    if (!f.exact()) {
        // Unknown terms of f reach exponents <= (lo-1)/r times lg.
        Rational bound = Rational(f.lo() - 1, f.ram()) * lg * Rational(R);
        floor_key = std::max(floor_key, floor_div(bound.num().get_si(), bound.den().get_si()) + 1);
    }
    PuiseuxSeries acc(g.indet(), R);
    for (const auto &[k, c] : f.terms()) {
        Rational ek(k, f.ram());
        if (ek * lg < Rational(floor_key, R)) {
            exact = false;
            continue;
        }
        PuiseuxSeries term = ps_scale(detail::pow_floor(g, ek, Rational(floor_key, R)), c);
        if (!term.exact()) {
            exact = false;
        }
        acc = ps_add(acc, term);
    }
    if (!exact) {
        acc.truncate_below(std::max(acc.lo(), floor_key * (acc.ram() / R)));
    }
    return acc;
}

// Compositional inverse g with f(g(z)) = z, solved degree by degree.
// out_ram must be a multiple of the ramification the inverse lives in.
inline PuiseuxSeries ps_comp_inverse(const PuiseuxSeries &f, long out_ram, SeriesOrder order = {16})
{
    if (f.is_zero()) {
        throw leading_term_error("cannot invert a series without a leading term");
    }
    long r = f.ram();
    long a = f.leading_key();
    if (a <= 0) {
        throw shape_error("compositional inverse needs a positive leading exponent");
    }
    const Scalar &c = f.leading_coeff();
    if (!c.is_constant() || c.is_zero()) {
        throw leading_term_error("non-invertible leading coefficient " + c.str());
    }
    long G = r;
    for (const auto &[k, ck] : f.terms()) {
        G = gcd_long(G, k);
    }
    long R0 = a / G;
    if (out_ram % R0 != 0) {
        throw shape_error("inverse lives in ramification " + std::to_string(R0) + ", requested " + std::to_string(out_ram));
    }
    long R = out_ram;
    Rational ea(a, r);
    Rational cinv_root_a = c.constant();
    // d = c^(-r/a); coefficient of the term k is c^(-k/a).
    auto cpow = [&](long k) {
        auto v = cinv_root_a.pow_rational(-k, a);
        if (!v) {
            throw branch_error("leading coefficient " + c.str() + " lacks the exact root needed for inversion");
        }
        return *v;
    };
    Rational d = cpow(r);

    long jmax = order.depth;
    if (!f.exact()) {
        // Unknown terms of f sit at exponents <= (lo-1)/r and reach f∘g only there.
        Rational bound = Rational(R) * (Rational(1) - Rational(f.lo() - 1, a));
        long lim = ceil_div(bound.num().get_si(), bound.den().get_si()) - 1;
        jmax = std::min(jmax, lim);
    }
    if (jmax < 0) {
        jmax = 0;
    }

    struct Term {
        long k;
        Rational e;
        Scalar coeff; // f_k c^(-k/a)
        long shift;   // R (a-k)/a
        std::vector<Scalar> p;
    };
    std::vector<Term> ts;
    for (const auto &[k, ck] : f.terms()) {
        Rational sh = Rational(R) * Rational(a - k, a);
        if (!sh.is_integer()) {
            throw shape_error("series exponents incompatible with requested ramification");
        }
        Term t{k, Rational(k, r), ck * Scalar(cpow(k)), sh.num().get_si(), {Scalar(1)}};
        ts.push_back(std::move(t));
    }
    std::vector<Scalar> v(static_cast<std::size_t>(jmax + 1));
    auto extend = [&](Term &t, long n) {
        while (static_cast<long>(t.p.size()) <= n) {
            long m = static_cast<long>(t.p.size());
            Scalar acc;
            for (long i = 1; i <= m; ++i) {
                if (v[i].is_zero() || t.p[m - i].is_zero()) {
                    continue;
                }
                Rational coef = (t.e + Rational(1)) * Rational(i) - Rational(m);
                if (coef.is_zero()) {
                    continue;
                }
                acc += (v[i] * t.p[m - i]) * coef;
            }
            t.p.push_back(acc / Rational(m));
        }
    };
    for (long j = 1; j <= jmax; ++j) {
        Scalar total;
        for (auto &t : ts) {
            long n = j - t.shift;
            if (n < 0) {
                continue;
            }
            extend(t, n);
            total += t.coeff * t.p[n];
        }
        // Only the leading term involves v_j, through e·v_j.
        v[j] = -total / ea;
        for (auto &t : ts) {
            long n = j - t.shift;
            if (n == j && static_cast<long>(t.p.size()) > j) {
                t.p[j] += v[j] * t.e;
            }
        }
    }
    PuiseuxSeries g(f.indet(), R);
    long lead = (Rational(R) * Rational(r, a)).num().get_si();
    g.set(lead, Scalar(d));
    for (long j = 1; j <= jmax; ++j) {
        if (!v[j].is_zero()) {
            g.set(lead - j, v[j] * Scalar(d));
        }
    }
    g.truncate_below(lead - jmax);
    return g;
}

inline Scalar ps_coefficient(const PuiseuxSeries &f, const Rational &e)
{
    return f.coefficient(e);
}

// True when both series agree at every exponent trusted by both.
inline bool ps_agree(const PuiseuxSeries &f, const PuiseuxSeries &g)
{
    if (f.indet() != g.indet()) {
        return false;
    }
    long R = lcm_long(f.ram(), g.ram());
    auto a = f.reram(R), b = g.reram(R);
    long lo = std::max(a.lo(), b.lo());
    auto ia = a.terms().lower_bound(lo), ib = b.terms().lower_bound(lo);
    std::map<long, Scalar> ma(ia, a.terms().end()), mb(ib, b.terms().end());
    return ma == mb;
}

} // namespace qcurve

#endif
