#ifndef QCURVE_DUALITY_HPP
#define QCURVE_DUALITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace qcurve
{

enum class Role { first, second };
enum class Route { inversion, fkn, both };

inline std::string route_name(Route r)
{
    switch (r) {
    case Route::inversion:
        return "inversion";
    case Route::fkn:
        return "fkn";
    default:
        return "both";
    }
}

inline Route parse_route(const std::string &s)
{
    if (s == "inversion") {
        return Route::inversion;
    }
    if (s == "fkn") {
        return Route::fkn;
    }
    if (s == "both") {
        return Route::both;
    }
    throw input_error("unknown route '" + s + "'");
}

// first:  (1/p) sum k t_k s^((k-p)/p)
// second: -(1/p) sum k t_k s^((k-p)/p), p being the model's own first index
inline PuiseuxSeries times_to_f(const TimeVector &tv, Role role)
{
    time_vector_check(tv);
    Rational sign = role == Role::first ? Rational(1) : Rational(-1);
    PuiseuxSeries f("s", tv.p);
    for (long k = 1; k <= tv.size(); ++k) {
        f.add(k - tv.p, tv.at(k) * (sign * Rational(k, tv.p)));
    }
    f.tighten();
    return f.normalized();
}

struct GaugeSplit {
    PuiseuxSeries reduced;
    PuiseuxSeries dropped;
};

// Splits off the part in s^-1 C[[s^(-1/q)]].
inline GaugeSplit gauge_reduce(const PuiseuxSeries &f, long q)
{
    PuiseuxSeries n = f.normalized();
    if (q < 1 || q % n.ram() != 0) {
        throw shape_error("ramification " + std::to_string(n.ram()) + " does not divide " + std::to_string(q));
    }
    PuiseuxSeries g = n.reram(q);
    GaugeSplit out{PuiseuxSeries(f.indet(), q), PuiseuxSeries(f.indet(), q)};
    for (const auto &[k, c] : g.terms()) {
        (k > -q ? out.reduced : out.dropped).set(k, c);
    }
    if (!g.exact()) {
        out.dropped.truncate_below(g.lo());
        if (g.lo() > -q + 1) {
            out.reduced.truncate_below(g.lo());
        }
    }
    out.reduced.tighten();
    out.dropped.tighten();
    return out;
}

inline void require_coprime(long p, long q)
{
    if (p < 1 || q < 1) {
        throw input_error("p and q must be positive");
    }
    if (gcd_long(p, q) != 1) {
        throw domain_error("duality needs coprime p and q, got (" + std::to_string(p) + "," + std::to_string(q) + ")");
    }
}

inline Rational rational_top(const TimeVector &tv)
{
    const Scalar &top = tv.top();
    if (!top.is_constant()) {
        throw leading_term_error("top time t" + std::to_string(tv.size()) + " must be a rational number, got " + top.str());
    }
    if (top.is_zero()) {
        throw leading_term_error("top time t" + std::to_string(tv.size()) + " vanishes");
    }
    return top.constant();
}

struct NormalizedCoeffs {
    long p = 0;
    long q = 0;
    std::vector<Scalar> a; // a[n-1] holds a_n

    Scalar at(long n) const
    {
        if (n < 1 || n > static_cast<long>(a.size())) {
            return Scalar(0);
        }
        return a[n - 1];
    }
};

// a_(N-k) = k t_k / (N t_N)
inline NormalizedCoeffs normalized_coeffs(const TimeVector &tv)
{
    time_vector_check(tv);
    long N = tv.size();
    Rational scale = (Rational(N) * rational_top(tv)).inv();
    NormalizedCoeffs nc{tv.p, tv.q, std::vector<Scalar>(static_cast<std::size_t>(N - 1))};
    for (long k = 1; k < N; ++k) {
        nc.a[N - k - 1] = tv.at(k) * (Rational(k) * scale);
    }
    return nc;
}

// t_k = a_(N-k) N t_N / k, with t_N supplied.
inline TimeVector coeffs_to_times(const NormalizedCoeffs &nc, const Rational &top, Family fam)
{
    long N = nc.p + nc.q;
    TimeVector tv{nc.p, nc.q, std::vector<Scalar>(static_cast<std::size_t>(N)), fam};
    for (long k = 1; k < N; ++k) {
        tv.t[k - 1] = nc.at(N - k) * (Rational(N) * top / Rational(k));
    }
    tv.t[N - 1] = Scalar(top);
    return tv;
}

// z (1 + sum a_n z^-n)^(1/root)
inline PuiseuxSeries coeffs_to_g(const NormalizedCoeffs &nc, long root, SeriesOrder order = {16})
{
    if (root < 1) {
        throw input_error("root must be positive");
    }
    PuiseuxSeries base("z");
    base.set(0, Scalar(1));
    for (long n = 1; n <= static_cast<long>(nc.a.size()); ++n) {
        base.add(-n, nc.at(n));
    }
    base.tighten();
    return ps_mul(PuiseuxSeries::monomial("z", Scalar(1), 1), ps_pow_rational(base, Rational(1, root), order));
}

// s^e -> z^(e m)
inline PuiseuxSeries substitute_power(const PuiseuxSeries &f, long m, const std::string &indet = "z")
{
    PuiseuxSeries out(indet, f.ram());
    for (const auto &[k, c] : f.terms()) {
        out.set(k * m, c);
    }
    if (!f.exact()) {
        out.truncate_below(f.lo() * m);
    }
    out.tighten();
    return out.normalized();
}

// a_n = -(q/p) sum_k (1/k) C((n-p-q)/p, k-1) [x^n] (sum_m ahat_m x^m)^k
inline Scalar fkn_coefficient(long p, long q, const NormalizedCoeffs &ahat, long n)
{
    if (n < 1) {
        throw input_error("fkn index must be positive");
    }
    std::vector<Scalar> A(static_cast<std::size_t>(n) + 1), pw(static_cast<std::size_t>(n) + 1);
    for (long m = 1; m <= n; ++m) {
        A[m] = ahat.at(m);
    }
    pw[0] = Scalar(1);
    Rational top(n - p - q, p);
    Scalar total;
    for (long k = 1; k <= n; ++k) {
        std::vector<Scalar> next(static_cast<std::size_t>(n) + 1);
        for (long i = 0; i <= n; ++i) {
            if (pw[i].is_zero()) {
                continue;
            }
            for (long m = 1; i + m <= n; ++m) {
                if (!A[m].is_zero()) {
                    next[i + m] += pw[i] * A[m];
                }
            }
        }
        pw = std::move(next);
        if (!pw[n].is_zero()) {
            total += pw[n] * (binomial(top, k - 1) / Rational(k));
        }
    }
    return total * Rational(-q, p);
}

struct DualityResult {
    TimeVector source;
    TimeVector target;
    PuiseuxSeries dropped_gauge{"s"};
    Route route = Route::inversion;

    friend bool operator==(const DualityResult &, const DualityResult &) = default;
};

inline long default_depth(long p, long q)
{
    return 2 * (p + q);
}

// c = p / (N t_N); F = c f_1 has leading term s^(q/p).
inline Rational bridge_constant(const TimeVector &tv)
{
    return Rational(tv.p) / (Rational(tv.size()) * rational_top(tv));
}

// G = (c f_1)^-1 in ramification q.
inline PuiseuxSeries inverse_series(const TimeVector &tv, SeriesOrder order)
{
    require_coprime(tv.p, tv.q);
    Rational c = bridge_constant(tv);
    PuiseuxSeries F = ps_scale(times_to_f(tv, Role::first), Scalar(c));
    return ps_comp_inverse(F, tv.q, order);
}

// Reads t̂_k = [s^((k-q)/q)] G * (-q)/(c k) after gauge reduction.
inline DualityResult times_from_inverse(const TimeVector &tv, const PuiseuxSeries &G)
{
    long p = tv.p, q = tv.q, N = tv.size();
    Rational c = bridge_constant(tv);
    GaugeSplit split = gauge_reduce(G, q);
    DualityResult res{tv, TimeVector{q, p, std::vector<Scalar>(static_cast<std::size_t>(N)), dual_family(tv.family)}, split.dropped, Route::inversion};
    for (long k = 1; k <= N; ++k) {
        Scalar g = split.reduced.coefficient(Rational(k - q, q));
        res.target.t[k - 1] = g * (Rational(-q) / (c * Rational(k)));
    }
    return res;
}

inline DualityResult dualize_inversion(const TimeVector &tv, SeriesOrder order)
{
    return times_from_inverse(tv, inverse_series(tv, order));
}

inline DualityResult dualize_fkn(const TimeVector &tv)
{
    require_coprime(tv.p, tv.q);
    long p = tv.p, q = tv.q, N = tv.size();
    NormalizedCoeffs a = normalized_coeffs(tv);
    NormalizedCoeffs ahat{q, p, std::vector<Scalar>(static_cast<std::size_t>(N - 1))};
    for (long n = 1; n < N; ++n) {
        ahat.a[n - 1] = fkn_coefficient(q, p, a, n);
    }
    Rational top = Rational(-q, p) * rational_top(tv);
    DualityResult res{tv, coeffs_to_times(ahat, top, dual_family(tv.family)), PuiseuxSeries("s", q), Route::fkn};
    return res;
}

inline DualityResult dualize_times(const TimeVector &tv, Route route = Route::inversion, std::optional<long> depth = std::nullopt)
{
    time_vector_check(tv);
    require_coprime(tv.p, tv.q);
    SeriesOrder order{depth.value_or(default_depth(tv.p, tv.q))};
    if (route == Route::inversion) {
        return dualize_inversion(tv, order);
    }
    if (route == Route::fkn) {
        return dualize_fkn(tv);
    }
    DualityResult inv = dualize_inversion(tv, order);
    DualityResult fk = dualize_fkn(tv);
    if (!(inv.target == fk.target)) {
        throw domain_error("inversion and closed-form routes disagree");
    }
    inv.route = Route::both;
    return inv;
}

// t_(N-1) = 0 = t̂_(N-1) and t_N = p/N.
inline bool standard_normalization(const DualityResult &r)
{
    long N = r.source.size();
    return r.source.at(N - 1).is_zero() && r.target.at(N - 1).is_zero() && r.source.top() == Scalar(Rational(r.source.p, N));
}

// Largest nonzero exponent of (c f_1)^-1 - c f_2 and (c f_2)^-1 - c f_1 outside the
// gauge ideal; nullopt when both differences lie in it on the trusted window.
inline std::optional<Rational> inverse_defect(const DualityResult &r, SeriesOrder order)
{
    Rational c = bridge_constant(r.source);
    PuiseuxSeries F1 = ps_scale(times_to_f(r.source, Role::first), Scalar(c));
    PuiseuxSeries F2 = ps_scale(times_to_f(r.target, Role::second), Scalar(c));
    auto check = [](const PuiseuxSeries &inv, const PuiseuxSeries &other, long ram) -> std::optional<Rational> {
        GaugeSplit s = gauge_reduce(ps_sub(inv, other), ram);
        if (!s.reduced.exact()) {
            throw window_error("inverse not computed deep enough to reach the gauge ideal");
        }
        if (s.reduced.is_zero()) {
            return std::nullopt;
        }
        return s.reduced.leading_exponent();
    };
    if (auto d = check(ps_comp_inverse(F1, r.source.q, order), F2, r.source.q)) {
        return d;
    }
    return check(ps_comp_inverse(F2, r.source.p, order), F1, r.source.p);
}

// H with phi = p z^(p-1) H(z^p), in s.
inline PuiseuxSeries nf_to_H(const NormalFormConnection &nf)
{
    long p = nf.ram;
    if (p < 1) {
        throw input_error("push-forward index must be positive");
    }
    const PuiseuxSeries &phi = nf.phi;
    long r = phi.ram();
    PuiseuxSeries H("s", p * r);
    for (const auto &[k, c] : phi.terms()) {
        H.set(k - (p - 1) * r, c * Rational(1, p));
    }
    if (!phi.exact()) {
        H.truncate_below(phi.lo() - (p - 1) * r);
    }
    H.tighten();
    return H.normalized();
}

inline NormalFormConnection H_to_nf(const PuiseuxSeries &H, long p)
{
    PuiseuxSeries phi = ps_mul(PuiseuxSeries::monomial("z", Scalar(p), p - 1), substitute_power(H, p));
    return NormalFormConnection{p, phi};
}

// (-H_irreg)^-1 in ramification q, not yet gauge-reduced.
inline PuiseuxSeries local_fourier_inverse(const PuiseuxSeries &H, long q, SeriesOrder order)
{
    PuiseuxSeries Hn = H.normalized();
    if (Hn.is_zero() || Hn.leading_exponent().sign() <= 0) {
        throw slope_error("local Fourier transform needs slope > 1 (H with positive leading exponent)");
    }
    PuiseuxSeries minus = ps_neg(Hn);
    GaugeSplit parts = gauge_reduce(minus, Hn.ram());
    return ps_comp_inverse(parts.reduced, q, order);
}

// d/dz + p z^(p-1) H  |->  d/dz + q z^(q-1) (-H)^-1, irregular part.
inline NormalFormConnection local_fourier_normal_form(const NormalFormConnection &nf, long q_target, std::optional<long> depth = std::nullopt)
{
    if (q_target < 1) {
        throw input_error("target push-forward index must be positive");
    }
    PuiseuxSeries H = nf_to_H(nf);
    SeriesOrder order{depth.value_or(2 * (nf.ram + q_target))};
    PuiseuxSeries G = local_fourier_inverse(H, q_target, order);
    GaugeSplit split = gauge_reduce(G, q_target);
    return H_to_nf(split.reduced, q_target);
}

// coeff * exp(2 pi i phase) * z^exponent
struct PhasedTerm {
    Rational exponent;
    Scalar coeff;
    Rational phase;

    friend bool operator==(const PhasedTerm &, const PhasedTerm &) = default;
};

inline Rational phase_mod1(const Rational &t)
{
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.num().get_mpz_t(), t.den().get_mpz_t());
    return t - Rational(fl, mpz_class(1));
}

// Negative rational coefficients fold their sign into the phase.
inline PhasedTerm canonical_term(PhasedTerm t)
{
    if (t.coeff.is_constant() && t.coeff.constant().sign() < 0) {
        t.coeff = -t.coeff;
        t.phase += Rational(1, 2);
    }
    t.phase = phase_mod1(t.phase);
    return t;
}

struct PhasedConnection {
    long ram = 1;
    std::vector<PhasedTerm> terms; // descending exponents, canonical

    bool rational() const
    {
        for (const auto &t : terms) {
            if (!t.phase.is_zero() && t.phase != Rational(1, 2)) {
                return false;
            }
        }
        return true;
    }

    NormalFormConnection to_connection() const
    {
        long R = 1;
        for (const auto &t : terms) {
            if (!t.phase.is_zero() && t.phase != Rational(1, 2)) {
                throw branch_error("connection has coefficients outside the rationals");
            }
            R = lcm_long(R, t.exponent.den().get_si());
        }
        PuiseuxSeries phi("z", R);
        for (const auto &t : terms) {
            Rational key = t.exponent * Rational(R);
            phi.add(key.num().get_si(), t.phase.is_zero() ? t.coeff : -t.coeff);
        }
        phi.tighten();
        return NormalFormConnection{ram, phi.normalized()};
    }

    friend bool operator==(const PhasedConnection &, const PhasedConnection &) = default;
};

inline PhasedConnection to_phased(const NormalFormConnection &nf)
{
    PhasedConnection pc{nf.ram, {}};
    if (!nf.phi.exact()) {
        throw window_error("phased form needs an exact connection datum");
    }
    const auto &ts = nf.phi.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        pc.terms.push_back(canonical_term({Rational(it->first, nf.phi.ram()), it->second, Rational(0)}));
    }
    return pc;
}

// phi(z) -> zeta phi(zeta z), zeta = exp(i pi/p): exponent m gains phase (m+1)/(2p).
inline PhasedConnection iota_twist(const NormalFormConnection &nf)
{
    PhasedConnection pc = to_phased(nf);
    for (auto &t : pc.terms) {
        t.phase += (t.exponent + Rational(1)) / Rational(2 * nf.ram);
        t = canonical_term(t);
    }
    return pc;
}

// Local Fourier transform on phased data. Rational data whose -H leads with a
// positive coefficient go through series inversion; otherwise a single irregular term
// is inverted in closed form on the principal branch (exp(2 pi i a))^b = exp(2 pi i a b),
// a taken in [0, 1).
inline PhasedConnection local_fourier_phased(const PhasedConnection &pc, long q_target, std::optional<long> depth = std::nullopt)
{
    std::vector<PhasedTerm> irr;
    for (const auto &t : pc.terms) {
        // phi exponent m is H exponent (m - p + 1)/p; irregular means > -1.
        if ((t.exponent - Rational(pc.ram - 1)) / Rational(pc.ram) > Rational(-1)) {
            irr.push_back(t);
        }
    }
    if (irr.empty()) {
        throw slope_error("local Fourier transform needs an irregular part");
    }
    if (pc.rational() && irr.front().phase == Rational(1, 2)) {
        return to_phased(local_fourier_normal_form(pc.to_connection(), q_target, depth));
    }
    if (irr.size() != 1) {
        throw shape_error("phased local Fourier transform supports a single irregular term");
    }
    const PhasedTerm &t = irr.front();
    long p = pc.ram;
    Rational a = (t.exponent - Rational(p - 1)) / Rational(p);
    if (a.sign() <= 0) {
        throw slope_error("local Fourier transform needs slope > 1");
    }
    if (!t.coeff.is_constant()) {
        throw leading_term_error("closed-form inversion needs a rational coefficient");
    }
    // -H = (c/p) w s^a with w = -exp(2 pi i theta); inverse (y / ((c/p) w))^(1/a).
    Rational mag = t.coeff.constant() / Rational(p);
    Rational w_phase = phase_mod1(t.phase + Rational(1, 2));
    Rational inv_a = a.inv();
    auto root = mag.pow_rational(-inv_a.num().get_si(), inv_a.den().get_si());
    if (!root || root->sign() < 0) {
        throw branch_error("coefficient " + mag.str() + " has no exact positive root");
    }
    Rational g_phase = phase_mod1(-w_phase) * inv_a;
    // phi' = q z^(q-1) G(z^q)
    PhasedTerm out = canonical_term({inv_a * Rational(q_target) + Rational(q_target - 1), Scalar(*root * Rational(q_target)), g_phase});
    return PhasedConnection{q_target, {out}};
}

struct CorrectionCase {
    bool case_i = false;
    bool case_ii = false;
    std::vector<long> specialize; // indices of times that may be specialized
};

// (1-q)/2 (N-1)/(qN) (t_(N-1)/t_N)^2 + (N-2)/(qN) t_(N-2)/t_N
inline Scalar correction_term(const TimeVector &tv)
{
    time_vector_check(tv);
    long q = tv.q, N = tv.size();
    Rational top = rational_top(tv);
    Scalar r1 = tv.at(N - 1) / top;
    Scalar out = r1 * r1 * (Rational(1 - q, 2) * Rational(N - 1, q * N));
    if (N >= 3) {
        out += tv.at(N - 2) * (Rational(N - 2, q * N) / top);
    }
    return out;
}

inline CorrectionCase correction_vanishing_case(long p, long q)
{
    require_coprime(p, q);
    CorrectionCase c;
    long N = p + q;
    if (q != 1 && (q - 1) % p == 0) {
        c.case_i = true;
        c.specialize.push_back(N - 1);
    }
    if ((q - 2) % p == 0 && N - 2 >= 1) {
        c.case_ii = true;
        c.specialize.push_back(N - 2);
    }
    return c;
}

} // namespace qcurve

#endif
