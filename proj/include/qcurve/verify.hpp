#ifndef QCURVE_VERIFY_HPP
#define QCURVE_VERIFY_HPP

#include <string>
#include <vector>

#include "curve.hpp"
#include "duality.hpp"
#include "golden.hpp"
#include "psdo.hpp"

namespace qcurve
{

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckLine> lines;

    bool pass() const
    {
        for (const auto &l : lines) {
            if (!l.pass) {
                return false;
            }
        }
        return !lines.empty();
    }
};

// The (5,2) map at t_7 = 5/7, read with t and t̂ interchanged, against the reference
// table; the top line compares the two top times through the table's t_7 relation.
inline SuiteReport verify_fkn_25()
{
    SuiteReport rep{"fkn-25", {}};
    DualityResult r = dualize_times(symbolic_times(5, 2, Family::plain, Scalar(Rational(5, 7))), Route::both);
    auto table = table_two_five();
    auto swap = relabel(Family::plain, Family::hat, 7);
    for (unsigned k = 1; k <= 6; ++k) {
        Poly got = r.target.at(k).substitute(swap);
        bool ok = got == table[k];
        rep.lines.push_back({"t" + std::to_string(k), ok, "t" + std::to_string(k) + " = " + table[k].str()});
    }
    std::map<TimeSymbol, Poly> top{{TimeSymbol{Family::hat, 7}, r.target.top()}};
    bool ok = table[7].substitute(top) == r.source.top();
    rep.lines.push_back({"t7", ok, "t7 = " + table[7].str()});
    return rep;
}

inline SuiteReport verify_involution()
{
    SuiteReport rep{"involution", {}};
    for (auto [p, q] : {std::pair{2L, 5L}, {5L, 2L}, {3L, 2L}, {2L, 3L}, {1L, 4L}, {3L, 4L}}) {
        TimeVector tv = symbolic_times(p, q, Family::plain, Scalar(Rational(p, p + q)));
        DualityResult once = dualize_times(tv);
        DualityResult twice = dualize_times(once.target);
        std::string name = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
        rep.lines.push_back({name, twice.target == tv, "D(D(t)) = t for symbolic " + name + " times"});
    }
    return rep;
}

inline SuiteReport verify_psdo_root()
{
    SuiteReport rep{"psdo-root", {}};
    {
        PsDO L = psdo_root(airy_P(), 2, 7);
        auto px = [](std::vector<Rational> v) {
            std::vector<Scalar> s(v.begin(), v.end());
            return XSeries(s);
        };
        PsDO expect = PsDO::d(1);
        expect.add(-1, px({0, Rational(-1, 2)}));
        expect.add(-2, px({Rational(1, 4)}));
        expect.add(-3, px({0, 0, Rational(-1, 8)}));
        expect.add(-4, px({0, Rational(3, 8)}));
        expect.add(-5, px({Rational(-11, 32), 0, 0, Rational(-1, 16)}));
        expect.add(-6, px({0, 0, Rational(15, 32)}));
        expect.add(-7, px({0, Rational(-85, 64), 0, 0, Rational(-5, 128)}));
        rep.lines.push_back({"airy-coefficients", psdo_agree(L, expect), "sqrt(D^2 - x) = " + L.str()});
    }
    std::vector<std::pair<std::string, PsDO>> ops{{"airy", airy_P()}, {"cubic", PsDO::d(3) - PsDO::x()}};
    PsDO quartic = PsDO::d(4);
    quartic.add(2, XSeries(std::vector<Scalar>{Scalar(1), Scalar(Rational(1, 2))}));
    quartic.add(0, XSeries(std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(-3)}));
    ops.emplace_back("quartic", quartic);
    for (const auto &[name, P] : ops) {
        long p = P.order();
        PsDO L = psdo_root(P, p, 8 + p - 1);
        PsDO Lp = psdo_pow(L, static_cast<unsigned>(p), -8);
        rep.lines.push_back({name + "-power", psdo_agree(Lp, P, -8, 8), "L^" + std::to_string(p) + " = P down to D^-8"});
    }
    return rep;
}

inline std::vector<SuiteReport> run_suite(const std::string &suite)
{
    if (suite == "fkn-25") {
        return {verify_fkn_25()};
    }
    if (suite == "involution") {
        return {verify_involution()};
    }
    if (suite == "psdo-root") {
        return {verify_psdo_root()};
    }
    if (suite == "all") {
        return {verify_fkn_25(), verify_involution(), verify_psdo_root()};
    }
    throw input_error("unknown suite '" + suite + "'");
}

} // namespace qcurve

#endif
