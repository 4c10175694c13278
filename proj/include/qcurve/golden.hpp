#ifndef QCURVE_GOLDEN_HPP
#define QCURVE_GOLDEN_HPP

#include <map>

#include "poly.hpp"

namespace qcurve
{

// Reference 2-5 table: t_k as polynomials in t̂, normalized by t_7 = 5/7.
inline std::map<unsigned, Scalar> table_two_five()
{
    using R = Rational;
    auto th = [](unsigned k) { return Poly::symbol({Family::hat, k}); };
    std::map<unsigned, Scalar> m;
    m[1] = th(1) + R(5, 8) * th(5).pow(3) - R(27, 8) * th(5).pow(2) * th(6).pow(2) + R(567, 200) * th(5) * th(6).pow(4) +
           R(18, 5) * th(4) * th(5) * th(6) - R(3, 2) * th(3) * th(5) - R(15309, 25000) * th(6).pow(6) - R(54, 25) * th(4) * th(6).pow(3) +
           R(81, 50) * th(3) * th(6).pow(2) - R(6, 5) * th(2) * th(6) - R(4, 5) * th(4).pow(2);
    m[2] = th(2) + R(3) * th(5).pow(2) * th(6) - R(108, 25) * th(5) * th(6).pow(3) - R(2) * th(4) * th(5) + R(3888, 3125) * th(6).pow(5) +
           R(72, 25) * th(4) * th(6).pow(2) - R(9, 5) * th(3) * th(6);
    m[3] = th(3) - R(5, 4) * th(5).pow(2) - R(12, 5) * th(4) * th(6) + R(9, 2) * th(5) * th(6).pow(2) - R(189, 100) * th(6).pow(4);
    m[4] = th(4) - R(3) * th(5) * th(6) + R(54, 25) * th(6).pow(3);
    m[5] = th(5) - R(9, 5) * th(6).pow(2);
    m[6] = th(6);
    m[7] = th(7) * R(-5, 2);
    return m;
}

inline std::map<TimeSymbol, Poly> relabel(Family from, Family to, unsigned n)
{
    std::map<TimeSymbol, Poly> b;
    for (unsigned k = 1; k <= n; ++k) {
        b[{from, k}] = Poly::symbol({to, k});
    }
    return b;
}

} // namespace qcurve

#endif
