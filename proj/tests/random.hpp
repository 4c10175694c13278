#ifndef QCURVE_TEST_RANDOM_HPP
#define QCURVE_TEST_RANDOM_HPP

#include <random>

#include <qcurve/poly.hpp>

namespace qtest
{

inline std::mt19937_64 &rng()
{
    static std::mt19937_64 g(20240611);
    return g;
}

inline qcurve::Rational rand_rational(long nmax = 9, long dmax = 7)
{
    std::uniform_int_distribution<long> n(-nmax, nmax), d(1, dmax);
    return qcurve::Rational(n(rng()), d(rng()));
}

inline qcurve::Rational rand_nonzero(long nmax = 9, long dmax = 7)
{
    qcurve::Rational r;
    do {
        r = rand_rational(nmax, dmax);
    } while (r.is_zero());
    return r;
}

inline qcurve::Poly rand_poly(int nterms = 3, unsigned nsym = 3, unsigned maxexp = 2)
{
    std::uniform_int_distribution<unsigned> sym(1, nsym), ex(0, maxexp), fam(0, 1);
    qcurve::Poly p;
    for (int i = 0; i < nterms; ++i) {
        qcurve::Poly m(rand_rational());
        for (unsigned j = 0; j < 2; ++j) {
            qcurve::TimeSymbol s{fam(rng()) ? qcurve::Family::hat : qcurve::Family::plain, sym(rng())};
            m *= qcurve::Poly::symbol(s, ex(rng()));
        }
        p += m;
    }
    return p;
}

} // namespace qtest

#endif
