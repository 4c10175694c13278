#include <gtest/gtest.h>

#include <qcurve/poly.hpp>

#include "random.hpp"

using namespace qcurve;

namespace
{

Poly T(unsigned i)
{
    return Poly::symbol({Family::plain, i});
}
Poly H(unsigned i)
{
    return Poly::symbol({Family::hat, i});
}

} // namespace

TEST(Rational, CanonicalForm)
{
    Rational r(6, -4);
    EXPECT_EQ(r.str(), "-3/2");
    EXPECT_EQ(r.den(), 2);
    EXPECT_EQ(Rational(0, -5).str(), "0");
    EXPECT_EQ(Rational::parse("-10/4"), Rational(-5, 2));
    EXPECT_EQ(Rational::parse(" 7 "), Rational(7));
    EXPECT_THROW(Rational::parse("1/0"), input_error);
    EXPECT_THROW(Rational::parse("x"), input_error);
}

TEST(Rational, Arithmetic)
{
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(3) * Rational(-108, 25), Rational(-324, 25));
    EXPECT_EQ(Rational(2, 3).pow(-2), Rational(9, 4));
    EXPECT_EQ(*Rational(-8, 27).root(3), Rational(-2, 3));
    EXPECT_FALSE(Rational(-4).root(2));
    EXPECT_FALSE(Rational(2).root(2));
    EXPECT_EQ(*Rational(4, 9).pow_rational(-3, 2), Rational(27, 8));
    EXPECT_EQ(binomial(Rational(1, 2), 2), Rational(-1, 8));
    EXPECT_EQ(binomial(Rational(5), 2), Rational(10));
}

TEST(Poly, ScalarExamples)
{
    EXPECT_EQ(H(6) + Poly(0), H(6));
    EXPECT_TRUE((Rational(-9, 5) * H(6).pow(2) + Rational(9, 5) * H(6).pow(2)).is_zero());
    Poly m = H(5) * H(6);
    ASSERT_EQ(m.terms().size(), 1u);
    EXPECT_EQ(m.terms().begin()->second, Rational(1));
    EXPECT_TRUE(((H(5) - Rational(9, 5) * H(6).pow(2)) * Poly(0)).is_zero());
    EXPECT_EQ(Poly(Rational(5, 7)), Poly(Rational(10, 14)));
    EXPECT_TRUE(Poly(Rational(5, 7)).is_constant());
}

TEST(Poly, Substitute)
{
    Poly p = H(5) - Rational(9, 5) * H(6).pow(2);
    std::map<TimeSymbol, Poly> b{{{Family::hat, 5}, Poly(1)}, {{Family::hat, 6}, Poly(1)}};
    EXPECT_EQ(p.substitute(b), Poly(Rational(-4, 5)));
    EXPECT_EQ(Poly(Rational(5, 7)).substitute(b), Poly(Rational(5, 7)));
    std::map<TimeSymbol, Poly> b2{{{Family::hat, 5}, Poly(2)}};
    EXPECT_EQ(H(6).substitute(b2), H(6));
}

TEST(Poly, RingAxiomsRandomized)
{
    for (int i = 0; i < 200; ++i) {
        Poly a = qtest::rand_poly(), b = qtest::rand_poly(), c = qtest::rand_poly();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(Poly, CanonicalizationIdempotent)
{
    for (int i = 0; i < 50; ++i) {
        Poly a = qtest::rand_poly(5);
        std::vector<std::pair<Monomial, Rational>> ts(a.terms().begin(), a.terms().end());
        std::reverse(ts.begin(), ts.end());
        EXPECT_EQ(Poly::from_terms(ts), a);
        for (const auto &[m, c] : a.terms()) {
            EXPECT_FALSE(c.is_zero());
            EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
        }
    }
}

TEST(Poly, SubstitutionIsHomomorphism)
{
    for (int i = 0; i < 100; ++i) {
        Poly a = qtest::rand_poly(), b = qtest::rand_poly(), c = qtest::rand_poly();
        std::map<TimeSymbol, Poly> bind;
        bind[{Family::plain, 1}] = Poly(qtest::rand_rational());
        bind[{Family::hat, 2}] = qtest::rand_poly(2);
        bind[{Family::plain, 3}] = T(2) + Poly(qtest::rand_rational());
        EXPECT_EQ((a * b + c).substitute(bind), a.substitute(bind) * b.substitute(bind) + c.substitute(bind));
    }
}

TEST(Poly, Rendering)
{
    EXPECT_EQ(TimeSymbol({Family::hat, 6}).str(), "that6");
    EXPECT_EQ(TimeSymbol::parse("that6"), (TimeSymbol{Family::hat, 6}));
    EXPECT_EQ(TimeSymbol::parse("t3"), (TimeSymbol{Family::plain, 3}));
    EXPECT_THROW(TimeSymbol::parse("x3"), input_error);
    EXPECT_EQ((H(5) - Rational(9, 5) * H(6).pow(2)).str(), "that5 - 9/5*that6^2");
}
