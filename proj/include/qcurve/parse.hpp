#ifndef QCURVE_PARSE_HPP
#define QCURVE_PARSE_HPP

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "poly.hpp"

namespace qcurve
{

namespace detail
{

inline UPoly up_add(const UPoly &a, const UPoly &b, bool negate_b = false)
{
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        Scalar x = i < a.c.size() ? a.c[i] : Scalar(0);
        Scalar y = i < b.c.size() ? b.c[i] : Scalar(0);
        r.c[i] = negate_b ? x - y : x + y;
    }
    r.trim();
    return r;
}

inline UPoly up_mul(const UPoly &a, const UPoly &b)
{
    UPoly r;
    if (a.is_zero() || b.is_zero()) {
        return r;
    }
    r.c.resize(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            r.c[i + j] += a.c[i] * b.c[j];
        }
    }
    r.trim();
    return r;
}

// Recursive descent over + - * ^ ( ), rationals n/d, time symbols and u.
class ExprParser
{
public:
    ExprParser(std::string_view s, bool allow_u) : s_(s), allow_u_(allow_u) {}

    UPoly run()
    {
        UPoly v = expr();
        skip();
        if (i_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[i_]) + "'");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string &why) const
    {
        throw input_error("cannot parse '" + std::string(s_) + "': " + why);
    }
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
    }
    bool eat(char c)
    {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    std::string digits()
    {
        skip();
        std::size_t b = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
        if (b == i_) {
            fail("expected a number");
        }
        return std::string(s_.substr(b, i_ - b));
    }

    UPoly expr()
    {
        UPoly v = term();
        for (;;) {
            if (eat('+')) {
                v = up_add(v, term());
            } else if (eat('-')) {
                v = up_add(v, term(), true);
            } else {
                return v;
            }
        }
    }
    UPoly term()
    {
        UPoly v = unary();
        while (eat('*')) {
            v = up_mul(v, unary());
        }
        return v;
    }
    UPoly unary()
    {
        if (eat('-')) {
            return up_add(UPoly{}, unary(), true);
        }
        if (eat('+')) {
            return unary();
        }
        return power();
    }
    UPoly power()
    {
        UPoly base = primary();
        if (eat('^')) {
            std::string d = digits();
            if (d.size() > 4) {
                fail("exponent too large");
            }
            unsigned long e = std::stoul(d);
            UPoly r{{Scalar(1)}};
            for (unsigned long k = 0; k < e; ++k) {
                r = up_mul(r, base);
            }
            return r;
        }
        return base;
    }
    UPoly primary()
    {
        skip();
        if (i_ >= s_.size()) {
            fail("unexpected end");
        }
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            UPoly v = expr();
            if (!eat(')')) {
                fail("missing ')'");
            }
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string n = digits();
            std::size_t save = i_;
            if (eat('/')) {
                skip();
                if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                    return UPoly{{Scalar(Rational::parse(n + "/" + digits()))}};
                }
                i_ = save;
            }
            return UPoly{{Scalar(Rational::parse(n))}};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = i_;
            while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) {
                ++i_;
            }
            std::string_view name = s_.substr(b, i_ - b);
            if (name == "u") {
                if (!allow_u_) {
                    fail("'u' is not allowed here");
                }
                return UPoly{{Scalar(0), Scalar(1)}};
            }
            return UPoly{{Poly::symbol(TimeSymbol::parse(name))}};
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    bool allow_u_;
    std::size_t i_ = 0;
};

} // namespace detail

// Inverse of Poly::str().
inline Scalar parse_scalar(std::string_view s)
{
    UPoly v = detail::ExprParser(s, false).run();
    return v.is_zero() ? Scalar(0) : v.c[0];
}

// Inverse of UPoly::str().
inline UPoly parse_upoly(std::string_view s)
{
    UPoly v = detail::ExprParser(s, true).run();
    v.trim();
    return v;
}

} // namespace qcurve

#endif
