#ifndef QCURVE_RATIONAL_HPP
#define QCURVE_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "errors.hpp"

namespace qcurve
{

// Exact rational number, always kept in lowest terms with a positive denominator.
class Rational
{
public:
    Rational() = default;
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(static_cast<long>(n)) {}
    Rational(long n, long d)
    {
        if (d == 0) {
            throw domain_error("rational with zero denominator");
        }
        v_ = mpq_class(mpz_class(n), mpz_class(d));
        v_.canonicalize();
    }
    Rational(const mpz_class &n, const mpz_class &d)
    {
        if (d == 0) {
            throw domain_error("rational with zero denominator");
        }
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class &q) : v_(q)
    {
        v_.canonicalize();
    }

    // Accepts "n", "-n", "n/d" with optional surrounding whitespace.
    static Rational parse(std::string_view s)
    {
        std::string str;
        for (char c : s) {
            if (c != ' ' && c != '\t') {
                str.push_back(c);
            }
        }
        if (str.empty()) {
            throw input_error("empty rational literal");
        }
        auto slash = str.find('/');
        auto valid_int = [](const std::string &t) {
            std::size_t i = 0;
            if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
                i = 1;
            }
            if (i >= t.size()) {
                return false;
            }
            for (; i < t.size(); ++i) {
                if (t[i] < '0' || t[i] > '9') {
                    return false;
                }
            }
            return true;
        };
        auto to_mpz = [](std::string t) {
            if (!t.empty() && t[0] == '+') {
                t.erase(0, 1);
            }
            return mpz_class(t, 10);
        };
        if (slash == std::string::npos) {
            if (!valid_int(str)) {
                throw input_error("bad rational literal '" + str + "'");
            }
            return Rational(to_mpz(str), mpz_class(1));
        }
        auto a = str.substr(0, slash), b = str.substr(slash + 1);
        if (!valid_int(a) || !valid_int(b)) {
            throw input_error("bad rational literal '" + str + "'");
        }
        mpz_class d = to_mpz(b);
        if (d == 0) {
            throw input_error("zero denominator in '" + str + "'");
        }
        return Rational(to_mpz(a), d);
    }

    mpz_class num() const
    {
        return v_.get_num();
    }
    mpz_class den() const
    {
        return v_.get_den();
    }
    const mpq_class &raw() const
    {
        return v_;
    }
    bool is_zero() const
    {
        return sgn(v_) == 0;
    }
    bool is_one() const
    {
        return v_ == 1;
    }
    bool is_integer() const
    {
        return v_.get_den() == 1;
    }
    int sign() const
    {
        return sgn(v_);
    }

    std::string str() const
    {
        return v_.get_str();
    }

    Rational operator-() const
    {
        return Rational(mpq_class(-v_));
    }
    Rational &operator+=(const Rational &o)
    {
        v_ += o.v_;
        return *this;
    }
    Rational &operator-=(const Rational &o)
    {
        v_ -= o.v_;
        return *this;
    }
    Rational &operator*=(const Rational &o)
    {
        v_ *= o.v_;
        return *this;
    }
    Rational &operator/=(const Rational &o)
    {
        if (o.is_zero()) {
            throw domain_error("division by zero");
        }
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational &b)
    {
        return a += b;
    }
    friend Rational operator-(Rational a, const Rational &b)
    {
        return a -= b;
    }
    friend Rational operator*(Rational a, const Rational &b)
    {
        return a *= b;
    }
    friend Rational operator/(Rational a, const Rational &b)
    {
        return a /= b;
    }
    friend bool operator==(const Rational &a, const Rational &b)
    {
        return a.v_ == b.v_;
    }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    friend std::ostream &operator<<(std::ostream &os, const Rational &r)
    {
        return os << r.str();
    }

    Rational inv() const
    {
        if (is_zero()) {
            throw domain_error("inverse of zero");
        }
        return Rational(mpq_class(1 / v_));
    }

    Rational pow(long e) const
    {
        mpz_class n = num(), d = den();
        if (e < 0) {
            if (is_zero()) {
                throw domain_error("negative power of zero");
            }
            std::swap(n, d);
            e = -e;
        }
        mpz_class rn, rd;
        mpz_pow_ui(rn.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(rd.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(e));
        return Rational(rn, rd);
    }

    // Exact b-th root in Q, if one exists. Negative inputs only for odd b.
    std::optional<Rational> root(unsigned long b) const
    {
        if (b == 0) {
            return std::nullopt;
        }
        if (b == 1 || is_zero()) {
            return *this;
        }
        mpz_class n = num(), d = den();
        bool neg = n < 0;
        if (neg) {
            if (b % 2 == 0) {
                return std::nullopt;
            }
            n = -n;
        }
        mpz_class rn, rd;
        if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), b) || !mpz_root(rd.get_mpz_t(), d.get_mpz_t(), b)) {
            return std::nullopt;
        }
        if (neg) {
            rn = -rn;
        }
        return Rational(rn, rd);
    }

    // r^(a/b) exactly, principal real branch; nullopt when it leaves Q.
    std::optional<Rational> pow_rational(long a, long b) const
    {
        if (b <= 0) {
            throw domain_error("non-positive root index");
        }
        auto r = root(static_cast<unsigned long>(b));
        if (!r) {
            return std::nullopt;
        }
        return r->pow(a);
    }

    std::size_t hash() const
    {
        return std::hash<std::string>{}(str());
    }

private:
    mpq_class v_{0};
};

// Generalized binomial coefficient C(e, n) for rational e.
inline Rational binomial(const Rational &e, long n)
{
    Rational r(1);
    for (long i = 0; i < n; ++i) {
        r *= (e - Rational(i)) / Rational(i + 1);
    }
    return r;
}

inline long gcd_long(long a, long b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b)
{
    return a / gcd_long(a, b) * b;
}

// Floor division for possibly negative numerators.
inline long floor_div(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

inline long ceil_div(long a, long b)
{
    return -floor_div(-a, b);
}

} // namespace qcurve

#endif
