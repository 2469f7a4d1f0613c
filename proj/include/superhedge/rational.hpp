/**
 * Exact rational scalars and small dense vector helpers.
 *
 * Every quantity in the library (exchange rates, payoffs, probabilities,
 * portfolio holdings, polyhedron coordinates) is a GMP-backed rational.
 * Expression templates are switched off so that `auto` never captures a
 * dangling expression.
 */
#ifndef SUPERHEDGE_RATIONAL_HPP
#define SUPERHEDGE_RATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace superhedge {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Vec = std::vector<Rational>;

/// Parses "p/q", "p", or a plain decimal such as "0.25" (converted exactly).
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    try {
        if (auto dot = s.find('.'); dot != std::string::npos) {
            if (s.find('/') != std::string::npos)
                throw std::invalid_argument("mixed decimal/fraction");
            bool negative = s[0] == '-';
            std::string body = (negative || s[0] == '+') ? s.substr(1) : s;
            dot = body.find('.');
            std::string digits = body.substr(0, dot) + body.substr(dot + 1);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("bad decimal");
            Integer num(digits);
            Integer den = boost::multiprecision::pow(Integer(10),
                                                     static_cast<unsigned>(body.size() - dot - 1));
            Rational r(num, den);
            return negative ? Rational(-r) : r;
        }
        auto slash = s.find('/');
        auto check = [](const std::string& part) {
            std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
            if (part.size() == start ||
                part.find_first_not_of("0123456789", start) != std::string::npos)
                throw std::invalid_argument("bad integer");
        };
        if (slash == std::string::npos) {
            check(s);
            return Rational(Integer(s[0] == '+' ? s.substr(1) : s));
        }
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        check(num);
        check(den);
        Integer d(den[0] == '+' ? den.substr(1) : den);
        if (d == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
    }
}

/// "p/q" in lowest terms, or "p" for integers.
inline std::string to_string(const Rational& r)
{
    return r.str();
}

/// Decimal approximation with the given number of significant digits. Display only.
inline std::string to_decimal(const Rational& r, int significant = 6)
{
    std::ostringstream os;
    os << std::setprecision(significant) << r.convert_to<double>();
    return os.str();
}

inline Rational dot(const Vec& a, const Vec& b)
{
    Rational s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a[k].is_zero() && !b[k].is_zero())
            s += a[k] * b[k];
    return s;
}

inline Vec operator+(const Vec& a, const Vec& b)
{
    Vec r(a);
    for (std::size_t k = 0; k < a.size(); ++k)
        r[k] += b[k];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b)
{
    Vec r(a);
    for (std::size_t k = 0; k < a.size(); ++k)
        r[k] -= b[k];
    return r;
}

inline Vec operator-(const Vec& a)
{
    Vec r(a);
    for (auto& x : r)
        x = -x;
    return r;
}

inline Vec operator*(const Rational& s, const Vec& a)
{
    Vec r(a);
    for (auto& x : r)
        x *= s;
    return r;
}

inline bool is_zero(const Vec& a)
{
    return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.is_zero(); });
}

inline Vec unit_vector(std::size_t dim, std::size_t k)
{
    Vec e(dim, Rational(0));
    e[k] = 1;
    return e;
}

/// Positive multiple of `v` with coprime integer entries. Zero maps to zero.
inline Vec primitive(const Vec& v)
{
    Integer lcm = 1, g = 0;
    for (const auto& x : v)
        if (!x.is_zero())
            lcm = boost::multiprecision::lcm(lcm, Integer(boost::multiprecision::denominator(x)));
    for (const auto& x : v)
        if (!x.is_zero()) {
            Integer n = Integer(boost::multiprecision::numerator(x)) *
                        (lcm / Integer(boost::multiprecision::denominator(x)));
            g = boost::multiprecision::gcd(g, n);
        }
    if (g == 0)
        return v;
    if (g < 0)
        g = -g;
    Vec r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        r[k] = v[k] * Rational(lcm) / Rational(g);
    return r;
}

inline std::string to_string(const Vec& v)
{
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            s += ",";
        s += to_string(v[k]);
    }
    return s + ")";
}

} // namespace superhedge

#endif // SUPERHEDGE_RATIONAL_HPP
