#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "mkcs/errors.hpp"

namespace mkcs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {
inline BigInt parse_bigint(const std::string& s) {
    if (s.empty()) throw InputError("empty integer token");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InputError("bad integer token '" + s + "'");
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw InputError("bad integer token '" + s + "'");
    return BigInt(s);
}
}  // namespace detail

// Accepts "7", "-3", "7/2" and exact decimals like "2.5". No floats/exponents.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw InputError("empty rational token");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = detail::parse_bigint(s.substr(0, slash));
        BigInt den = detail::parse_bigint(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (tail.empty()) throw InputError("bad decimal token '" + s + "'");
        bool neg = !head.empty() && head[0] == '-';
        BigInt ip = head.empty() || head == "-" || head == "+" ? BigInt(0)
                                                               : detail::parse_bigint(head);
        for (char c : tail)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InputError("bad decimal token '" + s + "'");
        BigInt frac(tail);
        BigInt den = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
        BigInt num = boost::multiprecision::abs(ip) * den + frac;
        if (neg) num = -num;
        return Rational(num, den);
    }
    return Rational(detail::parse_bigint(s));
}

// Canonical file form: always "num/den" (lowest terms, den > 0).
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Human form: integers without the "/1".
inline std::string display_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace mkcs
