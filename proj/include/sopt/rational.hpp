// Exact rational scalars. All probabilities, state coordinates and effect
// functionals in this library are held as arbitrary-precision rationals;
// there is no floating point anywhere on a decision path.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "sopt/errors.hpp"

namespace sopt {

using Int = boost::multiprecision::cpp_int;

// Canonical form is maintained by the backend: denominator > 0 and
// gcd(|num|, den) = 1 after every operation; zero is 0/1.
using Rational = boost::multiprecision::cpp_rational;

using RVector = std::vector<Rational>;

inline Rational rat(long long num, long long den = 1) {
    return Rational(num, den);
}

// Serializes canonically: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

namespace detail {
inline bool is_integer_literal(std::string_view s) {
    if (!s.empty() && s.front() == '-') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return true;
}
}  // namespace detail

// Parses "p" or "p/q" with q > 0. Non-canonical inputs like "2/4" are
// accepted and reduced.
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!detail::is_integer_literal(num)) {
        throw ParseError("invalid rational literal: '" + std::string(text) + "'");
    }
    if (slash == std::string_view::npos) {
        return Rational(Int(std::string(num)));
    }
    std::string_view den = text.substr(slash + 1);
    if (!detail::is_integer_literal(den) || den.front() == '-') {
        throw ParseError("invalid rational literal: '" + std::string(text) + "'");
    }
    Int d{std::string(den)};
    if (d == 0) {
        throw ParseError("zero denominator in rational literal: '" + std::string(text) + "'");
    }
    return Rational(Int(std::string(num)), d);
}

inline std::string to_string(const RVector& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ", ";
        }
        s += to_string(v[i]);
    }
    s += ")";
    return s;
}

inline Rational sum(const RVector& v) {
    Rational s = 0;
    for (const auto& x : v) {
        s += x;
    }
    return s;
}

inline Rational dot(const RVector& a, const RVector& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: length mismatch");
    }
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

inline bool is_zero(const RVector& v) {
    for (const auto& x : v) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace sopt
