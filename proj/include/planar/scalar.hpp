#pragma once

// Scalar field contract used by the series algebra.
//
// Two instantiations are provided: exact rationals (GMP) and complex doubles.
// Generic code only talks to ScalarTraits<S>, never to the concrete type.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace planar {

using Rational = mpq_class;
using Complex = std::complex<double>;

inline constexpr double kDefaultRelTol = 1e-9;

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long v) { return Rational(v); }

    static bool is_zero(const Rational& a, double = 0.0) { return sgn(a) == 0; }
    static bool equal(const Rational& a, const Rational& b, double = 0.0) { return a == b; }
    static double abs(const Rational& a) { return std::fabs(a.get_d()); }
    static Complex to_complex(const Rational& a) { return {a.get_d(), 0.0}; }

    static std::string to_string(const Rational& a) { return a.get_str(); }

    // Accepts "p", "p/q", "-p/q"; canonicalizes.
    static Rational parse(std::string_view text) {
        std::string s(text);
        Rational r;
        if (s.empty() || r.set_str(s, 10) != 0) {
            throw std::invalid_argument("malformed rational: '" + s + "'");
        }
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
        r.canonicalize();
        return r;
    }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "complex";

    static Complex zero() { return {0.0, 0.0}; }
    static Complex one() { return {1.0, 0.0}; }
    static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }

    static bool is_zero(const Complex& a, double tol = kDefaultRelTol) { return std::abs(a) <= tol; }

    // Relative comparison with an absolute floor of `tol` near zero.
    static bool equal(const Complex& a, const Complex& b, double tol = kDefaultRelTol) {
        const double diff = std::abs(a - b);
        const double scale = std::max(std::abs(a), std::abs(b));
        return diff <= tol || diff <= tol * scale;
    }
    static double abs(const Complex& a) { return std::abs(a); }
    static Complex to_complex(const Complex& a) { return a; }

    static std::string to_string(const Complex& a) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "%.17g %.17g", a.real(), a.imag());
        return buf;
    }
};

// Integer power with 0^0 = 1.
template <typename S>
S pow_int(const S& base, int n) {
    if (n < 0) throw std::invalid_argument("pow_int: negative exponent");
    S result = ScalarTraits<S>::one();
    S b = base;
    while (n > 0) {
        if (n & 1) result *= b;
        n >>= 1;
        if (n > 0) b *= b;
    }
    return result;
}

// Powers base^0 .. base^n.
template <typename S>
std::vector<S> power_table(const S& base, int n) {
    std::vector<S> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(ScalarTraits<S>::one());
    for (int i = 1; i <= n; ++i) {
        S next = out.back() * base;
        out.push_back(std::move(next));
    }
    return out;
}

// Parses "1.5", "-2", "3+1i", "2-1.5i", "1i", "-i". Used by the CLI.
inline Complex parse_complex(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ') s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    auto to_double = [&](const std::string& part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed complex literal: '" + s + "'");
        }
        if (used != part.size()) throw std::invalid_argument("malformed complex literal: '" + s + "'");
        return v;
    };
    if (s.back() != 'i' && s.back() != 'j') {
        // A bare rational "p/q" is accepted as a real value.
        if (auto slash = s.find('/'); slash != std::string::npos) {
            return {ScalarTraits<Rational>::parse(s).get_d(), 0.0};
        }
        return {to_double(s), 0.0};
    }
    s.pop_back();
    // Split at the last sign that is not part of an exponent and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(s)};
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

}  // namespace planar
