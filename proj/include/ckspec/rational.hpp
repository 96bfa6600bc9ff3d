#pragma once

// Exact rational and rational-complex arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ckspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
}

// Parses "n", "n/d" (optional sign on n). Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> BigInt {
        if (s.empty()) throw std::invalid_argument("empty integer");
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size()) throw std::invalid_argument("bad integer");
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer '" + std::string(s) + "'");
        BigInt v(std::string(s.substr(start)));
        return s[0] == '-' ? BigInt(-v) : v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

inline std::string to_string(const Rational& q) {
    if (denom(q) == 1) return numer(q).str();
    return numer(q).str() + "/" + denom(q).str();
}

inline Rational pow(const Rational& base, std::uint64_t e) {
    Rational result(1);
    Rational b = base;
    while (e) {
        if (e & 1U) result *= b;
        b *= b;
        e >>= 1U;
    }
    return result;
}

// Exact integer k-th root of a nonnegative integer, if one exists.
inline std::optional<BigInt> exact_root(const BigInt& n, unsigned k) {
    if (n < 0) return std::nullopt;
    if (n == 0 || n == 1 || k == 1) return n;
    // Binary search on [0, 2^(bits/k + 1)].
    const auto bits = boost::multiprecision::msb(n) + 1;
    BigInt lo = 0;
    BigInt hi = BigInt(1) << (bits / k + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, k) <= n) lo = mid;
        else hi = mid - 1;
    }
    if (boost::multiprecision::pow(lo, k) == n) return lo;
    return std::nullopt;
}

inline std::optional<Rational> exact_root(const Rational& q, unsigned k) {
    if (q < 0) return std::nullopt;
    auto n = exact_root(numer(q), k);
    auto d = exact_root(denom(q), k);
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    RationalComplex(int r) : re(r) {}  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
    // |z|^2, exact.
    [[nodiscard]] Rational norm() const { return re * re + im * im; }
    [[nodiscard]] RationalComplex conj() const { return {re, -im}; }

    friend bool operator==(const RationalComplex& a, const RationalComplex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
        const Rational n = b.norm();
        if (n == 0) throw std::domain_error("division by zero complex");
        const RationalComplex t = a * b.conj();
        return {t.re / n, t.im / n};
    }
    RationalComplex& operator*=(const RationalComplex& b) { return *this = *this * b; }
    RationalComplex& operator+=(const RationalComplex& b) { return *this = *this + b; }
    RationalComplex& operator-=(const RationalComplex& b) { return *this = *this - b; }
    RationalComplex& operator/=(const RationalComplex& b) { return *this = *this / b; }
};

inline RationalComplex pow(const RationalComplex& base, std::int64_t e) {
    if (e < 0) return RationalComplex(1) / pow(base, -e);
    RationalComplex result(1);
    RationalComplex b = base;
    auto u = static_cast<std::uint64_t>(e);
    while (u) {
        if (u & 1U) result *= b;
        b *= b;
        u >>= 1U;
    }
    return result;
}

// "re" when real, else "re+imi"-style text with exact fractions.
inline std::string to_string(const RationalComplex& z) {
    if (z.im == 0) return to_string(z.re);
    std::string s = z.re == 0 ? std::string() : to_string(z.re);
    if (z.im > 0 && !s.empty()) s += "+";
    if (z.im == 1) return s + "i";
    if (z.im == -1) return s + "-i";
    return s + to_string(z.im) + "i";
}

// Parses the command-line form "a/b,c/d" (imaginary part optional).
inline RationalComplex parse_complex(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) return {parse_rational(text), Rational(0)};
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

inline std::ostream& operator<<(std::ostream& os, const RationalComplex& z) { return os << to_string(z); }

}  // namespace ckspec
