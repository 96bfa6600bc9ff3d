#pragma once

// Exact radii of the form r = sq^(1/(2p)): geometric means of cycle weights
// and moduli of rational-complex points share this representation, so every
// radial comparison reduces to an integer power comparison.

#include "ckspec/rational.hpp"

#include <cmath>
#include <compare>
#include <string>

namespace ckspec {

class ExactRadius {
public:
    ExactRadius() = default;

    // r = sq^(1/(2p)); sq >= 0, p >= 1.
    ExactRadius(Rational sq, std::uint64_t p) : sq_(std::move(sq)), p_(p) {
        if (sq_ < 0) throw std::invalid_argument("ExactRadius: negative square");
        if (p_ == 0) throw std::invalid_argument("ExactRadius: zero root order");
    }

    static ExactRadius zero() { return {Rational(0), 1}; }
    // Radius |z|.
    static ExactRadius modulus(const RationalComplex& z) { return {z.norm(), 1}; }
    // Radius q for rational q >= 0.
    static ExactRadius of(const Rational& q) { return {q * q, 1}; }
    // |W|^(1/p): geometric mean of a period-p cycle with weight product W.
    static ExactRadius geometric_mean(const RationalComplex& product, std::uint64_t p) { return {product.norm(), p}; }

    [[nodiscard]] const Rational& sq() const { return sq_; }
    [[nodiscard]] std::uint64_t p() const { return p_; }
    [[nodiscard]] bool is_zero() const { return sq_ == 0; }

    friend std::strong_ordering operator<=>(const ExactRadius& a, const ExactRadius& b) {
        // sq_a^(1/2pa) vs sq_b^(1/2pb)  <=>  sq_a^pb vs sq_b^pa
        const Rational lhs = pow(a.sq_, b.p_);
        const Rational rhs = pow(b.sq_, a.p_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const ExactRadius& a, const ExactRadius& b) { return (a <=> b) == 0; }

    [[nodiscard]] double to_double() const {
        if (sq_ == 0) return 0.0;
        // log keeps large numerators/denominators in range
        const double l = (log_abs(numer(sq_)) - log_abs(denom(sq_))) / (2.0 * static_cast<double>(p_));
        return std::exp(l);
    }

    // The radius as an exact rational, when it is one.
    [[nodiscard]] std::optional<Rational> as_rational() const { return exact_root(sq_, static_cast<unsigned>(2 * p_)); }

    // Human-readable exact expression: "2", "8^(1/3)", "(1/2)^(1/2)".
    [[nodiscard]] std::string expression() const {
        if (auto r = as_rational()) return to_string(*r);
        auto wrap = [](const Rational& q) { return denom(q) == 1 ? to_string(q) : "(" + to_string(q) + ")"; };
        if (auto modulus = exact_root(sq_, 2)) {
            return wrap(*modulus) + "^(1/" + std::to_string(p_) + ")";
        }
        return wrap(sq_) + "^(1/" + std::to_string(2 * p_) + ")";
    }

private:
    static double log_abs(const BigInt& n) {
        // ln(n) via the top 53 bits
        const auto bits = boost::multiprecision::msb(n) + 1;
        if (bits <= 60) return std::log(n.convert_to<double>());
        const auto shift = bits - 60;
        const BigInt top = n >> shift;
        return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
    }

    Rational sq_{0};
    std::uint64_t p_{1};
};

// Some rational q with lo < q < hi (hi may be absent, meaning +infinity).
inline Rational rational_between(const ExactRadius& lo, const std::optional<ExactRadius>& hi) {
    if (!hi) {
        // first integer above lo, plus one
        Rational q(static_cast<long long>(std::floor(lo.to_double())) + 1);
        while (ExactRadius::of(q) <= lo) q += 1;
        return q;
    }
    if (*hi <= lo) throw std::invalid_argument("rational_between: empty interval");
    // Refine dyadic midpoints of the double approximations until one separates exactly.
    const double mid = 0.5 * (lo.to_double() + hi->to_double());
    for (int denom_bits = 1; denom_bits <= 64; ++denom_bits) {
        const BigInt den = BigInt(1) << denom_bits;
        const BigInt base(std::floor(std::ldexp(mid, denom_bits)));
        for (int delta : {0, 1, -1, 2, -2}) {
            const Rational q(base + delta, den);
            if (q < 0) continue;
            const ExactRadius r = ExactRadius::of(q);
            if (lo < r && r < *hi) return q;
        }
    }
    throw std::runtime_error("rational_between: radii too close to separate");
}

}  // namespace ckspec
