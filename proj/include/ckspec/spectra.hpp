#pragma once

// Spectrum, semi-Fredholm data and the five essential spectra of
// T f = w (f o phi) on C(K) for a compactified orbit system.
//
// Notation used throughout:
//   sigma2      lambda I - T is not upper semi-Fredholm
//   sigma2_dual lambda I - T is not lower semi-Fredholm   (sigma_2(T'))
//   sigma1 = sigma2 n sigma2_dual, sigma3 = sigma2 u sigma2_dual,
//   sigma4 = Weyl spectrum, sigma5 = Browder spectrum.

#include "ckspec/model.hpp"
#include "ckspec/radialset.hpp"

#include <numeric>

namespace ckspec {

enum class SpectraErrc { LambdaZero, InternalInconsistency };

class SpectraError : public std::runtime_error {
public:
    SpectraError(SpectraErrc code, const std::string& what)
        : std::runtime_error(std::string(code == SpectraErrc::LambdaZero ? "LambdaZero" : "InternalInconsistency") + ": " + what),
          code_(code) {}
    [[nodiscard]] SpectraErrc code() const { return code_; }

private:
    SpectraErrc code_;
};

// A dimension that may be infinite.
struct Count {
    bool infinite{false};
    std::uint64_t value{0};

    static Count finite(std::uint64_t v) { return {false, v}; }
    static Count inf() { return {true, 0}; }
    static Count from(const std::optional<std::uint64_t>& v) { return v ? finite(*v) : inf(); }

    friend Count operator+(Count a, Count b) {
        if (a.infinite || b.infinite) return inf();
        return finite(a.value + b.value);
    }
    friend bool operator==(const Count&, const Count&) = default;
    [[nodiscard]] std::string str() const { return infinite ? "INFINITE" : std::to_string(value); }
};

// Semi-Fredholm data of lambda I - T. `defect` is dim ker(lambda I - T'),
// the codimension of the closure of the range; it equals def(lambda I - T)
// whenever the range is closed.
struct FredholmData {
    RationalComplex lambda;
    bool upper{false};
    bool lower{false};
    Count dim_ker;
    Count defect;
    std::optional<std::int64_t> index;  // set iff upper && lower

    [[nodiscard]] bool fredholm() const { return upper && lower; }
    [[nodiscard]] bool invertible() const { return fredholm() && dim_ker == Count::finite(0) && defect == Count::finite(0); }
};

// ---------------------------------------------------------------------------
// Spectrum

// sigma(T, C(M)): the closed disk of radius rho(T, C(M)), or {0}.
inline RadialSet sigma_M(const ValidatedModel& m) {
    std::optional<ExactRadius> radius;
    for (std::size_t c = 0; c < m.cycle_count(); ++c)
        if (m.in_N(c) && (!radius || *radius < m.gm(c))) radius = m.gm(c);
    return RadialSet::disk(*radius);
}

// sigma(T, C(L)): a cycle without two-sided rays contributes its root set
// {z^p = W}; a component joined by two-sided rays contributes the annulus
// spanned by its geometric means.
inline RadialSet sigma_L(const ValidatedModel& m, const CoreSets& cs) {
    std::vector<Annulus> annuli;
    std::vector<RootSet> roots;
    for (const auto& comp : cs.L_components) {
        if (comp.two_sided_rays.empty()) {
            for (std::size_t c : comp.cycles) roots.push_back({m.product(c), m.period(c)});
            continue;
        }
        ExactRadius lo = m.gm(comp.cycles.front()), hi = lo;
        for (std::size_t c : comp.cycles) {
            lo = std::min(lo, m.gm(c));
            hi = std::max(hi, m.gm(c));
        }
        annuli.push_back({lo, hi});
    }
    return RadialSet::canonicalize(std::move(annuli), std::move(roots));
}

inline RadialSet sigma_L(const ValidatedModel& m) { return sigma_L(m, core_sets(m)); }

inline RadialSet sigma_total(const ValidatedModel& m) { return unite(sigma_M(m), sigma_L(m)); }

// ---------------------------------------------------------------------------
// Fredholm data at lambda != 0

namespace detail {

// f_c with f_c(0) = 1 solving w(c_j) f(c_{j+1}) = lambda f(c_j) on an eigen-cycle.
inline RationalComplex eigenvector_at(const ValidatedModel& m, std::size_t c, const RationalComplex& lambda, std::uint64_t phase) {
    RationalComplex f(1);
    for (std::uint64_t j = 0; j < phase; ++j) f = f * lambda / m.cycle(c).weights[j];
    return f;
}

// kappa with s_alpha = kappa s_omega for the eigenfunction carried by a
// two-sided ray whose two end cycles both have lambda as an eigenvalue.
// Each exceptional weight changes the ratio between the ray values and the
// phase-locked eigenvector by locked/actual.
inline RationalComplex link_ratio(const ValidatedModel& m, std::size_t r, const RationalComplex& lambda) {
    const Ray& ry = m.ray(r);
    const std::size_t a = m.alpha_cycle(r), o = m.omega_cycle(r);
    RationalComplex t = RationalComplex(1) / eigenvector_at(m, o, lambda, ry.omega.phase);
    RationalComplex t_back = RationalComplex(1) / eigenvector_at(m, a, lambda, ry.alpha->phase);
    for (const auto& ov : ry.exceptional) {
        const RationalComplex ratio = m.locked_weight(r, ov.index) / ov.weight;
        if (ov.index >= 0) t *= ratio;
        else t_back /= ratio;
    }
    return t_back / t;
}

// Number of independent eigenfunctions carried by cycles with lambda^p = W.
// Two-sided rays either leave such a cycle free, force its amplitude to zero,
// or tie the amplitudes of their two end cycles together.
inline std::uint64_t eigencycle_kernel(const ValidatedModel& m, const RationalComplex& lambda) {
    const std::size_t nc = m.cycle_count();
    const ExactRadius modulus = ExactRadius::modulus(lambda);
    std::vector<bool> eigen(nc);
    for (std::size_t c = 0; c < nc; ++c) eigen[c] = pow(lambda, static_cast<std::int64_t>(m.period(c))) == m.product(c);

    std::vector<std::size_t> parent(nc);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<RationalComplex> rel(nc, RationalComplex(1));  // s_x = rel[x] * s_parent
    std::vector<bool> killed(nc, false);
    auto find = [&](std::size_t x) {
        RationalComplex acc(1);
        while (parent[x] != x) {
            acc *= rel[x];
            x = parent[x];
        }
        return std::pair{x, acc};
    };
    auto kill = [&](std::size_t c) { killed[find(c).first] = true; };
    auto link = [&](std::size_t a, std::size_t o, const RationalComplex& kappa) {
        auto [ra, rel_a] = find(a);
        auto [ro, rel_o] = find(o);
        if (ra == ro) {
            if (rel_a != kappa * rel_o) killed[ra] = true;
            return;
        }
        parent[ra] = ro;
        rel[ra] = kappa * rel_o / rel_a;
        killed[ro] = killed[ro] || killed[ra];
    };

    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (m.is_forward(r)) continue;
        const std::size_t a = m.alpha_cycle(r), o = m.omega_cycle(r);
        if (eigen[a]) {
            const auto cmp = m.gm(o) <=> modulus;
            if (cmp < 0) kill(a);
            else if (cmp == 0) {
                if (eigen[o]) link(a, o, link_ratio(m, r, lambda));
                else kill(a);
            }
        }
        if (eigen[o]) {
            const auto cmp = m.gm(a) <=> modulus;
            if (cmp > 0) kill(o);
            else if (cmp == 0 && !eigen[a]) kill(o);
        }
    }
    std::uint64_t count = 0;
    for (std::size_t c = 0; c < nc; ++c)
        if (eigen[c] && parent[c] == c && !killed[c]) ++count;
    return count;
}

}  // namespace detail

// Semi-Fredholm data of lambda I - T for lambda != 0.
inline FredholmData fredholm_data(const ValidatedModel& m, const RationalComplex& lambda) {
    if (lambda.is_zero()) throw SpectraError(SpectraErrc::LambdaZero, "use zero_analysis for lambda = 0");
    const ExactRadius modulus = ExactRadius::modulus(lambda);
    FredholmData fd;
    fd.lambda = lambda;
    fd.upper = true;
    fd.lower = true;

    for (std::size_t c = 0; c < m.cycle_count(); ++c) {
        // Circles through non-isolated cycles are spread into both semi-Fredholm spectra.
        if ((m.in_N(c) || m.has_two_sided(c)) && m.gm(c) == modulus) fd.upper = fd.lower = false;
        // A cluster of growth > |lambda| with infinitely many sources has an infinite kernel.
        if (m.in_N(c) && modulus < m.gm(c)) {
            for (std::size_t r : m.forward_rays_into(c))
                if (m.ray(r).multiplicity.omega) fd.upper = false;
        }
    }

    Count ker = Count::finite(detail::eigencycle_kernel(m, lambda));
    Count def = Count::finite(0);
    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        const ExactRadius omega_gm = m.gm(m.omega_cycle(r));
        if (m.is_forward(r)) {
            // card(M_2 \ phi(M_2)): heads of rays landing on clusters of growth > |lambda|
            if (modulus < omega_gm) {
                const auto& mult = m.ray(r).multiplicity;
                ker = ker + (mult.omega ? Count::inf() : Count::finite(mult.count));
            }
            continue;
        }
        const ExactRadius alpha_gm = m.gm(m.alpha_cycle(r));
        if (alpha_gm < modulus && modulus < omega_gm) ker = ker + Count::finite(1);
        if (omega_gm < modulus && modulus < alpha_gm) def = def + Count::finite(1);
    }
    for (std::size_t c = 0; c < m.cycle_count(); ++c)
        if (pow(lambda, static_cast<std::int64_t>(m.period(c))) == m.product(c)) def = def + Count::finite(1);

    fd.dim_ker = ker;
    fd.defect = def;
    if (fd.upper && fd.lower) {
        if (ker.infinite || def.infinite)
            throw SpectraError(SpectraErrc::InternalInconsistency, "Fredholm point with infinite dimension");
        fd.index = static_cast<std::int64_t>(ker.value) - static_cast<std::int64_t>(def.value);
    }
    return fd;
}

// ---------------------------------------------------------------------------
// lambda = 0

struct ZeroReport {
    bool upper{false};
    bool lower{false};
    Count dim_ker;
    Count defect;
    std::optional<std::int64_t> index;
    Count card_sources;       // card(K \ phi(K))
    Count card_zeros;         // card Z(w)
    bool zeros_isolated{true};
    bool zero_in_sigma5{true};
    // The closed-form count card((K \ phi(K)) u Z(w)) and the Weyl criterion
    // "Fredholm and w == 0 on K \ phi(K)". They differ from the exact kernel
    // count card(K \ phi(K)) + card Z(w) only when a source is itself a zero.
    Count union_formula_dim_ker;
    bool weyl_criterion_w_vanishes_on_sources{false};

    [[nodiscard]] bool fredholm() const { return upper && lower; }
    [[nodiscard]] bool weyl() const { return fredholm() && index == 0; }
};

inline ZeroReport zero_analysis(const ValidatedModel& m, const CoreSets& cs) {
    ZeroReport z;
    z.zeros_isolated = cs.zeros_all_isolated();
    z.card_sources = Count::from(cs.source_count());
    z.card_zeros = Count::from(cs.zero_count());
    z.upper = z.zeros_isolated && !cs.sources_infinite;
    z.lower = z.zeros_isolated;
    // Tf = 0 iff f vanishes on phi(K \ Z(w)), i.e. supp f lies in (K \ phi(K)) u phi(Z(w)).
    z.dim_ker = z.card_sources + z.card_zeros;
    // T'mu = 0 iff supp mu lies in Z(w).
    z.defect = z.card_zeros;
    if (z.fredholm()) z.index = static_cast<std::int64_t>(z.dim_ker.value) - static_cast<std::int64_t>(z.defect.value);

    std::uint64_t zero_sources = 0;
    bool all_sources_zero = !cs.sources_infinite;
    for (const auto& s : cs.sources) {
        if (m.ray_weight(s.ray, s.copy, 0).is_zero()) ++zero_sources;
        else all_sources_zero = false;
    }
    z.union_formula_dim_ker = z.dim_ker.infinite ? Count::inf() : Count::finite(z.dim_ker.value - zero_sources);
    z.weyl_criterion_w_vanishes_on_sources = z.fredholm() && all_sources_zero;
    z.zero_in_sigma5 = true;
    return z;
}

inline ZeroReport zero_analysis(const ValidatedModel& m) { return zero_analysis(m, core_sets(m)); }

// ---------------------------------------------------------------------------
// Sampling

// Rational points on the circle |z| = r: up to two, or none when r^2 is irrational
// or not a sum of two rational squares within the search bound.
inline std::vector<RationalComplex> rational_points_on_circle(const ExactRadius& r) {
    auto t = exact_root(r.sq(), static_cast<unsigned>(r.p()));  // r^2
    if (!t) return {};
    const RationalComplex rotate(Rational(3, 5), Rational(4, 5));
    if (*t == 0) return {RationalComplex(0)};
    if (auto s = exact_root(*t, 2)) return {RationalComplex(*s), RationalComplex(*s) * rotate};
    // x^2 + y^2 = a/b  <=>  X^2 + Y^2 = a b with x = X/b, y = Y/b
    const BigInt ab = numer(*t) * denom(*t);
    if (ab > BigInt(100000000)) return {};
    const auto limit = static_cast<long long>(std::sqrt(ab.convert_to<double>())) + 1;
    for (long long x = 1; x <= limit; ++x) {
        const BigInt rest = ab - BigInt(x) * x;
        if (rest <= 0) break;
        if (auto y = exact_root(rest, 2)) {
            const RationalComplex z(Rational(BigInt(x), denom(*t)), Rational(*y, denom(*t)));
            return {z, z * rotate};
        }
    }
    return {};
}

// Rational solutions of z^p = W found among +-r, +-ir with r = |W|^(1/p).
inline std::vector<RationalComplex> rational_roots(const RationalComplex& w, std::uint64_t p) {
    std::vector<RationalComplex> out;
    if (w.is_zero()) return {RationalComplex(0)};
    auto modulus = ExactRadius::geometric_mean(w, p).as_rational();
    if (!modulus) return out;
    for (const RationalComplex& unit : {RationalComplex(1), RationalComplex(-1), RationalComplex(0, 1), RationalComplex(0, -1)}) {
        const RationalComplex z = unit * *modulus;
        if (pow(z, static_cast<std::int64_t>(p)) == w) out.push_back(z);
    }
    return out;
}

struct LambdaSample {
    enum class Kind { stratum, circle, root, zero };
    Kind kind{Kind::stratum};
    RationalComplex lambda;
};

// Critical radii {0} u {gm of every cycle}, sorted and deduplicated.
inline std::vector<ExactRadius> critical_radii(const ValidatedModel& m) {
    std::vector<ExactRadius> radii{ExactRadius::zero()};
    for (std::size_t c = 0; c < m.cycle_count(); ++c) radii.push_back(m.gm(c));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    return radii;
}

// One rational sample per open stratum between consecutive critical radii
// (and beyond the last), two rational angles on every critical circle that
// has rational points, every rational root of every cycle, and 0.
inline std::vector<LambdaSample> sample_lambdas(const ValidatedModel& m) {
    std::vector<LambdaSample> out;
    const auto radii = critical_radii(m);
    const RationalComplex rotate(Rational(3, 5), Rational(4, 5));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const std::optional<ExactRadius> hi = i + 1 < radii.size() ? std::optional(radii[i + 1]) : std::nullopt;
        const Rational s = rational_between(radii[i], hi);
        out.push_back({LambdaSample::Kind::stratum, RationalComplex(s) * rotate});
        if (!radii[i].is_zero())
            for (const auto& z : rational_points_on_circle(radii[i])) out.push_back({LambdaSample::Kind::circle, z});
    }
    for (std::size_t c = 0; c < m.cycle_count(); ++c)
        for (const auto& z : rational_roots(m.product(c), m.period(c)))
            if (!z.is_zero()) out.push_back({LambdaSample::Kind::root, z});
    out.push_back({LambdaSample::Kind::zero, RationalComplex(0)});
    return out;
}

// ---------------------------------------------------------------------------
// Essential spectra

struct Stratum {
    Gap gap;  // component of C \ sigma3
    std::int64_t index{0};
};

struct SpectralReport {
    RadialSet sigma;
    RadialSet sigma1, sigma2, sigma3, sigma4, sigma5;
    RadialSet sigma2_dual;
    RadialSet sigma_M, sigma_L;
    bool rotation_invariant{false};
    bool no_isolated_periodic_points{false};  // hypothesis giving sigma5 = sigma
    bool no_isolated_points{false};           // hypothesis giving sigma3 = sigma
    ZeroReport zero_report;
    std::vector<Stratum> fredholm_strata;
    std::vector<ExactRadius> critical;
};

// Essential radius: the common largest modulus of sigma1..sigma5.
inline std::optional<ExactRadius> essential_radius(const RadialSet& s) { return s.max_radius(); }

namespace detail {

inline std::int64_t index_in_gap(const ValidatedModel& m, const Gap& g, const ZeroReport& zero) {
    const Rational s = rational_between(g.lo.value_or(ExactRadius::zero()), g.hi);
    const FredholmData fd = fredholm_data(m, RationalComplex(s));
    if (!fd.index) throw SpectraError(SpectraErrc::InternalInconsistency, "non-Fredholm sample outside sigma3");
    if (!g.lo) {
        if (!zero.index || *zero.index != *fd.index)
            throw SpectraError(SpectraErrc::InternalInconsistency, "index at 0 differs from index near 0");
    }
    return *fd.index;
}

// Re-derives membership of lambda in each set from pointwise Fredholm data.
inline void recheck_point(const ValidatedModel& m, const SpectralReport& rep, const RationalComplex& lambda) {
    bool upper = false, lower = false, invertible = false, weyl = false;
    if (lambda.is_zero()) {
        const auto& z = rep.zero_report;
        upper = z.upper;
        lower = z.lower;
        invertible = z.fredholm() && z.dim_ker == Count::finite(0) && z.defect == Count::finite(0);
        weyl = z.weyl();
    } else {
        const FredholmData fd = fredholm_data(m, lambda);
        upper = fd.upper;
        lower = fd.lower;
        invertible = fd.invertible();
        weyl = fd.fredholm() && fd.index == 0;
    }
    auto check = [&](const RadialSet& s, bool expected, const char* name) {
        if (s.contains(lambda) != expected)
            throw SpectraError(SpectraErrc::InternalInconsistency,
                               std::string(name) + " membership of " + to_string(lambda) + " disagrees with pointwise Fredholm data");
    };
    check(rep.sigma2, !upper, "sigma2");
    check(rep.sigma2_dual, !lower, "sigma2_dual");
    check(rep.sigma1, !upper && !lower, "sigma1");
    check(rep.sigma3, !(upper && lower), "sigma3");
    check(rep.sigma4, !weyl, "sigma4");
    check(rep.sigma, !invertible, "sigma");
}

}  // namespace detail

inline SpectralReport essential_spectra(const ValidatedModel& m) {
    const CoreSets cs = core_sets(m);
    SpectralReport rep;
    rep.sigma_M = sigma_M(m);
    rep.sigma_L = sigma_L(m, cs);
    rep.sigma = unite(rep.sigma_M, rep.sigma_L);
    rep.zero_report = zero_analysis(m, cs);
    rep.critical = critical_radii(m);

    std::vector<Annulus> upper_fail, lower_fail;
    bool any_isolated = false;
    for (std::size_t c = 0; c < m.cycle_count(); ++c) {
        if (m.is_isolated(c)) {
            any_isolated = true;
            continue;
        }
        const ExactRadius g = m.gm(c);
        upper_fail.push_back({g, g});
        lower_fail.push_back({g, g});
        if (m.in_N(c)) {
            for (std::size_t r : m.forward_rays_into(c))
                if (m.ray(r).multiplicity.omega) upper_fail.push_back({ExactRadius::zero(), g});
        }
    }
    if (!rep.zero_report.upper) upper_fail.push_back({ExactRadius::zero(), ExactRadius::zero()});
    if (!rep.zero_report.lower) lower_fail.push_back({ExactRadius::zero(), ExactRadius::zero()});
    rep.sigma2 = RadialSet::canonicalize(std::move(upper_fail));
    rep.sigma2_dual = RadialSet::canonicalize(std::move(lower_fail));
    rep.sigma1 = intersect(rep.sigma2, rep.sigma2_dual);
    rep.sigma3 = unite(rep.sigma2, rep.sigma2_dual);

    // Weyl: add the closures of the Fredholm components with nonzero index.
    std::vector<Annulus> weyl = rep.sigma3.annuli();
    for (const Gap& g : rep.sigma3.complement_components()) {
        const std::int64_t idx = detail::index_in_gap(m, g, rep.zero_report);
        rep.fredholm_strata.push_back({g, idx});
        if (idx == 0) continue;
        if (!g.hi) throw SpectraError(SpectraErrc::InternalInconsistency, "nonzero index in the unbounded component");
        weyl.push_back(closure(g));
    }
    rep.sigma4 = RadialSet::canonicalize(std::move(weyl));

    // Browder: drop the components of C \ sigma1 that meet the resolvent set.
    std::vector<Annulus> kept = rep.sigma1.annuli();
    for (const Gap& g : rep.sigma1.complement_components())
        if (rep.sigma.covers(g)) kept.push_back(closure(g));
    rep.sigma5 = intersect(rep.sigma, RadialSet::canonicalize(std::move(kept), rep.sigma1.root_sets()));

    rep.no_isolated_periodic_points = !any_isolated;
    rep.rotation_invariant = !any_isolated;
    rep.no_isolated_points = m.ray_count() == 0;  // every ray point is isolated

    // Pointwise re-verification, one sample per stratum and on critical circles.
    for (const auto& sample : sample_lambdas(m)) detail::recheck_point(m, rep, sample.lambda);
    return rep;
}

}  // namespace ckspec
