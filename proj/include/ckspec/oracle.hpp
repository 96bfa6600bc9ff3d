#pragma once

// Verification that does not go through the closed-form spectra.
//
// chain_kernel_dim / chain_defect_dim solve the eigen-equations
//   w(k) f(phi(k)) = lambda f(k)               (functions, continuity at the cycles)
//   a_k w(k) = lambda a_{phi(k)}, sum |a| < oo  (atomic measures, a = 0 at sources)
// by propagating values along every cycle and ray and then counting the free
// parameters of the resulting exact linear system.
//
// The certificates build explicit approximate eigenvectors on finite orbit
// segments (weighted orbit sums with coefficients (1 - 1/sqrt(n))^|i-n|) or
// check Neumann-series convergence for points of the resolvent set.

#include "ckspec/spectra.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace ckspec {

// ---------------------------------------------------------------------------
// Exact linear algebra

namespace detail {

// Rank of a dense matrix over Q(i), by Gaussian elimination.
inline std::size_t rank(std::vector<std::vector<RationalComplex>> rows, std::size_t cols) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col].is_zero()) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        const RationalComplex inv = RationalComplex(1) / rows[r][col];
        for (std::size_t j = col; j < cols; ++j) rows[r][j] *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col].is_zero()) continue;
            const RationalComplex f = rows[i][col];
            for (std::size_t j = col; j < cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

// Unknowns and homogeneous constraints of the kernel equation.
class ChainSystem {
public:
    std::size_t add_unknown() { return unknowns_++; }

    // sum coeff_j x_j = 0
    void constrain(std::vector<std::pair<std::size_t, RationalComplex>> terms) { rows_.push_back(std::move(terms)); }

    [[nodiscard]] std::uint64_t nullity() const {
        std::vector<std::vector<RationalComplex>> dense;
        for (const auto& row : rows_) {
            std::vector<RationalComplex> d(unknowns_);
            for (const auto& [j, c] : row) d[j] += c;
            dense.push_back(std::move(d));
        }
        return unknowns_ - rank(std::move(dense), unknowns_);
    }

private:
    std::size_t unknowns_{0};
    std::vector<std::vector<std::pair<std::size_t, RationalComplex>>> rows_;
};

struct CycleChain {
    bool eigen{false};
    std::vector<RationalComplex> values;  // eigenvector, values[0] = 1
    std::optional<std::size_t> unknown;
};

// Propagates f(c_{j+1}) = lambda f(c_j) / w_j around the cycle and checks closure.
inline CycleChain propagate_cycle(const Cycle& cy, const RationalComplex& lambda) {
    CycleChain out;
    RationalComplex f(1);
    for (const auto& w : cy.weights) {
        out.values.push_back(f);
        if (w.is_zero()) return {};  // lambda f(c_j) = 0 forces the whole cycle to vanish
        f = f * lambda / w;
    }
    out.eigen = f == RationalComplex(1);
    if (!out.eigen) out.values.clear();
    return out;
}

inline int compare_modulus_to_one(const RationalComplex& z) {
    const Rational n = z.norm();
    return n < 1 ? -1 : (n > 1 ? 1 : 0);
}

// Adds the continuity condition at one end of a ray: the chain value g at a
// phase-locked index (g = coeff * x) must converge to s_c f_c(phase).
// `growth` is the ratio of g over one full period further out along the tail.
inline void end_condition(ChainSystem& sys, std::size_t x, const RationalComplex& coeff, const RationalComplex& growth,
                          const CycleChain& cyc, std::uint64_t phase) {
    const int cmp = compare_modulus_to_one(growth);
    if (cmp < 0) return;  // decays; the cycle value must be 0, which it is unless eigen (then |growth| = 1)
    if (cmp == 0 && cyc.eigen && growth == RationalComplex(1)) {
        sys.constrain({{x, coeff / cyc.values[phase]}, {*cyc.unknown, RationalComplex(-1)}});
        return;
    }
    sys.constrain({{x, RationalComplex(1)}});
}

}  // namespace detail

enum class ChainScope { whole, L_only };

// dim ker(lambda I - T), computed by chain propagation.
inline Count chain_kernel_dim(const ValidatedModel& m, const RationalComplex& lambda, ChainScope scope = ChainScope::whole) {
    const bool with_forward = scope == ChainScope::whole;
    if (lambda.is_zero()) {
        // Tf = 0 leaves f free exactly at points with no preimage or whose preimage is a zero of w.
        std::uint64_t free_points = 0;
        for (std::size_t c = 0; c < m.cycle_count(); ++c)
            for (const auto& w : m.cycle(c).weights)
                if (w.is_zero()) {
                    const bool ray_attached = m.in_N(c) || m.has_two_sided(c);
                    // rays locked onto this cycle inherit the zero infinitely often
                    if (ray_attached && (with_forward || m.has_two_sided(c))) return Count::inf();
                    ++free_points;
                }
        for (std::size_t r = 0; r < m.ray_count(); ++r) {
            if (m.is_forward(r)) {
                if (!with_forward) continue;
                const auto& mult = m.ray(r).multiplicity;
                if (mult.omega) return Count::inf();
                free_points += mult.count;  // the head of every copy
            }
            for (const auto& o : m.ray(r).exceptional)
                if (o.weight.is_zero()) ++free_points;
        }
        return Count::finite(free_points);
    }

    detail::ChainSystem sys;
    std::vector<detail::CycleChain> cycles;
    for (std::size_t c = 0; c < m.cycle_count(); ++c) {
        cycles.push_back(detail::propagate_cycle(m.cycle(c), lambda));
        if (cycles.back().eigen) cycles.back().unknown = sys.add_unknown();
    }

    // A forward-ray copy. Returns false when the copy carries no unknown.
    auto add_forward_copy = [&](std::size_t r, std::uint64_t copy) {
        const std::size_t c = m.omega_cycle(r);
        const std::uint64_t p = m.period(c);
        for (const auto& w : m.cycle(c).weights)
            if (w.is_zero()) return;  // zeros recur along the tail: g vanishes identically
        const std::int64_t lock = copy == 0 ? m.lock_hi(r) : 0;
        std::int64_t start = 0;
        for (std::int64_t i = 0; i < lock; ++i)
            if (m.ray_weight(r, copy, i).is_zero()) start = i + 1;
        const std::size_t x = sys.add_unknown();
        RationalComplex g(1);
        std::int64_t i = start;
        const std::int64_t tail = std::max(start, lock);
        for (; i < tail; ++i) g = g * lambda / m.ray_weight(r, copy, i);
        RationalComplex h = g;
        for (std::uint64_t k = 0; k < p; ++k) h = h * lambda / m.ray_weight(r, copy, tail + static_cast<std::int64_t>(k));
        const std::uint64_t phase = wrap_phase(static_cast<std::int64_t>(m.ray(r).omega.phase) + tail, p);
        detail::end_condition(sys, x, g, h / g, cycles[c], phase);
    };

    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (!m.is_forward(r)) {
            const Ray& ry = m.ray(r);
            const std::size_t a = m.alpha_cycle(r), o = m.omega_cycle(r);
            const std::size_t x = sys.add_unknown();  // g_0
            // forward half
            bool omega_zero = false;
            for (const auto& w : m.cycle(o).weights) omega_zero = omega_zero || w.is_zero();
            if (omega_zero) {
                sys.constrain({{x, RationalComplex(1)}});
            } else {
                RationalComplex g(1);
                const std::int64_t hi = m.lock_hi(r);
                for (std::int64_t i = 0; i < hi; ++i) g = g * lambda / m.ray_weight(r, 0, i);
                RationalComplex h = g;
                for (std::uint64_t k = 0; k < m.period(o); ++k) h = h * lambda / m.ray_weight(r, 0, hi + static_cast<std::int64_t>(k));
                detail::end_condition(sys, x, g, h / g, cycles[o],
                                      wrap_phase(static_cast<std::int64_t>(ry.omega.phase) + hi, m.period(o)));
            }
            // backward half: g_i = w_i g_{i+1} / lambda
            bool alpha_zero = false;
            for (const auto& w : m.cycle(a).weights) alpha_zero = alpha_zero || w.is_zero();
            if (!alpha_zero) {
                RationalComplex g(1);
                const std::int64_t lo = m.lock_lo(r);
                for (std::int64_t i = -1; i >= lo; --i) g = m.ray_weight(r, 0, i) * g / lambda;
                RationalComplex h = g;
                for (std::uint64_t k = 1; k <= m.period(a); ++k) h = m.ray_weight(r, 0, lo - static_cast<std::int64_t>(k)) * h / lambda;
                detail::end_condition(sys, x, g, h / g, cycles[a],
                                      wrap_phase(static_cast<std::int64_t>(ry.alpha->phase) + lo, m.period(a)));
            }
            continue;
        }
        if (!with_forward) continue;
        const auto& mult = m.ray(r).multiplicity;
        const std::uint64_t copies = mult.omega ? 1 : mult.count;
        for (std::uint64_t copy = 0; copy < copies; ++copy) add_forward_copy(r, copy);
    }
    const std::uint64_t base = sys.nullity();

    // An omega-bundle has infinitely many phase-locked copies: if one more adds
    // a free parameter, they all do.
    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (!with_forward || !m.is_forward(r) || !m.ray(r).multiplicity.omega) continue;
        detail::ChainSystem probe = sys;
        std::swap(sys, probe);
        add_forward_copy(r, 1);
        const bool grows = sys.nullity() > base;
        std::swap(sys, probe);
        if (grows) return Count::inf();
    }
    return Count::finite(base);
}

// dim ker(lambda I - T') over finitely summable atomic measures.
inline Count chain_defect_dim(const ValidatedModel& m, const RationalComplex& lambda, ChainScope scope = ChainScope::whole) {
    (void)scope;  // forward rays never carry dual chains: their sources force a = 0
    if (lambda.is_zero()) {
        // a_k w(k) = 0 for every k: atoms live exactly on Z(w).
        std::uint64_t zeros = 0;
        for (std::size_t c = 0; c < m.cycle_count(); ++c)
            for (const auto& w : m.cycle(c).weights)
                if (w.is_zero()) {
                    if (m.has_two_sided(c) || (scope == ChainScope::whole && m.in_N(c))) return Count::inf();
                    ++zeros;
                }
        for (std::size_t r = 0; r < m.ray_count(); ++r) {
            if (m.is_forward(r) && scope == ChainScope::L_only) continue;
            for (const auto& o : m.ray(r).exceptional)
                if (o.weight.is_zero()) ++zeros;
        }
        return Count::finite(zeros);
    }

    std::uint64_t dim = 0;
    for (std::size_t c = 0; c < m.cycle_count(); ++c) {
        // a_{j+1} = a_j w_j / lambda around the cycle
        RationalComplex a(1);
        for (const auto& w : m.cycle(c).weights) a = a * w / lambda;
        if (a == RationalComplex(1)) ++dim;
    }
    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (m.is_forward(r)) continue;
        const std::size_t a_cyc = m.alpha_cycle(r), o_cyc = m.omega_cycle(r);
        // forward: a_{i+1} = a_i w_i / lambda
        RationalComplex a(1);
        const std::int64_t hi = m.lock_hi(r);
        for (std::int64_t i = 0; i < hi; ++i) a = a * m.ray_weight(r, 0, i) / lambda;
        RationalComplex h = a;
        for (std::uint64_t k = 0; k < m.period(o_cyc); ++k) h = h * m.ray_weight(r, 0, hi + static_cast<std::int64_t>(k)) / lambda;
        const bool forward_summable = h.is_zero() || detail::compare_modulus_to_one(h / a) < 0;
        // backward: a_i = lambda a_{i+1} / w_i, impossible through a zero weight
        bool backward_summable = true;
        for (const auto& w : m.cycle(a_cyc).weights) backward_summable = backward_summable && !w.is_zero();
        if (backward_summable) {
            RationalComplex b(1);
            const std::int64_t lo = m.lock_lo(r);
            for (std::int64_t i = -1; i >= lo; --i) b = lambda * b / m.ray_weight(r, 0, i);
            RationalComplex hb = b;
            for (std::uint64_t k = 1; k <= m.period(a_cyc); ++k)
                hb = lambda * hb / m.ray_weight(r, 0, lo - static_cast<std::int64_t>(k));
            backward_summable = detail::compare_modulus_to_one(hb / b) < 0;
        }
        if (forward_summable && backward_summable) ++dim;
    }
    return Count::finite(dim);
}

// card(M_2 \ phi(M_2)) at lambda: sources of the clusters with growth > |lambda|.
inline Count m2_source_count(const ValidatedModel& m, const RationalComplex& lambda) {
    const ExactRadius modulus = ExactRadius::modulus(lambda);
    Count n = Count::finite(0);
    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (!m.is_forward(r) || !(modulus < m.gm(m.omega_cycle(r)))) continue;
        const auto& mult = m.ray(r).multiplicity;
        n = n + (mult.omega ? Count::inf() : Count::finite(mult.count));
    }
    return n;
}

// ---------------------------------------------------------------------------
// Numerical certificates

enum class CertificateKind { in_upper, in_lower, out_neumann, chain };

inline const char* to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::in_upper: return "IN_upper";
        case CertificateKind::in_lower: return "IN_lower";
        case CertificateKind::out_neumann: return "OUT_neumann";
        case CertificateKind::chain: return "CHAIN";
    }
    return "?";
}

struct Certificate {
    CertificateKind kind{CertificateKind::in_upper};
    RationalComplex lambda;
    std::uint64_t horizon{0};
    double residual_ratio{std::numeric_limits<double>::quiet_NaN()};
    double margin{std::numeric_limits<double>::quiet_NaN()};
    bool pass{false};
    std::string details;
};

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Side { upper, lower };

namespace detail {

using cplx = std::complex<double>;

inline cplx to_complex(const RationalComplex& z) { return {to_double(z.re), to_double(z.im)}; }

// A stretch z_0, ..., z_{len-1} of consecutive points of one orbit (z_{j+1} = phi(z_j))
// inside a phase-locked tail, plus the weight at the point before z_0.
struct OrbitSegment {
    std::vector<cplx> weights;  // w(z_j)
    cplx weight_before{0.0};    // w(phi^{-1} z_0)
    std::string where;
};

// Segment of `len` points on a ray tail that accumulates on cycle c.
inline std::optional<OrbitSegment> tail_segment(const ValidatedModel& m, std::size_t c, std::size_t len) {
    auto build = [&](std::size_t r, std::int64_t first) {
        OrbitSegment seg;
        seg.weight_before = to_complex(m.ray_weight(r, 0, first - 1));
        for (std::size_t j = 0; j < len; ++j) seg.weights.push_back(to_complex(m.ray_weight(r, 0, first + static_cast<std::int64_t>(j))));
        seg.where = "ray '" + m.ray(r).id + "' indices " + std::to_string(first) + ".." + std::to_string(first + static_cast<std::int64_t>(len) - 1);
        return seg;
    };
    for (std::size_t r : m.forward_rays_into(c)) return build(r, m.lock_hi(r) + 1);
    for (std::size_t r : m.two_sided_into(c)) return build(r, m.lock_hi(r) + 1);
    for (std::size_t r : m.two_sided_from(c)) return build(r, m.lock_lo(r) - static_cast<std::int64_t>(len));
    return std::nullopt;
}

// sup-norm ratio ||T F - lambda F|| / (|lambda| ||F||) for
// F = sum_i c_i lambda^{-i} T^i chi_{z_{2n}} on a segment of 2n+1 points.
inline double upper_residual(const OrbitSegment& seg, cplx lambda, std::size_t n) {
    const std::size_t len = 2 * n + 1;
    const double damp = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> F(len);
    // T^i chi_x = w_i(phi^{-i} x) chi_{phi^{-i} x}; accumulate w_i / lambda^i backwards
    cplx v = 1.0;
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t pos = len - 1 - i;
        if (i > 0) v = v * seg.weights[pos] / lambda;
        F[pos] = std::pow(damp, std::abs(static_cast<double>(i) - static_cast<double>(n))) * v;
    }
    double num = std::abs(seg.weight_before * F[0]);  // (TF) at the point before z_0
    double den = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const cplx next = j + 1 < len ? F[j + 1] : cplx(0.0);
        num = std::max(num, std::abs(seg.weights[j] * next - lambda * F[j]));
        den = std::max(den, std::abs(F[j]));
    }
    return num / (std::abs(lambda) * den);
}

// total-variation ratio ||T' mu - lambda mu|| / (|lambda| ||mu||) for
// mu = sum_i c_i lambda^{-i} T'^i delta_{z_0} on a segment of 2n+2 points.
inline double lower_residual(const OrbitSegment& seg, cplx lambda, std::size_t n) {
    const std::size_t len = 2 * n + 1;
    const double damp = 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> mu(len + 1, 0.0);
    // T'^i delta_x = w_i(x) delta_{phi^i x}
    cplx v = 1.0;
    for (std::size_t i = 0; i < len; ++i) {
        if (i > 0) v = v * seg.weights[i - 1] / lambda;
        mu[i] = std::pow(damp, std::abs(static_cast<double>(i) - static_cast<double>(n))) * v;
    }
    double num = std::abs(lambda * mu[0]);  // nothing maps onto z_0 from inside the support
    double den = 0.0;
    for (std::size_t j = 1; j <= len; ++j) num += std::abs(seg.weights[j - 1] * mu[j - 1] - lambda * mu[j]);
    for (std::size_t j = 0; j < len; ++j) den += std::abs(mu[j]);
    return num / (std::abs(lambda) * den);
}

}  // namespace detail

// Certificate that lambda lies in sigma2 (side upper) or sigma2_dual (side lower).
// Circles through non-isolated cycles get the damped orbit-sum construction,
// whose residual decays like 1/sqrt(n); the other cases are exact (residual 0
// up to rounding) and pass when the residual is at most eps.
inline Certificate in_certificate(const ValidatedModel& m, const RationalComplex& lambda, Side side, std::uint64_t horizon,
                                  double eps = 1e-6) {
    if (horizon < 4) throw CertificateError("horizon must be at least 4");
    Certificate cert;
    cert.kind = side == Side::upper ? CertificateKind::in_upper : CertificateKind::in_lower;
    cert.lambda = lambda;
    cert.horizon = horizon;
    const auto n = static_cast<std::size_t>(horizon);

    if (lambda.is_zero()) {
        const CoreSets cs = core_sets(m);
        // Characteristic functions of distinct sources (T'' chi = 0), or of the
        // images of distinct zeros accumulating on a non-isolated zero.
        if (side == Side::upper && cs.sources_infinite) {
            cert.residual_ratio = 0.0;
            cert.details = "point masses at the sources of distinct bundle copies are annihilated";
        } else if (!cs.zeros_all_isolated()) {
            cert.residual_ratio = 0.0;
            cert.details = "point masses at zeros of w accumulating on a non-isolated zero";
        } else {
            throw CertificateError("NoEligibleOrbit: 0 is not claimed in this semi-Fredholm spectrum");
        }
        cert.pass = cert.residual_ratio <= eps;
        return cert;
    }

    const ExactRadius modulus = ExactRadius::modulus(lambda);
    for (std::size_t c = 0; c < m.cycle_count(); ++c) {
        if (m.is_isolated(c) || !(m.gm(c) == modulus)) continue;
        auto seg = detail::tail_segment(m, c, 2 * n + 1);
        if (!seg) continue;
        const detail::cplx lam = detail::to_complex(lambda);
        cert.residual_ratio = side == Side::upper ? detail::upper_residual(*seg, lam, n) : detail::lower_residual(*seg, lam, n);
        cert.details = "damped orbit sum on " + seg->where + " accumulating on cycle '" + m.cycle(c).id + "'";
        cert.pass = cert.residual_ratio <= 5.0 / std::sqrt(static_cast<double>(n));
        return cert;
    }

    if (side == Side::upper) {
        // Inside the disk of a cluster with an omega-bundle: truncated eigenvectors on distinct copies.
        for (std::size_t r = 0; r < m.ray_count(); ++r) {
            if (!m.is_forward(r) || !m.ray(r).multiplicity.omega) continue;
            const std::size_t c = m.omega_cycle(r);
            if (!(modulus < m.gm(c)) || m.has_zero_weight(c)) continue;
            const detail::cplx lam = detail::to_complex(lambda);
            // g_{i+1} = lambda g_i / w_i on a phase-locked copy, truncated after n points
            std::vector<detail::cplx> g{1.0};
            for (std::size_t i = 0; i + 1 < n; ++i) g.push_back(g.back() * lam / detail::to_complex(m.ray_weight(r, 1, static_cast<std::int64_t>(i))));
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const detail::cplx next = i + 1 < g.size() ? g[i + 1] : detail::cplx(0.0);
                num = std::max(num, std::abs(detail::to_complex(m.ray_weight(r, 1, static_cast<std::int64_t>(i))) * next - lam * g[i]));
                den = std::max(den, std::abs(g[i]));
            }
            cert.residual_ratio = num / (std::abs(lam) * den);
            cert.details = "truncated eigenvectors on distinct copies of bundle '" + m.ray(r).id + "'";
            cert.pass = cert.residual_ratio <= eps;
            return cert;
        }
    }
    throw CertificateError("NoEligibleOrbit: no orbit certifies " + to_string(lambda));
}

namespace detail {

// log sup_k |w_n(k)| (or log inf with `infimum`) over the listed starting points.
struct LogWeights {
    std::vector<std::vector<double>> orbits;  // log|w| along each starting orbit (long enough for n steps)

    [[nodiscard]] double extreme(std::size_t n, bool infimum) const {
        double best = infimum ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        for (const auto& o : orbits) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += o[i];
            best = infimum ? std::min(best, s) : std::max(best, s);
        }
        return best;
    }
};

inline double log_abs(const RationalComplex& w) {
    if (w.is_zero()) return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log(ExactRadius::modulus(w).to_double() * ExactRadius::modulus(w).to_double());
}

}  // namespace detail

// Certificate that lambda is in the resolvent set. T is split into its action
// on M (forward rays with their cycles) and on each component of L; every
// piece must show |lambda| > sup|w_n|^(1/n) (Neumann series) or, on an
// invertible L-component, |lambda| < inf|w_n|^(1/n) (Neumann series of the
// inverse), or, on an isolated cycle, lambda^p != W.
inline Certificate out_certificate(const ValidatedModel& m, const RationalComplex& lambda, std::uint64_t horizon) {
    Certificate cert;
    cert.kind = CertificateKind::out_neumann;
    cert.lambda = lambda;
    cert.horizon = horizon;
    if (lambda.is_zero()) throw CertificateError("0 always lies in the spectrum");
    const double log_lambda = std::log(ExactRadius::modulus(lambda).to_double());
    const std::size_t H = static_cast<std::size_t>(horizon);

    auto cycle_orbits = [&](std::size_t c, detail::LogWeights& lw, std::size_t len) {
        const auto p = m.period(c);
        for (std::uint64_t ph = 0; ph < p; ++ph) {
            std::vector<double> o;
            for (std::size_t i = 0; i < len; ++i) o.push_back(detail::log_abs(m.cycle(c).weights[(ph + i) % p]));
            lw.orbits.push_back(std::move(o));
        }
    };
    auto ray_orbits = [&](std::size_t r, std::int64_t from, std::int64_t to, detail::LogWeights& lw, std::size_t len) {
        for (std::int64_t s = from; s <= to; ++s) {
            std::vector<double> o;
            for (std::size_t i = 0; i < len; ++i) o.push_back(detail::log_abs(m.ray_weight(r, 0, s + static_cast<std::int64_t>(i))));
            lw.orbits.push_back(std::move(o));
        }
    };

    // Searches n = 1..horizon; returns the normalized margin or nullopt.
    struct Outcome {
        std::size_t n;
        double margin;
    };
    auto search = [&](const detail::LogWeights& lw, bool inverse) -> std::optional<Outcome> {
        for (std::size_t n = 1; n <= H; n = n < 8 ? n + 1 : n * 2 > H && n != H ? H : n * 2) {
            const double rate = lw.extreme(n, inverse) / static_cast<double>(n);
            const double margin = inverse ? rate - log_lambda : log_lambda - rate;
            if (margin > 0) return Outcome{n, margin};
            if (n == H) break;
        }
        return std::nullopt;
    };

    double worst = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    std::string details;

    // M: forward rays and their cycles.
    {
        detail::LogWeights lw;
        for (std::size_t c = 0; c < m.cycle_count(); ++c)
            if (m.in_N(c)) cycle_orbits(c, lw, H);
        for (std::size_t r = 0; r < m.ray_count(); ++r)
            if (m.is_forward(r)) ray_orbits(r, 0, m.lock_hi(r), lw, H);
        auto out = search(lw, false);
        if (!out) {
            cert.details = "Neumann series on M does not converge within the horizon";
            return cert;
        }
        worst = std::min(worst, out->margin);
        used = std::max(used, out->n);
        details += "M: n=" + std::to_string(out->n);
    }

    const CoreSets cs = core_sets(m);
    for (const auto& comp : cs.L_components) {
        detail::LogWeights lw;
        for (std::size_t c : comp.cycles) cycle_orbits(c, lw, H);
        for (std::size_t r : comp.two_sided_rays) ray_orbits(r, m.lock_lo(r) - static_cast<std::int64_t>(H), m.lock_hi(r), lw, H);
        std::optional<Outcome> out = search(lw, false);
        bool invertible = true;
        for (std::size_t c : comp.cycles) invertible = invertible && !m.has_zero_weight(c);
        if (!out && invertible) out = search(lw, true);
        if (!out && comp.two_sided_rays.empty()) {
            const std::size_t c = comp.cycles.front();
            const RationalComplex gap = pow(lambda, static_cast<std::int64_t>(m.period(c))) - m.product(c);
            if (!gap.is_zero()) out = Outcome{1, std::sqrt(to_double(gap.norm()))};
        }
        if (!out) {
            cert.details = details + "; L-component of cycle '" + m.cycle(comp.cycles.front()).id + "' not certified";
            return cert;
        }
        worst = std::min(worst, out->margin);
        used = std::max(used, out->n);
        details += "; L[" + m.cycle(comp.cycles.front()).id + "]: n=" + std::to_string(out->n);
    }
    cert.margin = worst;
    cert.horizon = used;
    cert.pass = worst > 0;
    cert.details = details;
    return cert;
}

}  // namespace ckspec
