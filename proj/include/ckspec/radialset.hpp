#pragma once

// Closed subsets of the plane of the form
//   (finite union of closed annuli {lo <= |z| <= hi}) U (finite union of root sets {z : z^p = W}).
// Circles are annuli with lo == hi, disks have lo == 0, and a single rational
// point z is the root set (z, 1). Every spectrum computed by this library has
// this shape.

#include "ckspec/radius.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace ckspec {

struct Annulus {
    ExactRadius lo;
    ExactRadius hi;

    [[nodiscard]] bool contains_radius(const ExactRadius& r) const { return lo <= r && r <= hi; }
    friend bool operator==(const Annulus& a, const Annulus& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// {z : z^p = w}, w != 0.
struct RootSet {
    RationalComplex w;
    std::uint64_t p{1};

    [[nodiscard]] ExactRadius radius() const { return ExactRadius::geometric_mean(w, p); }
    [[nodiscard]] bool contains(const RationalComplex& z) const { return pow(z, static_cast<std::int64_t>(p)) == w; }
    friend bool operator==(const RootSet& a, const RootSet& b) { return a.p == b.p && a.w == b.w; }
};

namespace detail {

// Bezout coefficients for coprime a, b: s*a + t*b == 1.
inline std::pair<std::int64_t, std::int64_t> bezout(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
        old_t = std::exchange(t, old_t - q * t);
    }
    return {old_s, old_t};
}

}  // namespace detail

// Common points of two root sets. A common root z satisfies z^g = a^s b^t
// with g = gcd(p, q) and s p + t q = g, so the intersection is again a root set.
inline std::optional<RootSet> intersect(const RootSet& a, const RootSet& b) {
    const auto g = std::gcd(a.p, b.p);
    const auto pa = static_cast<std::int64_t>(a.p / g);
    const auto pb = static_cast<std::int64_t>(b.p / g);
    const auto [s, t] = detail::bezout(pa, pb);
    const RationalComplex u = pow(a.w, s) * pow(b.w, t);
    if (pow(u, pa) != a.w || pow(u, pb) != b.w) return std::nullopt;
    return RootSet{u, g};
}

// Number of points of `target` lying in the union of `cover`, by inclusion-exclusion.
inline std::uint64_t count_covered(const RootSet& target, const std::vector<RootSet>& cover) {
    std::vector<RootSet> relevant;
    for (const auto& c : cover)
        if (c.radius() == target.radius()) relevant.push_back(c);
    if (relevant.size() > 20) throw std::runtime_error("count_covered: too many root sets");
    std::int64_t total = 0;
    const std::uint64_t subsets = std::uint64_t{1} << relevant.size();
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        std::optional<RootSet> acc = target;
        int bits = 0;
        for (std::size_t i = 0; i < relevant.size() && acc; ++i) {
            if (!(mask >> i & 1U)) continue;
            ++bits;
            acc = intersect(*acc, relevant[i]);
        }
        if (!acc) continue;
        total += (bits % 2 == 1 ? 1 : -1) * static_cast<std::int64_t>(acc->p);
    }
    return static_cast<std::uint64_t>(total);
}

// A connected component of the complement of the annuli of a RadialSet.
// lo absent: the component contains the origin. hi absent: it is unbounded.
struct Gap {
    std::optional<ExactRadius> lo;
    std::optional<ExactRadius> hi;

    [[nodiscard]] bool contains_radius(const ExactRadius& r) const {
        if (lo && r <= *lo) return false;
        if (hi && r >= *hi) return false;
        return true;
    }
};

class RadialSet {
public:
    RadialSet() = default;

    // Canonical form of an arbitrary list; throws std::invalid_argument if some lo > hi.
    static RadialSet canonicalize(std::vector<Annulus> annuli, std::vector<RootSet> roots = {}) {
        for (const auto& a : annuli)
            if (a.hi < a.lo) throw std::invalid_argument("annulus with lo > hi");
        RadialSet s;
        for (auto& r : roots) {
            if (r.p == 0) throw std::invalid_argument("root set of order 0");
            if (r.w.is_zero()) annuli.push_back({ExactRadius::zero(), ExactRadius::zero()});
            else s.roots_.push_back(std::move(r));
        }
        std::sort(annuli.begin(), annuli.end(), [](const Annulus& a, const Annulus& b) { return a.lo < b.lo; });
        for (auto& a : annuli) {
            if (!s.annuli_.empty() && a.lo <= s.annuli_.back().hi) {
                if (s.annuli_.back().hi < a.hi) s.annuli_.back().hi = a.hi;
            } else {
                s.annuli_.push_back(std::move(a));
            }
        }
        s.prune_roots();
        return s;
    }

    static RadialSet empty() { return {}; }
    static RadialSet disk(const ExactRadius& r) { return canonicalize({{ExactRadius::zero(), r}}); }
    static RadialSet circle(const ExactRadius& r) { return canonicalize({{r, r}}); }
    static RadialSet annulus(const ExactRadius& lo, const ExactRadius& hi) { return canonicalize({{lo, hi}}); }
    static RadialSet point(const RationalComplex& z) { return canonicalize({}, {RootSet{z, 1}}); }
    static RadialSet roots(const RationalComplex& w, std::uint64_t p) { return canonicalize({}, {RootSet{w, p}}); }

    [[nodiscard]] const std::vector<Annulus>& annuli() const { return annuli_; }
    [[nodiscard]] const std::vector<RootSet>& root_sets() const { return roots_; }
    [[nodiscard]] bool is_empty() const { return annuli_.empty() && roots_.empty(); }
    // No finite point part: the set is invariant under rotations about 0.
    [[nodiscard]] bool is_rotation_invariant() const { return roots_.empty(); }

    [[nodiscard]] bool contains_radius(const ExactRadius& r) const {
        return std::any_of(annuli_.begin(), annuli_.end(), [&](const Annulus& a) { return a.contains_radius(r); });
    }

    [[nodiscard]] bool contains(const RationalComplex& z) const {
        if (contains_radius(ExactRadius::modulus(z))) return true;
        return std::any_of(roots_.begin(), roots_.end(), [&](const RootSet& r) { return r.contains(z); });
    }

    // Largest modulus of a point of the set; nullopt when empty.
    [[nodiscard]] std::optional<ExactRadius> max_radius() const {
        std::optional<ExactRadius> best;
        if (!annuli_.empty()) best = annuli_.back().hi;
        for (const auto& r : roots_)
            if (!best || *best < r.radius()) best = r.radius();
        return best;
    }

    [[nodiscard]] bool subset_of(const RadialSet& other) const {
        for (const auto& a : annuli_) {
            const bool covered = std::any_of(other.annuli_.begin(), other.annuli_.end(), [&](const Annulus& b) {
                return b.lo <= a.lo && a.hi <= b.hi;
            });
            if (!covered) return false;
        }
        for (const auto& r : roots_) {
            if (other.contains_radius(r.radius())) continue;
            if (count_covered(r, other.roots_) != r.p) return false;
        }
        return true;
    }

    friend bool operator==(const RadialSet& a, const RadialSet& b) {
        return a.annuli_ == b.annuli_ && a.subset_of(b) && b.subset_of(a);
    }
    friend bool operator!=(const RadialSet& a, const RadialSet& b) { return !(a == b); }

    friend RadialSet unite(const RadialSet& a, const RadialSet& b) {
        std::vector<Annulus> annuli = a.annuli_;
        annuli.insert(annuli.end(), b.annuli_.begin(), b.annuli_.end());
        std::vector<RootSet> roots = a.roots_;
        roots.insert(roots.end(), b.roots_.begin(), b.roots_.end());
        return canonicalize(std::move(annuli), std::move(roots));
    }

    friend RadialSet intersect(const RadialSet& a, const RadialSet& b) {
        std::vector<Annulus> annuli;
        for (const auto& x : a.annuli_) {
            for (const auto& y : b.annuli_) {
                const ExactRadius& lo = std::max(x.lo, y.lo);
                const ExactRadius& hi = std::min(x.hi, y.hi);
                if (lo <= hi) annuli.push_back({lo, hi});
            }
        }
        std::vector<RootSet> roots;
        for (const auto& r : a.roots_)
            if (b.contains_radius(r.radius())) roots.push_back(r);
        for (const auto& r : b.roots_)
            if (a.contains_radius(r.radius())) roots.push_back(r);
        for (const auto& x : a.roots_)
            for (const auto& y : b.roots_)
                if (auto common = intersect(x, y)) roots.push_back(*common);
        return canonicalize(std::move(annuli), std::move(roots));
    }

    // Connected components of C minus the annuli. Finitely many root points
    // never disconnect an open planar set, so they are not considered.
    [[nodiscard]] std::vector<Gap> complement_components() const {
        std::vector<Gap> gaps;
        if (annuli_.empty()) return {Gap{}};
        if (!annuli_.front().lo.is_zero()) gaps.push_back({std::nullopt, annuli_.front().lo});
        for (std::size_t i = 0; i + 1 < annuli_.size(); ++i) gaps.push_back({annuli_[i].hi, annuli_[i + 1].lo});
        gaps.push_back({annuli_.back().hi, std::nullopt});
        return gaps;
    }

    // True when the annuli of this set contain the whole gap.
    [[nodiscard]] bool covers(const Gap& g) const {
        if (!g.hi) return false;
        return std::any_of(annuli_.begin(), annuli_.end(), [&](const Annulus& a) {
            const bool low_ok = g.lo ? a.lo <= *g.lo : a.lo.is_zero();
            return low_ok && *g.hi <= a.hi;
        });
    }

private:
    void prune_roots() {
        std::vector<RootSet> kept;
        for (auto& r : roots_)
            if (!contains_radius(r.radius()) && std::find(kept.begin(), kept.end(), r) == kept.end()) kept.push_back(r);
        // Drop root sets already covered by the union of the others; larger orders first survive.
        std::sort(kept.begin(), kept.end(), [](const RootSet& x, const RootSet& y) {
            if (x.p != y.p) return x.p > y.p;
            if (x.w.re != y.w.re) return x.w.re < y.w.re;
            return x.w.im < y.w.im;
        });
        std::vector<RootSet> result;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            std::vector<RootSet> others = result;
            others.insert(others.end(), kept.begin() + static_cast<std::ptrdiff_t>(i) + 1, kept.end());
            if (count_covered(kept[i], others) != kept[i].p) result.push_back(kept[i]);
        }
        roots_ = std::move(result);
    }

    std::vector<Annulus> annuli_;
    std::vector<RootSet> roots_;
};

// Closed annulus spanned by a bounded gap.
inline Annulus closure(const Gap& g) {
    if (!g.hi) throw std::invalid_argument("closure of an unbounded gap");
    return {g.lo.value_or(ExactRadius::zero()), *g.hi};
}

}  // namespace ckspec
