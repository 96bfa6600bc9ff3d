#pragma once

// Compactified orbit systems: a compact space K presented as finitely many
// periodic cycles plus rays of isolated points whose orbits converge to them.
//
//  * A forward ray k_0 -> k_1 -> ... lands on its omega cycle: k_i converges to
//    the cycle point at phase (omega.phase + i) mod p. Its head k_0 has no
//    preimage, so heads are exactly K \ phi(K).
//  * A two-sided ray (k_i), i in Z, leaves its alpha cycle (i -> -inf, phase
//    (alpha.phase + i) mod p_alpha) and lands on its omega cycle (i -> +inf).
//  * An omega-bundle is a countable family of forward-ray copies whose copies
//    accumulate on the anchor cycle. Only copy 0 carries exceptional weights.
//
// The weight at a ray point equals the anchor-cycle weight at the matching
// phase (omega cycle for i >= 0, alpha cycle for i < 0) unless overridden.

#include "ckspec/radius.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ckspec {

enum class ModelErrc {
    MissingForwardRay,
    DanglingAnchor,
    DuplicateId,
    MalformedWeight,
    MalformedRay,
    UnresolvablePoint,
    EmptyPart,
};

inline const char* to_string(ModelErrc e) {
    switch (e) {
        case ModelErrc::MissingForwardRay: return "MissingForwardRay";
        case ModelErrc::DanglingAnchor: return "DanglingAnchor";
        case ModelErrc::DuplicateId: return "DuplicateId";
        case ModelErrc::MalformedWeight: return "MalformedWeight";
        case ModelErrc::MalformedRay: return "MalformedRay";
        case ModelErrc::UnresolvablePoint: return "UnresolvablePoint";
        case ModelErrc::EmptyPart: return "EmptyPart";
    }
    return "?";
}

class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    [[nodiscard]] ModelErrc code() const { return code_; }

private:
    ModelErrc code_;
};

struct Cycle {
    std::string id;
    std::vector<RationalComplex> weights;  // weight at phase 0..p-1

    friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct Anchor {
    std::string cycle;
    std::uint64_t phase{0};

    friend bool operator==(const Anchor&, const Anchor&) = default;
};

enum class RayKind { forward, two_sided };

struct Multiplicity {
    std::uint64_t count{1};
    bool omega{false};

    static Multiplicity bundle() { return {0, true}; }
    friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

struct WeightOverride {
    std::int64_t index{0};
    RationalComplex weight;

    friend bool operator==(const WeightOverride&, const WeightOverride&) = default;
};

struct Ray {
    std::string id;
    RayKind kind{RayKind::forward};
    Multiplicity multiplicity;
    Anchor omega;
    std::optional<Anchor> alpha;  // two-sided only
    std::vector<WeightOverride> exceptional;

    friend bool operator==(const Ray&, const Ray&) = default;
};

struct OrbitModel {
    std::string name;
    std::vector<Cycle> cycles;
    std::vector<Ray> rays;

    friend bool operator==(const OrbitModel&, const OrbitModel&) = default;
};

struct CyclePoint {
    std::size_t cycle{0};
    std::uint64_t phase{0};
    friend bool operator==(const CyclePoint&, const CyclePoint&) = default;
};

struct RayPoint {
    std::size_t ray{0};
    std::uint64_t copy{0};
    std::int64_t index{0};
    friend bool operator==(const RayPoint&, const RayPoint&) = default;
};

using PointRef = std::variant<CyclePoint, RayPoint>;

inline std::uint64_t wrap_phase(std::int64_t phase, std::uint64_t period) {
    const auto p = static_cast<std::int64_t>(period);
    return static_cast<std::uint64_t>(((phase % p) + p) % p);
}

class ValidatedModel;
ValidatedModel validate(OrbitModel raw);

// An OrbitModel whose invariants hold, with per-cycle products and incidence precomputed.
class ValidatedModel {
public:
    [[nodiscard]] const OrbitModel& model() const { return model_; }
    [[nodiscard]] std::size_t cycle_count() const { return model_.cycles.size(); }
    [[nodiscard]] std::size_t ray_count() const { return model_.rays.size(); }
    [[nodiscard]] const Cycle& cycle(std::size_t c) const { return model_.cycles.at(c); }
    [[nodiscard]] const Ray& ray(std::size_t r) const { return model_.rays.at(r); }

    [[nodiscard]] std::optional<std::size_t> cycle_index(const std::string& id) const {
        auto it = cycle_by_id_.find(id);
        if (it == cycle_by_id_.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] std::optional<std::size_t> ray_index(const std::string& id) const {
        auto it = ray_by_id_.find(id);
        if (it == ray_by_id_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::uint64_t period(std::size_t c) const { return cycle(c).weights.size(); }
    // W = product of the cycle's weights.
    [[nodiscard]] const RationalComplex& product(std::size_t c) const { return products_.at(c); }
    // |W|^(1/p).
    [[nodiscard]] ExactRadius gm(std::size_t c) const { return ExactRadius::geometric_mean(product(c), period(c)); }
    [[nodiscard]] bool has_zero_weight(std::size_t c) const { return product(c).is_zero(); }

    [[nodiscard]] std::size_t omega_cycle(std::size_t r) const { return omega_cycle_.at(r); }
    [[nodiscard]] std::size_t alpha_cycle(std::size_t r) const { return alpha_cycle_.at(r); }
    [[nodiscard]] bool is_forward(std::size_t r) const { return ray(r).kind == RayKind::forward; }

    [[nodiscard]] const std::vector<std::size_t>& forward_rays_into(std::size_t c) const { return forward_into_.at(c); }
    [[nodiscard]] const std::vector<std::size_t>& two_sided_from(std::size_t c) const { return two_sided_from_.at(c); }
    [[nodiscard]] const std::vector<std::size_t>& two_sided_into(std::size_t c) const { return two_sided_into_.at(c); }
    [[nodiscard]] bool has_two_sided(std::size_t c) const { return !two_sided_from(c).empty() || !two_sided_into(c).empty(); }
    // The cycle is accumulated by forward rays: it lies in N.
    [[nodiscard]] bool in_N(std::size_t c) const { return !forward_rays_into(c).empty(); }
    // No ray at all accumulates on the cycle: its points are isolated in K.
    [[nodiscard]] bool is_isolated(std::size_t c) const { return !in_N(c) && !has_two_sided(c); }

    // Smallest index past which ray r (copy 0) is purely phase-locked; 0 when no overrides.
    [[nodiscard]] std::int64_t lock_hi(std::size_t r) const {
        std::int64_t hi = 0;
        for (const auto& o : ray(r).exceptional) hi = std::max(hi, o.index + 1);
        return hi;
    }
    // Largest negative index below which a two-sided ray is phase-locked to its alpha cycle.
    [[nodiscard]] std::int64_t lock_lo(std::size_t r) const {
        std::int64_t lo = -1;
        for (const auto& o : ray(r).exceptional) lo = std::min(lo, o.index - 1);
        return lo;
    }

    // Weight of the phase-locked ray at index i (no overrides).
    [[nodiscard]] const RationalComplex& locked_weight(std::size_t r, std::int64_t i) const {
        const Ray& ry = ray(r);
        if (i >= 0 || ry.kind == RayKind::forward) {
            const std::size_t c = omega_cycle(r);
            return cycle(c).weights[wrap_phase(static_cast<std::int64_t>(ry.omega.phase) + i, period(c))];
        }
        const std::size_t c = alpha_cycle(r);
        return cycle(c).weights[wrap_phase(static_cast<std::int64_t>(ry.alpha->phase) + i, period(c))];
    }

    [[nodiscard]] RationalComplex ray_weight(std::size_t r, std::uint64_t copy, std::int64_t i) const {
        if (copy == 0) {
            for (const auto& o : ray(r).exceptional)
                if (o.index == i) return o.weight;
        }
        return locked_weight(r, i);
    }

    [[nodiscard]] bool resolvable(const PointRef& pt) const {
        if (const auto* cp = std::get_if<CyclePoint>(&pt)) return cp->cycle < cycle_count() && cp->phase < period(cp->cycle);
        const auto& rp = std::get<RayPoint>(pt);
        if (rp.ray >= ray_count()) return false;
        const Ray& ry = ray(rp.ray);
        if (!ry.multiplicity.omega && rp.copy >= ry.multiplicity.count) return false;
        return ry.kind == RayKind::two_sided || rp.index >= 0;
    }

    [[nodiscard]] RationalComplex weight_at(const PointRef& pt) const {
        require(pt);
        if (const auto* cp = std::get_if<CyclePoint>(&pt)) return cycle(cp->cycle).weights[cp->phase];
        const auto& rp = std::get<RayPoint>(pt);
        return ray_weight(rp.ray, rp.copy, rp.index);
    }

    // phi(pt).
    [[nodiscard]] PointRef next(const PointRef& pt) const {
        require(pt);
        if (const auto* cp = std::get_if<CyclePoint>(&pt)) return CyclePoint{cp->cycle, (cp->phase + 1) % period(cp->cycle)};
        auto rp = std::get<RayPoint>(pt);
        ++rp.index;
        return rp;
    }

private:
    friend ValidatedModel validate(OrbitModel raw);
    ValidatedModel() = default;

    void require(const PointRef& pt) const {
        if (!resolvable(pt)) throw ModelError(ModelErrc::UnresolvablePoint, "point does not exist in model '" + model_.name + "'");
    }

    OrbitModel model_;
    std::map<std::string, std::size_t> cycle_by_id_;
    std::map<std::string, std::size_t> ray_by_id_;
    std::vector<RationalComplex> products_;
    std::vector<std::size_t> omega_cycle_;
    std::vector<std::size_t> alpha_cycle_;
    std::vector<std::vector<std::size_t>> forward_into_;
    std::vector<std::vector<std::size_t>> two_sided_from_;
    std::vector<std::vector<std::size_t>> two_sided_into_;
};

inline ValidatedModel validate(OrbitModel raw) {
    ValidatedModel vm;
    std::set<std::string> ids;
    auto claim = [&](const std::string& id) {
        if (id.empty()) throw ModelError(ModelErrc::DuplicateId, "empty id");
        if (!ids.insert(id).second) throw ModelError(ModelErrc::DuplicateId, "id '" + id + "' used twice");
    };
    for (std::size_t c = 0; c < raw.cycles.size(); ++c) {
        const Cycle& cy = raw.cycles[c];
        claim(cy.id);
        if (cy.weights.empty()) throw ModelError(ModelErrc::MalformedWeight, "cycle '" + cy.id + "' has no weights");
        vm.cycle_by_id_[cy.id] = c;
        RationalComplex w(1);
        for (const auto& x : cy.weights) w *= x;
        vm.products_.push_back(w);
    }
    vm.forward_into_.resize(raw.cycles.size());
    vm.two_sided_from_.resize(raw.cycles.size());
    vm.two_sided_into_.resize(raw.cycles.size());

    auto resolve = [&](const Anchor& a, const std::string& ray_id) -> std::size_t {
        auto it = vm.cycle_by_id_.find(a.cycle);
        if (it == vm.cycle_by_id_.end())
            throw ModelError(ModelErrc::DanglingAnchor, "ray '" + ray_id + "' anchored to unknown cycle '" + a.cycle + "'");
        if (a.phase >= raw.cycles[it->second].weights.size())
            throw ModelError(ModelErrc::DanglingAnchor, "ray '" + ray_id + "' anchored to phase " + std::to_string(a.phase) +
                                                            " of cycle '" + a.cycle + "' which has period " +
                                                            std::to_string(raw.cycles[it->second].weights.size()));
        return it->second;
    };

    bool any_forward = false;
    for (std::size_t r = 0; r < raw.rays.size(); ++r) {
        const Ray& ry = raw.rays[r];
        claim(ry.id);
        vm.ray_by_id_[ry.id] = r;
        const std::size_t omega = resolve(ry.omega, ry.id);
        vm.omega_cycle_.push_back(omega);
        if (!ry.multiplicity.omega && ry.multiplicity.count == 0)
            throw ModelError(ModelErrc::MalformedRay, "ray '" + ry.id + "' has multiplicity 0");
        std::set<std::int64_t> seen;
        for (const auto& o : ry.exceptional)
            if (!seen.insert(o.index).second)
                throw ModelError(ModelErrc::MalformedRay, "ray '" + ry.id + "' overrides index " + std::to_string(o.index) + " twice");
        if (ry.kind == RayKind::forward) {
            any_forward = true;
            if (ry.alpha) throw ModelError(ModelErrc::MalformedRay, "forward ray '" + ry.id + "' has an alpha anchor");
            for (const auto& o : ry.exceptional)
                if (o.index < 0) throw ModelError(ModelErrc::MalformedRay, "forward ray '" + ry.id + "' overrides a negative index");
            vm.alpha_cycle_.push_back(omega);
            vm.forward_into_[omega].push_back(r);
        } else {
            if (!ry.alpha) throw ModelError(ModelErrc::MalformedRay, "two-sided ray '" + ry.id + "' has no alpha anchor");
            if (ry.multiplicity.omega || ry.multiplicity.count != 1)
                throw ModelError(ModelErrc::MalformedRay, "two-sided ray '" + ry.id + "' must have multiplicity 1");
            for (const auto& o : ry.exceptional)
                if (o.weight.is_zero())
                    throw ModelError(ModelErrc::MalformedWeight, "two-sided ray '" + ry.id + "' has a zero exceptional weight");
            const std::size_t alpha = resolve(*ry.alpha, ry.id);
            vm.alpha_cycle_.push_back(alpha);
            vm.two_sided_from_[alpha].push_back(r);
            vm.two_sided_into_[omega].push_back(r);
        }
    }
    if (!any_forward)
        throw ModelError(ModelErrc::MissingForwardRay, "model '" + raw.name + "' has no forward ray, so phi would be surjective");
    vm.model_ = std::move(raw);
    return vm;
}

// w_n(k) = w(k) w(phi k) ... w(phi^{n-1} k); w_0 = 1.
inline RationalComplex w_n(const ValidatedModel& m, PointRef point, std::uint64_t n) {
    RationalComplex acc(1);
    if (!m.resolvable(point)) throw ModelError(ModelErrc::UnresolvablePoint, "w_n: unresolvable point");
    for (std::uint64_t i = 0; i < n; ++i) {
        acc *= m.weight_at(point);
        point = m.next(point);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Core sets L, M, N

struct LComponent {
    std::vector<std::size_t> cycles;
    std::vector<std::size_t> two_sided_rays;
};

struct Cluster {
    std::size_t cycle{0};
    std::vector<std::size_t> forward_rays;
};

struct Source {
    std::size_t ray{0};
    std::uint64_t copy{0};
};

// A zero of w. RayTail stands for the infinitely many zeros a phase-locked
// ray inherits from an anchor cycle that has a zero weight.
struct ZeroSite {
    enum class Kind { cycle_point, ray_point, ray_tail };
    Kind kind{Kind::cycle_point};
    std::size_t owner{0};  // cycle index or ray index
    std::int64_t position{0};  // phase or ray index
    bool isolated{true};
    bool infinite{false};
};

struct CoreSets {
    std::vector<LComponent> L_components;
    std::vector<std::size_t> N_cycles;
    std::vector<Cluster> M_clusters;
    std::vector<Source> sources;  // finite part; see sources_infinite
    bool sources_infinite{false};
    std::vector<ZeroSite> Z_w;
    std::vector<std::size_t> Int_L_isolated;
    bool interior_of_L_empty{false};

    // card(K \ phi(K)); nullopt when infinite.
    [[nodiscard]] std::optional<std::uint64_t> source_count() const {
        if (sources_infinite) return std::nullopt;
        return sources.size();
    }
    [[nodiscard]] bool zeros_all_isolated() const {
        return std::all_of(Z_w.begin(), Z_w.end(), [](const ZeroSite& z) { return z.isolated; });
    }
    // card Z(w); nullopt when infinite.
    [[nodiscard]] std::optional<std::uint64_t> zero_count() const {
        std::uint64_t n = 0;
        for (const auto& z : Z_w) {
            if (z.infinite) return std::nullopt;
            ++n;
        }
        return n;
    }
};

inline CoreSets core_sets(const ValidatedModel& m) {
    CoreSets cs;
    const std::size_t nc = m.cycle_count();

    // Weak components of the graph cycles + two-sided rays.
    std::vector<std::size_t> parent(nc);
    for (std::size_t c = 0; c < nc; ++c) parent[c] = c;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t r = 0; r < m.ray_count(); ++r)
        if (!m.is_forward(r)) parent[find(m.alpha_cycle(r))] = find(m.omega_cycle(r));
    std::map<std::size_t, std::size_t> comp_of_root;
    for (std::size_t c = 0; c < nc; ++c) {
        auto [it, fresh] = comp_of_root.try_emplace(find(c), cs.L_components.size());
        if (fresh) cs.L_components.emplace_back();
        cs.L_components[it->second].cycles.push_back(c);
    }
    for (std::size_t r = 0; r < m.ray_count(); ++r)
        if (!m.is_forward(r)) cs.L_components[comp_of_root[find(m.omega_cycle(r))]].two_sided_rays.push_back(r);

    bool any_two_sided = false;
    for (std::size_t c = 0; c < nc; ++c) {
        if (m.in_N(c)) {
            cs.N_cycles.push_back(c);
            cs.M_clusters.push_back({c, m.forward_rays_into(c)});
        }
        if (m.is_isolated(c)) cs.Int_L_isolated.push_back(c);
        if (m.has_two_sided(c)) any_two_sided = true;
    }
    cs.interior_of_L_empty = !any_two_sided && cs.N_cycles.size() == nc;

    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        if (!m.is_forward(r)) continue;
        const auto& mult = m.ray(r).multiplicity;
        if (mult.omega) cs.sources_infinite = true;
        const std::uint64_t listed = mult.omega ? 1 : mult.count;
        for (std::uint64_t copy = 0; copy < listed; ++copy) cs.sources.push_back({r, copy});
    }
    if (cs.sources_infinite) cs.sources.clear();

    for (std::size_t c = 0; c < nc; ++c)
        for (std::uint64_t ph = 0; ph < m.period(c); ++ph)
            if (m.cycle(c).weights[ph].is_zero())
                cs.Z_w.push_back({ZeroSite::Kind::cycle_point, c, static_cast<std::int64_t>(ph), m.is_isolated(c), false});
    for (std::size_t r = 0; r < m.ray_count(); ++r) {
        for (const auto& o : m.ray(r).exceptional)
            if (o.weight.is_zero()) cs.Z_w.push_back({ZeroSite::Kind::ray_point, r, o.index, true, false});
        if (m.has_zero_weight(m.omega_cycle(r))) cs.Z_w.push_back({ZeroSite::Kind::ray_tail, r, 1, true, true});
        if (!m.is_forward(r) && m.has_zero_weight(m.alpha_cycle(r)))
            cs.Z_w.push_back({ZeroSite::Kind::ray_tail, r, -1, true, true});
    }
    return cs;
}

// ---------------------------------------------------------------------------
// Spectral radii of the restrictions of T

struct Part {
    enum class Kind { M, N, L, cycle, cluster };
    Kind kind{Kind::M};
    std::string id;  // cycle id for Kind::cycle / Kind::cluster

    static Part M() { return {Kind::M, {}}; }
    static Part N() { return {Kind::N, {}}; }
    static Part L() { return {Kind::L, {}}; }
    static Part cycle(std::string id) { return {Kind::cycle, std::move(id)}; }
    static Part cluster(std::string id) { return {Kind::cluster, std::move(id)}; }
};

namespace detail {

// Growth rate of ray r read off its own weights over one locked period:
// |prod_{lock <= i < lock+p} w(k_i)|^(1/p).
inline ExactRadius tail_growth(const ValidatedModel& m, std::size_t r) {
    const std::uint64_t p = m.period(m.omega_cycle(r));
    const std::int64_t start = m.lock_hi(r);
    RationalComplex prod(1);
    for (std::uint64_t i = 0; i < p; ++i) prod *= m.ray_weight(r, 0, start + static_cast<std::int64_t>(i));
    return ExactRadius::geometric_mean(prod, p);
}

}  // namespace detail

// Spectral radius of T restricted to `part`. Over M the radius is read from
// the ray tails of each cluster; over N, L and single cycles from the cycle
// weights directly.
inline ExactRadius rho(const ValidatedModel& m, const Part& part) {
    std::optional<ExactRadius> best;
    auto take = [&](const ExactRadius& r) {
        if (!best || *best < r) best = r;
    };
    auto lookup = [&](const std::string& id) {
        auto c = m.cycle_index(id);
        if (!c) throw ModelError(ModelErrc::EmptyPart, "no cycle '" + id + "'");
        return *c;
    };
    switch (part.kind) {
        case Part::Kind::M:
            for (std::size_t r = 0; r < m.ray_count(); ++r)
                if (m.is_forward(r)) take(detail::tail_growth(m, r));
            break;
        case Part::Kind::N:
            for (std::size_t c = 0; c < m.cycle_count(); ++c)
                if (m.in_N(c)) take(m.gm(c));
            break;
        case Part::Kind::L:
            for (std::size_t c = 0; c < m.cycle_count(); ++c) take(m.gm(c));
            break;
        case Part::Kind::cycle: take(m.gm(lookup(part.id))); break;
        case Part::Kind::cluster: {
            const std::size_t c = lookup(part.id);
            if (!m.in_N(c)) throw ModelError(ModelErrc::EmptyPart, "cycle '" + part.id + "' carries no forward ray");
            take(m.gm(c));
            for (std::size_t r : m.forward_rays_into(c)) take(detail::tail_growth(m, r));
            break;
        }
    }
    if (!best) throw ModelError(ModelErrc::EmptyPart, "empty part");
    return *best;
}

// 1 / rho(T^{-1}, part) for the cycles of `part`: the smallest geometric mean.
// Zero when some cycle has a zero weight (T is not invertible there).
inline ExactRadius inverse_radius_bound(const ValidatedModel& m, const std::vector<std::size_t>& cycles) {
    if (cycles.empty()) throw ModelError(ModelErrc::EmptyPart, "no cycles");
    ExactRadius best = m.gm(cycles.front());
    for (std::size_t c : cycles) best = std::min(best, m.gm(c));
    return best;
}

}  // namespace ckspec
