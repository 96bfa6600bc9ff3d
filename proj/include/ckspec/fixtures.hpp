#pragma once

// Built-in models. Each one exercises a different branch of the analysis:
//   half           fixed point (w = 1) with an omega-bundle: the f(x) -> f(x/2) picture
//   ray1           fixed point (w = 1) with a single forward ray
//   twocyc         cycles A (1/2) and B (2) joined by a two-sided ray A -> B, forward ray into A
//   twocyc_rev     the same with the two-sided ray running B -> A
//   per3_isolated  isolated 3-cycle (1, 2, 4) next to a ray1 cluster
//   per3_cluster   3-cycle (1, 2, 4) with a forward ray
//   zero           ray1 with w = 0 at ray index 2 (isolated zero)
//   bundlezero     omega-bundle onto a 2-cycle (2, 0) (non-isolated zero)

#include "ckspec/model.hpp"

#include <functional>

namespace ckspec {

namespace detail {

inline RationalComplex q(long n, long d = 1) { return {Rational(n, d), Rational(0)}; }

inline Ray forward_ray(std::string id, std::string cycle, Multiplicity mult = {}, std::vector<WeightOverride> ex = {}) {
    Ray r;
    r.id = std::move(id);
    r.kind = RayKind::forward;
    r.multiplicity = mult;
    r.omega = {std::move(cycle), 0};
    r.exceptional = std::move(ex);
    return r;
}

inline Ray two_sided_ray(std::string id, std::string from, std::string to) {
    Ray r;
    r.id = std::move(id);
    r.kind = RayKind::two_sided;
    r.omega = {std::move(to), 0};
    r.alpha = Anchor{std::move(from), 0};
    return r;
}

inline OrbitModel twocyc_model(bool reversed) {
    OrbitModel m;
    m.name = reversed ? "twocyc_rev" : "twocyc";
    m.cycles = {{"A", {q(1, 2)}}, {"B", {q(2)}}};
    m.rays = {reversed ? two_sided_ray("l", "B", "A") : two_sided_ray("l", "A", "B"), forward_ray("f", "A")};
    return m;
}

}  // namespace detail

struct Fixture {
    std::string name;
    std::string summary;
    std::function<OrbitModel()> build;
};

inline const std::vector<Fixture>& fixtures() {
    using detail::q;
    static const std::vector<Fixture> all = {
        {"half", "fixed point with w = 1 and an omega-bundle of forward rays",
         [] {
             return OrbitModel{"half", {{"F", {q(1)}}}, {detail::forward_ray("bundle", "F", Multiplicity::bundle())}};
         }},
        {"ray1", "fixed point with w = 1 and one forward ray",
         [] { return OrbitModel{"ray1", {{"F", {q(1)}}}, {detail::forward_ray("r", "F")}}; }},
        {"twocyc", "cycles of growth 1/2 and 2 joined by a two-sided ray, forward ray into the first",
         [] { return detail::twocyc_model(false); }},
        {"twocyc_rev", "as twocyc with the two-sided ray reversed", [] { return detail::twocyc_model(true); }},
        {"per3_isolated", "isolated 3-cycle (1, 2, 4) beside a fixed point with one forward ray",
         [] {
             return OrbitModel{"per3_isolated", {{"P", {q(1), q(2), q(4)}}, {"F", {q(1)}}}, {detail::forward_ray("r", "F")}};
         }},
        {"per3_cluster", "3-cycle (1, 2, 4) with one forward ray",
         [] { return OrbitModel{"per3_cluster", {{"P", {q(1), q(2), q(4)}}}, {detail::forward_ray("r", "P")}}; }},
        {"zero", "fixed point with one forward ray whose weight vanishes at index 2",
         [] {
             return OrbitModel{"zero", {{"F", {q(1)}}}, {detail::forward_ray("r", "F", {}, {{2, q(0)}})}};
         }},
        {"bundlezero", "omega-bundle onto a 2-cycle with weights (2, 0)",
         [] {
             return OrbitModel{"bundlezero", {{"C", {q(2), q(0)}}}, {detail::forward_ray("bundle", "C", Multiplicity::bundle())}};
         }},
    };
    return all;
}

inline std::optional<OrbitModel> fixture(const std::string& name) {
    for (const auto& f : fixtures())
        if (f.name == name) return f.build();
    return std::nullopt;
}

}  // namespace ckspec
