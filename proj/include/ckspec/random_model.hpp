#pragma once

// Seeded random models for property tests: at most 6 cycles of period <= 3 and
// at most 10 rays, weights with |numerator|, |denominator| <= 16. Weights are
// drawn from a small pool often enough that geometric means repeat, and zeros,
// bundles and two-sided rays all show up regularly.

#include "ckspec/model.hpp"

#include <random>

namespace ckspec {

class RandomModelGenerator {
public:
    explicit RandomModelGenerator(std::uint64_t seed) : rng_(seed) {}

    OrbitModel next() {
        OrbitModel m;
        m.name = "random" + std::to_string(counter_++);
        const int cycles = uniform(1, 6);
        for (int c = 0; c < cycles; ++c) {
            Cycle cy;
            cy.id = "C" + std::to_string(c);
            const int p = uniform(1, 3);
            for (int j = 0; j < p; ++j) cy.weights.push_back(weight(chance(0.06)));
            m.cycles.push_back(std::move(cy));
        }
        const int rays = uniform(1, 10 - 0);
        for (int r = 0; r < rays; ++r) {
            Ray ray;
            ray.id = "R" + std::to_string(r);
            // the first ray is forward so that phi is never onto
            ray.kind = r == 0 || chance(0.6) ? RayKind::forward : RayKind::two_sided;
            ray.omega = anchor(m);
            if (ray.kind == RayKind::forward) {
                if (chance(0.2)) ray.multiplicity = Multiplicity::bundle();
                else ray.multiplicity.count = static_cast<std::uint64_t>(uniform(1, 3));
            } else {
                ray.alpha = anchor(m);
            }
            const int overrides = chance(0.5) ? uniform(1, 3) : 0;
            for (int k = 0; k < overrides; ++k) {
                const std::int64_t idx = ray.kind == RayKind::forward ? uniform(0, 4) : uniform(-3, 3);
                const bool taken = std::any_of(ray.exceptional.begin(), ray.exceptional.end(),
                                               [&](const WeightOverride& o) { return o.index == idx; });
                if (taken) continue;
                ray.exceptional.push_back({idx, weight(ray.kind == RayKind::forward && chance(0.15))});
            }
            m.rays.push_back(std::move(ray));
        }
        return m;
    }

private:
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    Anchor anchor(const OrbitModel& m) {
        const auto c = static_cast<std::size_t>(uniform(0, static_cast<int>(m.cycles.size()) - 1));
        return {m.cycles[c].id, static_cast<std::uint64_t>(uniform(0, static_cast<int>(m.cycles[c].weights.size()) - 1))};
    }

    RationalComplex weight(bool zero) {
        if (zero) return RationalComplex(0);
        static const std::pair<int, int> pool[] = {{1, 1}, {1, 2}, {2, 1}, {3, 2}, {2, 3}, {1, 4}, {4, 1}, {16, 1}, {1, 16}};
        if (chance(0.7)) {
            const auto [n, d] = pool[uniform(0, 8)];
            // a unimodular factor keeps the modulus: 1, -1, i, -i, (3 + 4i)/5
            switch (uniform(0, 5)) {
                case 0: return {Rational(-n, d), Rational(0)};
                case 1: return {Rational(0), Rational(n, d)};
                case 2: return {Rational(0), Rational(-n, d)};
                case 3:
                    if (n <= 3 && d <= 3) return {Rational(3 * n, 5 * d), Rational(4 * n, 5 * d)};
                    [[fallthrough]];
                default: return {Rational(n, d), Rational(0)};
            }
        }
        int n = 0;
        while (n == 0) n = uniform(-16, 16);
        const int im = chance(0.3) ? uniform(-16, 16) : 0;
        return {Rational(n, uniform(1, 16)), Rational(im, uniform(1, 16))};
    }

    std::mt19937_64 rng_;
    std::uint64_t counter_{0};
};

}  // namespace ckspec
