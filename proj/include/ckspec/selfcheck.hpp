#pragma once

// Engine against oracle over the sample grid of a model.

#include "ckspec/oracle.hpp"

namespace ckspec {

struct Mismatch {
    RationalComplex lambda;
    std::string what;
};

// Compares the spectral engine with the chain solvers at every sampled lambda,
// including the kernel and index splittings into L-part plus card(M2 \ phi(M2)).
// Also runs the pointwise recheck built into essential_spectra.
inline std::vector<Mismatch> self_check(const ValidatedModel& m) {
    std::vector<Mismatch> out;
    try {
        (void)essential_spectra(m);
    } catch (const SpectraError& e) {
        out.push_back({RationalComplex(0), e.what()});
        return out;
    }
    const ZeroReport zero = zero_analysis(m);
    for (const auto& sample : sample_lambdas(m)) {
        const RationalComplex& lam = sample.lambda;
        const Count ker = chain_kernel_dim(m, lam);
        const Count def = chain_defect_dim(m, lam);
        auto fail = [&](const std::string& what) { out.push_back({lam, what}); };
        if (lam.is_zero()) {
            if (zero.dim_ker != ker) fail("dim ker at 0: engine " + zero.dim_ker.str() + ", chains " + ker.str());
            if (zero.defect != def) fail("defect at 0: engine " + zero.defect.str() + ", chains " + def.str());
            if (zero.upper && ker.infinite) fail("upper semi-Fredholm at 0 with infinite kernel");
            if (zero.lower && def.infinite) fail("lower semi-Fredholm at 0 with infinite defect");
            continue;
        }
        const FredholmData fd = fredholm_data(m, lam);
        if (fd.dim_ker != ker) fail("dim ker: engine " + fd.dim_ker.str() + ", chains " + ker.str());
        if (fd.defect != def) fail("defect: engine " + fd.defect.str() + ", chains " + def.str());
        if (!fd.upper) continue;
        const Count ker_L = chain_kernel_dim(m, lam, ChainScope::L_only);
        const Count sources = m2_source_count(m, lam);
        if (ker != ker_L + sources) fail("dim ker != dim ker_L + card(M2 \\ phi(M2))");
        if (fd.fredholm()) {
            const Count def_L = chain_defect_dim(m, lam, ChainScope::L_only);
            if (ker_L.infinite || def_L.infinite || sources.infinite) {
                fail("infinite count at a Fredholm point");
                continue;
            }
            const auto index_L = static_cast<std::int64_t>(ker_L.value) - static_cast<std::int64_t>(def_L.value);
            if (*fd.index != index_L + static_cast<std::int64_t>(sources.value)) fail("index != index_L + card(M2 \\ phi(M2))");
        }
    }
    return out;
}

}  // namespace ckspec
