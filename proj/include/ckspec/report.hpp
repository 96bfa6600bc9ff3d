#pragma once

// Serialization of spectra and certificates. The JSON layout is described in
// docs/report-schema.md; bump kReportSchemaVersion on any incompatible change.

#include "ckspec/model_io.hpp"
#include "ckspec/oracle.hpp"

#include <cmath>
#include <numbers>

namespace ckspec {

inline constexpr int kReportSchemaVersion = 1;

namespace detail {

inline json radius_to_json(const ExactRadius& r) { return json::array({to_string(r.sq()), r.p()}); }

inline json count_to_json(const Count& c) { return c.infinite ? json("INFINITE") : json(c.value); }

}  // namespace detail

// {"annuli": [[loSq, loP, hiSq, hiP], ...], "root_sets": [[reNum, reDen, imNum, imDen, p], ...]}
// with squared radii as "num/den" strings.
inline nlohmann::json radial_set_to_json(const RadialSet& s) {
    using detail::json;
    json annuli = json::array();
    for (const auto& a : s.annuli()) annuli.push_back({to_string(a.lo.sq()), a.lo.p(), to_string(a.hi.sq()), a.hi.p()});
    json roots = json::array();
    for (const auto& r : s.root_sets()) {
        json e = detail::weight_to_json(r.w);
        e.push_back(r.p);
        roots.push_back(e);
    }
    return {{"annuli", annuli}, {"root_sets", roots}};
}

inline std::string describe(const RadialSet& s) {
    if (s.is_empty()) return "empty";
    std::string out;
    auto sep = [&] {
        if (!out.empty()) out += " U ";
    };
    for (const auto& a : s.annuli()) {
        sep();
        if (a.lo == a.hi) out += a.lo.is_zero() ? "{0}" : "circle r=" + a.lo.expression();
        else if (a.lo.is_zero()) out += "disk r<=" + a.hi.expression();
        else out += "annulus " + a.lo.expression() + "<=r<=" + a.hi.expression();
    }
    for (const auto& r : s.root_sets()) {
        sep();
        out += r.p == 1 ? "{" + to_string(r.w) + "}" : "{z^" + std::to_string(r.p) + " = " + to_string(r.w) + "}";
    }
    return out;
}

inline nlohmann::json zero_report_to_json(const ZeroReport& z) {
    using detail::json;
    return {{"upper", z.upper},
            {"lower", z.lower},
            {"dim_ker", detail::count_to_json(z.dim_ker)},
            {"defect", detail::count_to_json(z.defect)},
            {"index", z.index ? json(*z.index) : json(nullptr)},
            {"card_sources", detail::count_to_json(z.card_sources)},
            {"card_zeros", detail::count_to_json(z.card_zeros)},
            {"zeros_isolated", z.zeros_isolated},
            {"zero_in_sigma5", z.zero_in_sigma5},
            {"union_formula_dim_ker", detail::count_to_json(z.union_formula_dim_ker)},
            {"w_vanishes_on_sources", z.weyl_criterion_w_vanishes_on_sources}};
}

inline nlohmann::json report_to_json(const ValidatedModel& m, const SpectralReport& rep) {
    using detail::json;
    json strata = json::array();
    for (const auto& s : rep.fredholm_strata)
        strata.push_back({{"lo", s.gap.lo ? detail::radius_to_json(*s.gap.lo) : json(nullptr)},
                          {"hi", s.gap.hi ? detail::radius_to_json(*s.gap.hi) : json(nullptr)},
                          {"index", s.index}});
    json critical = json::array();
    for (const auto& r : rep.critical) critical.push_back(detail::radius_to_json(r));
    return {{"schema_version", kReportSchemaVersion},
            {"model", m.model().name},
            {"sigma", radial_set_to_json(rep.sigma)},
            {"sigma1", radial_set_to_json(rep.sigma1)},
            {"sigma2", radial_set_to_json(rep.sigma2)},
            {"sigma2_dual", radial_set_to_json(rep.sigma2_dual)},
            {"sigma3", radial_set_to_json(rep.sigma3)},
            {"sigma4", radial_set_to_json(rep.sigma4)},
            {"sigma5", radial_set_to_json(rep.sigma5)},
            {"sigma_M", radial_set_to_json(rep.sigma_M)},
            {"sigma_L", radial_set_to_json(rep.sigma_L)},
            {"rotation_invariant", rep.rotation_invariant},
            {"no_isolated_periodic_points", rep.no_isolated_periodic_points},
            {"no_isolated_points", rep.no_isolated_points},
            {"critical_radii", critical},
            {"fredholm_strata", strata},
            {"zero", zero_report_to_json(rep.zero_report)}};
}

inline std::string report_to_text(const ValidatedModel& m, const SpectralReport& rep) {
    std::ostringstream os;
    os << "model " << m.model().name << ": " << m.cycle_count() << " cycles, " << m.ray_count() << " rays\n";
    os << "  sigma        " << describe(rep.sigma) << "\n";
    os << "  sigma_M      " << describe(rep.sigma_M) << "\n";
    os << "  sigma_L      " << describe(rep.sigma_L) << "\n";
    os << "  sigma1       " << describe(rep.sigma1) << "\n";
    os << "  sigma2       " << describe(rep.sigma2) << "\n";
    os << "  sigma2'      " << describe(rep.sigma2_dual) << "\n";
    os << "  sigma3       " << describe(rep.sigma3) << "\n";
    os << "  sigma4       " << describe(rep.sigma4) << "\n";
    os << "  sigma5       " << describe(rep.sigma5) << "\n";
    os << "Fredholm components (complement of sigma3):\n";
    for (const auto& s : rep.fredholm_strata) {
        os << "  " << (s.gap.lo ? s.gap.lo->expression() : std::string("0")) << " " << (s.gap.lo ? "<" : "<=") << " |z| < "
           << (s.gap.hi ? s.gap.hi->expression() : std::string("inf")) << "   index " << s.index << "\n";
    }
    const ZeroReport& z = rep.zero_report;
    os << "at 0: upper=" << z.upper << " lower=" << z.lower << " dim ker=" << z.dim_ker.str() << " defect=" << z.defect.str()
       << " index=" << (z.index ? std::to_string(*z.index) : std::string("undefined")) << " 0 in sigma5=" << z.zero_in_sigma5 << "\n";
    os << "  card(sources)=" << z.card_sources.str() << " card Z(w)=" << z.card_zeros.str()
       << " card(sources U Z(w))=" << z.union_formula_dim_ker.str() << " w=0 on sources=" << z.weyl_criterion_w_vanishes_on_sources
       << "\n";
    if (rep.rotation_invariant) os << "all cycles carry rays: every set above is rotation invariant\n";
    if (rep.no_isolated_periodic_points) os << "no isolated periodic points: sigma5 = sigma\n";
    if (rep.no_isolated_points) os << "no isolated points: sigma3 = sigma\n";
    return os.str();
}

inline std::string report_to_svg(const ValidatedModel& m, const SpectralReport& rep) {
    // One panel per set, drawn to a common scale.
    const std::vector<std::pair<const char*, const RadialSet*>> panels = {
        {"sigma", &rep.sigma},   {"sigma1", &rep.sigma1}, {"sigma2", &rep.sigma2}, {"sigma2'", &rep.sigma2_dual},
        {"sigma3", &rep.sigma3}, {"sigma4", &rep.sigma4}, {"sigma5", &rep.sigma5}};
    double rmax = 0.0;
    for (const auto& [name, s] : panels)
        if (auto r = s->max_radius()) rmax = std::max(rmax, r->to_double());
    if (rmax <= 0.0) rmax = 1.0;
    const double size = 220.0, half = size / 2.0, scale = (half - 30.0) / rmax;

    std::ostringstream os;
    os << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << size * 4 << R"(" height=")" << size * 2 + 30 << R"(">)" << "\n";
    os << R"(<text x="8" y="18" font-family="monospace" font-size="14">)" << m.model().name << "</text>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const double cx = half + size * static_cast<double>(i % 4), cy = 30 + half + size * static_cast<double>(i / 4);
        os << R"(<g><text x=")" << cx - half + 8 << R"(" y=")" << cy - half + 14
           << R"(" font-family="monospace" font-size="12">)" << panels[i].first << "</text>\n";
        os << R"(<line x1=")" << cx - half + 10 << R"(" y1=")" << cy << R"(" x2=")" << cx + half - 10 << R"(" y2=")" << cy
           << R"(" stroke="#ccc"/><line x1=")" << cx << R"(" y1=")" << cy - half + 20 << R"(" x2=")" << cx << R"(" y2=")"
           << cy + half - 10 << R"(" stroke="#ccc"/>)" << "\n";
        for (const auto& a : panels[i].second->annuli()) {
            const double lo = a.lo.to_double() * scale, hi = a.hi.to_double() * scale;
            if (a.lo == a.hi) {
                if (a.lo.is_zero()) os << R"(<circle cx=")" << cx << R"(" cy=")" << cy << R"(" r="3" fill="#1f4e8c"/>)";
                else os << R"(<circle cx=")" << cx << R"(" cy=")" << cy << R"(" r=")" << hi << R"(" fill="none" stroke="#1f4e8c" stroke-width="2"/>)";
            } else {
                // ring as an even-odd path
                os << R"(<path fill="#1f4e8c" fill-opacity="0.35" fill-rule="evenodd" d="M )" << cx + hi << " " << cy << " A " << hi
                   << " " << hi << " 0 1 0 " << cx - hi << " " << cy << " A " << hi << " " << hi << " 0 1 0 " << cx + hi << " " << cy;
                if (lo > 0)
                    os << " M " << cx + lo << " " << cy << " A " << lo << " " << lo << " 0 1 0 " << cx - lo << " " << cy << " A " << lo
                       << " " << lo << " 0 1 0 " << cx + lo << " " << cy;
                os << R"(" />)";
            }
            os << R"(<text x=")" << cx + hi * std::cos(std::numbers::pi / 4) + 2 << R"(" y=")" << cy - hi * std::sin(std::numbers::pi / 4) - 2
               << R"(" font-family="monospace" font-size="10">)" << a.hi.expression() << "</text>\n";
        }
        for (const auto& r : panels[i].second->root_sets()) {
            // z^p = W: radius |W|^(1/p), arguments (arg W + 2 pi j) / p
            const double rad = r.radius().to_double() * scale;
            const double arg = std::atan2(to_double(r.w.im), to_double(r.w.re));
            for (std::uint64_t j = 0; j < r.p; ++j) {
                const double t = (arg + 2 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(r.p);
                os << R"(<circle cx=")" << cx + rad * std::cos(t) << R"(" cy=")" << cy - rad * std::sin(t)
                   << R"(" r="3.5" fill="#b03030"/>)";
            }
            os << R"(<text x=")" << cx + rad + 4 << R"(" y=")" << cy + 12 << R"(" font-family="monospace" font-size="10">)"
               << r.radius().expression() << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline nlohmann::json certificate_to_json(const Certificate& c) {
    using detail::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"kind", to_string(c.kind)},
            {"lambda", to_string(c.lambda)},
            {"horizon", c.horizon},
            {"residual_ratio", num(c.residual_ratio)},
            {"margin", num(c.margin)},
            {"pass", c.pass}};
}

}  // namespace ckspec
