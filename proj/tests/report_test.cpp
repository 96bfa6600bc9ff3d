#include "corpus.hpp"

#include "ckspec/report.hpp"

#include <gtest/gtest.h>

using namespace ckspec;
using nlohmann::json;

namespace {

ValidatedModel load(const std::string& name) { return validate(*fixture(name)); }

}  // namespace

TEST(RadialSetJson, Layout) {
    const RadialSet s = RadialSet::canonicalize({{ExactRadius::of(Rational(1, 2)), ExactRadius(Rational(8), 3)}},
                                                {RootSet{RationalComplex(8), 3}, RootSet{RationalComplex(0, 1), 1}, RootSet{RationalComplex(0, 3), 1}});
    const json j = radial_set_to_json(s);
    ASSERT_EQ(j["annuli"].size(), 1U);
    EXPECT_EQ(j["annuli"][0], json::array({"1/4", 1, "8", 3}));
    // i is absorbed by the annulus 1/2 <= r <= sqrt 2; z^3 = 8 and 3i are not
    ASSERT_EQ(j["root_sets"].size(), 2U);
    for (const auto& r : j["root_sets"]) EXPECT_EQ(r.size(), 5U);
    EXPECT_EQ(radial_set_to_json(RadialSet::empty()), json({{"annuli", json::array()}, {"root_sets", json::array()}}));
}

TEST(Describe, ReadableForms) {
    EXPECT_EQ(describe(RadialSet::empty()), "empty");
    EXPECT_EQ(describe(RadialSet::circle(ExactRadius::of(1))), "circle r=1");
    EXPECT_EQ(describe(RadialSet::roots(RationalComplex(0, 1), 1)), "{i}");
    EXPECT_EQ(describe(RadialSet::roots(RationalComplex(8), 3)), "{z^3 = 8}");
    EXPECT_NE(describe(RadialSet::disk(ExactRadius::of(1))).find("disk"), std::string::npos);
}

TEST(ReportJson, CarriesEverySet) {
    for (const auto& f : fixtures()) {
        const ValidatedModel m = validate(f.build());
        const json j = report_to_json(m, essential_spectra(m));
        EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
        EXPECT_EQ(j["model"], f.name);
        for (const char* key : {"sigma", "sigma1", "sigma2", "sigma2_dual", "sigma3", "sigma4", "sigma5", "sigma_M", "sigma_L"}) {
            ASSERT_TRUE(j.contains(key)) << key;
            EXPECT_TRUE(j[key].contains("annuli"));
            EXPECT_TRUE(j[key].contains("root_sets"));
        }
        for (const char* key : {"rotation_invariant", "critical_radii", "fredholm_strata", "zero"}) EXPECT_TRUE(j.contains(key)) << key;
        EXPECT_EQ(json::parse(j.dump()), j);
    }
}

TEST(ReportJson, Ray1Values) {
    const ValidatedModel m = load("ray1");
    const json j = report_to_json(m, essential_spectra(m));
    EXPECT_EQ(j["sigma"], radial_set_to_json(RadialSet::disk(ExactRadius::of(1))));
    EXPECT_EQ(j["sigma3"], radial_set_to_json(RadialSet::circle(ExactRadius::of(1))));
    ASSERT_EQ(j["fredholm_strata"].size(), 2U);
    EXPECT_TRUE(j["fredholm_strata"][0]["lo"].is_null());
    EXPECT_EQ(j["fredholm_strata"][0]["index"], 1);
    EXPECT_EQ(j["fredholm_strata"][1]["index"], 0);
    EXPECT_EQ(j["zero"]["dim_ker"], 1);
    EXPECT_EQ(j["zero"]["defect"], 0);
}

TEST(ReportJson, InfiniteCounts) {
    const ValidatedModel m = load("half");
    const json j = report_to_json(m, essential_spectra(m));
    EXPECT_EQ(j["zero"]["dim_ker"], "INFINITE");
    EXPECT_TRUE(j["zero"]["index"].is_null());
}

TEST(ReportText, MentionsEachSet) {
    const ValidatedModel m = load("twocyc");
    const std::string text = report_to_text(m, essential_spectra(m));
    for (const char* s : {"model twocyc", "sigma1", "sigma2'", "sigma5", "index", "card(sources)"})
        EXPECT_NE(text.find(s), std::string::npos) << s;
}

TEST(ReportSvg, WellFormedPanels) {
    const ValidatedModel m = load("per3_isolated");
    const std::string svg = report_to_svg(m, essential_spectra(m));
    EXPECT_EQ(svg.rfind("<svg", 0), 0U);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    std::size_t groups = 0;
    for (std::size_t pos = 0; (pos = svg.find("<g>", pos)) != std::string::npos; ++pos) ++groups;
    EXPECT_EQ(groups, 7U);
    // the isolated 3-cycle shows up as three marked points in sigma
    EXPECT_NE(svg.find("#b03030"), std::string::npos);
}

TEST(CertificateJson, Keys) {
    const Certificate c = out_certificate(load("half"), RationalComplex(2), 200);
    const json j = certificate_to_json(c);
    EXPECT_EQ(j["kind"], "OUT_neumann");
    EXPECT_EQ(j["lambda"], "2");
    EXPECT_EQ(j["horizon"], 1);
    EXPECT_EQ(j["pass"], true);
    EXPECT_TRUE(j["margin"].is_number());
}
