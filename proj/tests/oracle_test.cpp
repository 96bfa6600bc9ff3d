#include "corpus.hpp"

#include "ckspec/selfcheck.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ckspec;

namespace {

ValidatedModel load(const std::string& name) { return validate(*fixture(name)); }
RationalComplex q(long n, long d = 1) { return RationalComplex(Rational(n, d)); }

}  // namespace

TEST(ChainKernel, Examples) {
    EXPECT_EQ(chain_kernel_dim(load("ray1"), q(1, 2)), Count::finite(1));
    EXPECT_EQ(chain_kernel_dim(load("ray1"), q(2)), Count::finite(0));
    EXPECT_TRUE(chain_kernel_dim(load("half"), q(1, 2)).infinite);
    EXPECT_EQ(chain_kernel_dim(load("half"), q(2)), Count::finite(0));
}

TEST(ChainKernel, ZeroCutsTheRay) {
    // w = 0 at index 2: for |lambda| > 1 the segment after the zero still grows,
    // the part before it is forced to 0 by lambda f(k_2) = 0 ... f(k_0) = 0
    EXPECT_EQ(chain_kernel_dim(load("zero"), q(2)), Count::finite(0));
    EXPECT_EQ(chain_kernel_dim(load("zero"), q(1, 2)), Count::finite(1));
}

TEST(ChainDefect, Examples) {
    EXPECT_EQ(chain_defect_dim(load("ray1"), q(1, 2)), Count::finite(0));
    EXPECT_EQ(chain_defect_dim(load("zero"), RationalComplex(0)), Count::finite(1));
    EXPECT_EQ(chain_defect_dim(load("twocyc_rev"), q(1)), Count::finite(1));
    EXPECT_EQ(chain_defect_dim(load("twocyc"), q(1)), Count::finite(0));
}

TEST(Chains, CycleAmplitudesCoupledThroughARay) {
    // Fixed points A, B (w = 1) joined by a two-sided ray with w = 2 at index 0,
    // plus an unrelated forward cluster on C (w = 1/2). At lambda = 1 a kernel
    // vector is constant s_A on A and on the backward half of the ray, s_A / 2
    // after index 0, so s_B = s_A / 2: one dimension. The dual has one atom
    // chain per fixed point.
    OrbitModel raw{"coupled",
                   {{"A", {q(1)}}, {"B", {q(1)}}, {"C", {q(1, 2)}}},
                   {}};
    Ray link;
    link.id = "l";
    link.kind = RayKind::two_sided;
    link.alpha = Anchor{"A", 0};
    link.omega = {"B", 0};
    link.exceptional = {{0, q(2)}};
    Ray feed;
    feed.id = "f";
    feed.omega = {"C", 0};
    raw.rays = {link, feed};
    const ValidatedModel m = validate(raw);
    EXPECT_EQ(chain_kernel_dim(m, q(1)), Count::finite(1));
    EXPECT_EQ(chain_defect_dim(m, q(1)), Count::finite(2));
    const FredholmData fd = fredholm_data(m, q(1));
    EXPECT_EQ(fd.dim_ker, Count::finite(1));
    EXPECT_EQ(fd.defect, Count::finite(2));
    // at lambda = -1 neither fixed point is an eigenvalue
    EXPECT_EQ(chain_kernel_dim(m, q(-1)), Count::finite(0));
}

TEST(Chains, AgreeWithEngineOnCorpus) {
    for (const auto& raw : corpus_data::corpus()) {
        const auto bad = self_check(validate(raw));
        for (const auto& b : bad) ADD_FAILURE() << raw.name << " at " << b.lambda << ": " << b.what;
    }
}

TEST(Chains, KernelSplitsIntoLPartAndSources) {
    const ValidatedModel m = load("twocyc");
    // 1/2 < |lambda| < 2: the two-sided ray carries the kernel, A's cluster has no decaying copies
    EXPECT_EQ(chain_kernel_dim(m, q(1), ChainScope::L_only), Count::finite(1));
    EXPECT_EQ(m2_source_count(m, q(1)), Count::finite(0));
    // |lambda| < 1/2: the forward ray adds its head
    EXPECT_EQ(chain_kernel_dim(m, q(1, 4)), Count::finite(1));
    EXPECT_EQ(m2_source_count(m, q(1, 4)), Count::finite(1));
    EXPECT_EQ(chain_kernel_dim(m, q(1, 4), ChainScope::L_only), Count::finite(0));
}

TEST(InCertificate, HalfOnTheUnitCircle) {
    const ValidatedModel m = load("half");
    const Certificate c = in_certificate(m, RationalComplex(0, 1), Side::upper, 10000);
    EXPECT_TRUE(c.pass);
    EXPECT_LE(c.residual_ratio, 0.02);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {100U, 1000U, 10000U}) {
        const double res = in_certificate(m, RationalComplex(0, 1), Side::upper, n).residual_ratio;
        EXPECT_LT(res, prev);
        EXPECT_LE(res * std::sqrt(static_cast<double>(n)), 5.0);
        prev = res;
    }
}

TEST(InCertificate, DualSideAndOtherModels) {
    EXPECT_TRUE(in_certificate(load("ray1"), q(1), Side::upper, 1000).pass);
    EXPECT_TRUE(in_certificate(load("half"), RationalComplex(Rational(3, 5), Rational(4, 5)), Side::lower, 1000).pass);
    // gm 2 on a 3-cycle with weights (1, 2, 4)
    const Certificate per3 = in_certificate(load("per3_cluster"), q(-2), Side::lower, 10000);
    EXPECT_TRUE(per3.pass) << per3.residual_ratio;
    const Certificate ring = in_certificate(load("twocyc"), q(1, 2), Side::upper, 10000);
    EXPECT_TRUE(ring.pass) << ring.residual_ratio;
}

TEST(InCertificate, InsideABundleDisk) {
    const Certificate c = in_certificate(load("half"), q(1, 2), Side::upper, 200);
    EXPECT_TRUE(c.pass);
    EXPECT_LT(c.residual_ratio, 1e-12);
}

TEST(InCertificate, AtZero) {
    EXPECT_TRUE(in_certificate(load("half"), RationalComplex(0), Side::upper, 10).pass);
    EXPECT_TRUE(in_certificate(load("bundlezero"), RationalComplex(0), Side::lower, 10).pass);
    EXPECT_THROW(in_certificate(load("ray1"), RationalComplex(0), Side::upper, 10), CertificateError);
}

TEST(InCertificate, NoEligibleOrbit) {
    // 1/2 is a Fredholm point of ray1
    EXPECT_THROW(in_certificate(load("ray1"), q(1, 2), Side::upper, 100), CertificateError);
    EXPECT_THROW(in_certificate(load("ray1"), q(1), Side::upper, 3), CertificateError);
}

TEST(OutCertificate, Examples) {
    const Certificate half = out_certificate(load("half"), q(2), 200);
    EXPECT_TRUE(half.pass);
    EXPECT_EQ(half.horizon, 1U);
    EXPECT_NEAR(half.margin, std::log(2.0), 1e-12);

    const Certificate per3 = out_certificate(load("per3_cluster"), q(3), 200);
    EXPECT_TRUE(per3.pass);
    EXPECT_LE(per3.horizon, 64U);

    EXPECT_TRUE(out_certificate(load("twocyc"), q(4), 200).pass);
    // between the growth rates of an isolated 3-cycle nothing converges, but lambda^3 != 8
    EXPECT_TRUE(out_certificate(load("per3_isolated"), q(3, 2), 200).pass);
}

TEST(OutCertificate, FailsInsideTheSpectrum) {
    EXPECT_FALSE(out_certificate(load("ray1"), q(1, 2), 200).pass);
    EXPECT_THROW(out_certificate(load("ray1"), RationalComplex(0), 200), CertificateError);
}

TEST(OutCertificate, InverseRegime) {
    // inside the hole of sigma(T) for A (2) -> B (4) with the forward ray feeding C (1/4)
    OrbitModel raw{"hole", {{"A", {q(2)}}, {"B", {q(4)}}, {"C", {q(1, 4)}}}, {}};
    Ray link;
    link.id = "l";
    link.kind = RayKind::two_sided;
    link.alpha = Anchor{"A", 0};
    link.omega = {"B", 0};
    Ray feed;
    feed.id = "f";
    feed.omega = {"C", 0};
    raw.rays = {link, feed};
    const ValidatedModel m = validate(raw);
    EXPECT_FALSE(sigma_total(m).contains(q(1)));
    const Certificate c = out_certificate(m, q(1), 200);
    EXPECT_TRUE(c.pass) << c.details;
}
