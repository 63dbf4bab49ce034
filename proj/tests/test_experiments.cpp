#include "morrey/checks.hpp"
#include "morrey/harness.hpp"
#include "morrey/profiles.hpp"
#include "morrey/selftest.hpp"
#include "morrey/sharpness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace morrey;

TEST(Profiles, DefaultsValidate)
{
    for (const auto& id : theorem_ids()) EXPECT_NO_THROW(validate_profile(default_profile(id))) << id;
    EXPECT_THROW(default_profile("nope"), parameter_error);
}

TEST(Profiles, ViolationsNamed)
{
    ExponentProfile p = default_profile("bilinear-q1");
    p.set("q1", Rational(2)).set("q2", Rational(2)).set("t", Rational(5, 2));
    p.v.erase("q");
    try {
        validate_profile(p);
        FAIL() << "accepted 1/q1 + 1/q2 = 1";
    } catch (const parameter_error& e) {
        EXPECT_NE(std::string(e.what()).find("1/q1 + 1/q2 < 1"), std::string::npos);
    }
    ExponentProfile a = default_profile("adams");
    a.set("s", Rational(4));
    EXPECT_THROW(validate_profile(a), parameter_error);
    ExponentProfile m = default_profile("two-weight");
    m.v.erase("alpha");
    EXPECT_THROW(validate_profile(m), parameter_error);
}

TEST(Profiles, CompleteDerivesHarmonicMean)
{
    ExponentProfile p{"two-weight", 1, {}};
    p.set("q1", Rational(3)).set("q2", Rational(6));
    EXPECT_EQ(complete(p).get("q").str(), "2");
    EXPECT_EQ(default_profile("stein-weiss").get("p").str(), "3/4");
}

TEST(Sharpness, PairStructure)
{
    const SharpnessPair sp = build_sharpness_pair(default_profile("sharp"), 4);
    EXPECT_EQ(sp.lattice, 4);
    ASSERT_EQ(sp.cubes.size(), 4u);
    EXPECT_EQ(sp.f.geom.depth, 5);
    double support = 0.0;
    for (std::size_t i = 0; i < sp.f.size(); ++i)
        if (sp.f[i] > 0) {
            EXPECT_DOUBLE_EQ(sp.f[i], 2.0);
            support += sp.f.geom.cell_volume();
        }
    EXPECT_DOUBLE_EQ(support, 24.0 / 32.0);
    for (const auto& q : sp.cubes) EXPECT_EQ(q.extent(0), 2);
    for (std::size_t j = 0; j + 1 < sp.triples.size(); ++j) EXPECT_LE(sp.triples[j].hi[0], sp.triples[j + 1].lo[0]);
}

TEST(Sharpness, UnresolvableDeltaRejected)
{
    ExponentProfile p = default_profile("sharp");
    p.set("q1", Rational(39, 10)).set("q2", Rational(39, 10));
    EXPECT_THROW(build_sharpness_pair(p, 1), numerical_error);
    EXPECT_THROW(build_sharpness_pair(default_profile("sharp"), 0), parameter_error);
}

TEST(Sharpness, FloorAndSmallCubeBounds)
{
    const SharpnessResult r = run_sharpness(default_profile("sharp"), {4, 5, 6});
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto& row : r.rows) {
        EXPECT_GE(row.min_pointwise, 0.95 * row.floor);
        EXPECT_LE(row.norm_f_small, row.bound_f * (1 + 1e-12));
        EXPECT_LE(row.norm_g_small, row.bound_g * (1 + 1e-12));
        EXPECT_GE(row.norm_f, row.norm_f_small);
    }
    EXPECT_LT(r.slope, 0.0);
    EXPECT_TRUE(r.blowup_branch);
}

TEST(Harness, ZeroPairRatioIsZero)
{
    const ExponentProfile p = default_profile("two-weight");
    const GridGeometry g{DyadicCube{1, 0, {0, 0}}, 4};
    const GridFunction z = GridFunction::constant(g, 0.0, Sign::nonneg);
    const RatioParts r = evaluate_inequality(p, z, z, harness_weights(p, g));
    EXPECT_EQ(safe_ratio(r), 0.0);
    EXPECT_THROW(safe_ratio(RatioParts{1.0, 0.0}), numerical_error);
}

TEST(Harness, StableAcrossLevels)
{
    for (const char* id : {"adams", "bilinear-q1", "bilinear-q", "bilinear-p2", "two-weight", "one-weight", "olsen", "necessity"}) {
        HarnessOptions opt;
        opt.per_kind = 2;
        opt.levels = {4, 5, 6};
        const HarnessResult h = ratio_harness(default_profile(id), opt);
        EXPECT_TRUE(h.stable) << id << " growth " << h.worst_growth;
        for (const auto& rec : h.records) EXPECT_TRUE(std::isfinite(rec.ratio)) << id;
    }
}

TEST(Harness, Deterministic)
{
    HarnessOptions opt;
    opt.per_kind = 1;
    opt.levels = {4, 5};
    const HarnessResult a = ratio_harness(default_profile("two-weight"), opt), b = ratio_harness(default_profile("two-weight"), opt);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].ratio, b.records[i].ratio);
}

TEST(SteinWeiss, ConditionsNamed)
{
    const ExponentProfile p = complete(default_profile("stein-weiss"));
    EXPECT_EQ(stein_weiss_violation(p, 0.05, 0.1, 0.1), "");
    EXPECT_EQ(stein_weiss_violation(p, 0.1, 0.075, 0.075), "beta < n(1/s - 1)");
    EXPECT_EQ(stein_weiss_violation(p, -0.25, 0.3, 0.2), "gamma1 < n/q1'");
    EXPECT_NE(stein_weiss_violation(p, 0.0, 0.0, 0.0), "");
}

TEST(SteinWeiss, ExponentAInsideAdmissibleRange)
{
    const ExponentProfile p = complete(default_profile("stein-weiss"));
    for (auto [b, g1, g2] : {std::tuple{0.05, 0.1, 0.1}, std::tuple{-0.05, 0.15, 0.15}}) {
        const double a = stein_weiss_a(p, b, g1, g2);
        EXPECT_GT(a, 1.0);
        EXPECT_LT(a, 1.25);
        if (b > 0) EXPECT_LT(a * b, 1.0 / 12.0);
        EXPECT_LT(g1, 1.0 / conjugate(1.25 / a));
    }
}

TEST(SteinWeiss, Dichotomy)
{
    const ExponentProfile p = default_profile("stein-weiss");
    const SteinWeissResult fin = stein_weiss_check(0.05, 0.1, 0.1, p, 5, 6, false);
    EXPECT_EQ(fin.verdict, "FINITE");
    const SteinWeissResult div = stein_weiss_check(-0.2, 0.0, 0.0, p, 5, 6, false);
    EXPECT_EQ(div.verdict, "DIVERGENT");
    EXPECT_FALSE(div.conditions);
}

TEST(Necessity, UnitWeights)
{
    const GridGeometry g{DyadicCube{1, 0, {0, 0}}, 5};
    const NecessityResult r = necessity_check(WeightSystem::unit(g), default_profile("necessity"));
    EXPECT_NEAR(r.char_testing, 1.0, 1e-12);
    EXPECT_EQ(r.testing_constant, 2.0);
    EXPECT_TRUE(r.testing_ok);
    EXPECT_TRUE(r.necessity_ok);
}

TEST(Necessity, BlockWeights)
{
    for (std::uint64_t s = 0; s < 2; ++s) {
        CounterRng rng(4, s);
        const NecessityResult r = necessity_check(random_block_weights(1, 5, rng), default_profile("necessity"));
        EXPECT_TRUE(r.testing_ok) << r.worst_testing;
        EXPECT_TRUE(r.necessity_ok) << r.worst_necessity;
    }
}

TEST(FsDual, UnitWeightsSplitExactly)
{
    const FsDualResult r = fs_dual_check(0.0, 0.0, default_profile("fsdual"), 6);
    EXPECT_NEAR(r.worst_split, 1.0, 1e-12);
    EXPECT_TRUE(r.pass);
}

TEST(FsDual, PowerWeights)
{
    const FsDualResult r = fs_dual_check(-0.05, -0.05, default_profile("fsdual"), 6);
    EXPECT_LE(r.worst_split, 1.0 + 1e-12);
}

TEST(Selftest, CriterionIdsRun)
{
    EXPECT_EQ(criterion_ids().size(), 12u);
    EXPECT_THROW(run_criterion("99"), parameter_error);
    EXPECT_TRUE(run_criterion("1").pass);
}
