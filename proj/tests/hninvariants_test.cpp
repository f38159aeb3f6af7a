#include <gtest/gtest.h>

#include <random>

#include "hnpers/invariants.hpp"
#include "random_modules.hpp"
#include "test_util.hpp"

using namespace hnpers;
using testutil::axis;
using testutil::pt;
using testutil::q;

namespace {
const PrimeField F2{2};
using Mod = GridModule<PrimeField>;

Mod interval(const char* a, const char* b) {
    Presentation p;
    p.n = 1;
    p.generators = {pt({a})};
    p.relations = {{pt({b}), {Rational(1)}}};
    return from_presentation(p, F2);
}

BetaSpec unit_beta() { return BetaSpec{{BetaTerm{{StepFactor{axis({"0", "1"}), {Rational(1)}, q("1/2"), q("1/2")}}}}}; }

StabilityCondition delta0() { return skyscraper_condition(pt({"0"}), unit_beta()); }
}  // namespace

TEST(SEval, UnitSquareClosedForm) {
    FilteredRankInvariant<PrimeField> inv(interval("0", "1"), delta0());
    EXPECT_EQ(inv.s_eval(q("2"), pt({"2/5"}), pt({"9/10"})), RankValue(0));
    EXPECT_EQ(inv.s_eval(q("2"), pt({"3/5"}), pt({"9/10"})), RankValue(1));
    EXPECT_EQ(inv.s_eval(q("2"), pt({"1/2"}), pt({"9/10"})), RankValue(1));
    EXPECT_EQ(inv.s_eval(q("2"), pt({"3/5"}), pt({"1"})), RankValue(0));
    EXPECT_EQ(inv.s_eval(q("2"), pt({"3/5"}), pt({"1/2"})), RankValue());
    for (int a = 0; a < 10; ++a)
        for (int b = a; b < 12; ++b)
            for (int th = 1; th < 6; ++th) {
                Rational x = make_rational(a, 10), y = make_rational(b, 10), theta = make_rational(th, 2);
                bool expect = x >= 0 && y < 1 && (1 - x) <= 1 / theta;
                EXPECT_EQ(*inv.s_eval(theta, {x}, {y}), expect ? 1u : 0u);
            }
}

TEST(SEval, ThetaMinGivesRankInvariant) {
    std::mt19937 rng(9);
    for (int t = 0; t < 30; ++t) {
        auto v = from_presentation(testutil::random_presentation(rng, 2, 3, 3, 2), F2);
        StabilityCondition z;
        z.n = 2;
        z.mode = StabilityMode::step;
        z.beta = default_beta(v.grid());
        z.alpha = {AlphaTerm{{Interval::half_open(q("0"), q("1")), Interval::half_open(q("0"), q("2"))}, q("3"), {}}};
        FilteredRankInvariant<PrimeField> inv(v, z);
        Rational th = theta_min(z) - 1;
        for (int s = 0; s < 10; ++s) {
            Point x{make_rational(long(rng() % 9) - 2, 2), make_rational(long(rng() % 9) - 2, 2)};
            Point y{x[0] + make_rational(long(rng() % 5), 2), x[1] + make_rational(long(rng() % 5), 2)};
            EXPECT_EQ(inv.s_eval(th, x, y), rank_invariant(v, x, y));
            EXPECT_LE(*inv.s_eval(q("1/3"), x, y), *rank_invariant(v, x, y));
        }
    }
}

TEST(ThetaProfile, Examples) {
    FilteredRankInvariant<PrimeField> inv(interval("0", "1"), delta0());
    EXPECT_EQ(inv.theta_profile(pt({"-5"})), std::vector<Rational>{0});
    EXPECT_EQ(inv.theta_profile(pt({"1/2"})).size(), 2u);
    // K[0,1) + K[0,2) at x = 0 under α = δ_0, β = 1 on [0,2): slopes 1 then 1/2
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"}), pt({"0"})};
    p.relations = {{pt({"1"}), {Rational(1), Rational(0)}}, {pt({"2"}), {Rational(0), Rational(1)}}};
    StabilityCondition z = skyscraper_condition(
        pt({"0"}), BetaSpec{{BetaTerm{{StepFactor{axis({"0", "1", "2"}), {Rational(1), Rational(1)}, q("1/2"), q("1/2")}}}}});
    FilteredRankInvariant<PrimeField> run(from_presentation(p, F2), z);
    EXPECT_EQ(run.theta_profile(pt({"0"})), (std::vector<Rational>{1, q("1/2")}));
}

TEST(SEval, DiscretisationInvariance) {
    std::mt19937 rng(21);
    for (int t = 0; t < 20; ++t) {
        auto v = from_presentation(testutil::random_presentation(rng, 2, 3, 3, 2), F2);
        auto z = skyscraper_condition({q("1"), q("1/2")}, default_beta(v.grid()));
        InvariantOptions extra;
        extra.extra_coordinates = {axis({"1/3", "5/4"}), axis({"-1/2", "2/3"})};
        FilteredRankInvariant<PrimeField> a(v, z), b(v, z, extra);
        for (int s = 0; s < 10; ++s) {
            Point x{make_rational(long(rng() % 7) - 2, 2), make_rational(long(rng() % 7) - 2, 2)};
            Point y{x[0] + make_rational(long(rng() % 4), 3), x[1] + make_rational(long(rng() % 4), 3)};
            for (const char* th : {"0", "1/4", "1", "3"}) EXPECT_EQ(a.s_eval(q(th), x, y), b.s_eval(q(th), x, y));
        }
    }
}

TEST(SEval, FunctorialityAndThetaMonotone) {
    std::mt19937 rng(23);
    for (int t = 0; t < 20; ++t) {
        auto v = from_presentation(testutil::random_presentation(rng, 1, 4, 3, 2), F2);
        FilteredRankInvariant<PrimeField> inv(v, skyscraper_condition(pt({"1"}), default_beta(v.grid())));
        for (int s = 0; s < 20; ++s) {
            Rational x = make_rational(long(rng() % 10) - 2, 2), y = x + make_rational(long(rng() % 6), 2);
            Rational x2 = x + make_rational(long(rng() % 3), 4);
            Rational y2 = y - make_rational(long(rng() % 3), 4);
            if (x2 > y2) continue;
            for (const char* th : {"0", "1/5", "1/2", "2"}) {
                EXPECT_LE(*inv.s_eval(q(th), {x}, {y}), *inv.s_eval(q(th), {x2}, {y2}));
                EXPECT_LE(*inv.s_eval(q(th) + 1, {x}, {y}), *inv.s_eval(q(th), {x}, {y}));
            }
        }
    }
}

TEST(SEval, ZeroShiftConsistency) {
    auto v = interval("0", "1");
    auto z = delta0();
    FilteredRankInvariant<PrimeField> inv(v, z);
    auto ds = pullback_Z(z, v.grid());
    auto w = hn_theta(v, ds, q("1/2"));
    EXPECT_EQ(*inv.s_eval(q("1/2"), pt({"0"}), pt({"0"})), push(v.map(0, 0), w.components[0]).dim());
    EXPECT_GE(inv.memo_size(), 1u);
}

TEST(Skyscraper, Examples) {
    auto none = skyscraper_invariant(Mod::zero(F2, 1), unit_beta(), {pt({"0"}), pt({"1"})});
    EXPECT_TRUE(none[0].empty() && none[1].empty());
    auto v = interval("0", "1");
    auto t = skyscraper_invariant(v, unit_beta(), {pt({"0"})});
    ASSERT_EQ(t[0].size(), 1u);
    EXPECT_EQ(t[0][0].slope, 1 / unit_beta().integral(Cube{{Interval::half_open(q("0"), q("1"))}}));
    EXPECT_EQ(t[0][0].dims, (std::vector<std::size_t>{1, 0}));
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"}), pt({"0"})};
    p.relations = {{pt({"1"}), {Rational(1), Rational(0)}}, {pt({"2"}), {Rational(0), Rational(1)}}};
    auto beta = BetaSpec{{BetaTerm{{StepFactor{axis({"0", "1", "2"}), {Rational(1), Rational(1)}, q("1/2"), q("1/2")}}}}};
    auto tt = skyscraper_invariant(from_presentation(p, F2), beta, {pt({"0"})});
    EXPECT_EQ(to_string(tt[0]), "[(1, (1,0,0)), (1/2, (2,1,0))]");
}

TEST(Landscape, Examples) {
    StabilityCondition real;
    real.beta = unit_beta();
    FilteredRankInvariant<PrimeField> inv(interval("0", "1"), real);
    EXPECT_EQ(landscape_eval(inv, 3, pt({"1/2"}), q("0"), q("1/1024")), 0);
    auto l = landscape_eval(inv, 1, pt({"1/2"}), q("0"), q("1/1024"));
    EXPECT_LE(q("1/2") - l, q("1/1024"));
    EXPECT_LE(l, q("1/2"));
    EXPECT_EQ(landscape_eval(inv, 1, pt({"2"}), q("0"), q("1/1024")), 0);
    EXPECT_EQ(landscape_eval(inv, 1, pt({"1/4"}), q("0"), q("1/1024")), q("1/4"));
}
