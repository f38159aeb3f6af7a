#include <gtest/gtest.h>

#include "hnpers/hn.hpp"
#include "random_modules.hpp"
#include "test_util.hpp"

using namespace hnpers;
using testutil::axis;
using testutil::pt;
using testutil::q;

namespace {
const PrimeField F2{2};
using Mod = GridModule<PrimeField>;

Mod interval_sum() {
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"}), pt({"0"})};
    p.relations = {{pt({"1"}), {Rational(1), Rational(0)}}, {pt({"2"}), {Rational(0), Rational(1)}}};
    auto m = from_presentation(p, F2);
    GridFunction g({axis({"0", "1"})});
    return pullback(embedding(g, m.grid()), m, g);
}

Mod long_interval() {
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"})};
    p.relations = {{pt({"2"}), {Rational(1)}}};
    auto m = pushforward(from_presentation(p, F2), GridFunction({axis({"0", "1", "2"})}));
    GridFunction g({axis({"0", "1"})});
    return pullback(embedding(g, m.grid()), m, g);
}

const DiscreteStability ds10{GridPoset({2}), {1, 0}, {1, 1}};
}  // namespace

TEST(Destabilizer, Examples) {
    auto u = interval_sum();
    auto d = max_slope_destabilizer(u, ds10);
    EXPECT_EQ(d.submodule.dims(), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(d.slope, 1);
    DiscreteStability zero{GridPoset({2}), {0, 0}, {1, 1}};
    auto z = max_slope_destabilizer(u, zero);
    EXPECT_EQ(z.submodule, full_submodule(u));
    EXPECT_EQ(z.slope, 0);
    auto v = long_interval();
    auto dv = max_slope_destabilizer(v, ds10);
    EXPECT_EQ(dv.submodule, full_submodule(v));
    EXPECT_EQ(dv.slope, q("1/2"));
}

TEST(Semistable, Examples) {
    Mod point = spread_module(F2, GridFunction({axis({"0"})}), {true});
    EXPECT_TRUE(is_semistable(point, DiscreteStability{GridPoset({1}), {3}, {1}}));
    EXPECT_FALSE(is_semistable(interval_sum(), ds10));
    EXPECT_TRUE(is_semistable(long_interval(), ds10));
}

TEST(Filtration, Examples) {
    auto v = long_interval();
    auto hv = hn_filtration(v, ds10);
    ASSERT_EQ(hv.length(), 1u);
    auto u = interval_sum();
    auto h = hn_filtration(u, ds10);
    ASSERT_EQ(h.length(), 2u);
    EXPECT_EQ(h.steps[0].dims(), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(h.steps[1].dims(), (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(h.slopes, (std::vector<Rational>{1, q("1/2")}));
    EXPECT_EQ(h, oracle_hn_filtration(u, ds10));
    // two semistable summands of equal slope: K[0,2) + K[0,2)
    auto s = direct_sum(v, v);
    auto hs = hn_filtration(s, ds10);
    EXPECT_EQ(hs.length(), 1u);
    EXPECT_EQ(hs, oracle_hn_filtration(s, ds10));
}

TEST(Theta, Examples) {
    auto u = interval_sum();
    EXPECT_EQ(hn_theta(u, ds10, q("-100")), full_submodule(u));
    EXPECT_TRUE(hn_theta(u, ds10, q("2")).is_zero());
    EXPECT_EQ(hn_theta(u, ds10, q("3/4")).dims(), (std::vector<std::size_t>{1, 0}));
}

TEST(Type, Examples) {
    EXPECT_EQ(hn_type(long_interval(), ds10).size(), 1u);
    EXPECT_TRUE(hn_type(Mod::zero(F2, 1), ds10).empty());
    auto t = hn_type(interval_sum(), ds10);
    EXPECT_EQ(to_string(t), "[(1, (1,0)), (1/2, (2,1))]");
}

TEST(Engine, RefusesInfiniteFieldAndSignedAlpha) {
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"})};
    auto mq = from_presentation(p, RationalField{});
    EXPECT_THROW(max_slope_destabilizer(mq, DiscreteStability{GridPoset({1}), {1}, {1}}), Error);
    auto m = from_presentation(p, F2);
    EXPECT_THROW(max_slope_destabilizer(m, DiscreteStability{GridPoset({1}), {-1}, {1}}), Error);
    EXPECT_THROW(oracle_hn_filtration(direct_sum(direct_sum(interval_sum(), interval_sum()), interval_sum()), ds10, 8),
                 Error);
}

TEST(Engine, MatchesOracleOnRandomModules) {
    std::mt19937 rng(11);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + rng() % 2;
        auto pres = testutil::random_presentation(rng, n, 3, 1 + rng() % 4, rng() % 4);
        auto u = from_presentation(pres, F2);
        if (u.is_zero() || u.total_dim() > 8) continue;
        auto ds = testutil::random_discrete(rng, u.poset());
        auto h = hn_filtration(u, ds);
        ASSERT_EQ(h, oracle_hn_filtration(u, ds));
        EngineOptions dk;
        dk.dinkelbach = true;
        ASSERT_EQ(hn_filtration(u, ds, dk), h);
        // the maximal destabilizer is generated on supp α
        auto d = max_slope_destabilizer(u, ds);
        std::vector<Subspace<PrimeField>> seeds;
        for (std::size_t p = 0; p < u.poset().count(); ++p)
            seeds.push_back(ds.alpha[p] > 0 ? d.submodule.components[p] : Subspace<PrimeField>::zero(F2, u.dim(p)));
        if (ds.im(u.dims()) > 0) ASSERT_EQ(sub_generated(u, seeds), d.submodule);
        // seesaw along the chain
        for (std::size_t j = 0; j + 1 < h.length(); ++j)
            EXPECT_GE(ds.slope(h.steps[j].dims()), ds.slope(h.steps[j + 1].dims()));
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Engine, MutationIsDetected) {
    std::mt19937 rng(2);
    EngineOptions bad;
    bad.flip_slope_sign = true;
    bool differs = false;
    for (int t = 0; t < 50 && !differs; ++t) {
        auto u = from_presentation(testutil::random_presentation(rng, 1, 3, 3, 2), F2);
        if (u.is_zero()) continue;
        auto ds = testutil::random_discrete(rng, u.poset());
        differs = !(hn_filtration(u, ds, bad) == oracle_hn_filtration(u, ds));
    }
    EXPECT_TRUE(differs);
}

TEST(Functoriality, IdentityZeroAndRandom) {
    auto u = interval_sum();
    EXPECT_TRUE(check_functoriality(ModuleMap<PrimeField>::identity(u), ds10, q("3/4")));
    EXPECT_TRUE(check_functoriality(ModuleMap<PrimeField>::zero(u, u), ds10, q("3/4")));
    std::mt19937 rng(4);
    for (int t = 0; t < 100; ++t) {
        auto v = from_presentation(testutil::random_presentation(rng, 2, 2, 3, 2), F2);
        if (v.is_zero()) continue;
        auto ds = testutil::random_discrete(rng, v.poset());
        auto w = sub_generated(v, [&] {
            std::vector<Subspace<PrimeField>> s;
            for (std::size_t p = 0; p < v.poset().count(); ++p) {
                auto all = enumerate_subspaces(F2, v.dim(p));
                s.push_back(all[rng() % all.size()]);
            }
            return s;
        }());
        auto qr = quotient(v, w);
        ModuleMap<PrimeField> proj(v, qr.module, qr.projections);
        auto h = hn_filtration(v, ds);
        for (const auto& th : h.slopes) ASSERT_TRUE(check_functoriality(proj, ds, th));
    }
}
