#include <gtest/gtest.h>

#include "hnpers/module.hpp"
#include "test_util.hpp"

using namespace hnpers;
using testutil::axis;
using testutil::pt;
using testutil::q;

namespace {
const PrimeField F2{2};
using Mod = GridModule<PrimeField>;

Presentation interval1(const char* a, const char* b) {
    Presentation p;
    p.n = 1;
    p.generators = {pt({a})};
    p.relations = {{pt({b}), {Rational(1)}}};
    return p;
}

Mod interval_sum() {
    // K[0,1) + K[0,2) on grid {0,1}
    Presentation p;
    p.n = 1;
    p.generators = {pt({"0"}), pt({"0"})};
    p.relations = {{pt({"1"}), {Rational(1), Rational(0)}}, {pt({"2"}), {Rational(0), Rational(1)}}};
    auto m = from_presentation(p, F2);
    return pullback(embedding(GridFunction({axis({"0", "1"})}), m.grid()), m, GridFunction({axis({"0", "1"})}));
}
}  // namespace

TEST(Presentation, Examples) {
    Presentation free;
    free.n = 1;
    free.generators = {pt({"0"})};
    auto f = from_presentation(free, F2);
    EXPECT_EQ(f.dims(), std::vector<std::size_t>{1});

    auto iv = from_presentation(interval1("0", "1"), F2);
    EXPECT_EQ(iv.grid(), GridFunction({axis({"0", "1"})}));
    EXPECT_EQ(iv.dims(), (std::vector<std::size_t>{1, 0}));

    Presentation two;
    two.n = 2;
    two.generators = {pt({"0", "0"}), pt({"0", "0"})};
    two.relations = {{pt({"1", "1"}), {Rational(1), Rational(-1)}}};
    for (auto field : {PrimeField{2}, PrimeField{32749}}) {
        auto m = from_presentation(two, field);
        EXPECT_EQ(m.dims(), (std::vector<std::size_t>{2, 2, 2, 1}));
        EXPECT_EQ(rank(m.map(0, 3)), 1u);
    }
    auto mq = from_presentation(two, RationalField{});
    EXPECT_EQ(mq.dims(), (std::vector<std::size_t>{2, 2, 2, 1}));
}

TEST(Presentation, RejectsIncomparableRelation) {
    Presentation p;
    p.n = 2;
    p.generators = {pt({"0", "1"})};
    p.relations = {{pt({"1", "0"}), {Rational(1)}}};
    try {
        from_presentation(p, F2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("relation 0"), std::string::npos);
    }
}

TEST(Spread, Examples) {
    GridFunction g({axis({"0", "1"})});
    EXPECT_EQ(spread_module(F2, g, {true, true}).dims(), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(spread_module(F2, g, {true, false}).dims(), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(spread_module(F2, g, {false, true}).dims(), (std::vector<std::size_t>{0, 1}));
    GridFunction sq({axis({"0", "1"}), axis({"0", "1"})});
    // vertex order: (0,0),(1,0),(0,1),(1,1); the L-shape misses (0,1) between (0,0) and (1,1)
    EXPECT_THROW(spread_module(F2, sq, {true, true, false, true}), Error);
    EXPECT_NO_THROW(spread_module(F2, sq, {true, true, false, false}));
    GridFunction chain({axis({"0", "1", "2"})});
    EXPECT_THROW(spread_module(F2, chain, {true, false, true}), Error);
}

TEST(PushPull, Examples) {
    auto iv = from_presentation(interval1("0", "1"), F2);
    auto id = GridMap::identity(iv.poset());
    EXPECT_EQ(pushforward(id, iv, iv.grid()).dims(), iv.dims());
    EXPECT_EQ(pullback(id, iv, iv.grid()).dims(), iv.dims());
    GridFunction fine({axis({"0", "1/2", "1"})});
    auto pf = pushforward(iv, fine);
    EXPECT_EQ(pf.dims(), (std::vector<std::size_t>{1, 1, 0}));
    EXPECT_EQ(rank(pf.edge(0, 0)), 1u);
    auto back = pullback(embedding(iv.grid(), fine), pf, iv.grid());
    EXPECT_EQ(back.dims(), iv.dims());
    EXPECT_EQ(back.edges(), iv.edges());
}

TEST(PushPull, ExactnessSpotCheck) {
    auto v = interval_sum();
    auto w = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{1, 0}}), Subspace<PrimeField>::zero(F2, 1)});
    auto quo = quotient(v, w);
    GridFunction fine({axis({"-1", "0", "1/3", "1", "5"})});
    auto pv = pushforward(v, fine);
    auto pw = pushforward(submodule_as_module(v, w), fine);
    auto pq = pushforward(quo.module, fine);
    for (std::size_t p = 0; p < fine.poset().count(); ++p) EXPECT_EQ(pv.dim(p), pw.dim(p) + pq.dim(p));
}

TEST(Shift, Examples) {
    auto iv = from_presentation(interval1("0", "1"), F2);
    EXPECT_EQ(shift_module(iv, pt({"0"})).grid(), iv.grid());
    EXPECT_EQ(shift_module(shift_module(iv, pt({"1/3"})), pt({"-1/3"})).grid(), iv.grid());
    auto s = shift_module(iv, pt({"1/2"}));
    EXPECT_EQ(s.grid(), GridFunction({axis({"-1/2", "1/2"})}));
}

TEST(RankInvariant, Examples) {
    auto iv = from_presentation(interval1("0", "1"), F2);
    EXPECT_EQ(rank_invariant(iv, pt({"0"}), pt({"1/2"})), RankValue(1));
    EXPECT_EQ(rank_invariant(iv, pt({"0"}), pt({"1"})), RankValue(0));
    EXPECT_EQ(rank_invariant(iv, pt({"1"}), pt({"0"})), RankValue());
    EXPECT_EQ(rank_invariant(iv, pt({"-1"}), pt({"0"})), RankValue(0));
    // enlarging [x,y] never increases the value
    for (const char* a : {"-1", "0", "1/2"})
        for (const char* b : {"1/2", "3/4", "2"}) {
            auto inner = rank_invariant(iv, pt({"1/2"}), pt({"1/2"}));
            auto outer = rank_invariant(iv, pt({a}), pt({b}));
            EXPECT_LE(*outer, *inner);
        }
}

TEST(Submodules, SubGenerated) {
    auto v = interval_sum();
    EXPECT_TRUE(sub_generated(v, zero_submodule(v).components).is_zero());
    EXPECT_EQ(sub_generated(v, full_submodule(v).components), full_submodule(v));
    auto w = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{1, 0}}), Subspace<PrimeField>::zero(F2, 1)});
    EXPECT_EQ(w.dims(), (std::vector<std::size_t>{1, 0}));
    // closure operator
    EXPECT_EQ(sub_generated(v, w.components), w);
    auto w2 = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{1, 1}}), Subspace<PrimeField>::zero(F2, 1)});
    EXPECT_EQ(w2.dims(), (std::vector<std::size_t>{1, 1}));
    EXPECT_FALSE(closure_violation(v, w2).has_value());
}

TEST(Submodules, QuotientAndSum) {
    auto v = interval_sum();
    EXPECT_EQ(quotient(v, zero_submodule(v)).module.dims(), v.dims());
    EXPECT_TRUE(quotient(v, full_submodule(v)).module.is_zero());
    auto w = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{1, 0}}), Subspace<PrimeField>::zero(F2, 1)});
    auto quo = quotient(v, w);
    EXPECT_EQ(quo.module.dims(), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(rank(quo.module.edge(0, 0)), 1u);
    Submodule<PrimeField> bad{{Subspace<PrimeField>::span(F2, 2, {{0, 1}}), Subspace<PrimeField>::zero(F2, 1)}};
    EXPECT_THROW(quotient(v, bad), Error);

    auto a = from_presentation(interval1("0", "1"), F2);
    auto b = from_presentation(interval1("1/2", "2"), F2);
    auto s = direct_sum(a, b);
    EXPECT_EQ(s.grid(), GridFunction({axis({"0", "1/2", "1", "2"})}));
    EXPECT_EQ(s.dims(), (std::vector<std::size_t>{1, 2, 1, 0}));
}

TEST(Maps, ApplyToSubmodule) {
    auto v = interval_sum();
    auto id = ModuleMap<PrimeField>::identity(v);
    auto w = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{1, 0}}), Subspace<PrimeField>::zero(F2, 1)});
    EXPECT_EQ(apply_map_to_submodule(id, w), w);
    EXPECT_TRUE(apply_map_to_submodule(ModuleMap<PrimeField>::zero(v, v), w).is_zero());
    // projection of the sum onto K[0,2) maps that summand onto the factor
    auto quo = quotient(v, w);
    ModuleMap<PrimeField> proj(v, quo.module, quo.projections);
    auto w2 = sub_generated(v, {Subspace<PrimeField>::span(F2, 2, {{0, 1}}), Subspace<PrimeField>::zero(F2, 1)});
    EXPECT_EQ(apply_map_to_submodule(proj, w2), full_submodule(quo.module));
    std::vector<Matrix<PrimeField>> bad{Matrix<PrimeField>::identity(F2, 2), Matrix<PrimeField>(F2, 1, 1)};
    EXPECT_THROW(ModuleMap<PrimeField>(v, v, bad), Error);
}

TEST(Module, CommutativityChecked) {
    GridFunction sq({axis({"0", "1"}), axis({"0", "1"})});
    std::vector<std::vector<Matrix<PrimeField>>> e(2, std::vector<Matrix<PrimeField>>(4));
    auto one = Matrix<PrimeField>::identity(F2, 1);
    e[0][0] = one;
    e[0][2] = one;
    e[1][0] = one;
    e[1][1] = Matrix<PrimeField>(F2, 1, 1);
    EXPECT_THROW(Mod(F2, sq, {1, 1, 1, 1}, e), Error);
    e[1][1] = one;
    EXPECT_NO_THROW(Mod(F2, sq, {1, 1, 1, 1}, e));
}

TEST(Module, PresentedGeneratorVectors) {
    Presentation two;
    two.n = 1;
    two.generators = {pt({"0"}), pt({"0"})};
    two.relations = {{pt({"1"}), {Rational(1), Rational(1)}}};
    auto pm = present(two, F2);
    EXPECT_EQ(pm.generator_vector(0, 1), pm.generator_vector(1, 1));
    EXPECT_NE(pm.generator_vector(0, 0), pm.generator_vector(1, 0));
    EXPECT_EQ(q("1/2"), make_rational(1, 2));
}
