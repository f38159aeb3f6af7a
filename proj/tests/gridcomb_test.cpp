#include <gtest/gtest.h>

#include <random>

#include "hnpers/grid.hpp"
#include "test_util.hpp"

using namespace hnpers;
using testutil::axis;
using testutil::pt;

TEST(Floor, Examples) {
    GridFunction g({axis({"0", "1"})});
    EXPECT_EQ(g.floor(pt({"0"})), Coord{0});
    EXPECT_FALSE(g.floor(pt({"-1/2"})).has_value());
    GridFunction h({axis({"0", "1"}), axis({"0", "2"})});
    EXPECT_EQ(h.floor(pt({"1/2", "3"})), (Coord{0, 1}));
}

TEST(CubeOf, Examples) {
    GridFunction g({axis({"0", "1"})});
    EXPECT_EQ(g.cube_of(Coord{0}).str(), "[0,1)");
    EXPECT_EQ(g.cube_of(Coord{1}).str(), "[1,inf)");
    GridFunction h({axis({"0", "1"}), axis({"0", "2"})});
    EXPECT_EQ(h.cube_of(Coord{1, 0}).str(), "[1,inf)x[0,2)");
    EXPECT_FALSE(h.cube_of(Coord{1, 0}).bounded());
    auto lower = h.neg_inf_region();
    ASSERT_EQ(lower.size(), 2u);
    EXPECT_TRUE(lower[1].contains(pt({"5", "-1"})));
}

TEST(CommonRefinement, Examples) {
    GridFunction g1({axis({"0", "1"})});
    auto same = common_refinement(g1, g1);
    EXPECT_EQ(same.grid, g1);
    EXPECT_EQ(same.left, GridMap::identity(g1.poset()));
    GridFunction g2({axis({"1/2"})});
    auto r = common_refinement(g1, g2);
    EXPECT_EQ(r.grid, GridFunction({axis({"0", "1/2", "1"})}));
    EXPECT_EQ(r.left.index_maps[0], (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(r.right.index_maps[0], (std::vector<std::size_t>{1}));
}

TEST(Shift, Examples) {
    GridFunction g({axis({"0", "1"})});
    EXPECT_EQ(shift_grid(g, pt({"0"})), g);
    EXPECT_EQ(shift_grid(g, pt({"1/4"})), GridFunction({axis({"-1/4", "3/4"})}));
    EXPECT_EQ(shift_grid(shift_grid(g, pt({"1/4"})), pt({"-1/4"})), g);
}

TEST(RestrictExtend, Examples) {
    GridFunction g({axis({"0", "2"})});
    Cube w{{Interval::half_open(Rational(0), Rational(3, 2))}};
    EXPECT_EQ(restrict_and_extend(g, {{}}, w).grid, g);
    EXPECT_EQ(restrict_and_extend(g, {axis({"2"})}, w).grid, g);
    auto e = restrict_and_extend(g, {axis({"1"})}, w);
    EXPECT_EQ(e.grid, GridFunction({axis({"0", "1", "2"})}));
    EXPECT_EQ(e.inside_window[0], (std::vector<bool>{true, true, false}));
}

TEST(Properties, FloorCubeAdjunctionAndRefinement) {
    std::mt19937 rng(3);
    auto rq = [&] { return make_rational(static_cast<long>(rng() % 41) - 20, 1 + rng() % 4); };
    for (int t = 0; t < 100; ++t) {
        std::vector<std::vector<Rational>> a(2), b(2), c(2);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 3; ++k) {
                a[i].push_back(rq());
                b[i].push_back(rq());
                c[i].push_back(rq());
            }
        auto g1 = GridFunction::from_coordinates(a), g2 = GridFunction::from_coordinates(b),
             g3 = GridFunction::from_coordinates(c);
        Point qp{rq(), rq()};
        auto f = g1.floor(qp);
        if (f) {
            EXPECT_TRUE(g1.cube_of(*f).contains(qp));
        } else {
            bool in_some = false;
            for (const auto& cube : g1.neg_inf_region()) in_some |= cube.contains(qp);
            EXPECT_TRUE(in_some);
        }
        auto r = common_refinement(g1, g2);
        for (std::size_t v = 0; v < g1.poset().count(); ++v)
            EXPECT_EQ(r.grid.value(r.left.apply(g1.poset().coord(v))), g1.value(v));
        for (std::size_t v = 0; v < g2.poset().count(); ++v)
            EXPECT_EQ(r.grid.value(r.right.apply(g2.poset().coord(v))), g2.value(v));
        EXPECT_EQ(common_refinement(common_refinement(g1, g2).grid, g3).grid,
                  common_refinement(g1, common_refinement(g2, g3).grid).grid);
    }
}

TEST(Grid, RejectsBadAxes) {
    EXPECT_THROW(GridFunction({axis({"1", "0"})}), Error);
    EXPECT_THROW(GridFunction(std::vector<std::vector<Rational>>{{}}), Error);
    auto imp = GridFunction::improper({axis({"0", "0"})});
    EXPECT_FALSE(imp.proper());
    EXPECT_THROW((void)imp.floor(pt({"0"})), Error);
}
