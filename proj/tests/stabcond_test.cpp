#include <gtest/gtest.h>

#include <random>

#include "hnpers/stability.hpp"
#include "test_util.hpp"

using namespace hnpers;
using testutil::axis;
using testutil::pt;
using testutil::q;

namespace {
const PrimeField F2{2};

BetaSpec unit_beta() { return BetaSpec{{BetaTerm{{StepFactor{axis({"0", "1"}), {Rational(1)}, q("1/2"), q("1/2")}}}}}; }

StabilityCondition delta0() { return skyscraper_condition(pt({"0"}), unit_beta()); }

GridModule<PrimeField> interval(const char* a, const char* b) {
    Presentation p;
    p.n = 1;
    p.generators = {pt({a})};
    p.relations = {{pt({b}), {Rational(1)}}};
    return from_presentation(p, F2);
}

Cube half_open(const char* a, ExtRational b) { return Cube{{Interval::half_open(q(a), std::move(b))}}; }
}  // namespace

TEST(BetaIntegral, Examples) {
    auto b = unit_beta();
    EXPECT_EQ(b.integral(half_open("1", ExtRational::pos_inf())), Rational(1));
    EXPECT_EQ(b.integral(half_open("0", ExtRational::pos_inf())), Rational(2));
    EXPECT_EQ(b.integral(half_open("1", q("1"))), Rational(0));
    EXPECT_EQ(b.integral(Cube{{Interval::half_open(ExtRational::neg_inf(), q("0"))}}), Rational(1));
    EXPECT_EQ(b.integral(half_open("-1/2", q("0"))), q("1/4"));
    EXPECT_EQ(b.integral(half_open("3/2", q("5/2"))), q("1/4") + q("1/8"));
}

TEST(BetaIntegral, AdditiveAndMonotone) {
    BetaSpec b{{BetaTerm{{StepFactor{axis({"-1", "0", "2"}), {q("3"), q("1/2")}, q("1/3"), q("2/3")},
                          StepFactor{axis({"0", "1"}), {q("2")}, q("1/2"), q("1/5")}}},
                BetaTerm{{StepFactor{axis({"0", "1"}), {q("1")}, q("1/2"), q("1/2")},
                          StepFactor{axis({"0", "1"}), {q("1")}, q("1/2"), q("1/2")}}}}};
    std::mt19937 rng(5);
    auto rq = [&] { return make_rational(static_cast<long>(rng() % 61) - 30, 1 + rng() % 4); };
    for (int t = 0; t < 200; ++t) {
        Rational a = rq(), m = rq(), c = rq(), y0 = rq(), y1 = rq();
        std::vector<Rational> xs{a, m, c};
        std::sort(xs.begin(), xs.end());
        if (y1 < y0) std::swap(y0, y1);
        auto cube = [&](const Rational& l, const Rational& h) {
            return Cube{{Interval::half_open(l, h), Interval::half_open(y0, y1)}};
        };
        EXPECT_EQ(b.integral(cube(xs[0], xs[2])), b.integral(cube(xs[0], xs[1])) + b.integral(cube(xs[1], xs[2])));
        EXPECT_GE(b.integral(cube(xs[0], xs[2])), b.integral(cube(xs[1], xs[2])));
    }
    Cube whole{{Interval{}, Interval{}}};
    EXPECT_GT(b.integral(whole), 0);
}

TEST(AlphaEval, Examples) {
    auto z = delta0();
    EXPECT_EQ(alpha_eval(z, interval("0", "1")), Rational(1));
    EXPECT_EQ(alpha_eval(z, interval("1", "2")), Rational(0));
    StabilityCondition avg;
    avg.mode = StabilityMode::step;
    avg.alpha = {AlphaTerm{{Interval::half_open(q("0"), q("1"))}, Rational(1), {}}};
    avg.beta = unit_beta();
    EXPECT_EQ(alpha_eval(avg, interval("0", "1/2")), q("1/2"));
}

TEST(PullbackZ, Examples) {
    auto z = delta0();
    auto ds = pullback_Z(z, GridFunction({axis({"0", "1"})}));
    EXPECT_EQ(ds.alpha, (std::vector<Rational>{1, 0}));
    EXPECT_EQ(ds.beta, (std::vector<Rational>{1, 1}));
    auto ds2 = pullback_Z(z, GridFunction({axis({"0", "1/2", "1"})}));
    EXPECT_EQ(ds2.alpha, (std::vector<Rational>{1, 0, 0}));
    EXPECT_EQ(ds2.beta, (std::vector<Rational>{q("1/2"), q("1/2"), 1}));
    auto ds3 = pullback_Z(z, GridFunction({axis({"5", "6"})}));
    EXPECT_EQ(ds3.alpha, (std::vector<Rational>{0, 0}));
}

TEST(PullbackZ, RefusesUnadaptedGrid) {
    StabilityCondition z;
    z.mode = StabilityMode::step;
    z.alpha = {AlphaTerm{{Interval::half_open(q("0"), q("1"))}, Rational(1), {}}};
    z.beta = unit_beta();
    try {
        pullback_Z(z, GridFunction({axis({"0", "2"})}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::refinement);
        EXPECT_NE(std::string(e.what()).find("axis 0: 1"), std::string::npos);
    }
    // point carriers in step mode must sit inside a bounded cube
    auto sk = delta0();
    sk.mode = StabilityMode::step;
    EXPECT_THROW(pullback_Z(sk, GridFunction({axis({"0"})})), Error);
    EXPECT_NO_THROW(pullback_Z(sk, GridFunction({axis({"0", "1"})})));
}

TEST(Slope, Examples) {
    DiscreteStability ds{GridPoset({2}), {1, 0}, {1, 1}};
    EXPECT_EQ(ds.slope({1, 0}), Rational(1));
    EXPECT_EQ(ds.slope({1, 1}), q("1/2"));
    DiscreteStability zero{GridPoset({2}), {0, 0}, {1, 3}};
    EXPECT_EQ(zero.slope({2, 1}), Rational(0));
    EXPECT_THROW(ds.slope({0, 0}), Error);
}

TEST(Shift, Examples) {
    auto z = delta0();
    EXPECT_EQ(shift_Z(z, pt({"0"})).alpha[0].carrier, z.alpha[0].carrier);
    auto s = shift_Z(z, pt({"1"}));
    EXPECT_EQ(s.alpha[0].carrier[0], Interval::point(q("-1")));
    EXPECT_EQ(shift_Z(shift_Z(z, pt({"1/3"})), pt({"2/3"})).alpha[0].carrier, s.alpha[0].carrier);
}

TEST(Shift, PullbackIdentity) {
    // slope of T_x^* V under Z equals slope of V under shift_Z(Z, x)... realised on grids:
    // pullback of shift_Z(z,x) at g equals pullback of z at g shifted by +x
    StabilityCondition z;
    z.mode = StabilityMode::step;
    z.alpha = {AlphaTerm{{Interval::half_open(q("0"), q("1"))}, q("2"), {}}};
    z.beta = unit_beta();
    GridFunction g({axis({"-1", "-1/2", "0", "1", "2"})});
    Point x = pt({"1/2"});
    auto a = pullback_Z(shift_Z(z, x), shift_grid(g, x));
    auto b = pullback_Z(z, g);
    EXPECT_EQ(a.alpha, b.alpha);
    EXPECT_EQ(a.beta, b.beta);
}

TEST(Skyscraper, DistinguishesPoints) {
    auto m = interval("0", "1");
    EXPECT_EQ(alpha_eval(skyscraper_condition(pt({"-1"}), unit_beta()), m), 0);
    EXPECT_EQ(alpha_eval(skyscraper_condition(pt({"1/2"}), unit_beta()), m), 1);
    EXPECT_EQ(alpha_eval(skyscraper_condition(pt({"1"}), unit_beta()), m), 0);
}

TEST(Validate, Guardrails) {
    auto z = delta0();
    EXPECT_TRUE(validate(z).empty());
    auto neg = z;
    neg.alpha[0].coeff = -1;
    auto d = validate(neg);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "alpha_negative_coefficient");
    EXPECT_EQ(validate(neg, true)[0].code, "alpha_negative_coefficient");
    auto lim = z;
    lim.mode = StabilityMode::step;
    lim.alpha[0].carrier[0] = Interval::half_open(q("0"), ExtRational::pos_inf());
    EXPECT_EQ(validate(lim)[0].code, "alpha_carrier_unbounded");
    auto grad = lim;
    grad.alpha[0].carrier[0] = Interval::half_open(q("0"), q("1"));
    grad.alpha[0].density_slope = q("1");
    EXPECT_EQ(validate(grad)[0].code, "alpha_density_not_step");
    auto badb = z;
    badb.beta.terms[0].axes[0].values[0] = 0;
    badb.beta.terms[0].axes[0].right_ratio = 1;
    auto db = validate(badb);
    ASSERT_EQ(db.size(), 2u);
    EXPECT_EQ(db[0].code, "beta_nonpositive");
    EXPECT_EQ(db[1].code, "beta_ratio_out_of_range");
}

TEST(ThetaMin, Examples) {
    EXPECT_EQ(theta_min(delta0()), 0);
    StabilityCondition none;
    none.beta = unit_beta();
    EXPECT_EQ(theta_min(none), 0);
    StabilityCondition s;
    s.mode = StabilityMode::step;
    s.beta = BetaSpec{{BetaTerm{{StepFactor{axis({"0", "1", "2"}), {q("1/2"), q("1")}, q("1/2"), q("1/2")}}}}};
    s.alpha = {AlphaTerm{{Interval::half_open(q("1"), q("2"))}, Rational(-1), {}},
               AlphaTerm{{Interval::half_open(q("0"), q("1"))}, Rational(3), {}}};
    EXPECT_EQ(theta_min(s), Rational(-2));
}

TEST(Positivity, BetaSurvivesPullback) {
    auto z = delta0();
    auto ds = pullback_Z(z, GridFunction({axis({"-3", "0", "1/7", "1", "40"})}));
    for (const auto& b : ds.beta) EXPECT_GT(b, 0);
}
