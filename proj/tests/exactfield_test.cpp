#include <gtest/gtest.h>

#include <random>

#include "hnpers/subspace.hpp"

using namespace hnpers;

namespace {
const RationalField Q{};
const PrimeField F2{2};

Matrix<RationalField> qmat(std::size_t cols, std::vector<std::vector<long>> rows) {
    std::vector<std::vector<Rational>> r;
    for (auto& row : rows) {
        std::vector<Rational> v;
        for (auto x : row) v.emplace_back(x);
        r.push_back(v);
    }
    return Matrix<RationalField>::from_rows(Q, cols, r);
}
}  // namespace

TEST(Rational, ParseAndCanonicalForm) {
    EXPECT_EQ(parse_rational("2/4"), make_rational(1, 2));
    EXPECT_EQ(parse_rational("-3"), Rational(-3));
    EXPECT_EQ(parse_rational("+6/3"), Rational(2));
    EXPECT_THROW(parse_rational("0.5"), Error);
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational(""), Error);
    EXPECT_EQ(parse_rational("6/4").get_str(), "3/2");
}

TEST(Rational, ExtendedOrder) {
    EXPECT_LT(ExtRational::neg_inf(), ExtRational(Rational(-100)));
    EXPECT_LT(ExtRational(Rational(100)), ExtRational::pos_inf());
    EXPECT_EQ(parse_ext_rational("-inf"), ExtRational::neg_inf());
    EXPECT_THROW((void)ExtRational::pos_inf().value(), Error);
}

TEST(PrimeFieldArith, InverseAndReduction) {
    PrimeField F{7};
    for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
    EXPECT_EQ(F.from_rational(make_rational(-1, 2)), 3u);
    EXPECT_THROW(F.from_rational(make_rational(1, 7)), Error);
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(Matrix<RationalField>::identity(Q, 2)), 2u);
    EXPECT_EQ(rank(Matrix<RationalField>(Q, 2, 2)), 0u);
    EXPECT_EQ(rank(qmat(2, {{1, 0}, {1, 0}})), 1u);
}

TEST(KernelImage, Examples) {
    auto id = Matrix<RationalField>::identity(Q, 2);
    EXPECT_TRUE(kernel_basis(id).is_zero());
    EXPECT_TRUE(image_basis(id).is_full());
    Matrix<RationalField> z(Q, 2, 2);
    EXPECT_TRUE(kernel_basis(z).is_full());
    EXPECT_TRUE(image_basis(z).is_zero());
    auto m = qmat(2, {{1, 0}, {1, 0}});
    EXPECT_EQ(kernel_basis(m), Subspace<RationalField>::span(qmat(2, {{0, 1}})));
    EXPECT_EQ(image_basis(m), Subspace<RationalField>::span(qmat(2, {{1, 1}})));
}

TEST(Lattice, SumIntersectF2) {
    auto a = Subspace<PrimeField>::span(F2, 2, {{1, 0}});
    auto b = Subspace<PrimeField>::span(F2, 2, {{0, 1}});
    EXPECT_TRUE(subspace_sum(a, b).is_full());
    EXPECT_TRUE(subspace_intersect(a, b).is_zero());
    EXPECT_EQ(subspace_sum(a, Subspace<PrimeField>::zero(F2, 2)), a);
    EXPECT_EQ(subspace_intersect(a, Subspace<PrimeField>::full(F2, 2)), a);
    EXPECT_THROW(subspace_sum(a, Subspace<PrimeField>::zero(F2, 3)), Error);
}

TEST(Enumerate, Counts) {
    EXPECT_EQ(enumerate_subspaces(F2, 0).size(), 1u);
    EXPECT_EQ(enumerate_subspaces(F2, 1).size(), 2u);
    EXPECT_EQ(enumerate_subspaces(F2, 2).size(), 5u);
    for (std::uint32_t q : {2u, 3u, 5u})
        for (std::size_t n = 0; n <= 4; ++n) {
            auto all = enumerate_subspaces(PrimeField{q}, n);
            EXPECT_EQ(all.size(), subspace_count(q, n));
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = i + 1; j < all.size(); ++j) ASSERT_FALSE(all[i] == all[j]);
        }
    EXPECT_EQ(subspace_count(2, 4), 67u);
    EXPECT_THROW(enumerate_subspaces(F2, 12, 1000), Error);
}

TEST(Properties, RandomMatrices) {
    std::mt19937 rng(7);
    PrimeField F{5};
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = rng() % 5, c = rng() % 5;
        Matrix<PrimeField> m(F, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rng() % 5;
        auto rk = rank(m);
        EXPECT_EQ(rk + kernel_basis(m).dim(), c);
        EXPECT_EQ(image_basis(m).dim(), rk);
        std::vector<std::vector<std::uint32_t>> gens;
        for (int k = 0; k < 2; ++k) {
            std::vector<std::uint32_t> v(r);
            for (auto& x : v) x = rng() % 5;
            gens.push_back(v);
        }
        auto S = Subspace<PrimeField>::span(F, r, gens);
        EXPECT_TRUE(S.contains(push(m, preimage(m, S))));
        std::vector<std::vector<std::uint32_t>> dgens(1, std::vector<std::uint32_t>(c));
        for (auto& x : dgens[0]) x = rng() % 5;
        auto T = Subspace<PrimeField>::span(F, c, dgens);
        EXPECT_TRUE(preimage(m, push(m, T)).contains(T));
        // canonical form: spanning the basis again gives the same representation
        EXPECT_EQ(Subspace<PrimeField>::span(S.basis()), S);
    }
}
