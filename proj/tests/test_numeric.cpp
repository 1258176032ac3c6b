#include <charsub/index_set.hpp>
#include <charsub/numeric.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace charsub;

TEST(Numeric, FloorAndModFollowMathConvention) {
    EXPECT_EQ(floor_div(Int(-7), Int(2)), -4);
    EXPECT_EQ(mod(Int(-7), Int(3)), 2);
    EXPECT_EQ(frac(Rational(-1, 3)), Rational(2, 3));
    EXPECT_EQ(floor(Rational(7, 2)), 3);
}

TEST(Numeric, CircleNorm) {
    EXPECT_EQ(circle_norm(Rational(3, 4)), Rational(1, 4));
    EXPECT_EQ(circle_norm(Rational(0)), 0);
    EXPECT_EQ(circle_norm(Rational(2, 5)), Rational(2, 5));
    EXPECT_EQ(circle_norm(Rational(-1, 3)), Rational(1, 3));
    EXPECT_EQ(circle_norm(Rational(5, 2)), Rational(1, 2));
}

TEST(Numeric, ValuationAndFactorization) {
    EXPECT_EQ(valuation(Int(720), Int(2)), 4u);
    EXPECT_EQ(valuation(Int(720), Int(7)), 0u);
    auto f = factorize(Int(2) * 2 * 3 * 1000003);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[Int(2)], 2u);
    EXPECT_EQ(f[Int(1000003)], 1u);
    // Product of two large primes goes through the rho path.
    Int big = Int("1000000007") * Int("998244353");
    auto g = factorize(big);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_TRUE(g.count(Int("998244353")));
}

TEST(Numeric, FactorizationProductProperty) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Int n = Int(static_cast<unsigned long>(1 + rng() % 100000000));
        Int prod = 1;
        for (auto& [p, e] : factorize(n)) {
            EXPECT_TRUE(is_prime(p));
            prod *= pow_ui(p, e);
        }
        EXPECT_EQ(prod, n);
    }
}

TEST(Numeric, NormRange) {
    Interval a = norm_range(Rational(1, 8), Rational(1, 8));
    EXPECT_EQ(a.lo, Rational(1, 8));
    EXPECT_EQ(a.hi, Rational(1, 4));
    Interval b = norm_range(Rational(3, 8), Rational(1, 4));
    EXPECT_EQ(b.hi, Rational(1, 2));
    Interval c = norm_range(Rational(7, 8), Rational(1, 4));
    EXPECT_EQ(c.lo, 0);
}

TEST(Numeric, RationalRendering) {
    EXPECT_EQ(to_string(Rational(6, 8)), "3/4");
    EXPECT_EQ(to_string(Rational(0)), "0/1");
    EXPECT_EQ(approx(Rational(1, 3), 4), "0.3333");
}

TEST(IndexSet, BasicMembership) {
    auto p = IndexSet::powers(2);
    EXPECT_FALSE(p.contains(1));
    EXPECT_TRUE(p.contains(2));
    EXPECT_TRUE(p.contains(1024));
    EXPECT_FALSE(p.contains(1023));
    auto r = IndexSet::residues(3, {0, 2});
    EXPECT_TRUE(r.contains(3));
    EXPECT_TRUE(r.contains(5));
    EXPECT_FALSE(r.contains(4));
    EXPECT_FALSE(IndexSet::finite({0, 1}).contains(0));
}

TEST(IndexSet, AsymptoticAnalysis) {
    auto p = IndexSet::powers(2);
    EXPECT_EQ(p.infinite(), Tri::Yes);
    EXPECT_EQ(p.gaps_bounded(), Tri::No);
    EXPECT_EQ(complement(p).gaps_bounded(), Tri::Yes);
    EXPECT_EQ(subtract(p, p).infinite(), Tri::No);
    EXPECT_EQ(intersect(IndexSet::multiples(2), IndexSet::multiples(3)).gaps_bounded(), Tri::Yes);
    EXPECT_EQ(intersect(IndexSet::multiples(2), IndexSet::residues(2, {1})).infinite(), Tri::No);
    EXPECT_EQ(intersect(p, IndexSet::multiples(3)).infinite(), Tri::No);
    EXPECT_EQ(intersect(IndexSet::powers(4), IndexSet::residues(3, {1})).infinite(), Tri::Yes);
    EXPECT_EQ(IndexSet::finite({3, 9}).infinite(), Tri::No);
    EXPECT_EQ(shift(IndexSet::multiples(5), 2).gaps_bounded(), Tri::Yes);
}

TEST(IndexSet, AnalysisAgreesWithScanProperty) {
    // Elements found far out must exist iff the set is reported infinite.
    std::vector<IndexSet> sets{IndexSet::powers(3),
                               subtract(IndexSet::all(), IndexSet::powers(2)),
                               intersect(IndexSet::powers(2), IndexSet::residues(5, {2, 3})),
                               intersect(IndexSet::powers(2), IndexSet::multiples(5)),
                               unite(IndexSet::finite({4, 7}), IndexSet::residues(7, {3})),
                               shift(IndexSet::powers(2), 1)};
    for (auto& s : sets) {
        bool far = s.next_after(2000, 1 << 22).has_value();
        Tri inf = s.infinite();
        ASSERT_NE(inf, Tri::Unknown) << s.describe();
        EXPECT_EQ(inf == Tri::Yes, far) << s.describe();
    }
}

TEST(IndexSet, UpperBoundAndNth) {
    auto s = subtract(IndexSet::finite({2, 5, 9}), IndexSet::powers(3));
    ASSERT_TRUE(s.upper_bound());
    EXPECT_EQ(*s.upper_bound(), 9u);
    EXPECT_FALSE(s.contains(9));
    EXPECT_EQ(IndexSet::powers(2).nth(2, 100), 8u);
    EXPECT_EQ(IndexSet::powers(2).next_after(8, 100), 16u);
}
