#include <charsub/circle.hpp>
#include <charsub/parse.hpp>
#include <charsub/verify.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace charsub;

namespace {

// Oracle: sum c_n / u_n directly from digits and terms.
Rational digit_sum(const CanonicalRep& rep, std::size_t N) {
    Rational s = 0;
    const ASeq& seq = rep.seq();
    for (std::size_t n = 0; n <= N; ++n) s += make_rational(rep.digit(n), seq.term(n));
    return s;
}

}  // namespace

TEST(CirclePoint, NormAndMultiplication) {
    EXPECT_EQ(norm(CirclePoint(Rational(3, 4))), Rational(1, 4));
    EXPECT_EQ(norm(CirclePoint(Rational(0))), 0);
    EXPECT_EQ(norm(CirclePoint(Rational(2, 5))), Rational(2, 5));
    EXPECT_EQ(mul_int(2, CirclePoint(Rational(1, 3))).value(), Rational(2, 3));
    EXPECT_TRUE(mul_int(8, CirclePoint(Rational(5, 8))).is_zero());
    EXPECT_EQ(mul_int(3, CirclePoint(Rational(2, 5))).value(), Rational(1, 5));
    EXPECT_EQ(CirclePoint(Rational(7, 4)).value(), Rational(3, 4));
    EXPECT_EQ((CirclePoint(Rational(3, 4)) + CirclePoint(Rational(1, 2))).value(), Rational(1, 4));
}

TEST(Canonical, Examples) {
    auto g = parse_sequence("geometric:2");
    auto r = to_canonical(CirclePoint(Rational(5, 8)), g);
    ASSERT_EQ(r.last_support(), 3u);
    EXPECT_EQ(r.digit(1), 1);
    EXPECT_EQ(r.digit(2), 0);
    EXPECT_EQ(r.digit(3), 1);
    EXPECT_EQ(r.describe(), "digits:list:1,0,1");
    auto z = to_canonical(CirclePoint(Rational(0)), g);
    EXPECT_EQ(z.last_support(), 0u);
    auto third = to_canonical(CirclePoint(Rational(1, 3)), g);
    EXPECT_EQ(third.kind(), CanonicalRep::Kind::Periodic);
    for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(third.digit(n), n % 2 == 0 ? 1 : 0);
}

TEST(Canonical, EvalPrefixExamples) {
    auto g = parse_sequence("geometric:2");
    auto r = CanonicalRep::finite(g, {1, 0, 1});
    PrefixEval p = eval_prefix(r, 3);
    EXPECT_EQ(p.partial, Rational(5, 8));
    EXPECT_LE(p.tail.hi, Rational(1, 8));
    PrefixEval p0 = eval_prefix(r, 0);
    EXPECT_EQ(p0.partial, 0);
    EXPECT_LE(p0.tail.hi, Rational(1));
    auto f = parse_sequence("factorial");
    PrefixEval e = eval_prefix(CanonicalRep::constant(f, 1), 4);
    EXPECT_EQ(e.partial, Rational(43, 60));
    EXPECT_LE(e.tail.hi, Rational(1, 120));
}

TEST(Canonical, SupportClassExamples) {
    auto g = parse_sequence("geometric:2");
    auto f = parse_sequence("factorial");
    EXPECT_EQ(support_class(CanonicalRep::finite(g, {1, 1})), SupportClass::Finite);
    EXPECT_EQ(support_class(CanonicalRep::constant(f, 1), f), SupportClass::UDivergent);
    EXPECT_EQ(support_class(CanonicalRep::periodic(g, {}, {0, 1})), SupportClass::UBounded);
}

TEST(Canonical, RoundTripCatalogProperty) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(99ul);
    for (auto& spec : catalog_specs()) {
        auto seq = parse_sequence(spec);
        for (int i = 0; i < 150; ++i) {
            std::size_t m = static_cast<std::size_t>(Int(rng.get_z_range(13)).get_ui());
            Int U = seq.term(m);
            CirclePoint x(make_rational(rng.get_z_range(U), U));
            auto rep = to_canonical(x, seq);
            auto last = rep.last_support();
            ASSERT_TRUE(last) << spec;
            EXPECT_LE(*last, m);
            EXPECT_EQ(digit_sum(rep, *last), x.value()) << spec << " " << x.str();
            EXPECT_EQ(eval_prefix(rep, *last).partial, x.value());
        }
    }
}

TEST(Canonical, PeriodicDigitsMatchRationalProperty) {
    // Non-terminating expansions: prefix sums converge to x within 1/u_N.
    auto g3 = parse_sequence("ratios:2,3:repeat");
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        unsigned long b = 5 + rng() % 300;
        CirclePoint x(make_rational(Int(rng() % b), Int(b)));
        auto rep = to_canonical(x, g3);
        for (std::size_t N : {5u, 17u, 32u}) {
            PrefixEval p = eval_prefix(rep, N);
            EXPECT_LE(p.partial, x.value());
            EXPECT_LT(x.value() - p.partial, make_rational(1, g3.term(N)));
        }
    }
}

TEST(Canonical, DigitConstraintsEnforced) {
    auto g = parse_sequence("geometric:2");
    EXPECT_THROW(CanonicalRep::periodic(g, {}, {1}), DigitConstraintError);
    EXPECT_THROW(CanonicalRep::finite(g, {2}), DigitConstraintError);
    EXPECT_THROW(CanonicalRep::finite(g, {-1}), DigitConstraintError);
    auto f = parse_sequence("factorial");
    EXPECT_NO_THROW(CanonicalRep::constant(f, 1));
    auto p = parse_sequence("ratios:2,3:repeat");
    EXPECT_THROW(CanonicalRep::periodic(p, {}, {1, 2}), DigitConstraintError);
    EXPECT_NO_THROW(CanonicalRep::periodic(p, {}, {1, 1}));
}

TEST(Canonical, GeneratedDigitsWithinRatiosProperty) {
    auto f = parse_sequence("factorial");
    std::vector<CanonicalRep> reps{CanonicalRep::constant(f, 1), CanonicalRep::floor_fraction(f, Rational(1, 3)),
                                   CanonicalRep::support(f, IndexSet::powers(2), SupportValue::q_minus_one()),
                                   to_canonical(CirclePoint(Rational(3, 7)), f)};
    for (auto& r : reps)
        for (std::size_t n = 1; n <= 200; ++n) {
            Int c = r.digit(n);
            EXPECT_GE(c, 0);
            EXPECT_LT(c, f.ratio(n));
        }
}

TEST(Canonical, TailBoundProperty) {
    auto f = parse_sequence("factorial");
    auto g = parse_sequence("geometric:2");
    std::vector<CanonicalRep> reps{CanonicalRep::constant(f, 1), CanonicalRep::floor_fraction(f, Rational(1, 2)),
                                   CanonicalRep::periodic(g, {1}, {0, 1, 1}),
                                   CanonicalRep::alternating_xs(g, XSDescriptor::constant_gap(2, 3)),
                                   CanonicalRep::support(f, IndexSet::multiples(3), SupportValue::q_minus_one())};
    for (auto& r : reps)
        for (std::size_t N = 0; N <= 32; ++N) {
            Rational diff = digit_sum(r, N + 16) - eval_prefix(r, N).partial;
            EXPECT_GE(diff, 0);
            EXPECT_LT(diff, make_rational(1, r.seq().term(N))) << r.describe() << " N=" << N;
        }
}

TEST(Canonical, DistinctStreamsSeparateProperty) {
    // Two valid digit streams that differ at index j: prefix intervals at depth 32 are disjoint
    // or touch only at an endpoint that is excluded from the open tail.
    auto g = parse_sequence("ratios:2,3:repeat");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        std::vector<Int> a, b;
        for (int k = 1; k <= 24; ++k) {
            Int q = g.ratio(k);
            a.push_back(Int(static_cast<unsigned long>(rng() % q.get_ui())));
            b.push_back(Int(static_cast<unsigned long>(rng() % q.get_ui())));
        }
        if (a == b) continue;
        CanonicalRep ra = CanonicalRep::periodic(g, a, {0, 0}), rb = CanonicalRep::periodic(g, b, {0, 0});
        PrefixEval pa = eval_prefix(ra, 32), pb = eval_prefix(rb, 32);
        bool separate = pa.partial + pa.tail.hi <= pb.partial || pb.partial + pb.tail.hi <= pa.partial;
        EXPECT_TRUE(separate);
    }
}

TEST(Canonical, EnclosureContainsExactNorms) {
    auto g = parse_sequence("geometric:2");
    auto rep = CanonicalRep::alternating_xs(g, XSDescriptor::constant_gap(2, 2));
    OrbitEnclosure oe(rep, 20);
    CirclePoint fifth(Rational(1, 5));
    for (std::size_t n = 0; n <= 20; ++n) {
        Rational v = fifth.mul_int(g.term(n)).norm();
        EXPECT_TRUE(oe.norm_at(n).contains(v)) << n;
    }
}

TEST(Canonical, XSExamples) {
    auto g = parse_sequence("geometric:2");
    auto rep = CanonicalRep::alternating_xs(g, XSDescriptor::constant_gap(2, 2));
    std::vector<int> expect{0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1};
    for (std::size_t n = 1; n <= expect.size(); ++n) EXPECT_EQ(rep.digit(n), expect[n - 1]) << n;
    PrefixEval p = eval_prefix(rep, 40);
    EXPECT_TRUE(p.partial <= Rational(1, 5) && Rational(1, 5) <= p.partial + p.tail.hi);
    auto two = CanonicalRep::alternating_xs(g, XSDescriptor::list({2, 4}));
    ASSERT_TRUE(exact_value(two));
    EXPECT_EQ(exact_value(two)->value(), Rational(3, 16));
    // Over ratios 2,3 repeating, S inside the indices where q = 3.
    auto p23 = parse_sequence("ratios:2,3:repeat");
    auto x = CanonicalRep::alternating_xs(p23, XSDescriptor::constant_gap(2, 2));
    Rational alt = 0;
    for (std::size_t k = 0; k < 6; ++k)
        alt += (k % 2 ? -1 : 1) * make_rational(1, p23.term(2 + 2 * k));
    PrefixEval pe = eval_prefix(x, 12);
    EXPECT_LE(circle_norm(pe.partial - alt), make_rational(1, p23.term(12)));
    for (std::size_t n = 1; n <= 12; ++n) {
        Int c = x.digit(n);
        EXPECT_TRUE(c == 0 || c == p23.ratio(n) - 1);
    }
}
