#include <charsub/metric.hpp>
#include <charsub/parse.hpp>
#include <charsub/verify.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace charsub;

namespace {

// Oracle: rho by a long direct scan of ||u_n x|| on exact rationals.
Rational rho_scan(const CirclePoint& x, const ASeq& s, std::size_t n_max) {
    Rational best = x.norm();
    for (std::size_t n = 0; n <= n_max; ++n) best = std::max(best, x.mul_int(s.term_mod(n, x.den())).norm());
    return best;
}

// Oracle: grid ball by direct rho scan over k/u_N.
std::vector<CirclePoint> ball_scan(const ASeq& s, std::size_t N, const Rational& eps, bool closed) {
    std::vector<CirclePoint> out;
    Int U = s.term(N);
    for (unsigned long k = 0; k < U.get_ui(); ++k) {
        CirclePoint x(make_rational(Int(k), U));
        Rational r = rho_scan(x, s, N);
        if (closed ? r <= eps : r < eps) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST(Rho, RationalExamples) {
    auto g = parse_sequence("geometric:2");
    RhoResult a = rho_rational(CirclePoint(Rational(1, 8)), g);
    EXPECT_TRUE(a.exact);
    EXPECT_EQ(a.value, Rational(1, 2));
    EXPECT_EQ(rho_rational(CirclePoint(Rational(0)), g).value, 0);
    RhoResult b = rho_rational(CirclePoint(Rational(1, 5)), g);
    EXPECT_TRUE(b.exact);
    EXPECT_EQ(b.value, Rational(2, 5));
}

TEST(Rho, RationalMatchesScanProperty) {
    std::mt19937_64 rng(21);
    for (std::string spec : {"geometric:2", "geometric:3", "ratios:2,3:repeat", "affine:2,3",
                             "override:geometric:2;at:powers:2;val:3"}) {
        auto s = parse_sequence(spec);
        for (int i = 0; i < 100; ++i) {
            unsigned long b = 2 + rng() % 500;
            CirclePoint x(make_rational(Int(rng() % b), Int(b)));
            RhoResult r = rho_rational(x, s);
            Rational scanned = rho_scan(x, s, 1200);
            if (s.rule().profile()) {
                ASSERT_TRUE(r.exact) << spec << " " << x.str();
                EXPECT_EQ(r.value, scanned) << spec << " " << x.str();
            } else if (r.exact) {
                EXPECT_EQ(r.value, scanned) << spec << " " << x.str();
            } else {
                EXPECT_TRUE(r.bounds.contains(scanned)) << spec << " " << x.str();
            }
        }
    }
}

TEST(Rho, MetricAxiomsProperty) {
    auto s = parse_sequence("ratios:2,3:repeat");
    std::mt19937_64 rng(22);
    auto pick = [&] {
        unsigned long b = 2 + rng() % 200;
        return CirclePoint(make_rational(Int(rng() % b), Int(b)));
    };
    for (int i = 0; i < 200; ++i) {
        CirclePoint x = pick(), y = pick(), z = pick();
        Rational rx = rho_rational(x, s).value;
        EXPECT_GE(rx, x.norm());
        EXPECT_EQ(rx, rho_rational(-x, s).value);
        Rational xz = rho_rational(x, z, s).value, xy = rho_rational(x, y, s).value, yz = rho_rational(y, z, s).value;
        EXPECT_LE(xz, xy + yz);
        EXPECT_EQ(xy, rho_rational(y, x, s).value);
    }
}

TEST(Rho, IntervalExamples) {
    auto g = parse_sequence("geometric:2");
    RhoInterval a = rho_interval(build_xs(XSDescriptor::constant_gap(2, 2), g), g, 8);
    EXPECT_TRUE(a.bounds.contains(Rational(2, 5)));
    EXPECT_LE(a.bounds.width(), Rational(1, 32));
    RhoInterval b = rho_interval(CanonicalRep::finite(g, {1}), g, 4);
    EXPECT_EQ(b.bounds.lo, Rational(1, 2));
    EXPECT_EQ(b.bounds.hi, Rational(1, 2));
    auto f = parse_sequence("factorial");
    RhoInterval c = rho_interval(CanonicalRep::constant(f, 1), f, 10);
    EXPECT_GE(c.bounds.lo, Rational(43, 100));
    // sup is ||u_1 x|| = ||2(e - 2)|| = 0.43656...
    EXPECT_LT(c.bounds.lo, Rational(4366, 10000));
    EXPECT_GT(c.bounds.hi, Rational(4365, 10000));
}

TEST(Rho, IntervalContainsExactValueOnRationalsProperty) {
    std::mt19937_64 rng(23);
    auto s = parse_sequence("ratios:2,3:repeat");
    for (int i = 0; i < 100; ++i) {
        unsigned long b = 5 + rng() % 400;
        CirclePoint x(make_rational(Int(rng() % b), Int(b)));
        RhoInterval iv = rho_interval(to_canonical(x, s), 40);
        EXPECT_TRUE(iv.bounds.contains(rho_rational(x, s).value)) << x.str();
    }
}

TEST(Rho, IntervalShrinksWithHorizon) {
    auto f = parse_sequence("factorial");
    auto rep = CanonicalRep::constant(f, 1);
    Rational prev = 1;
    for (std::size_t N : {4u, 8u, 16u, 32u}) {
        Rational w = rho_interval(rep, N).bounds.width();
        EXPECT_LE(w, prev);
        prev = w;
    }
}

TEST(XS, NormBoundsExamples) {
    auto g = parse_sequence("geometric:2");
    XSNormBounds nb = xs_norm_bounds(XSDescriptor::constant_gap(2, 2), g, 1);
    EXPECT_EQ(nb.closed_form.lo, Rational(3, 8));
    EXPECT_EQ(nb.closed_form.hi, Rational(13, 32));
    EXPECT_TRUE(nb.verified);
    EXPECT_TRUE(nb.closed_form.contains(Rational(2, 5)));
    for (std::size_t k = 1; k <= 8; ++k) {
        auto b = xs_norm_bounds(XSDescriptor::doubling(2, 2), g, k);
        EXPECT_LE(b.closed_form.lo, b.closed_form.hi);
        EXPECT_TRUE(b.verified) << k;
    }
}

TEST(XS, GrowingGapLowerBound) {
    // d_k doubling: lower endpoint >= 1/q_u - 1/(2^(d_k - 1) q_u^2)
    auto s = parse_sequence("override:geometric:2;at:powers:2;val:3");
    XSDescriptor d = XSDescriptor::doubling(4, 4);
    for (std::size_t k = 1; k <= 3; ++k) {
        XSNormBounds b = xs_norm_bounds(d, s, k);
        std::size_t dk = *d.element(k) - *d.element(k - 1);
        Rational bound = Rational(1, 3) - Rational(1, Int(9) * pow_ui(2, dk - 1));
        EXPECT_GE(b.closed_form.lo, bound) << k;
        EXPECT_TRUE(b.verified);
    }
}

TEST(XS, MonotoneBetweenElementsProperty) {
    auto g = parse_sequence("geometric:2");
    XSDescriptor d = XSDescriptor::constant_gap(2, 3);
    auto rep = build_xs(d, g);
    OrbitEnclosure oe(rep, 40);
    for (std::size_t k = 1; k <= 8; ++k) {
        std::size_t nk = *d.element(k - 1), nk1 = *d.element(k);
        Interval base = oe.norm_at(nk - 1);
        for (std::size_t n = nk; n < nk1; ++n) EXPECT_LE(oe.norm_at(n - 1).hi, base.hi) << "k=" << k << " n=" << n;
    }
}

TEST(XS, InjectivityProperty) {
    auto g = parse_sequence("geometric:2");
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        XSDescriptor a, b;
        a.prefix = b.prefix = {2};
        std::size_t j = 1 + rng() % 5;
        for (std::size_t t = 1; t < j; ++t) {
            std::size_t gap = 2 + rng() % 3;
            a.prefix.push_back(a.prefix.back() + gap);
            b.prefix.push_back(b.prefix.back() + gap);
        }
        a.prefix.push_back(a.prefix.back() + 2);
        b.prefix.push_back(b.prefix.back() + 3);
        a.tail = b.tail = XSDescriptor::Tail::ConstantGap;
        a.gap = b.gap = 2;
        auto ra = build_xs(a, g), rb = build_xs(b, g);
        std::size_t limit = std::max(*a.element(2 * j + 2), *b.element(2 * j + 2));
        bool differ = false;
        for (std::size_t n = 1; n <= limit && !differ; ++n) differ = ra.digit(n) != rb.digit(n);
        EXPECT_TRUE(differ);
    }
}

TEST(XS, ValidationErrors) {
    auto g = parse_sequence("geometric:2");
    EXPECT_THROW(validate_xs(XSDescriptor::constant_gap(2, 1), g), InvalidGaps);
    EXPECT_THROW(validate_xs(XSDescriptor::list({2, 3}), g), InvalidGaps);
    auto o = parse_sequence("override:geometric:2;at:powers:2;val:3");
    EXPECT_THROW(validate_xs(XSDescriptor::list({2, 5}), o), InvalidGaps);
    EXPECT_THROW(validate_xs(XSDescriptor::constant_gap(2, 2), o), InvalidGaps);
    EXPECT_NO_THROW(validate_xs(XSDescriptor::doubling(4, 4), o));
    EXPECT_THROW(validate_xs(XSDescriptor::doubling(2, 2), o, true), InvalidGaps);
    EXPECT_THROW(validate_xs(XSDescriptor::constant_gap(2, 2), parse_sequence("factorial")), UnknownAsymptotics);
}

TEST(XS, BoundedGapsStayInsideOpenBall) {
    auto g = parse_sequence("ratios:2,3:repeat");
    for (std::size_t d : {2u, 4u, 6u}) {
        auto rep = build_xs(XSDescriptor::constant_gap(2, d), g);
        EXPECT_LT(rho_interval(rep, 40).bounds.hi, Rational(1, 3)) << d;
    }
}

TEST(XS, SphereBracketNarrowsWithHorizon) {
    auto s = parse_sequence("override:geometric:2;at:powers:2;val:3");
    auto rep = build_xs(XSDescriptor::doubling(4, 4), s);
    std::vector<Rational> widths;
    for (std::size_t N : {16u, 32u, 64u}) {
        RhoInterval iv = rho_interval(rep, N);
        EXPECT_TRUE(iv.bounds.contains(Rational(1, 3)));
        widths.push_back(iv.bounds.width());
    }
    EXPECT_LT(widths[2], widths[0]);
    EXPECT_LE(widths[2], Rational(1, 100));
}

TEST(Ball, Examples) {
    auto g = parse_sequence("geometric:2");
    auto a = ball_points(g, 10, Rational(1, 4), false);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_TRUE(a[0].is_zero());
    auto p = parse_sequence("ratios:2,3:repeat");
    auto b = ball_points(p, 6, Rational(1, 6), false);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(ball_points(g, 4, Rational(1), false).size(), 16u);
    auto t = test_topology_ball(g, 8, 4);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(test_topology_ball(p, 5, 1).size(), p.term(5).get_ui());
    auto c = test_topology_ball(p, 6, 6);
    EXPECT_EQ(c, ball_scan(p, 6, Rational(1, 6), true));
}

TEST(Ball, MatchesScanOracleProperty) {
    for (std::string spec : {"geometric:2", "ratios:2,3:repeat", "geometric:3"}) {
        auto s = parse_sequence(spec);
        for (std::size_t N : {3u, 5u})
            for (auto eps : {Rational(1, 3), Rational(2, 5), Rational(1, 2)})
                for (bool closed : {false, true}) EXPECT_EQ(ball_points(s, N, eps, closed), ball_scan(s, N, eps, closed));
    }
}

TEST(Ball, SmallBallsTrivialForBoundedCatalogProperty) {
    for (std::string spec : {"geometric:2", "geometric:3", "ratios:2,3:repeat", "override:geometric:2;at:powers:2;val:3"}) {
        auto s = parse_sequence(spec);
        Rational eps(1, Int(2 * *s.behavior().sup));
        for (std::size_t N = 1; N <= 12; ++N) {
            if (s.term(N) > Int(1 << 20)) break;
            auto pts = ball_points(s, N, eps, false);
            ASSERT_EQ(pts.size(), 1u) << spec << " N=" << N;
            EXPECT_TRUE(pts[0].is_zero());
        }
    }
}

TEST(Ball, GridCapRaises) {
    Caps c;
    c.max_grid = 1000;
    auto g = parse_sequence("geometric:2", c);
    EXPECT_THROW(ball_points(g, 10, Rational(1, 4), false), ResourceLimit);
}
