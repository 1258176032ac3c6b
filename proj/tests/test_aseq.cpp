#include <charsub/aseq.hpp>
#include <charsub/parse.hpp>
#include <charsub/verify.hpp>

#include <gtest/gtest.h>

using namespace charsub;

namespace {

// Oracle: u_n as the plain product of ratios computed independently of the rule engine.
Int product_oracle(const std::string& spec, std::size_t n) {
    Int u = 1;
    if (spec == "factorial") {
        for (std::size_t k = 2; k <= n + 1; ++k) u *= static_cast<unsigned long>(k);
        return u;
    }
    if (spec == "doubleexp:2") {
        mpz_ui_pow_ui(u.get_mpz_t(), 2, 1ul << n);
        return u;
    }
    throw std::logic_error("no oracle");
}

}  // namespace

TEST(ASeq, TermExamples) {
    auto f = parse_sequence("factorial");
    EXPECT_EQ(f.term(3), 24);
    EXPECT_EQ(f.ratio(2), 3);
    auto g = parse_sequence("geometric:2");
    EXPECT_EQ(g.term(0), 1);
    EXPECT_EQ(g.ratio(5), 2);
    auto d = parse_sequence("doubleexp:2");
    EXPECT_EQ(d.term(3), 256);
    EXPECT_EQ(d.ratio(2), 4);
}

TEST(ASeq, TermsMatchIndependentProducts) {
    for (std::string spec : {"factorial", "doubleexp:2"}) {
        auto s = parse_sequence(spec);
        for (std::size_t n = 0; n <= 12; ++n) EXPECT_EQ(s.term(n), product_oracle(spec, n)) << spec << " n=" << n;
    }
}

TEST(ASeq, CatalogDivisibilityChain) {
    for (auto& spec : catalog_specs()) {
        auto s = parse_sequence(spec);
        std::size_t top = std::min<std::size_t>(64, s.max_computable_index());
        for (std::size_t n = 1; n <= top; ++n) {
            EXPECT_EQ(mod(s.term(n), s.term(n - 1)), 0) << spec << " n=" << n;
            EXPECT_GT(s.term(n), s.term(n - 1));
            EXPECT_GE(s.ratio(n), 2);
        }
    }
}

TEST(ASeq, TermModMatchesTerm) {
    for (auto& spec : catalog_specs()) {
        auto s = parse_sequence(spec);
        for (std::size_t n = 0; n <= 20; ++n)
            for (unsigned long m : {7ul, 12ul, 1001ul}) EXPECT_EQ(s.term_mod(n, Int(m)), mod(s.term(n), Int(m)));
    }
}

TEST(ASeq, SStarExamples) {
    EXPECT_EQ(s_star(parse_sequence("geometric:2"), 4), 5u);
    EXPECT_EQ(s_star(parse_sequence("ratios:2,3:repeat"), 1), 4u);
    EXPECT_EQ(s_star(parse_sequence("override:geometric:2;at:powers:2;val:3"), 2), 8u);
}

TEST(ASeq, SStarIncreasingAndAttainsLimsup) {
    for (auto& spec : catalog_specs()) {
        auto s = parse_sequence(spec);
        auto sum = classify_ratios(s);
        if (!sum.limsup) continue;
        std::size_t prev = 0;
        for (std::size_t k = 0; k <= 32; ++k) {
            std::size_t m = 0;
            try {
                m = s_star(s, k);
            } catch (const ResourceLimit&) {
                EXPECT_GT(k, 4u) << spec;
                break;
            }
            EXPECT_GT(m, prev) << spec;
            EXPECT_EQ(s.ratio(m), *sum.limsup) << spec;
            prev = m;
        }
    }
}

TEST(ASeq, POrderExamples) {
    auto f = parse_sequence("factorial");
    auto o = p_order(f, 2);
    EXPECT_TRUE(o.infinite);
    EXPECT_TRUE(o.exact);
    auto g = parse_sequence("geometric:2");
    EXPECT_EQ(p_order(g, 3).value, 0u);
    EXPECT_TRUE(p_order(g, 3).exact);
    EXPECT_TRUE(p_order(g, 2).infinite);
    EXPECT_THROW(p_order(g, 4), DomainError);
}

TEST(ASeq, POrderExactnessConfirmedByScan) {
    for (auto& spec : catalog_specs()) {
        auto s = parse_sequence(spec);
        for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul}) {
            PAdicOrder o = p_order(s, Int(p));
            if (!o.exact || o.infinite) continue;
            std::size_t top = std::min<std::size_t>(o.stable_from + 64, s.max_computable_index());
            for (std::size_t n = o.stable_from; n <= top; ++n)
                EXPECT_EQ(valuation(s.term(n), Int(p)), o.value) << spec << " p=" << p << " n=" << n;
        }
    }
}

TEST(ASeq, POrderInfiniteGrowsInScan) {
    auto s = parse_sequence("ratios:5,7:then:factorial");
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
        EXPECT_TRUE(p_order(s, Int(p)).infinite);
        EXPECT_GE(valuation(s.term(60), Int(p)), 5u);
    }
}

TEST(ASeq, ClassifyRatiosExamples) {
    auto g = classify_ratios(parse_sequence("geometric:2"));
    EXPECT_EQ(g.bounded, Tri::Yes);
    EXPECT_EQ(*g.sup, 2);
    EXPECT_EQ(*g.limsup, 2);
    auto f = classify_ratios(parse_sequence("factorial"));
    EXPECT_EQ(f.bounded, Tri::No);
    EXPECT_EQ(f.divergent, Tri::Yes);
    auto p = classify_ratios(parse_sequence("ratios:2,3:repeat"));
    EXPECT_EQ(*p.sup, 3);
    EXPECT_EQ(*p.limsup, 3);
    auto o = classify_ratios(parse_sequence("override:geometric:2;at:powers:2;val:3"));
    EXPECT_EQ(o.bounded, Tri::Yes);
    EXPECT_EQ(*o.sup, 3);
}

TEST(ASeq, SupDominatesRatiosProperty) {
    for (auto& spec : catalog_specs()) {
        auto s = parse_sequence(spec);
        auto sum = classify_ratios(s);
        if (sum.bounded != Tri::Yes) continue;
        for (std::size_t n = 1; n <= 200; ++n) EXPECT_LE(s.ratio(n), *sum.sup) << spec;
    }
}

TEST(ASeq, InconsistentDeclaredMetadataIsRejected) {
    RatioBehavior lie = RatioBehavior::bounded_by(2, 2, IndexSet::all());
    EXPECT_THROW(ASeq(1, RatioRule::periodic({Int(2), Int(3)}), lie, "lie", Caps{}), InconsistentMetadata);
}

TEST(ASeq, CapsAreEnforced) {
    Caps c;
    c.max_index = 10;
    auto s = parse_sequence("geometric:2", c);
    EXPECT_NO_THROW(s.term(10));
    EXPECT_THROW(s.term(11), ResourceLimit);
    auto d = parse_sequence("doubleexp:2");
    EXPECT_THROW(d.term(40), ResourceLimit);
}
