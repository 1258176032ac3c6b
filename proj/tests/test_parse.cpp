#include <charsub/parse.hpp>
#include <charsub/report_json.hpp>

#include <gtest/gtest.h>

using namespace charsub;

TEST(Parse, Sequences) {
    EXPECT_EQ(parse_sequence("affine:1,1").term(4), parse_sequence("factorial").term(4));
    EXPECT_EQ(parse_sequence("ratios:5,7:then:factorial").term(3), 5 * 7 * 2);
    EXPECT_EQ(parse_sequence("override:geometric:2;at:powers:2;val:3").ratio(4), 3);
    EXPECT_EQ(parse_sequence("override:geometric:2;at:{3,5};val:7").ratio(5), 7);
    EXPECT_EQ(parse_sequence("override:geometric:2;at:residues:3:1;val:5").ratio(4), 5);
    for (std::string bad : {"", "geometric:1", "geometric:x", "ratios:2,3", "ratios:1:repeat", "affine:0,1",
                            "override:geometric:2;at:powers:2", "primes", "banana"})
        EXPECT_THROW(parse_sequence(bad), ParseError) << bad;
    EXPECT_TRUE(std::holds_alternative<GeneralSequence>(parse_any_sequence("primes")));
}

TEST(Parse, Points) {
    auto g = parse_sequence("geometric:2");
    auto p = parse_point("rational:5/8", g);
    ASSERT_TRUE(p.rational);
    EXPECT_EQ(p.rep.describe(), "digits:list:1,0,1");
    EXPECT_EQ(parse_point("rational:-3/8", g).rational->value(), Rational(5, 8));
    EXPECT_EQ(parse_point("digits:periodic:|0,1", g).rational->value(), Rational(1, 3));
    EXPECT_EQ(parse_point("digits:periodic:1|0,1", g).rational->value(), Rational(1, 2) + Rational(1, 6));
    EXPECT_EQ(parse_point("xs:list:2,4", g).rep.describe(), "xs:list:2,4");
    auto f = parse_sequence("factorial");
    EXPECT_FALSE(parse_point("digits:const:1", f).rational);
    EXPECT_EQ(parse_point("digits:floorfrac:1/2", f).rep.digit(5), 3);
    EXPECT_EQ(parse_point("digits:support:powers:2:qminus1", f).rep.digit(4), 4);
    EXPECT_EQ(parse_point("digits:support:multiples:3:const:1", f).rep.digit(6), 1);
    EXPECT_EQ(parse_point("digits:support:multiples:3:const:1", f).rep.digit(7), 0);
    for (std::string bad : {"rational:1/0", "rational:a/b", "digits:periodic:1,2", "digits:wat", "xs:const:2", "x"})
        EXPECT_THROW(parse_point(bad, g), ParseError) << bad;
    EXPECT_THROW(parse_point("digits:list:2", g), DigitConstraintError);
}

TEST(Parse, XSDescriptors) {
    EXPECT_EQ(parse_xs("xs:const:2,2"), XSDescriptor::constant_gap(2, 2));
    EXPECT_EQ(parse_xs("xs:doubling:4,4"), XSDescriptor::doubling(4, 4));
    auto d = parse_xs("xs:list:2,5,7:then:const:3");
    EXPECT_EQ(*d.element(3), 10u);
    auto e = parse_xs("xs:list:2,4:then:doubling:4");
    EXPECT_EQ(*e.element(2), 8u);
    EXPECT_EQ(*e.element(3), 16u);
    EXPECT_EQ(parse_xs(d.describe()), d);
}

TEST(Parse, SetsAndRationals) {
    EXPECT_TRUE(parse_index_set("{1,4}").contains(4));
    EXPECT_TRUE(parse_index_set("list:3").contains(3));
    EXPECT_TRUE(parse_index_set("all").contains(77));
    EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_THROW(parse_index_set("powers:1"), ParseError);
    EXPECT_THROW(parse_rational("1/"), ParseError);
}

TEST(Parse, Caps) {
    Caps c = parse_caps("index=100,grid=64");
    EXPECT_EQ(c.max_index, 100u);
    EXPECT_EQ(c.max_grid, 64u);
    EXPECT_THROW(parse_caps("index=0"), ParseError);
    EXPECT_THROW(parse_caps("speed=1"), ParseError);
    EXPECT_THROW(parse_caps("index"), ParseError);
}

TEST(Json, RationalsAreStrings) {
    Json j = to_json(Interval{Rational(1, 3), Rational(1, 2), true});
    EXPECT_EQ(j["lo"], "1/3");
    EXPECT_EQ(j["hi"], "1/2");
    auto g = parse_sequence("geometric:2");
    Json v = to_json(member_rational(CirclePoint(Rational(1, 5)), g));
    EXPECT_EQ(v["decision"], "Out");
    EXPECT_EQ(v["certificate"]["prime"], "5");
    std::function<void(const Json&)> no_floats = [&](const Json& x) {
        EXPECT_FALSE(x.is_number_float());
        if (x.is_structured())
            for (auto& y : x) no_floats(y);
    };
    no_floats(to_json(report(parse_sequence("factorial"))));
}
