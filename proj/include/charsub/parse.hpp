#pragma once

// Spec-string grammars shared by the CLI and JSON configs.
//
//   sequence: factorial | geometric:<b> | doubleexp:<b> | ratios:<r1,..>:repeat
//             | ratios:<r1,..>:then:<sequence> | affine:<a>,<b>
//             | override:<sequence>;at:<set>;val:<q> | primes (torsion only)
//   set:      powers:<b> | multiples:<m> | residues:<k>:<r1,..> | list:<n1,..> | {<n1,..>} | all
//   point:    rational:<a>/<b> | digits:list:<c1,..> | digits:const:<c> | digits:floorfrac:<a>/<b>
//             | digits:periodic:<pre>|<cycle> | digits:support:<set>:<const:c|floorfrac:r|qminus1>
//             | xs:const:<n1>,<d> | xs:doubling:<n1>,<d0> | xs:list:<n1,..>[:then:const:<d>|:then:doubling:<d0>]

#include <charsub/aseq.hpp>
#include <charsub/caps.hpp>
#include <charsub/circle.hpp>
#include <charsub/classify.hpp>
#include <charsub/error.hpp>
#include <charsub/index_set.hpp>
#include <charsub/xs.hpp>

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace charsub {

namespace detail {

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto i = s.find(sep);
        out.push_back(s.substr(0, i));
        if (i == std::string_view::npos) return out;
        s.remove_prefix(i + 1);
    }
}

inline Int parse_int(std::string_view s, std::string_view what) {
    if (s.empty()) throw ParseError("empty " + std::string(what));
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw ParseError("bad " + std::string(what) + " '" + std::string(s) + "'");
    return Int(std::string(s));
}

inline std::size_t parse_index(std::string_view s, std::string_view what) {
    Int v = parse_int(s, what);
    if (v < 0 || !v.fits_ulong_p()) throw ParseError(std::string(what) + " out of range: " + std::string(s));
    return v.get_ui();
}

inline std::vector<Int> parse_int_list(std::string_view s, std::string_view what) {
    std::vector<Int> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) out.push_back(parse_int(part, what));
    return out;
}

inline std::vector<std::size_t> parse_index_list(std::string_view s, std::string_view what) {
    std::vector<std::size_t> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) out.push_back(parse_index(part, what));
    return out;
}

}  // namespace detail

/// Exact rational "a/b" or integer "a".
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_int(s, "rational"));
    Int a = detail::parse_int(s.substr(0, slash), "numerator");
    Int b = detail::parse_int(s.substr(slash + 1), "denominator");
    if (b == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return make_rational(a, b);
}

inline IndexSet parse_index_set(std::string_view s) {
    using detail::starts_with;
    if (s == "all") return IndexSet::all();
    if (starts_with(s, "powers:")) {
        std::size_t b = detail::parse_index(s.substr(7), "powers base");
        if (b < 2) throw ParseError("powers base must be >= 2");
        return IndexSet::powers(b);
    }
    if (starts_with(s, "multiples:")) {
        std::size_t m = detail::parse_index(s.substr(10), "multiples modulus");
        if (m < 1) throw ParseError("multiples modulus must be >= 1");
        return IndexSet::multiples(m);
    }
    if (starts_with(s, "residues:")) {
        auto rest = s.substr(9);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw ParseError("residues:<k>:<r1,...> expected");
        std::size_t k = detail::parse_index(rest.substr(0, colon), "residue modulus");
        if (k < 1) throw ParseError("residue modulus must be >= 1");
        return IndexSet::residues(k, detail::parse_index_list(rest.substr(colon + 1), "residue"));
    }
    std::string_view body;
    if (starts_with(s, "list:")) body = s.substr(5);
    else if (s.size() >= 2 && s.front() == '{' && s.back() == '}') body = s.substr(1, s.size() - 2);
    else if (!s.empty() && s[0] >= '0' && s[0] <= '9') body = s;
    else throw ParseError("unknown set expression '" + std::string(s) + "'");
    auto items = detail::parse_index_list(body, "index");
    return IndexSet::finite(std::set<std::size_t>(items.begin(), items.end()));
}

namespace detail {

struct RuleSpec {
    Int seed;
    RatioRule rule;
};

inline RuleSpec parse_rule(std::string_view s) {
    if (s == "factorial") return {1, RatioRule::affine(1, 1)};
    if (starts_with(s, "geometric:")) {
        Int b = parse_int(s.substr(10), "geometric base");
        if (b < 2) throw ParseError("geometric base must be >= 2");
        return {1, RatioRule::constant(b)};
    }
    if (starts_with(s, "doubleexp:")) {
        Int b = parse_int(s.substr(10), "double exponential base");
        if (b < 2) throw ParseError("double exponential base must be >= 2");
        return {b, RatioRule::double_exp(b)};
    }
    if (starts_with(s, "affine:")) {
        auto parts = split(s.substr(7), ',');
        if (parts.size() != 2) throw ParseError("affine:<a>,<b> expected");
        Int a = parse_int(parts[0], "affine slope"), b = parse_int(parts[1], "affine intercept");
        if (a < 0 || a + b < 2 || (a == 0 && b < 2)) throw ParseError("affine ratios must be >= 2 for n >= 1");
        return {1, RatioRule::affine(a, b)};
    }
    if (starts_with(s, "ratios:")) {
        auto rest = s.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw ParseError("ratios:<r1,...>:repeat or :then:<rule> expected");
        auto list = parse_int_list(rest.substr(0, colon), "ratio");
        if (list.empty()) throw ParseError("empty ratio list");
        for (auto& r : list)
            if (r < 2) throw ParseError("ratios must be >= 2");
        auto mode = rest.substr(colon + 1);
        if (mode == "repeat") return {1, RatioRule::periodic(list)};
        if (starts_with(mode, "then:")) return {1, RatioRule::prefix_then(list, parse_rule(mode.substr(5)).rule)};
        throw ParseError("ratios list must end with :repeat or :then:<rule>");
    }
    if (starts_with(s, "override:")) {
        auto body = s.substr(9);
        auto at = body.rfind(";at:");
        auto val = body.rfind(";val:");
        if (at == std::string_view::npos || val == std::string_view::npos || val < at)
            throw ParseError("override:<base>;at:<set>;val:<q> expected");
        RuleSpec base = parse_rule(body.substr(0, at));
        IndexSet set = parse_index_set(body.substr(at + 4, val - at - 4));
        Int q = parse_int(body.substr(val + 5), "override value");
        if (q < 2) throw ParseError("override value must be >= 2");
        return {base.seed, RatioRule::override_at(base.rule, set, q)};
    }
    if (s == "primes") throw ParseError("'primes' is not an a-sequence; it is accepted by torsion only");
    throw ParseError("unknown sequence spec '" + std::string(s) + "'");
}

}  // namespace detail

inline ASeq parse_sequence(std::string_view spec, const Caps& caps = {}) {
    auto r = detail::parse_rule(spec);
    return ASeq(r.seed, r.rule, std::string(spec), caps);
}

/// Either an a-sequence or, for torsion only, a general integer sequence.
using AnySequence = std::variant<ASeq, GeneralSequence>;

inline AnySequence parse_any_sequence(std::string_view spec, const Caps& caps = {}) {
    if (spec == "primes") return primes_sequence();
    return parse_sequence(spec, caps);
}

inline XSDescriptor parse_xs(std::string_view s) {
    using detail::starts_with;
    if (!starts_with(s, "xs:")) throw ParseError("xs descriptor must start with 'xs:'");
    auto body = s.substr(3);
    auto pair = [&](std::string_view text, const char* what) {
        auto parts = detail::split(text, ',');
        if (parts.size() != 2) throw ParseError(std::string(what) + ":<n1>,<d> expected");
        return std::make_pair(detail::parse_index(parts[0], "n1"), detail::parse_index(parts[1], "gap"));
    };
    if (starts_with(body, "const:")) {
        auto [n1, d] = pair(body.substr(6), "xs:const");
        return XSDescriptor::constant_gap(n1, d);
    }
    if (starts_with(body, "doubling:")) {
        auto [n1, d] = pair(body.substr(9), "xs:doubling");
        return XSDescriptor::doubling(n1, d);
    }
    if (starts_with(body, "list:")) {
        auto rest = body.substr(5);
        auto then = rest.find(":then:");
        XSDescriptor d = XSDescriptor::list(detail::parse_index_list(rest.substr(0, then), "xs element"));
        if (d.prefix.empty()) throw ParseError("xs list is empty");
        if (then != std::string_view::npos) {
            auto tail = rest.substr(then + 6);
            if (starts_with(tail, "const:")) {
                d.tail = XSDescriptor::Tail::ConstantGap;
                d.gap = detail::parse_index(tail.substr(6), "gap");
            } else if (starts_with(tail, "doubling:")) {
                d.tail = XSDescriptor::Tail::DoublingGaps;
                d.gap = detail::parse_index(tail.substr(9), "gap");
            } else {
                throw ParseError("xs tail must be const:<d> or doubling:<d0>");
            }
        }
        return d;
    }
    throw ParseError("unknown xs descriptor '" + std::string(s) + "'");
}

/// A parsed point: its canonical representation, plus the exact value when it is rational.
struct ParsedPoint {
    std::optional<CirclePoint> rational;
    CanonicalRep rep;
    std::string spec;
};

inline ParsedPoint parse_point(std::string_view s, const ASeq& seq) {
    using detail::starts_with;
    std::string spec(s);
    if (starts_with(s, "rational:")) {
        CirclePoint x(parse_rational(s.substr(9)));
        return {x, to_canonical(x, seq), spec};
    }
    if (starts_with(s, "xs:")) return {std::nullopt, CanonicalRep::alternating_xs(seq, parse_xs(s)), spec};
    if (!starts_with(s, "digits:")) throw ParseError("unknown point spec '" + spec + "'");
    auto body = s.substr(7);
    auto finish = [&](CanonicalRep rep) {
        ParsedPoint p{exact_value(rep), rep, spec};
        return p;
    };
    if (starts_with(body, "list:")) return finish(CanonicalRep::finite(seq, detail::parse_int_list(body.substr(5), "digit")));
    if (starts_with(body, "const:")) return finish(CanonicalRep::constant(seq, detail::parse_int(body.substr(6), "digit")));
    if (starts_with(body, "floorfrac:")) return finish(CanonicalRep::floor_fraction(seq, parse_rational(body.substr(10))));
    if (starts_with(body, "periodic:")) {
        auto rest = body.substr(9);
        auto bar = rest.find('|');
        if (bar == std::string_view::npos) throw ParseError("digits:periodic:<pre>|<cycle> expected");
        auto cycle = detail::parse_int_list(rest.substr(bar + 1), "digit");
        if (cycle.empty()) throw ParseError("periodic digit cycle is empty");
        return finish(CanonicalRep::periodic(seq, detail::parse_int_list(rest.substr(0, bar), "digit"), cycle));
    }
    if (starts_with(body, "support:")) {
        auto rest = body.substr(8);
        SupportValue v;
        std::string_view set;
        if (rest.size() > 8 && rest.substr(rest.size() - 8) == ":qminus1") {
            v = SupportValue::q_minus_one();
            set = rest.substr(0, rest.size() - 8);
        } else {
            auto last = rest.rfind(':');
            if (last == std::string_view::npos || last == 0) throw ParseError("digits:support:<set>:<value> expected");
            auto prev = rest.rfind(':', last - 1);
            if (prev == std::string_view::npos) throw ParseError("digits:support:<set>:<value> expected");
            auto kind = rest.substr(prev + 1, last - prev - 1);
            auto arg = rest.substr(last + 1);
            if (kind == "const") v = SupportValue::constant(detail::parse_int(arg, "digit"));
            else if (kind == "floorfrac") v = SupportValue::floor_frac(parse_rational(arg));
            else throw ParseError("support value must be const:<c>, floorfrac:<r> or qminus1");
            set = rest.substr(0, prev);
        }
        return finish(CanonicalRep::support(seq, parse_index_set(set), v));
    }
    throw ParseError("unknown digit descriptor '" + spec + "'");
}

}  // namespace charsub
