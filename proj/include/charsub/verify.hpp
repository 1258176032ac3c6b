#pragma once

// The acceptance suite and the ball/x_S checks behind verify-prop-b and verify-prop-c.
// Every result is exact and seeded, so the JSON is reproducible byte for byte.

#include <charsub/aseq.hpp>
#include <charsub/circle.hpp>
#include <charsub/classify.hpp>
#include <charsub/membership.hpp>
#include <charsub/metric.hpp>
#include <charsub/parse.hpp>
#include <charsub/report_json.hpp>
#include <charsub/xs.hpp>

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace charsub {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    Json details;
};

inline Json to_json(const CheckResult& r) {
    return Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}};
}

/// Sequences exercised by the round-trip and membership criteria.
inline std::vector<std::string> catalog_specs() {
    return {"factorial",   "geometric:2", "geometric:3",          "ratios:2,3:repeat",
            "affine:2,3",  "doubleexp:2", "ratios:5,7:then:factorial", "override:geometric:2;at:powers:2;val:3"};
}

/// Open and closed balls of radius 1/(2 Q_u) on the grids (1/u_N)Z; passes when every open ball is {0}.
inline CheckResult verify_prop_b(const ASeq& seq, const std::vector<std::size_t>& resolutions) {
    CheckResult r;
    r.name = "small open balls are trivial";
    const auto& b = seq.behavior();
    if (!b.sup) throw UnknownAsymptotics(seq.describe() + " has no declared bound Q_u on the ratios");
    Rational eps(1, Int(2 * *b.sup));
    r.details = Json{{"sequence", seq.describe()}, {"Q_u", to_json(*b.sup)}, {"eps", to_json(eps)}};
    Json rows = Json::array();
    r.pass = true;
    for (auto N : resolutions) {
        auto open = ball_points(seq, N, eps, false);
        auto closed = ball_points(seq, N, eps, true);
        bool trivial = open.size() == 1 && open[0].is_zero();
        r.pass = r.pass && trivial;
        rows.push_back(Json{{"N", N},
                            {"grid", to_json(seq.term(N))},
                            {"open", to_json(open)},
                            {"closed_size", closed.size()},
                            {"open_trivial", trivial}});
    }
    r.details["resolutions"] = rows;
    return r;
}

/// Where rho_u(x_S, 0) sits relative to 1/q_u.  Bounded gaps: strictly inside the open ball.
/// Unbounded gaps: an interval bracketing 1/q_u, the sphere.
inline CheckResult verify_prop_c(const ASeq& seq, const XSDescriptor& desc, std::size_t N,
                                 const Rational& max_width = Rational(1, 100)) {
    CheckResult r;
    validate_xs(desc, seq, true);
    const auto& b = seq.behavior();
    Rational inv(1, *b.limsup);
    CanonicalRep rep = build_xs(desc, seq);
    RhoInterval ri = rho_interval(rep, N);
    bool bounded_gaps = desc.tail == XSDescriptor::Tail::ConstantGap || !desc.infinite();
    bool in_open = ri.bounds.hi < inv;
    bool in_closed = ri.bounds.hi <= inv;
    bool brackets = ri.bounds.lo <= inv && inv <= ri.bounds.hi;
    r.details = Json{{"sequence", seq.describe()},
                     {"descriptor", desc.describe()},
                     {"q_u", to_json(*b.limsup)},
                     {"radius", to_json(inv)},
                     {"rho", to_json(ri)},
                     {"in_open_ball", in_open},
                     {"in_closed_ball", in_closed}};
    if (bounded_gaps) {
        r.name = "bounded gaps: x_S in the open ball of radius 1/q_u";
        r.pass = in_open;
    } else {
        r.name = "unbounded gaps: rho_u(x_S, 0) = 1/q_u";
        r.pass = brackets && ri.bounds.width() <= max_width;
        r.details["brackets_radius"] = brackets;
        r.details["max_width"] = to_json(max_width);
        r.details["limit_argument"] =
            "lower bounds 1/q_u - 1/(2^(d_k-1) q_u^2) increase to 1/q_u as d_k grows; the tail bound is 1/q_u";
    }
    return r;
}

namespace detail {

inline CheckResult criterion_1() {
    CheckResult r;
    r.id = 1;
    r.name = "trivial small balls";
    r.pass = true;
    Json parts = Json::array();
    for (auto spec : {"geometric:2", "ratios:2,3:repeat"}) {
        auto c = verify_prop_b(parse_sequence(spec), {6, 8, 10});
        r.pass = r.pass && c.pass;
        parts.push_back(c.details);
    }
    r.details = Json{{"checks", parts}};
    return r;
}

inline CheckResult criterion_2() {
    CheckResult r;
    r.id = 2;
    r.name = "x_S norm bounds";
    ASeq seq = parse_sequence("geometric:2");
    XSDescriptor desc = XSDescriptor::constant_gap(2, 2);
    CanonicalRep rep = build_xs(desc, seq);
    // x_S = 1/4 - 1/16 + ... = 1/5; confirm against the digit stream before using its orbit.
    CirclePoint fifth(Rational(1, 5));
    PrefixEval pe = eval_prefix(rep, 40);
    bool value_ok = pe.partial <= Rational(1, 5) && Rational(1, 5) <= pe.partial + pe.tail.hi;
    Rational exact = fifth.mul_int(seq.term(*desc.element(0) - 1)).norm();
    bool exact_in = Rational(3, 8) <= exact && exact <= Rational(13, 32);
    r.pass = value_ok && exact == Rational(2, 5) && exact_in;
    Json ks = Json::array();
    for (std::size_t k = 1; k <= 8; ++k) {
        XSNormBounds nb = xs_norm_bounds(desc, seq, k);
        bool same = nb.closed_form.lo == Rational(3, 8) && nb.closed_form.hi == Rational(13, 32);
        Rational true_norm = fifth.mul_int(seq.term(nb.n_k - 1)).norm();
        bool inside = nb.closed_form.lo <= true_norm && true_norm <= nb.closed_form.hi;
        r.pass = r.pass && nb.verified && same && inside;
        Json row = to_json(nb);
        row["exact_norm"] = to_json(true_norm);
        ks.push_back(row);
    }
    r.details = Json{{"x_S", "1/5"}, {"prefix_consistent", value_ok}, {"exact_norm_k1", to_json(exact)}, {"k", ks}};
    return r;
}

inline CheckResult criterion_3() {
    CheckResult r;
    r.id = 3;
    r.name = "many distinct x_S in the open ball";
    ASeq seq = parse_sequence("geometric:2");
    const std::size_t steps = 10;
    std::set<std::vector<Int>> streams;
    Rational worst = 0;
    std::size_t failures = 0, count = 0;
    for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
        XSDescriptor d;
        d.prefix.push_back(2);
        for (std::size_t i = 0; i < steps; ++i) d.prefix.push_back(d.prefix.back() + 2 + ((mask >> i) & 1));
        d.tail = XSDescriptor::Tail::ConstantGap;
        d.gap = 2;
        validate_xs(d, seq);
        CanonicalRep rep = build_xs(d, seq);
        std::size_t N = d.prefix.back() + 6;
        RhoInterval ri = rho_interval(rep, N);
        if (!(ri.bounds.hi < Rational(1, 2))) ++failures;
        worst = std::max(worst, ri.bounds.hi);
        std::vector<Int> digits;
        for (std::size_t n = 1; n <= N; ++n) digits.push_back(rep.digit(n));
        streams.insert(std::move(digits));
        ++count;
    }
    r.pass = count == 1024 && streams.size() == 1024 && failures == 0;
    r.details = Json{{"descriptors", count},
                     {"distinct_digit_prefixes", streams.size()},
                     {"max_upper_bound", to_json(worst)},
                     {"radius", "1/2"},
                     {"failures", failures}};
    return r;
}

inline CheckResult criterion_4() {
    ASeq seq = parse_sequence("override:geometric:2;at:powers:2;val:3");
    CheckResult r = verify_prop_c(seq, XSDescriptor::doubling(4, 4), 64);
    r.id = 4;
    r.name = "x_S on the sphere of radius 1/q_u";
    r.details["gaps_bounded_in_S_star"] = to_string(seq.behavior().attaining->gaps_bounded());
    r.pass = r.pass && seq.behavior().attaining->gaps_bounded() == Tri::No;
    return r;
}

inline CheckResult criterion_5(std::uint64_t seed) {
    CheckResult r;
    r.id = 5;
    r.name = "canonical round trip";
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));
    std::mt19937_64 pick(seed);
    Json per = Json::array();
    r.pass = true;
    for (auto& spec : catalog_specs()) {
        ASeq seq = parse_sequence(spec);
        std::size_t failures = 0, violations = 0;
        for (int i = 0; i < 1000; ++i) {
            std::size_t m = pick() % 13;
            Int U = seq.term(m);
            Int k = rng.get_z_range(U);
            CirclePoint x(make_rational(k, U));
            CanonicalRep rep = to_canonical(x, seq);
            auto back = exact_value(rep);
            if (!back || !(*back == x)) ++failures;
            auto last = rep.last_support();
            if (!last || *last > m) ++violations;
            for (std::size_t n = 1; last && n <= *last; ++n) {
                Int c = rep.digit(n);
                if (c < 0 || c >= seq.ratio(n)) ++violations;
            }
            if (last && *last > 0 && rep.digit(*last) == 0) ++violations;
        }
        r.pass = r.pass && failures == 0 && violations == 0;
        per.push_back(Json{{"sequence", spec}, {"points", 1000}, {"failures", failures}, {"violations", violations}});
    }
    r.details = Json{{"seed", seed}, {"sequences", per}};
    return r;
}

/// Independent oracle: does b divide some u_n with n <= H?  Plain modular scan.
inline std::optional<std::size_t> brute_divides(const ASeq& seq, const Int& b, std::size_t H) {
    if (b == 1) return 0;
    const RatioRule& rule = seq.rule();
    bool squaring = rule.kind() == RatioRule::Kind::DoubleExp;
    Int r = mod(seq.seed(), b), q = 0;
    for (std::size_t n = 0; n <= H; ++n) {
        if (n) {
            // double exponential ratios: q_{n+1} = q_n^2
            q = squaring ? (n == 1 ? mod(rule.base_value(), b) : mod(Int(q * q), b)) : rule.at_mod(n, b);
            r = mod(Int(r * q), b);
        }
        if (r == 0) return n;
    }
    return std::nullopt;
}

inline CheckResult criterion_6(std::uint64_t seed) {
    CheckResult r;
    r.id = 6;
    r.name = "membership oracle coherence";
    std::mt19937_64 rng(seed);
    const std::size_t H = 4096;
    const std::vector<Rational> eps{Rational(1, 10), Rational(1, 100), Rational(1, 1000)};
    Json per = Json::array();
    r.pass = true;
    for (auto& spec : catalog_specs()) {
        ASeq seq = parse_sequence(spec);
        std::size_t in = 0, out = 0, unknown = 0, mismatches = 0, stream_decided = 0, stream_conflicts = 0,
                    falsified = 0, falsify_checks = 0;
        std::size_t horizon = std::min<std::size_t>(200, seq.max_computable_index());
        for (int i = 0; i < 1000; ++i) {
            Int b;
            if (i % 2 == 0) {
                b = Int(static_cast<unsigned long>(1 + rng() % 4000));
            } else {
                std::size_t m = 1 + rng() % 12;
                b = gcd(seq.term(m), Int(static_cast<unsigned long>(1 + rng() % 4000)));
            }
            Int a = Int(static_cast<unsigned long>(rng() % b.get_ui()));
            CirclePoint x(make_rational(a, b));
            Verdict v = member_rational(x, seq);
            auto brute = brute_divides(seq, x.den(), H);
            Decision expect = brute ? Decision::In : Decision::Out;
            if (v.decision == Decision::Unknown) ++unknown;
            else if (v.decision != expect) ++mismatches;
            (v.decision == Decision::In ? in : out) += v.decision != Decision::Unknown;

            CanonicalRep rep = to_canonical(x, seq);
            Verdict s = member_stream(rep);
            if (s.decision != Decision::Unknown && v.decision != Decision::Unknown) {
                ++stream_decided;
                if (s.decision != v.decision) ++stream_conflicts;
            }
            for (const Verdict* w : {&v, &s}) {
                if (w->decision != Decision::In) continue;
                for (auto& e : eps) {
                    auto start = convergence_index(*w, rep, e);
                    if (!start) continue;
                    ++falsify_checks;
                    if (falsify(rep, horizon, e, *start).witness) ++falsified;
                }
            }
        }
        bool ok = mismatches == 0 && stream_conflicts == 0 && falsified == 0;
        r.pass = r.pass && ok;
        per.push_back(Json{{"sequence", spec},
                           {"points", 1000},
                           {"in", in},
                           {"out", out},
                           {"unknown", unknown},
                           {"brute_force_mismatches", mismatches},
                           {"stream_decided", stream_decided},
                           {"stream_conflicts", stream_conflicts},
                           {"falsify_checks", falsify_checks},
                           {"falsify_horizon", horizon},
                           {"falsified", falsified}});
    }
    // Streams with infinite support: members must survive falsification too.
    ASeq fac = parse_sequence("factorial");
    Json streams = Json::array();
    for (auto spec : {"digits:const:1", "digits:support:powers:2:const:1", "digits:floorfrac:1/2"}) {
        ParsedPoint p = parse_point(spec, fac);
        Verdict s = member_stream(p.rep);
        std::size_t hits = 0;
        for (auto& e : eps) {
            if (s.decision != Decision::In) break;
            auto start = convergence_index(s, p.rep, e);
            if (start && falsify(p.rep, 200, e, *start).witness) ++hits;
        }
        r.pass = r.pass && hits == 0;
        streams.push_back(Json{{"point", spec}, {"decision", to_string(s.decision)}, {"falsified", hits}});
    }
    r.details = Json{{"seed", seed}, {"brute_force_horizon", H}, {"sequences", per}, {"streams", streams}};
    return r;
}

inline CheckResult criterion_7() {
    CheckResult r;
    r.id = 7;
    r.name = "torsion structure";
    ASeq fac = parse_sequence("factorial");
    TorsionStructure tf = torsion_structure(fac);
    bool fac_ok = true;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
        PAdicOrder o = p_order(fac, Int(p));
        fac_ok = fac_ok && o.infinite && o.exact;
    }
    TorsionStructure tg = torsion_structure(parse_sequence("geometric:2"));
    TorsionStructure tp = torsion_structure(primes_sequence());
    bool geo_ok = tg.exact() && tg.render() == "Z(2^∞)";
    bool primes_ok = tp.exact() && tp.render() == "0";
    r.pass = fac_ok && geo_ok && primes_ok;
    r.details = Json{{"factorial", to_json(tf)},
                     {"factorial_small_primes_divergent", fac_ok},
                     {"geometric:2", to_json(tg)},
                     {"primes", to_json(tp)}};
    return r;
}

inline CheckResult criterion_8() {
    CheckResult r;
    r.id = 8;
    r.name = "classification report";
    auto six = [](const SubgroupReport& s, Tri want) {
        for (Tri t : {s.ratios_bounded, s.countable, s.subset_of_q_mod_z, s.f_sigma, s.tau_star_open, s.tau_open})
            if (t != want) return false;
        return true;
    };
    SubgroupReport g = report(parse_sequence("geometric:2"));
    SubgroupReport f = report(parse_sequence("factorial"));
    SubgroupReport d = report(parse_sequence("doubleexp:2"));
    bool g_ok = six(g, Tri::Yes) && g.cardinality == "aleph0";
    bool f_ok = six(f, Tri::No) && f.cardinality == "continuum" && f.f_sigma == Tri::No;
    bool d_ok = six(d, Tri::No) && d.cardinality == "continuum" && d.f_sigma == Tri::No;
    r.pass = g_ok && f_ok && d_ok;
    r.details = Json{{"geometric:2", to_json(g)}, {"factorial", to_json(f)}, {"doubleexp:2", to_json(d)}};
    return r;
}

inline CheckResult criterion_9() {
    CheckResult r;
    r.id = 9;
    r.name = "finite-support approximation";
    ASeq fac = parse_sequence("factorial");
    CanonicalRep e2 = CanonicalRep::constant(fac, 1);
    Json rows = Json::array();
    r.pass = true;
    for (auto eps : {Rational(1, 10), Rational(1, 100)}) {
        ApproxResult a = approx_dense(e2, eps);
        bool ok = a.confirmed && a.independent.hi <= eps && a.certificate.hi <= eps;
        r.pass = r.pass && ok;
        Json row = to_json(a);
        row["eps"] = to_json(eps);
        rows.push_back(row);
    }
    r.details = Json{{"point", "e-2 = digits:const:1 over factorial"}, {"runs", rows}};
    return r;
}

}  // namespace detail

inline constexpr std::uint64_t kAcceptanceSeed = 20240229;

/// Criteria 1-9, in order.
inline std::vector<CheckResult> run_criteria(const std::function<void(const CheckResult&)>& progress = {}) {
    std::vector<CheckResult> out;
    auto add = [&](auto&& make) {
        CheckResult c;
        try {
            c = make();
        } catch (const std::exception& e) {
            c.pass = false;
            c.details = Json{{"error", e.what()}};
        }
        out.push_back(c);
        if (progress) progress(out.back());
    };
    add([] { return detail::criterion_1(); });
    add([] { return detail::criterion_2(); });
    add([] { return detail::criterion_3(); });
    add([] { return detail::criterion_4(); });
    add([] { return detail::criterion_5(kAcceptanceSeed); });
    add([] { return detail::criterion_6(kAcceptanceSeed); });
    add([] { return detail::criterion_7(); });
    add([] { return detail::criterion_8(); });
    add([] { return detail::criterion_9(); });
    for (int i = 0; i < 9; ++i) out[i].id = i + 1;
    return out;
}

inline Json results_json(const std::vector<CheckResult>& rs) {
    Json j = Json::array();
    for (auto& r : rs) j.push_back(to_json(r));
    return j;
}

/// Criterion 10 compares two complete runs of 1-9.
inline CheckResult determinism_check(const std::vector<CheckResult>& first, const std::vector<CheckResult>& second) {
    CheckResult r;
    r.id = 10;
    r.name = "deterministic output";
    std::string a = results_json(first).dump(), b = results_json(second).dump();
    r.pass = a == b;
    r.details = Json{{"bytes", a.size()}, {"identical", r.pass}};
    return r;
}

struct AcceptanceReport {
    std::vector<CheckResult> criteria;
    bool all_pass() const {
        for (auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

inline AcceptanceReport run_acceptance(const std::function<void(const CheckResult&)>& progress = {}) {
    AcceptanceReport rep;
    rep.criteria = run_criteria(progress);
    auto again = run_criteria();
    rep.criteria.push_back(determinism_check(rep.criteria, again));
    if (progress) progress(rep.criteria.back());
    return rep;
}

inline Json to_json(const AcceptanceReport& a) {
    return Json{{"all_pass", a.all_pass()}, {"criteria", results_json(a.criteria)}};
}

}  // namespace charsub
