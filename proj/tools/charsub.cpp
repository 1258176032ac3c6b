// charsub: command-line front end for the characterized-subgroup library.
//
// Exit codes: 0 ok, 1 parse/usage or other input error, 2 resource cap,
// 3 undecided membership, 4 a verify run with failing checks.

#include <charsub/charsub.hpp>
#include <charsub/report_json.hpp>
#include <charsub/verify.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#ifndef CHARSUB_VERSION
#define CHARSUB_VERSION "1.0.0"
#endif

using namespace charsub;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitCap = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitVerifyFailed = 4;

struct Options {
    std::string format = "json";
    std::string caps;
    std::string seq;
    std::string point;
    std::string point2;
    std::string desc;
    std::string eps;
    std::size_t N = 0;
    std::size_t m = 0;
    std::size_t k = 8;
    std::size_t test_n = 0;
    std::string bound = "50";
    std::string max_width = "1/100";
    std::vector<std::size_t> resolutions{6, 8, 10};
    bool closed = false;
};

Caps effective_caps(const Options& o) {
    Caps c = caps_from_env();
    if (!o.caps.empty()) c = parse_caps(o.caps, c);
    return c;
}

Json header(const std::string& command) { return Json{{"command", command}, {"version", CHARSUB_VERSION}}; }

void merge(Json& into, const Json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

// Text rendering: one "path: value" line per leaf; rationals get a marked decimal.
void render_text(const Json& j, const std::string& path, std::ostream& os) {
    static const std::regex rational("^-?[0-9]+/[0-9]+$");
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            render_text(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
        return;
    }
    if (j.is_array()) {
        if (j.empty()) os << path << ": []\n";
        for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", os);
        return;
    }
    os << path << ": ";
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        os << s;
        if (std::regex_match(s, rational) && s.size() < 200) os << "  (approx " << approx(parse_rational(s), 12) << ")";
    } else {
        os << j.dump();
    }
    os << "\n";
}

void emit(const Json& j, const Options& o) {
    if (o.format == "text") render_text(j, "", std::cout);
    else std::cout << j.dump(2) << "\n";
}

Rational positive_rational(const std::string& s, const char* what) {
    Rational r = parse_rational(s);
    if (r <= 0) throw DomainError(std::string(what) + " must be positive");
    return r;
}

int cmd_classify(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    Json j = header("classify");
    merge(j, to_json(report(seq)));
    emit(j, o);
    return 0;
}

int cmd_torsion(const Options& o) {
    Int bound = detail::parse_int(o.bound, "bound");
    if (bound < 2) throw DomainError("bound must be >= 2");
    AnySequence any = parse_any_sequence(o.seq, effective_caps(o));
    TorsionStructure t = std::visit([&](const auto& s) { return torsion_structure(s, bound); }, any);
    Json j = header("torsion");
    j["sequence"] = o.seq;
    merge(j, to_json(t));
    emit(j, o);
    return 0;
}

int cmd_enumerate(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    auto pts = enumerate_countable(seq, o.m);
    Json j = header("enumerate");
    j["sequence"] = seq.describe();
    j["m"] = o.m;
    j["u_m"] = to_json(seq.term(o.m));
    j["count"] = pts.size();
    j["points"] = to_json(pts);
    emit(j, o);
    return 0;
}

int cmd_member(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    ParsedPoint p = parse_point(o.point, seq);
    Verdict v = p.rational && o.point.rfind("rational:", 0) == 0 ? member_rational(*p.rational, seq) : member_stream(p.rep);
    Json j = header("member");
    j["sequence"] = seq.describe();
    j["point"] = o.point;
    j["representation"] = p.rep.describe();
    merge(j, to_json(v));
    emit(j, o);
    return v.decision == Decision::Unknown ? kExitUnknown : 0;
}

int cmd_rho(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    ParsedPoint p = parse_point(o.point, seq);
    Json j = header("rho");
    j["sequence"] = seq.describe();
    j["point"] = o.point;
    if (!o.point2.empty()) {
        ParsedPoint q = parse_point(o.point2, seq);
        if (!p.rational || !q.rational) throw DomainError("rho of two points needs both to be rational");
        j["point2"] = o.point2;
        merge(j, to_json(rho_rational(*p.rational, *q.rational, seq)));
    } else if (p.rational) {
        merge(j, to_json(rho_rational(*p.rational, seq)));
    } else {
        std::size_t N = o.N ? o.N : 64;
        j["representation"] = p.rep.describe();
        merge(j, to_json(rho_interval(p.rep, N)));
    }
    emit(j, o);
    return 0;
}

int cmd_ball(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    if (o.N < 1) throw DomainError("--N must be >= 1");
    Json j = header("ball");
    j["sequence"] = seq.describe();
    j["N"] = o.N;
    j["grid"] = to_json(seq.term(o.N));
    std::vector<CirclePoint> pts;
    if (o.test_n) {
        pts = test_topology_ball(seq, o.N, o.test_n);
        j["radius"] = to_json(Rational(1, Int(static_cast<unsigned long>(o.test_n))));
        j["closed"] = true;
        j["surrogate"] = "closure of the ball approximated by the closed ball on the grid";
    } else {
        Rational eps = positive_rational(o.eps, "eps");
        pts = ball_points(seq, o.N, eps, o.closed);
        j["radius"] = to_json(eps);
        j["closed"] = o.closed;
    }
    j["count"] = pts.size();
    j["points"] = to_json(pts);
    emit(j, o);
    return 0;
}

int cmd_xs(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    XSDescriptor d = parse_xs(o.desc);
    validate_xs(d, seq);
    CanonicalRep rep = build_xs(d, seq);
    std::size_t N = o.N ? o.N : 32;
    Json j = header("xs");
    j["sequence"] = seq.describe();
    j["descriptor"] = d.describe();
    Json elems = Json::array();
    for (std::size_t i = 0;; ++i) {
        auto e = d.element(i);
        if (!e || *e > N) break;
        elems.push_back(*e);
    }
    j["elements_up_to_N"] = elems;
    Json digits = Json::array();
    for (std::size_t n = 1; n <= N; ++n) digits.push_back(to_json(rep.digit(n)));
    j["digits"] = digits;
    PrefixEval pe = eval_prefix(rep, N);
    j["prefix_value"] = to_json(pe.partial);
    j["prefix_tail"] = to_json(pe.tail);
    if (auto exact = exact_value(rep)) j["value"] = to_json(*exact);
    Json norms = Json::array();
    for (std::size_t k = 1; k <= o.k; ++k) {
        auto nk2 = d.element(k + 1);
        if (!nk2 || *nk2 > seq.max_computable_index()) break;
        norms.push_back(to_json(xs_norm_bounds(d, seq, k)));
    }
    j["norm_bounds"] = norms;
    j["rho"] = to_json(rho_interval(rep, N));
    emit(j, o);
    return 0;
}

int cmd_approx(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    ParsedPoint p = parse_point(o.point, seq);
    Rational eps = positive_rational(o.eps, "eps");
    ApproxResult a = approx_dense(p.rep, eps);
    Json j = header("approx");
    j["sequence"] = seq.describe();
    j["point"] = o.point;
    j["eps"] = to_json(eps);
    merge(j, to_json(a));
    emit(j, o);
    return 0;
}

int cmd_prop_b(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    CheckResult r = verify_prop_b(seq, o.resolutions);
    Json j = header("verify-prop-b");
    merge(j, Json{{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    emit(j, o);
    return r.pass ? 0 : kExitVerifyFailed;
}

int cmd_prop_c(const Options& o) {
    ASeq seq = parse_sequence(o.seq, effective_caps(o));
    CheckResult r = verify_prop_c(seq, parse_xs(o.desc), o.N ? o.N : 64, positive_rational(o.max_width, "max width"));
    Json j = header("verify-prop-c");
    merge(j, Json{{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    emit(j, o);
    return r.pass ? 0 : kExitVerifyFailed;
}

int cmd_verify(const Options& o) {
    AcceptanceReport rep = run_acceptance();
    Json j = header("verify");
    merge(j, to_json(rep));
    emit(j, o);
    return rep.all_pass() ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charsub: characterized subgroups t_u(T) of the circle for a-sequences u"};
    app.set_version_flag("--version", CHARSUB_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--caps", o.caps, "caps override, e.g. index=4096,bits=16777216,grid=16777216,horizon=4096,cycle=4194304");

    const char* seq_help =
        "sequence: factorial (u_n = (n+1)!) | geometric:<b> | doubleexp:<b> | ratios:<r,..>:repeat | "
        "ratios:<r,..>:then:<seq> | affine:<a>,<b> | override:<seq>;at:<set>;val:<q>";
    const char* point_help =
        "point: rational:<a>/<b> | digits:list:<c,..> | digits:const:<c> | digits:floorfrac:<a>/<b> | "
        "digits:periodic:<pre>|<cycle> | digits:support:<set>:<const:c|floorfrac:r|qminus1> | xs:...";
    const char* xs_help = "xs:const:<n1>,<d> | xs:doubling:<n1>,<d0> | xs:list:<n,..>[:then:const:<d>|:then:doubling:<d0>]";

    auto* classify = app.add_subcommand("classify", "classification report for t_u(T)");
    classify->add_option("--seq", o.seq, seq_help)->required();

    auto* torsion = app.add_subcommand("torsion", "torsion subgroup as a sum of Pruefer groups");
    torsion->add_option("--seq", o.seq, std::string(seq_help) + " | primes")->required();
    torsion->add_option("--bound", o.bound, "list every prime up to this bound");

    auto* enumerate = app.add_subcommand("enumerate", "elements k/u_m (bounded ratios only)");
    enumerate->add_option("--seq", o.seq, seq_help)->required();
    enumerate->add_option("--m", o.m, "index m")->required();

    auto* member = app.add_subcommand("member", "decide x in t_u(T) with a certificate");
    member->add_option("--seq", o.seq, seq_help)->required();
    member->add_option("--point", o.point, point_help)->required();

    auto* rho = app.add_subcommand("rho", "the metric rho_u(x, 0) or rho_u(x, y)");
    rho->add_option("--seq", o.seq, seq_help)->required();
    rho->add_option("--point", o.point, point_help)->required();
    rho->add_option("--point2", o.point2, "second rational point y");
    rho->add_option("--N", o.N, "horizon for digit streams (default 64)");

    auto* ball = app.add_subcommand("ball", "grid points k/u_N in a rho_u-ball around 0");
    ball->add_option("--seq", o.seq, seq_help)->required();
    ball->add_option("--N", o.N, "resolution")->required();
    auto* eps_opt = ball->add_option("--eps", o.eps, "radius a/b");
    ball->add_flag("--closed", o.closed, "closed ball (<= eps)");
    auto* tn = ball->add_option("--test-n", o.test_n, "closed ball of radius 1/n as the closure surrogate");
    eps_opt->excludes(tn);
    ball->callback([&] {
        if (o.eps.empty() && !o.test_n) throw CLI::ValidationError("ball", "--eps or --test-n is required");
    });

    auto* xs = app.add_subcommand("xs", "x_S digit stream, norm bounds and rho interval");
    xs->add_option("--seq", o.seq, seq_help)->required();
    xs->add_option("--desc", o.desc, xs_help)->required();
    xs->add_option("--N", o.N, "horizon (default 32)");
    xs->add_option("--k", o.k, "norm bounds for k = 1..K (default 8)");

    auto* approx_cmd = app.add_subcommand("approx", "finite-support approximation within eps");
    approx_cmd->add_option("--seq", o.seq, seq_help)->required();
    approx_cmd->add_option("--point", o.point, point_help)->required();
    approx_cmd->add_option("--eps", o.eps, "tolerance a/b")->required();

    auto* prop_b = app.add_subcommand("verify-prop-b", "small open balls {0} for bounded ratios");
    prop_b->add_option("--seq", o.seq, seq_help)->required();
    prop_b->add_option("--N", o.resolutions, "resolutions (default 6 8 10)")->delimiter(',');

    auto* prop_c = app.add_subcommand("verify-prop-c", "x_S inside the ball or on the sphere of radius 1/q_u");
    prop_c->add_option("--seq", o.seq, seq_help)->required();
    prop_c->add_option("--desc", o.desc, xs_help)->required();
    prop_c->add_option("--N", o.N, "horizon (default 64)");
    prop_c->add_option("--max-width", o.max_width, "sphere bracket width (default 1/100)");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*classify) return cmd_classify(o);
        if (*torsion) return cmd_torsion(o);
        if (*enumerate) return cmd_enumerate(o);
        if (*member) return cmd_member(o);
        if (*rho) return cmd_rho(o);
        if (*ball) return cmd_ball(o);
        if (*xs) return cmd_xs(o);
        if (*approx_cmd) return cmd_approx(o);
        if (*prop_b) return cmd_prop_b(o);
        if (*prop_c) return cmd_prop_c(o);
        if (*verify) return cmd_verify(o);
    } catch (const ResourceLimit& e) {
        std::cerr << "charsub: " << e.what() << "\n";
        return kExitCap;
    } catch (const ParseError& e) {
        std::cerr << "charsub: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "charsub: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}
