#pragma once

// The circle T = R/Z with exact rational points, and canonical mixed-radix digit streams
// x = c_0/u_0 + sum_{n>=1} c_n/u_n with 0 <= c_n < q_n and c_n < q_n - 1 infinitely often.
//
// c_0 is a leading digit in [0, u_0) and vanishes when u_0 = 1; it lets every point of
// [0, 1) be represented when the seed exceeds 1.

#include <charsub/aseq.hpp>
#include <charsub/error.hpp>
#include <charsub/index_set.hpp>
#include <charsub/numeric.hpp>
#include <charsub/xs.hpp>

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace charsub {

/// An element of T, stored as its representative in [0, 1).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(const Rational& r) : v_(frac(r)) {}
    CirclePoint(const Int& a, const Int& b) : CirclePoint(make_rational(a, b)) {}

    const Rational& value() const { return v_; }
    Int num() const { return v_.get_num(); }
    Int den() const { return v_.get_den(); }
    bool is_zero() const { return v_ == 0; }

    Rational norm() const { return circle_norm(v_); }
    CirclePoint mul_int(const Int& k) const {
        return CirclePoint(make_rational(mod(Int(k * v_.get_num()), v_.get_den()), v_.get_den()));
    }

    friend CirclePoint operator+(const CirclePoint& a, const CirclePoint& b) { return CirclePoint(a.v_ + b.v_); }
    friend CirclePoint operator-(const CirclePoint& a, const CirclePoint& b) { return CirclePoint(a.v_ - b.v_); }
    CirclePoint operator-() const { return CirclePoint(-v_); }
    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.v_ == b.v_; }
    friend bool operator<(const CirclePoint& a, const CirclePoint& b) { return a.v_ < b.v_; }

    std::string str() const { return to_string(v_); }

private:
    Rational v_ = 0;
};

inline Rational norm(const CirclePoint& x) { return x.norm(); }
inline CirclePoint mul_int(const Int& k, const CirclePoint& x) { return x.mul_int(k); }

/// Value rule for digits on a support set.
struct SupportValue {
    enum class Kind { Const, FloorFrac, QMinusOne };
    Kind kind = Kind::Const;
    Int c = 1;
    Rational r = 0;

    static SupportValue constant(Int c) { return {Kind::Const, std::move(c), 0}; }
    static SupportValue floor_frac(Rational r) { return {Kind::FloorFrac, 0, std::move(r)}; }
    static SupportValue q_minus_one() { return {Kind::QMinusOne, 0, 0}; }

    Int at(const Int& q) const {
        switch (kind) {
        case Kind::Const: return c;
        case Kind::FloorFrac: return floor(Rational(q * r));
        default: return q - 1;
        }
    }

    std::string describe() const {
        switch (kind) {
        case Kind::Const: return "const:" + c.get_str();
        case Kind::FloorFrac: return "floorfrac:" + to_string(r);
        default: return "qminus1";
        }
    }
};

enum class SupportClass { Finite, UBounded, UDivergent, Mixed, Unknown };

inline const char* to_string(SupportClass c) {
    switch (c) {
    case SupportClass::Finite: return "finite";
    case SupportClass::UBounded: return "u-bounded";
    case SupportClass::UDivergent: return "u-divergent";
    case SupportClass::Mixed: return "mixed";
    default: return "unknown";
    }
}

/// A canonical representation relative to a fixed a-sequence.
class CanonicalRep {
public:
    enum class Kind { Finite, Periodic, Constant, FloorFraction, Support, AlternatingXS, RationalDigits, TailOf };

    /// Digits c_1..c_m, then zeros.
    static CanonicalRep finite(const ASeq& seq, std::vector<Int> digits, Int leading = 0) {
        while (!digits.empty() && digits.back() == 0) digits.pop_back();
        auto n = make(Kind::Finite, seq);
        n->leading = std::move(leading);
        n->list = std::move(digits);
        CanonicalRep rep(std::move(n));
        rep.check_prefix(rep.node_->list.size());
        return rep;
    }

    /// Digits pre_1..pre_k, then the cycle repeated forever.
    static CanonicalRep periodic(const ASeq& seq, std::vector<Int> pre, std::vector<Int> cycle, Int leading = 0) {
        if (cycle.empty() || std::all_of(cycle.begin(), cycle.end(), [](const Int& c) { return c == 0; }))
            return finite(seq, std::move(pre), std::move(leading));
        for (auto& c : cycle)
            if (c < 0) throw DigitConstraintError("negative digit");
        while (!pre.empty() && pre.back() == cycle.back()) {
            std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
            pre.pop_back();
        }
        auto n = make(Kind::Periodic, seq);
        n->leading = std::move(leading);
        n->list = std::move(pre);
        n->cycle = std::move(cycle);
        CanonicalRep rep(std::move(n));
        rep.check_periodic();
        return rep;
    }

    /// c_n = c for every n >= 1.
    static CanonicalRep constant(const ASeq& seq, Int c) {
        if (c == 0) return finite(seq, {});
        if (c < 0) throw DigitConstraintError("negative digit");
        if (c >= seq.rule().floor_after(0))
            throw DigitConstraintError("constant digit " + c.get_str() + " is not below every ratio");
        if (!infinitely_often_below(seq, [&](const Int& q) { return c < q - 1; }))
            throw DigitConstraintError("constant digit " + c.get_str() + " equals q_n - 1 from some point on");
        auto n = make(Kind::Constant, seq);
        n->value = SupportValue::constant(std::move(c));
        return CanonicalRep(std::move(n));
    }

    /// c_n = floor(q_n r) for rational 0 < r < 1.
    static CanonicalRep floor_fraction(const ASeq& seq, Rational r) {
        if (r <= 0 || r >= 1) throw DigitConstraintError("floor fraction needs 0 < r < 1");
        if (!infinitely_often_below(seq, [&](const Int& q) { return floor(Rational(q * r)) < q - 1; }))
            throw DigitConstraintError("floor(q_n r) equals q_n - 1 from some point on");
        auto n = make(Kind::FloorFraction, seq);
        n->value = SupportValue::floor_frac(std::move(r));
        return CanonicalRep(std::move(n));
    }

    /// c_n = value(q_n) for n in S, zero elsewhere.
    static CanonicalRep support(const ASeq& seq, IndexSet s, SupportValue v) {
        if (v.kind == SupportValue::Kind::Const) {
            if (v.c == 0) return finite(seq, {});
            std::size_t from = 0;
            if (auto first = s.nth(0, 4096)) from = *first - 1;
            if (v.c < 0 || v.c >= seq.rule().floor_after(from))
                throw DigitConstraintError("support digit " + v.c.get_str() + " is not below every ratio");
        }
        if (v.kind == SupportValue::Kind::FloorFrac && (v.r <= 0 || v.r >= 1))
            throw DigitConstraintError("floor fraction needs 0 < r < 1");
        bool ok = s.infinite() == Tri::No || complement(s).infinite() == Tri::Yes;
        if (!ok && v.kind != SupportValue::Kind::QMinusOne)
            ok = infinitely_often_below(seq, [&](const Int& q) { return v.at(q) < q - 1; });
        if (!ok) throw DigitConstraintError("cannot prove c_n < q_n - 1 infinitely often on this support");
        auto n = make(Kind::Support, seq);
        n->set = std::move(s);
        n->value = std::move(v);
        return CanonicalRep(std::move(n));
    }

    /// Digits q_j - 1 on the blocks (n_{2k-1}, n_{2k}]; a finite list of odd length ends with
    /// digit 1 at its last element.
    static CanonicalRep alternating_xs(const ASeq& seq, XSDescriptor desc) {
        validate_xs(desc, seq);
        auto n = make(Kind::AlternatingXS, seq);
        n->xs = std::move(desc);
        return CanonicalRep(std::move(n));
    }

    /// Greedy digits of a rational point whose expansion has no known closed form.
    static CanonicalRep rational_digits(const ASeq& seq, const CirclePoint& x) {
        auto n = make(Kind::RationalDigits, seq);
        n->point = x;
        n->memo = std::make_shared<Memo>();
        n->memo->rem.push_back(mod(Int(seq.seed() * x.num()), x.den()));
        n->leading = floor_div(Int(seq.seed() * x.num()), x.den());
        return CanonicalRep(std::move(n));
    }

    /// The digits of `base` above index `after`; zeros (and c_0 = 0) up to it.
    static CanonicalRep tail_of(const CanonicalRep& base, std::size_t after) {
        auto n = make(Kind::TailOf, base.seq());
        n->base = base.node_;
        n->after = after;
        return CanonicalRep(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const ASeq& seq() const { return node_->seq; }
    const Int& leading() const { return node_->leading; }
    const std::vector<Int>& list() const { return node_->list; }
    const std::vector<Int>& cycle() const { return node_->cycle; }
    const SupportValue& value_rule() const { return node_->value; }
    const IndexSet& support_rule_set() const { return node_->set; }
    const XSDescriptor& xs() const { return node_->xs; }
    std::size_t tail_after() const { return node_->after; }
    CanonicalRep tail_base() const { return CanonicalRep(node_->base); }
    const std::optional<CirclePoint>& source() const { return node_->point; }

    /// c_n; c_0 is the leading digit.
    Int digit(std::size_t n) const {
        Int q = seq().ratio(n);
        Int c = raw_digit(n, q);
        if (c < 0 || c >= q)
            throw DigitConstraintError("c_" + std::to_string(n) + " = " + c.get_str() + " violates 0 <= c < q = " +
                                       q.get_str());
        return c;
    }

    /// Index of the last nonzero digit when the support is provably finite (0 if none).
    std::optional<std::size_t> last_support() const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Finite: return nd.list.size();
        case Kind::AlternatingXS:
            if (nd.xs.infinite()) return std::nullopt;
            return nd.xs.prefix.back();
        case Kind::Support: {
            if (nd.set.infinite() != Tri::No) return std::nullopt;
            auto per = nd.set.periodicity();
            if (!per) return std::nullopt;
            std::size_t last = 0;
            for (std::size_t n = 1; n <= per->start; ++n)
                if (nd.set.contains(n)) last = n;
            return last;
        }
        case Kind::TailOf: {
            auto b = tail_base().last_support();
            if (!b) return std::nullopt;
            return *b <= nd.after ? 0 : *b;
        }
        default: return std::nullopt;
        }
    }

    /// {n >= 1 : c_n != 0} when expressible.
    std::optional<IndexSet> support_set() const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Finite: {
            std::set<std::size_t> s;
            for (std::size_t i = 0; i < nd.list.size(); ++i)
                if (nd.list[i] != 0) s.insert(i + 1);
            return IndexSet::finite(s);
        }
        case Kind::Periodic: {
            std::set<std::size_t> s;
            for (std::size_t i = 0; i < nd.list.size(); ++i)
                if (nd.list[i] != 0) s.insert(i + 1);
            std::vector<std::size_t> cls;
            for (std::size_t j = 0; j < nd.cycle.size(); ++j)
                if (nd.cycle[j] != 0) cls.push_back((j + 1) % nd.cycle.size());
            return unite(IndexSet::finite(s), shift(IndexSet::residues(nd.cycle.size(), cls), nd.list.size()));
        }
        case Kind::Constant: return IndexSet::all();
        case Kind::FloorFraction: return positions_at_least(Int(ceil_inverse(nd.value.r)));
        case Kind::Support: {
            if (nd.value.kind != SupportValue::Kind::FloorFrac) return nd.set;
            auto p = positions_at_least(ceil_inverse(nd.value.r));
            if (!p) return std::nullopt;
            return intersect(nd.set, *p);
        }
        case Kind::AlternatingXS: {
            if (!nd.xs.infinite()) {
                std::set<std::size_t> s;
                for (std::size_t n = 1; n <= nd.xs.prefix.back(); ++n)
                    if (xs_nonzero(n)) s.insert(n);
                return IndexSet::finite(s);
            }
            if (nd.xs.tail != XSDescriptor::Tail::ConstantGap) return std::nullopt;
            std::size_t period = 2 * nd.xs.gap;
            std::size_t t = nd.xs.prefix.back() + period;
            std::set<std::size_t> head;
            for (std::size_t n = 1; n <= t; ++n)
                if (xs_nonzero(n)) head.insert(n);
            std::vector<std::size_t> cls;
            for (std::size_t n = t + 1; n <= t + period; ++n)
                if (xs_nonzero(n)) cls.push_back((n - t) % period);
            return unite(IndexSet::finite(head), shift(IndexSet::residues(period, cls), t));
        }
        case Kind::RationalDigits: return std::nullopt;
        case Kind::TailOf: {
            auto b = tail_base().support_set();
            if (!b) return std::nullopt;
            std::set<std::size_t> head;
            for (std::size_t n = 1; n <= nd.after; ++n) head.insert(n);
            return subtract(*b, IndexSet::finite(head));
        }
        }
        return std::nullopt;
    }

    /// Real limit of c_n / q_n along the support, for u-divergent supports.
    Rational digit_ratio_limit() const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Finite:
        case Kind::Periodic:
        case Kind::Constant: return 0;
        case Kind::FloorFraction: return nd.value.r;
        case Kind::Support:
            return nd.value.kind == SupportValue::Kind::Const       ? Rational(0)
                   : nd.value.kind == SupportValue::Kind::FloorFrac ? nd.value.r
                                                                    : Rational(1);
        case Kind::AlternatingXS: return 1;
        case Kind::RationalDigits:
            throw UnsupportedDescriptor("greedy digits of a rational carry no symbolic limit");
        case Kind::TailOf: return tail_base().digit_ratio_limit();
        }
        return 0;
    }

    /// Upper bound on c_n for every n > N, when the rule bounds its digits.
    std::optional<Int> digit_bound_after(std::size_t N) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Finite: {
            Int m = 0;
            for (std::size_t i = N; i < nd.list.size(); ++i) m = std::max(m, nd.list[i]);
            return m;
        }
        case Kind::Periodic: {
            Int m = *std::max_element(nd.cycle.begin(), nd.cycle.end());
            for (std::size_t i = N; i < nd.list.size(); ++i) m = std::max(m, nd.list[i]);
            return m;
        }
        case Kind::Constant: return nd.value.c;
        case Kind::Support:
            if (nd.value.kind == SupportValue::Kind::Const) return nd.value.c;
            return std::nullopt;
        case Kind::TailOf: return tail_base().digit_bound_after(std::max(N, nd.after));
        default: return std::nullopt;
        }
    }

    /// Upper bound on sup_{n >= N} ||u_n x||.
    Rational tail_sup_bound(std::size_t N) const {
        const Rational half(1, 2);
        if (auto last = last_support(); last && N >= *last) return 0;
        const Node& nd = *node_;
        const ASeq& s = nd.seq;
        Int m = s.rule().floor_after(N);
        Rational bound = half;
        switch (nd.kind) {
        case Kind::FloorFraction: bound = nd.value.r * m / (m - 1); break;
        case Kind::Support:
            if (nd.value.kind == SupportValue::Kind::FloorFrac) bound = nd.value.r * m / (m - 1);
            else if (nd.value.kind == SupportValue::Kind::Const) bound = Rational(nd.value.c) / (m - 1);
            break;
        case Kind::AlternatingXS: bound = xs_sup_bound(); break;
        case Kind::RationalDigits: break;
        case Kind::TailOf:
            if (N >= nd.after) return tail_base().tail_sup_bound(N);
            bound = std::max(Rational(1, s.ratio(nd.after)), tail_base().tail_sup_bound(nd.after));
            break;
        default:
            if (auto c = digit_bound_after(N)) bound = Rational(*c) / (m - 1);
        }
        return std::min(bound, half);
    }

    /// S_N with partial sum S_N / u_N (Horner over the digits c_0..c_N).
    Int prefix_numerator(std::size_t N) const {
        Int acc = digit(0);
        for (std::size_t n = 1; n <= N; ++n) acc = acc * seq().ratio(n) + digit(n);
        return acc;
    }

    std::string describe() const {
        const Node& nd = *node_;
        auto join = [](const std::vector<Int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
            return s;
        };
        std::string lead = nd.leading == 0 ? "" : "lead:" + nd.leading.get_str() + ";";
        switch (nd.kind) {
        case Kind::Finite: return lead + "digits:list:" + join(nd.list);
        case Kind::Periodic: return lead + "digits:periodic:" + join(nd.list) + "|" + join(nd.cycle);
        case Kind::Constant: return "digits:const:" + nd.value.c.get_str();
        case Kind::FloorFraction: return "digits:floorfrac:" + to_string(nd.value.r);
        case Kind::Support: return "digits:support:" + nd.set.describe() + ":" + nd.value.describe();
        case Kind::AlternatingXS: return nd.xs.describe();
        case Kind::RationalDigits: return "greedy:" + nd.point->str();
        case Kind::TailOf: return "tail(" + tail_base().describe() + "," + std::to_string(nd.after) + ")";
        }
        return "?";
    }

    std::string tag() const {
        switch (node_->kind) {
        case Kind::Finite: return "finite";
        case Kind::Periodic: return "periodic";
        case Kind::Constant: return "constant";
        case Kind::FloorFraction: return "floorfrac";
        case Kind::Support: return "support";
        case Kind::AlternatingXS: return "xs";
        case Kind::RationalDigits: return "prefix-unknown-tail";
        case Kind::TailOf: return "tail";
        }
        return "?";
    }

private:
    struct Memo {
        std::mutex mu;
        std::vector<Int> rem;  // r_n = u_n a mod b
    };

    struct Node {
        Node(Kind k, ASeq s) : kind(k), seq(std::move(s)) {}
        Kind kind;
        ASeq seq;
        Int leading = 0;
        std::vector<Int> list, cycle;
        SupportValue value;
        IndexSet set;
        XSDescriptor xs;
        std::optional<CirclePoint> point;
        std::shared_ptr<Memo> memo;
        std::shared_ptr<const Node> base;
        std::size_t after = 0;
    };

    explicit CanonicalRep(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(Kind k, const ASeq& seq) { return std::make_shared<Node>(k, seq); }

    static Int ceil_inverse(const Rational& r) {
        Int q = floor_div(r.get_den(), r.get_num());
        return q * r.get_num() == r.get_den() ? q : Int(q + 1);
    }

    // True when pred(q_n) provably holds for infinitely many n.
    template <class Pred>
    static bool infinitely_often_below(const ASeq& seq, Pred pred) {
        const auto& b = seq.behavior();
        if (b.kind == RatioBehavior::Kind::Divergent) return true;
        if (b.divergent_part && b.divergent_part->infinite() == Tri::Yes) return true;
        if (b.limsup && b.attaining && b.attaining->infinite() == Tri::Yes) return pred(*b.limsup);
        return false;
    }

    // {n : q_n >= t}, from the exact ratio profile or for divergent sequences from a cutoff.
    std::optional<IndexSet> positions_at_least(const Int& t) const {
        const ASeq& s = node_->seq;
        if (auto p = s.rule().profile()) {
            std::set<std::size_t> head;
            for (std::size_t n = 1; n <= p->pre; ++n)
                if (p->at(n) >= t) head.insert(n);
            std::vector<std::size_t> cls;
            for (std::size_t j = 0; j < p->cycle.size(); ++j)
                if (p->cycle[j] >= t) cls.push_back((j + 1) % p->cycle.size());
            return unite(IndexSet::finite(head), shift(IndexSet::residues(p->cycle.size(), cls), p->pre));
        }
        if (s.behavior().kind == RatioBehavior::Kind::Divergent && s.rule().kind() == RatioRule::Kind::Affine) {
            std::set<std::size_t> head;
            std::size_t n = 1;
            for (; s.rule().at(n) < t; ++n) head.insert(n);
            return complement(IndexSet::finite(head));
        }
        return std::nullopt;
    }

    bool xs_nonzero(std::size_t n) const {
        const XSDescriptor& d = node_->xs;
        std::size_t c = d.count_below(n);
        return c % 2 == 1 || (!d.infinite() && d.prefix.size() % 2 == 1 && n == d.prefix.back());
    }

    Int raw_digit(std::size_t n, const Int& q) const {
        const Node& nd = *node_;
        if (n == 0) return nd.leading;
        switch (nd.kind) {
        case Kind::Finite: return n <= nd.list.size() ? nd.list[n - 1] : Int(0);
        case Kind::Periodic:
            return n <= nd.list.size() ? nd.list[n - 1] : nd.cycle[(n - nd.list.size() - 1) % nd.cycle.size()];
        case Kind::Constant: return nd.value.c;
        case Kind::FloorFraction: return nd.value.at(q);
        case Kind::Support: return nd.set.contains(n) ? nd.value.at(q) : Int(0);
        case Kind::AlternatingXS: {
            const XSDescriptor& d = nd.xs;
            std::size_t c = d.count_below(n);
            if (c % 2 == 1) return q - 1;
            if (!d.infinite() && d.prefix.size() % 2 == 1 && n == d.prefix.back()) return 1;
            return 0;
        }
        case Kind::RationalDigits: {
            std::lock_guard lock(nd.memo->mu);
            auto& rem = nd.memo->rem;
            const Int b = nd.point->den();
            while (rem.size() < n) {
                Int t = nd.seq.ratio(rem.size()) * rem.back();
                rem.push_back(mod(t, b));
            }
            return floor_div(Int(q * rem[n - 1]), b);
        }
        case Kind::TailOf: return n <= nd.after ? Int(0) : CanonicalRep(nd.base).raw_digit(n, q);
        }
        return 0;
    }

    // Bound from the alternating-block estimates: each ||u_{n_k - 1} x_S|| is at most
    // 1/q - (1 - 2^-d_{k+1}) / Q^{d_k + 1} and dominates the norms up to n_{k+1} - 1.
    Rational xs_sup_bound() const {
        const XSDescriptor& d = node_->xs;
        const auto& b = node_->seq.behavior();
        if (!d.infinite()) return Rational(1, 2);
        Rational inv_q(1, *b.limsup);
        if (d.tail == XSDescriptor::Tail::DoublingGaps || !b.sup) return inv_q;
        std::size_t dmin = d.gap, dmax = d.gap;
        for (std::size_t i = 1; i < d.prefix.size(); ++i) {
            dmin = std::min(dmin, d.prefix[i] - d.prefix[i - 1]);
            dmax = std::max(dmax, d.prefix[i] - d.prefix[i - 1]);
        }
        Rational drop = Rational(1) - Rational(1, pow_ui(Int(2), dmin));
        return inv_q - drop / Rational(pow_ui(*b.sup, dmax + 1));
    }

    void check_prefix(std::size_t m) const {
        (void)digit(0);
        auto p = node_->seq.rule().profile();
        if (!p) {
            for (std::size_t n = 1; n <= m; ++n) (void)digit(n);
            return;
        }
        for (std::size_t n = 1; n <= m; ++n) check_digit(n, p->at(n));
    }

    // Digit check against a known ratio, without the index cap of ASeq::ratio.
    void check_digit(std::size_t n, const Int& q) const {
        Int c = raw_digit(n, q);
        if (c < 0 || c >= q)
            throw DigitConstraintError("c_" + std::to_string(n) + " = " + c.get_str() + " violates 0 <= c < q = " +
                                       q.get_str());
    }

    void check_periodic() const {
        const Node& nd = *node_;
        const ASeq& s = nd.seq;
        check_prefix(nd.list.size());
        std::size_t pre = nd.list.size(), len = nd.cycle.size();
        Int cmax = *std::max_element(nd.cycle.begin(), nd.cycle.end());
        Int cmin = *std::min_element(nd.cycle.begin(), nd.cycle.end());
        Int floor_q = s.rule().floor_after(pre);
        if (cmax >= floor_q) {
            // Validity must then be checked against the exact ratios.
            auto p = s.rule().profile();
            if (!p) throw DigitConstraintError("cannot certify periodic digits below every ratio");
            std::size_t start = std::max(pre, p->pre), span = std::lcm(len, p->cycle.size());
            for (std::size_t n = pre + 1; n <= start + span; ++n) check_digit(n, p->at(n));
        }
        if (cmin + 2 <= floor_q) return;
        if (auto p = s.rule().profile()) {
            std::size_t start = std::max(pre, p->pre), span = std::lcm(len, p->cycle.size());
            for (std::size_t n = start + 1; n <= start + span; ++n)
                if (raw_digit(n, p->at(n)) < p->at(n) - 1) return;
            throw DigitConstraintError("periodic digits equal q_n - 1 from some point on");
        }
        if (infinitely_often_below(s, [&](const Int& q) { return cmax < q - 1; })) return;
        throw DigitConstraintError("cannot prove c_n < q_n - 1 infinitely often for periodic digits");
    }

    std::shared_ptr<const Node> node_;
};

/// Greedy (floor-difference) canonical representation of a rational point.
inline CanonicalRep to_canonical(const CirclePoint& x, const ASeq& seq) {
    if (x.is_zero()) return CanonicalRep::finite(seq, {});
    const Int b = x.den();
    const Int base_num = seq.seed() * x.num();
    Int leading = floor_div(base_num, b);
    Int r0 = mod(base_num, b);
    const Caps& caps = seq.caps();

    if (auto prof = seq.rule().profile()) {
        // States (r_n, phase of n); Brent's algorithm finds tail length mu and cycle length lambda.
        ModPeriod mp{prof->pre, prof->cycle.size()};
        struct State {
            Int r;
            std::size_t phase;
            bool operator==(const State& o) const { return phase == o.phase && r == o.r; }
        };
        auto step = [&](const State& s) {
            std::size_t n = s.phase + 1;
            std::size_t ph = mp.phase(n);
            return State{mod(Int(prof->at(ph) * s.r), b), ph};
        };
        State start{r0, 0};
        std::size_t power = 1, lam = 1, steps = 0;
        State tortoise = start, hare = step(start);
        bool zero = r0 == 0 || hare.r == 0;
        while (!zero && !(tortoise == hare)) {
            if (++steps > caps.cycle_steps) throw ResourceLimit("digit cycle detection exceeded the cycle cap");
            if (power == lam) {
                tortoise = hare;
                power *= 2;
                lam = 0;
            }
            hare = step(hare);
            ++lam;
            if (hare.r == 0) zero = true;
        }
        std::vector<Int> digits;
        Int r = r0;
        std::size_t phase = 0;
        if (zero || r0 == 0) {
            for (std::size_t n = 1; r != 0; ++n) {
                if (n > caps.cycle_steps) throw ResourceLimit("finite expansion exceeded the cycle cap");
                phase = mp.phase(n);
                Int t = prof->at(phase) * r;
                digits.push_back(floor_div(t, b));
                r = mod(t, b);
            }
            return CanonicalRep::finite(seq, std::move(digits), leading);
        }
        State t = start, h = start;
        for (std::size_t i = 0; i < lam; ++i) h = step(h);
        std::size_t mu = 0;
        while (!(t == h)) {
            t = step(t);
            h = step(h);
            ++mu;
        }
        std::vector<Int> pre, cyc;
        for (std::size_t n = 1; n <= mu + lam; ++n) {
            phase = mp.phase(n);
            Int tt = prof->at(phase) * r;
            (n <= mu ? pre : cyc).push_back(floor_div(tt, b));
            r = mod(tt, b);
        }
        return CanonicalRep::periodic(seq, std::move(pre), std::move(cyc), leading);
    }

    // No exact ratio profile: the expansion is finite exactly when b | u_m for some m.
    bool reachable = true;
    for (auto& [p, e] : factorize(b)) {
        auto o = p_order(seq, p);
        if (!(o.exact && o.at_least(e))) {
            reachable = false;
            break;
        }
    }
    std::size_t limit = reachable ? seq.max_computable_index() : std::min(caps.horizon, seq.max_computable_index());
    std::vector<Int> digits;
    Int r = r0;
    for (std::size_t n = 1; n <= limit && r != 0; ++n) {
        Int t = seq.ratio(n) * r;
        digits.push_back(floor_div(t, b));
        r = mod(t, b);
    }
    if (r == 0) return CanonicalRep::finite(seq, std::move(digits), leading);
    if (reachable) throw ResourceLimit("finite expansion of " + x.str() + " lies beyond the index cap");
    return CanonicalRep::rational_digits(seq, x);
}

/// Partial sum sum_{n<=N} c_n/u_n and the tail enclosure [0, 1/u_N) (stored closed, upper_open).
struct PrefixEval {
    Rational partial;
    Interval tail;
};

inline PrefixEval eval_prefix(const CanonicalRep& rep, std::size_t N) {
    const Int& uN = rep.seq().term(N);
    PrefixEval out;
    out.partial = make_rational(rep.prefix_numerator(N), uN);
    out.tail = {0, Rational(1, uN), true};
    return out;
}

/// Exact value of a representation with provably finite support.
inline std::optional<CirclePoint> exact_value(const CanonicalRep& rep) {
    if (auto last = rep.last_support()) return CirclePoint(eval_prefix(rep, *last).partial);
    if (rep.kind() == CanonicalRep::Kind::RationalDigits) return rep.source();
    if (rep.kind() != CanonicalRep::Kind::Periodic) return std::nullopt;
    auto prof = rep.seq().rule().profile();
    if (!prof) return std::nullopt;
    // Past s the pairs (c_n, q_n) repeat with period L: u_s * tail = T R / (R - 1).
    const ASeq& seq = rep.seq();
    std::size_t s = std::max(rep.list().size(), prof->pre);
    std::size_t L = std::lcm(rep.cycle().size(), prof->cycle.size());
    Rational T = 0;
    Int R = 1;
    for (std::size_t n = s + 1; n <= s + L; ++n) {
        R *= prof->at(n);
        T += make_rational(rep.digit(n), R);
    }
    Rational w = T * Rational(R) / Rational(R - 1);
    return CirclePoint(eval_prefix(rep, s).partial + w / Rational(seq.term(s)));
}

/// Enclosures of ||u_n x|| for 0 <= n <= N from one guarded prefix: with P = u_M/u_n,
/// u_n x lies on the arc [(S_M mod P)/P, (S_M mod P + 1)/P).
class OrbitEnclosure {
public:
    OrbitEnclosure(const CanonicalRep& rep, std::size_t N, std::size_t guard_bits = 64) : rep_(rep), N_(N) {
        const ASeq& s = rep.seq();
        std::size_t cap = s.max_computable_index();
        if (N > cap) throw ResourceLimit("horizon " + std::to_string(N) + " exceeds computable index " + std::to_string(cap));
        auto last = rep.last_support();
        if (last && *last <= cap) {
            M_ = std::max(N, *last);
            exact_ = true;
        } else {
            M_ = N;
            const Int& uN = s.term(N);
            while (M_ < cap && bit_length(s.term(M_)) < bit_length(uN) + guard_bits) ++M_;
        }
        S_ = rep.prefix_numerator(M_);
    }

    std::size_t guard_index() const { return M_; }
    bool exact() const { return exact_; }

    /// Interval containing ||u_n x|| (n <= N).
    Interval norm_at(std::size_t n) const {
        const ASeq& s = rep_.seq();
        Int P = s.ratio_product(n, M_);
        Rational start = make_rational(mod(S_, P), P);
        if (exact_) return Interval::point(circle_norm(start));
        return norm_range(start, Rational(1, P));
    }

    /// Interval containing ||x|| itself.
    Interval norm_of_point() const {
        const Int& uM = rep_.seq().term(M_);
        Rational start = make_rational(mod(S_, uM), uM);
        if (exact_) return Interval::point(circle_norm(start));
        return norm_range(start, Rational(1, uM));
    }

private:
    CanonicalRep rep_;
    std::size_t N_ = 0, M_ = 0;
    bool exact_ = false;
    Int S_;
};

/// Classification of supp_u(x) against the ratio metadata; never guessed.
inline SupportClass support_class(const CanonicalRep& rep) {
    const ASeq& s = rep.seq();
    if (rep.last_support()) return SupportClass::Finite;
    auto ss = rep.support_set();
    Tri inf = ss ? ss->infinite() : Tri::Unknown;
    if (inf == Tri::No) return SupportClass::Finite;
    using K = CanonicalRep::Kind;
    if (!ss) {
        if (rep.kind() == K::AlternatingXS && rep.xs().infinite()) inf = Tri::Yes;
        if (rep.kind() == K::FloorFraction && s.behavior().kind == RatioBehavior::Kind::Divergent) inf = Tri::Yes;
    }
    if (inf != Tri::Yes) return SupportClass::Unknown;
    const auto& b = s.behavior();
    switch (b.kind) {
    case RatioBehavior::Kind::Bounded: return SupportClass::UBounded;
    case RatioBehavior::Kind::Divergent: return SupportClass::UDivergent;
    default: break;
    }
    if (!ss || !b.divergent_part) return SupportClass::Unknown;
    Tri outside = subtract(*ss, *b.divergent_part).infinite();
    if (outside == Tri::No) return SupportClass::UDivergent;
    Tri inside = intersect(*ss, *b.divergent_part).infinite();
    if (inside == Tri::No) return SupportClass::UBounded;
    if (outside == Tri::Yes && inside == Tri::Yes) return SupportClass::Mixed;
    return SupportClass::Unknown;
}

inline SupportClass support_class(const CanonicalRep& rep, const ASeq& seq) {
    if (!(rep.seq() == seq)) throw DomainError("representation belongs to another sequence");
    return support_class(rep);
}

}  // namespace charsub
