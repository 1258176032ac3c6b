#pragma once

// Arithmetic sequences u_0 | u_1 | u_2 | ... described by a seed u_0 and a ratio rule
// n -> q_n = u_n / u_{n-1} (n >= 1) drawn from a closed catalog.  Each catalog rule
// carries enough structure that limsup/sup of the ratios, the set S_u* of indices
// attaining limsup, and the p-adic orders n_p(u) = liminf v_p(u_n) are decided exactly
// from the description.  A finite prefix scan never upgrades an answer to exact.

#include <charsub/caps.hpp>
#include <charsub/error.hpp>
#include <charsub/index_set.hpp>
#include <charsub/numeric.hpp>

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace charsub {

/// Eventually periodic description: for n > pre, value(n) = cycle[(n - pre - 1) % size].
struct RatioProfile {
    std::size_t pre = 0;
    std::vector<Int> prefix;  // values at 1..pre
    std::vector<Int> cycle;

    const Int& at(std::size_t n) const {
        return n <= pre ? prefix[n - 1] : cycle[(n - pre - 1) % cycle.size()];
    }
};

/// Eventual period of n -> q_n mod b. `phase` folds an index onto the finite state space.
struct ModPeriod {
    std::size_t pre = 0;
    std::size_t period = 1;

    std::size_t phase(std::size_t n) const { return n <= pre ? n : pre + 1 + (n - pre - 1) % period; }
};

class RatioRule {
public:
    enum class Kind { Constant, Affine, Periodic, DoubleExp, PrefixThen, Override };

    static RatioRule constant(const Int& q) {
        if (q < 2) throw DomainError("constant ratio must be >= 2");
        auto n = make(Kind::Constant);
        n->a = q;
        return RatioRule(std::move(n));
    }

    /// q_n = a*n + b.
    static RatioRule affine(const Int& a, const Int& b) {
        if (a < 0) throw DomainError("affine slope must be >= 0");
        if (a + b < 2) throw DomainError("affine ratio q_1 = a + b must be >= 2");
        if (a == 0) return constant(b);
        auto n = make(Kind::Affine);
        n->a = a;
        n->b = b;
        return RatioRule(std::move(n));
    }

    static RatioRule periodic(std::vector<Int> cycle) {
        if (cycle.empty()) throw DomainError("periodic ratio list is empty");
        for (auto& r : cycle)
            if (r < 2) throw DomainError("periodic ratios must be >= 2");
        if (std::all_of(cycle.begin(), cycle.end(), [&](const Int& r) { return r == cycle.front(); }))
            return constant(cycle.front());
        auto n = make(Kind::Periodic);
        n->list = std::move(cycle);
        return RatioRule(std::move(n));
    }

    /// Ratios of u_n = b^(2^n): q_n = b^(2^(n-1)).
    static RatioRule double_exp(const Int& base) {
        if (base < 2) throw DomainError("double exponential base must be >= 2");
        auto n = make(Kind::DoubleExp);
        n->a = base;
        return RatioRule(std::move(n));
    }

    /// q_1..q_m from `prefix`, then q_{m+j} = tail(j).
    static RatioRule prefix_then(std::vector<Int> prefix, const RatioRule& tail) {
        for (auto& r : prefix)
            if (r < 2) throw DomainError("prefix ratios must be >= 2");
        if (prefix.empty()) return tail;
        auto n = make(Kind::PrefixThen);
        n->list = std::move(prefix);
        n->child = tail.node_;
        return RatioRule(std::move(n));
    }

    /// q_n = value for n in `at`, base(n) otherwise.
    static RatioRule override_at(const RatioRule& base, IndexSet at, const Int& value) {
        if (value < 2) throw DomainError("override ratio must be >= 2");
        auto n = make(Kind::Override);
        n->a = value;
        n->child = base.node_;
        n->set = std::move(at);
        return RatioRule(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const Int& constant_value() const { return node_->a; }
    const Int& slope() const { return node_->a; }
    const Int& intercept() const { return node_->b; }
    const Int& base_value() const { return node_->a; }
    const Int& override_value() const { return node_->a; }
    const std::vector<Int>& list() const { return node_->list; }
    RatioRule child() const { return RatioRule(node_->child); }
    const IndexSet& override_set() const { return node_->set; }

    /// q_n for n >= 1.
    Int at(std::size_t n) const {
        if (n == 0) throw DomainError("ratio rules start at n = 1");
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Constant: return nd.a;
        case Kind::Affine: return Int(nd.a * Int(static_cast<unsigned long>(n)) + nd.b);
        case Kind::Periodic: return nd.list[(n - 1) % nd.list.size()];
        case Kind::DoubleExp: {
            if (n > 62) throw ResourceLimit("double exponential ratio index too large");
            return pow_ui(nd.a, 1ul << (n - 1));
        }
        case Kind::PrefixThen:
            return n <= nd.list.size() ? nd.list[n - 1] : child().at(n - nd.list.size());
        case Kind::Override: return nd.set.contains(n) ? nd.a : child().at(n);
        }
        return 0;
    }

    /// Upper bound on the bit length of q_n, computed without materializing it.
    std::size_t bits_hint(std::size_t n) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::DoubleExp: {
            if (n > 62) return std::size_t(-1);
            return (std::size_t{1} << (n - 1)) * bit_length(nd.a);
        }
        case Kind::PrefixThen:
            return n <= nd.list.size() ? bit_length(nd.list[n - 1]) : child().bits_hint(n - nd.list.size());
        case Kind::Override: return nd.set.contains(n) ? bit_length(nd.a) : child().bits_hint(n);
        default: return bit_length(at(n));
        }
    }

    /// q_n mod m, without materializing huge ratios.
    Int at_mod(std::size_t n, const Int& m) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::DoubleExp: {
            Int e = pow_ui(Int(2), static_cast<unsigned long>(n - 1)), r;
            mpz_powm(r.get_mpz_t(), nd.a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
            return r;
        }
        case Kind::PrefixThen:
            return n <= nd.list.size() ? mod(nd.list[n - 1], m) : child().at_mod(n - nd.list.size(), m);
        case Kind::Override: return nd.set.contains(n) ? mod(nd.a, m) : child().at_mod(n, m);
        default: return mod(at(n), m);
        }
    }

    /// A lower bound on q_k for every k > n.
    Int floor_after(std::size_t n) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Constant: return nd.a;
        case Kind::Affine: return Int(nd.a * Int(static_cast<unsigned long>(n + 1)) + nd.b);
        case Kind::Periodic: return *std::min_element(nd.list.begin(), nd.list.end());
        case Kind::DoubleExp: return at(std::min<std::size_t>(n + 1, 16));
        case Kind::PrefixThen: {
            std::size_t m = nd.list.size();
            if (n >= m) return child().floor_after(n - m);
            Int lo = child().floor_after(0);
            for (std::size_t i = n; i < m; ++i) lo = std::min(lo, nd.list[i]);
            return lo;
        }
        case Kind::Override: {
            Int base = child().floor_after(n);
            bool later = nd.set.infinite() != Tri::No ||
                         (!nd.set.elements().empty() && *nd.set.elements().rbegin() > n);
            if (nd.set.kind() != IndexSet::Kind::Finite) later = true;
            return later ? std::min(base, nd.a) : base;
        }
        }
        return 2;
    }

    /// Exact eventually periodic form of the ratios, when the rule has one.
    std::optional<RatioProfile> profile() const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Constant: return RatioProfile{0, {}, {nd.a}};
        case Kind::Periodic: return RatioProfile{0, {}, nd.list};
        case Kind::Affine:
        case Kind::DoubleExp: return std::nullopt;
        case Kind::PrefixThen: {
            auto t = child().profile();
            if (!t) return std::nullopt;
            RatioProfile p;
            p.pre = nd.list.size() + t->pre;
            p.prefix = nd.list;
            p.prefix.insert(p.prefix.end(), t->prefix.begin(), t->prefix.end());
            p.cycle = t->cycle;
            return p;
        }
        case Kind::Override: {
            auto b = child().profile();
            auto s = nd.set.periodicity();
            if (!b || !s) return std::nullopt;
            std::size_t pre = std::max(b->pre, s->start);
            std::size_t len = std::lcm(b->cycle.size(), s->modulus);
            if (len > (1u << 16)) return std::nullopt;
            RatioProfile p;
            p.pre = pre;
            for (std::size_t n = 1; n <= pre; ++n) p.prefix.push_back(at(n));
            for (std::size_t n = pre + 1; n <= pre + len; ++n) p.cycle.push_back(at(n));
            return p;
        }
        }
        return std::nullopt;
    }

    /// Eventual period of q_n mod m, when the rule has one within `max_steps`.
    std::optional<ModPeriod> mod_period(const Int& m, std::size_t max_steps) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Constant: return ModPeriod{0, 1};
        case Kind::Periodic: return ModPeriod{0, nd.list.size()};
        case Kind::Affine: {
            Int per = m / gcd(nd.a, m);
            if (per > Int(static_cast<unsigned long>(max_steps))) return std::nullopt;
            return ModPeriod{0, static_cast<std::size_t>(per.get_ui())};
        }
        case Kind::DoubleExp: {
            // y_1 = b mod m, y_{n+1} = y_n^2 mod m.
            std::map<Int, std::size_t> seen;
            Int y = mod(nd.a, m);
            for (std::size_t n = 1; n <= max_steps; ++n) {
                auto it = seen.find(y);
                if (it != seen.end()) return ModPeriod{it->second - 1, n - it->second};
                seen.emplace(y, n);
                y = mod(Int(y * y), m);
            }
            return std::nullopt;
        }
        case Kind::PrefixThen: {
            auto t = child().mod_period(m, max_steps);
            if (!t) return std::nullopt;
            return ModPeriod{t->pre + nd.list.size(), t->period};
        }
        case Kind::Override: {
            auto b = child().mod_period(m, max_steps);
            auto s = nd.set.periodicity();
            if (!b || !s) return std::nullopt;
            std::size_t per = std::lcm(b->period, s->modulus);
            if (per > max_steps) return std::nullopt;
            return ModPeriod{std::max(b->pre, s->start), per};
        }
        }
        return std::nullopt;
    }

    /// Indices n with p | q_n, when expressible as an index set.
    std::optional<IndexSet> divisible_positions(const Int& p) const {
        const Node& nd = *node_;
        switch (nd.kind) {
        case Kind::Constant:
        case Kind::DoubleExp: return mod(nd.a, p) == 0 ? IndexSet::all() : IndexSet::finite({});
        case Kind::Periodic: {
            std::vector<std::size_t> cls;
            for (std::size_t i = 0; i < nd.list.size(); ++i)
                if (mod(nd.list[i], p) == 0) cls.push_back((i + 1) % nd.list.size());
            return IndexSet::residues(nd.list.size(), cls);
        }
        case Kind::Affine: {
            if (mod(nd.a, p) == 0) return mod(nd.b, p) == 0 ? IndexSet::all() : IndexSet::finite({});
            if (!p.fits_ulong_p() || p > Int(1u << 20)) return std::nullopt;
            Int inv;
            mpz_invert(inv.get_mpz_t(), nd.a.get_mpz_t(), p.get_mpz_t());
            Int n0 = mod(Int(-nd.b * inv), p);
            return IndexSet::residues(p.get_ui(), {static_cast<std::size_t>(n0.get_ui())});
        }
        case Kind::PrefixThen: {
            auto t = child().divisible_positions(p);
            if (!t) return std::nullopt;
            std::set<std::size_t> head;
            for (std::size_t i = 0; i < nd.list.size(); ++i)
                if (mod(nd.list[i], p) == 0) head.insert(i + 1);
            return unite(IndexSet::finite(head), shift(*t, nd.list.size()));
        }
        case Kind::Override: {
            auto b = child().divisible_positions(p);
            if (!b) return std::nullopt;
            IndexSet off = subtract(*b, nd.set);
            return mod(nd.a, p) == 0 ? unite(off, nd.set) : off;
        }
        }
        return std::nullopt;
    }

    std::string describe() const {
        const Node& nd = *node_;
        auto join = [](const std::vector<Int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
            return s;
        };
        switch (nd.kind) {
        case Kind::Constant: return "constant(" + nd.a.get_str() + ")";
        case Kind::Affine: return "affine(" + nd.a.get_str() + "," + nd.b.get_str() + ")";
        case Kind::Periodic: return "periodic(" + join(nd.list) + ")";
        case Kind::DoubleExp: return "doubleexp(" + nd.a.get_str() + ")";
        case Kind::PrefixThen: return "prefix(" + join(nd.list) + ")then(" + child().describe() + ")";
        case Kind::Override:
            return "override(" + child().describe() + ";at:" + nd.set.describe() + ";val:" + nd.a.get_str() + ")";
        }
        return "?";
    }

private:
    struct Node {
        Kind kind = Kind::Constant;
        Int a, b;
        std::vector<Int> list;
        std::shared_ptr<const Node> child;
        IndexSet set;
    };

    explicit RatioRule(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    std::shared_ptr<const Node> node_;
};

/// Asymptotic behavior of the ratio sequence.
///
/// Bounded: Q_u = sup, q_u = limsup and S_u* = attaining are exact.  Divergent: q_n -> inf.
/// Mixed: whatever is known; `bounded == No` means q_u = inf without divergence.
/// `divergent_part` D (when known) is a set along which q_n -> inf with bounded ratios on
/// its complement, and `divergent_rule` agrees with q_n on D.
struct RatioBehavior {
    enum class Kind { Bounded, Divergent, Mixed };
    Kind kind = Kind::Mixed;
    Tri bounded = Tri::Unknown;
    std::optional<Int> sup;
    std::optional<Int> limsup;
    std::optional<IndexSet> attaining;
    std::optional<IndexSet> divergent_part;
    std::optional<RatioRule> divergent_rule;

    static RatioBehavior bounded_by(Int sup, Int limsup, IndexSet attaining) {
        RatioBehavior b;
        b.kind = Kind::Bounded;
        b.bounded = Tri::Yes;
        b.sup = std::move(sup);
        b.limsup = std::move(limsup);
        b.attaining = std::move(attaining);
        return b;
    }

    static RatioBehavior divergent(const RatioRule& rule) {
        RatioBehavior b;
        b.kind = Kind::Divergent;
        b.bounded = Tri::No;
        b.divergent_part = IndexSet::all();
        b.divergent_rule = rule;
        return b;
    }

    static RatioBehavior unknown() { return {}; }
};

inline const char* to_string(RatioBehavior::Kind k) {
    switch (k) {
    case RatioBehavior::Kind::Bounded: return "bounded";
    case RatioBehavior::Kind::Divergent: return "divergent";
    default: return "mixed";
    }
}

namespace detail {

inline RatioBehavior derive_override(const RatioRule& rule);

inline RatioBehavior derive_behavior(const RatioRule& rule) {
    using K = RatioRule::Kind;
    switch (rule.kind()) {
    case K::Constant:
        return RatioBehavior::bounded_by(rule.constant_value(), rule.constant_value(), IndexSet::all());
    case K::Periodic: {
        const auto& l = rule.list();
        Int top = *std::max_element(l.begin(), l.end());
        std::vector<std::size_t> cls;
        for (std::size_t i = 0; i < l.size(); ++i)
            if (l[i] == top) cls.push_back((i + 1) % l.size());
        return RatioBehavior::bounded_by(top, top, IndexSet::residues(l.size(), cls));
    }
    case K::Affine:
    case K::DoubleExp: return RatioBehavior::divergent(rule);
    case K::PrefixThen: {
        const auto& l = rule.list();
        RatioBehavior t = derive_behavior(rule.child());
        RatioBehavior out = t;
        if (t.sup) out.sup = std::max(*t.sup, *std::max_element(l.begin(), l.end()));
        if (t.attaining && t.limsup) {
            std::set<std::size_t> head;
            for (std::size_t i = 0; i < l.size(); ++i)
                if (l[i] == *t.limsup) head.insert(i + 1);
            out.attaining = unite(IndexSet::finite(head), shift(*t.attaining, l.size()));
        }
        if (t.divergent_part) out.divergent_part = shift(*t.divergent_part, l.size());
        if (t.divergent_rule) out.divergent_rule = RatioRule::prefix_then(l, *t.divergent_rule);
        return out;
    }
    case K::Override: return derive_override(rule);
    }
    return RatioBehavior::unknown();
}

inline RatioBehavior derive_override(const RatioRule& rule) {
    using K = RatioRule::Kind;
    const IndexSet& at = rule.override_set();
    const Int& v = rule.override_value();
    RatioRule base = rule.child();
    RatioBehavior bb = derive_behavior(base);
    Tri at_infinite = at.infinite();

    if (at_infinite == Tri::No) {
        RatioBehavior out = bb;
        if (bb.sup) out.sup = std::max(*bb.sup, v);
        if (bb.attaining && bb.limsup) {
            IndexSet moved = subtract(*bb.attaining, at);
            out.attaining = v == *bb.limsup ? unite(moved, at) : moved;
        }
        if (bb.divergent_part) out.divergent_part = subtract(*bb.divergent_part, at);
        return out;
    }
    if (at_infinite == Tri::Unknown) return RatioBehavior::unknown();

    IndexSet comp = complement(at);
    if (comp.infinite() != Tri::Yes) return RatioBehavior::unknown();

    if (bb.kind == RatioBehavior::Kind::Divergent) {
        RatioBehavior out;
        out.kind = RatioBehavior::Kind::Mixed;
        out.bounded = Tri::No;
        out.divergent_part = subtract(*bb.divergent_part, at);
        out.divergent_rule = bb.divergent_rule;
        return out;
    }
    if (bb.kind != RatioBehavior::Kind::Bounded) return RatioBehavior::unknown();

    std::vector<std::pair<Int, IndexSet>> classes;
    if (base.kind() == K::Constant) {
        classes.emplace_back(base.constant_value(), IndexSet::all());
    } else if (base.kind() == K::Periodic) {
        const auto& l = base.list();
        for (std::size_t i = 0; i < l.size(); ++i)
            classes.emplace_back(l[i], IndexSet::residues(l.size(), {(i + 1) % l.size()}));
    } else {
        return RatioBehavior::unknown();
    }

    Int limsup = v, sup = v;
    std::vector<std::pair<Int, IndexSet>> recurring;
    for (auto& [value, where] : classes) {
        IndexSet hit = intersect(comp, where);
        Tri inf = hit.infinite();
        if (inf == Tri::Unknown) return RatioBehavior::unknown();
        if (inf == Tri::Yes) {
            limsup = std::max(limsup, value);
            sup = std::max(sup, value);
            recurring.emplace_back(value, hit);
        } else {
            auto per = hit.periodicity();
            if (!per) return RatioBehavior::unknown();
            if (hit.next_after(0, per->start)) sup = std::max(sup, value);
        }
    }
    IndexSet attaining = v == limsup ? at : IndexSet::finite({});
    for (auto& [value, hit] : recurring)
        if (value == limsup) attaining = unite(attaining, hit);
    return RatioBehavior::bounded_by(sup, limsup, attaining);
}

}  // namespace detail

/// An arithmetic sequence: immutable description plus a thread-safe memo of its terms.
class ASeq {
public:
    ASeq(Int seed, RatioRule rule, std::string spec = {}, Caps caps = {})
        : state_(std::make_shared<State>(std::move(seed), rule, detail::derive_behavior(rule), std::move(spec), caps)) {
        validate_seed();
    }

    /// A sequence whose asymptotic metadata is declared by the caller rather than derived.
    /// The declaration is checked against a prefix now and against every generated ratio later.
    ASeq(Int seed, RatioRule rule, RatioBehavior declared, std::string spec, Caps caps)
        : state_(std::make_shared<State>(std::move(seed), rule, std::move(declared), std::move(spec), caps)) {
        validate_seed();
        for (std::size_t n = 1; n <= 64; ++n) {
            if (rule.bits_hint(n) > 4096) break;
            (void)ratio(n);
        }
        const auto& b = state_->behavior;
        if (b.attaining && b.limsup)
            for (std::size_t n = 1; n <= 64; ++n)
                if (b.attaining->contains(n) && rule.at(n) != *b.limsup)
                    throw InconsistentMetadata("declared S_u* contains " + std::to_string(n) +
                                               " but q_n != q_u");
    }

    const Int& seed() const { return state_->seed; }
    const RatioRule& rule() const { return state_->rule; }
    const RatioBehavior& behavior() const { return state_->behavior; }
    const std::string& spec() const { return state_->spec; }
    const Caps& caps() const { return state_->caps; }

    /// q_0 = u_0; q_n from the rule for n >= 1.
    Int ratio(std::size_t n) const {
        if (n == 0) return state_->seed;
        if (n > state_->caps.max_index)
            throw ResourceLimit("ratio index " + std::to_string(n) + " exceeds cap " +
                                std::to_string(state_->caps.max_index));
        if (state_->rule.bits_hint(n) > state_->caps.max_term_bits)
            throw ResourceLimit("ratio q_" + std::to_string(n) + " exceeds the term size cap");
        Int q = state_->rule.at(n);
        const auto& b = state_->behavior;
        if (b.sup && q > *b.sup)
            throw InconsistentMetadata("q_" + std::to_string(n) + " = " + q.get_str() + " exceeds Q_u = " +
                                       b.sup->get_str());
        return q;
    }

    /// u_n, memoized. The returned reference stays valid for the lifetime of the sequence.
    const Int& term(std::size_t n) const {
        std::lock_guard lock(state_->mu);
        auto& terms = state_->terms;
        if (n < terms.size()) return terms[n];
        if (n > state_->caps.max_index)
            throw ResourceLimit("term index " + std::to_string(n) + " exceeds cap " +
                                std::to_string(state_->caps.max_index));
        while (terms.size() <= n) {
            std::size_t k = terms.size();
            if (bit_length(terms.back()) + state_->rule.bits_hint(k) > state_->caps.max_term_bits)
                throw ResourceLimit("term u_" + std::to_string(k) + " exceeds the term size cap");
            terms.push_back(terms.back() * ratio(k));
        }
        return terms[n];
    }

    /// u_n mod m without materializing u_n.
    Int term_mod(std::size_t n, const Int& m) const {
        Int r = mod(state_->seed, m);
        for (std::size_t k = 1; k <= n; ++k) r = mod(Int(r * state_->rule.at_mod(k, m)), m);
        return r;
    }

    /// u_m / u_n for n <= m.
    Int ratio_product(std::size_t n, std::size_t m) const {
        Int p;
        mpz_divexact(p.get_mpz_t(), term(m).get_mpz_t(), term(n).get_mpz_t());
        return p;
    }

    /// Largest index whose term fits the caps (scans from 0).
    std::size_t max_computable_index() const {
        std::size_t bits = bit_length(state_->seed);
        for (std::size_t n = 1; n <= state_->caps.max_index; ++n) {
            std::size_t h = state_->rule.bits_hint(n);
            if (h > state_->caps.max_term_bits || bits + h > state_->caps.max_term_bits) return n - 1;
            bits += h;
        }
        return state_->caps.max_index;
    }

    std::string describe() const {
        return state_->spec.empty() ? "seed(" + state_->seed.get_str() + ")" + state_->rule.describe() : state_->spec;
    }

    friend bool operator==(const ASeq& a, const ASeq& b) { return a.state_ == b.state_; }

private:
    struct State {
        State(Int s, RatioRule r, RatioBehavior b, std::string sp, Caps c)
            : seed(std::move(s)), rule(std::move(r)), behavior(std::move(b)), spec(std::move(sp)), caps(c) {
            terms.push_back(seed);
        }
        Int seed;
        RatioRule rule;
        RatioBehavior behavior;
        std::string spec;
        Caps caps;
        std::mutex mu;
        std::deque<Int> terms;
    };

    void validate_seed() const {
        if (state_->seed < 1) throw DomainError("seed u_0 must be positive");
    }

    std::shared_ptr<State> state_;
};

inline const Int& term(const ASeq& seq, std::size_t n) { return seq.term(n); }
inline Int ratio(const ASeq& seq, std::size_t n) { return seq.ratio(n); }

/// k-th (0-based) index of S_u* = {m : q_m = q_u}.
inline std::size_t s_star(const ASeq& seq, std::size_t k) {
    const auto& b = seq.behavior();
    if (!b.limsup || !b.attaining)
        throw UnknownAsymptotics("S_u* is not determined for " + seq.describe());
    auto m = b.attaining->nth(k, seq.caps().max_index);
    if (!m) throw ResourceLimit("S_u* element " + std::to_string(k) + " lies beyond the index cap");
    if (seq.ratio(*m) != *b.limsup)
        throw InconsistentMetadata("q_" + std::to_string(*m) + " != q_u although listed in S_u*");
    return *m;
}

/// n_p(u) = liminf v_p(u_n).  For a-sequences v_p(u_n) is nondecreasing, so this is
/// v_p(u_0) + sum of v_p(q_i); `exact == false` marks a scanned lower bound.
struct PAdicOrder {
    bool infinite = false;
    unsigned long value = 0;
    bool exact = true;
    std::size_t stable_from = 0;   // exact finite: v_p(u_n) = value for all n >= stable_from
    std::size_t scanned_up_to = 0; // lower bounds: horizon of the scan

    bool at_least(unsigned long e) const { return infinite || value >= e; }

    std::string render() const {
        if (infinite) return "inf";
        return std::to_string(value);
    }
};

inline PAdicOrder p_order(const ASeq& seq, const Int& p) {
    if (!is_prime(p)) throw DomainError(p.get_str() + " is not prime");
    PAdicOrder out;
    auto positions = seq.rule().divisible_positions(p);
    if (positions) {
        Tri inf = positions->infinite();
        if (inf == Tri::Yes) {
            out.infinite = true;
            return out;
        }
        if (inf == Tri::No) {
            std::optional<std::size_t> bound = positions->upper_bound();
            if (auto per = positions->periodicity()) bound = per->start;
            if (bound && *bound <= seq.max_computable_index()) {
                std::size_t last = 0;
                for (std::size_t n = 1; n <= *bound; ++n)
                    if (positions->contains(n)) last = n;
                out.value = valuation(seq.seed(), p);
                for (std::size_t n = 1; n <= last; ++n) out.value += valuation(seq.ratio(n), p);
                out.stable_from = last;
                return out;
            }
        }
    }
    out.exact = false;
    out.value = valuation(seq.seed(), p);
    std::size_t horizon = std::min(seq.caps().horizon, seq.max_computable_index());
    for (std::size_t n = 1; n <= horizon; ++n) out.value += valuation(seq.ratio(n), p);
    out.scanned_up_to = horizon;
    return out;
}

/// Summary of the validated ratio metadata; undeclared fields stay unknown.
struct RatioSummary {
    Tri bounded = Tri::Unknown;
    Tri divergent = Tri::Unknown;
    std::optional<Int> sup;
    std::optional<Int> limsup;
};

inline RatioSummary classify_ratios(const ASeq& seq) {
    const auto& b = seq.behavior();
    RatioSummary s;
    s.bounded = b.bounded;
    s.divergent = b.kind == RatioBehavior::Kind::Divergent ? Tri::Yes
                  : b.kind == RatioBehavior::Kind::Bounded ? Tri::No
                  : (b.bounded == Tri::No && b.divergent_part && complement(*b.divergent_part).infinite() == Tri::Yes)
                      ? Tri::No
                      : Tri::Unknown;
    s.sup = b.sup;
    s.limsup = b.limsup;
    if (b.sup) {
        std::size_t horizon = std::min<std::size_t>(64, seq.max_computable_index());
        for (std::size_t n = 1; n <= horizon; ++n) (void)seq.ratio(n);
    }
    return s;
}

}  // namespace charsub
