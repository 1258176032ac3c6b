#pragma once

// Classification of t_u(T): boundedness equivalences, cardinality, torsion structure,
// enumeration of the countable case and the dense torsion approximation.

#include <charsub/aseq.hpp>
#include <charsub/circle.hpp>
#include <charsub/error.hpp>
#include <charsub/membership.hpp>
#include <charsub/metric.hpp>
#include <charsub/numeric.hpp>

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace charsub {

/// What is known about n_p(u) for primes p above the explicit bound.
enum class BeyondBound { AllZero, AllInfinite, Unknown };

inline const char* to_string(BeyondBound b) {
    switch (b) {
    case BeyondBound::AllZero: return "all-zero";
    case BeyondBound::AllInfinite: return "all-infinite";
    default: return "unknown";
    }
}

/// An integer sequence that need not be an a-sequence, with declared valuation data.
struct GeneralSequence {
    std::string name;
    std::function<PAdicOrder(const Int&)> order;
    BeyondBound beyond = BeyondBound::Unknown;
    std::function<Int(std::size_t)> term;
};

/// u_n = the (n+1)-th prime. Every prime divides exactly one term, so n_p = 0.
inline GeneralSequence primes_sequence() {
    GeneralSequence g;
    g.name = "primes";
    g.order = [](const Int& p) {
        PAdicOrder o;
        o.value = 0;
        o.exact = true;
        std::size_t idx = 0;
        Int q = 2;
        while (q < p) {
            mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
            ++idx;
        }
        o.stable_from = idx + 1;
        return o;
    };
    g.beyond = BeyondBound::AllZero;
    g.term = [](std::size_t n) {
        Int q = 2;
        for (std::size_t i = 0; i < n; ++i) mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
        return q;
    };
    return g;
}

struct TorsionEntry {
    Int p;
    PAdicOrder order;
};

/// t(t_u(T)) = direct sum over p of Z(p^{n_p(u)}).
struct TorsionStructure {
    std::vector<TorsionEntry> entries;  // every prime <= bound, plus larger primes with n_p != 0
    Int bound;
    BeyondBound beyond = BeyondBound::Unknown;

    bool exact() const {
        for (auto& e : entries)
            if (!e.order.exact) return false;
        return beyond != BeyondBound::Unknown;
    }

    std::string render() const {
        bool all_inf = beyond == BeyondBound::AllInfinite;
        std::vector<std::string> parts;
        for (auto& e : entries) {
            if (!e.order.infinite) all_inf = false;
            if (!e.order.infinite && e.order.value == 0 && e.order.exact) continue;
            std::string exp = e.order.infinite ? "∞" : (e.order.exact ? "" : ">=") + std::to_string(e.order.value);
            parts.push_back("Z(" + e.p.get_str() + "^" + exp + ")");
        }
        if (all_inf) return "Q/Z";
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ⊕ " : "") + parts[i];
        if (beyond == BeyondBound::AllInfinite)
            s += (s.empty() ? "" : " ⊕ ") + std::string("Z(p^∞) for every prime p > ") + bound.get_str();
        if (beyond == BeyondBound::Unknown)
            s += (s.empty() ? "" : " ⊕ ") + std::string("undetermined for primes p > ") + bound.get_str();
        return s.empty() ? "0" : s;
    }
};

namespace detail {

struct PrimeSummary {
    std::set<Int> primes;  // AllZero: the only primes that can have n_p > 0
    BeyondBound beyond = BeyondBound::Unknown;
    Int threshold = 0;     // AllInfinite holds for primes above this
};

inline void add_primes(std::set<Int>& out, const Int& n) {
    for (auto& [p, e] : factorize(n)) out.insert(p);
}

inline PrimeSummary prime_summary(const RatioRule& rule) {
    using K = RatioRule::Kind;
    PrimeSummary s;
    switch (rule.kind()) {
    case K::Constant: add_primes(s.primes, rule.constant_value()); s.beyond = BeyondBound::AllZero; break;
    case K::DoubleExp: add_primes(s.primes, rule.base_value()); s.beyond = BeyondBound::AllZero; break;
    case K::Periodic:
        for (auto& r : rule.list()) add_primes(s.primes, r);
        s.beyond = BeyondBound::AllZero;
        break;
    case K::Affine:
        // p not dividing a divides a*n + b for one residue class of n.
        s.beyond = BeyondBound::AllInfinite;
        s.threshold = rule.slope();
        break;
    case K::PrefixThen:
        s = prime_summary(rule.child());
        if (s.beyond == BeyondBound::AllZero)
            for (auto& r : rule.list()) add_primes(s.primes, r);
        break;
    case K::Override: {
        PrimeSummary b = prime_summary(rule.child());
        if (b.beyond == BeyondBound::AllZero) {
            s = b;
            add_primes(s.primes, rule.override_value());
        } else if (b.beyond == BeyondBound::AllInfinite && rule.override_set().infinite() == Tri::No) {
            s = b;
        }
        break;
    }
    }
    return s;
}

inline std::vector<Int> primes_up_to(const Int& bound) {
    std::vector<Int> out;
    for (Int p = 2; p <= bound; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) out.push_back(p);
    return out;
}

}  // namespace detail

inline TorsionStructure torsion_structure(const ASeq& seq, const Int& bound = 50) {
    TorsionStructure t;
    detail::PrimeSummary s = detail::prime_summary(seq.rule());
    if (s.beyond == BeyondBound::AllZero) detail::add_primes(s.primes, seq.seed());
    t.bound = bound;
    if (s.beyond == BeyondBound::AllInfinite && s.threshold > bound) t.bound = s.threshold;
    t.beyond = s.beyond;
    std::set<Int> primes;
    for (auto& p : detail::primes_up_to(t.bound)) primes.insert(p);
    if (s.beyond == BeyondBound::AllZero)
        for (auto& p : s.primes) primes.insert(p);
    for (auto& p : primes) {
        PAdicOrder o = p_order(seq, p);
        if (p > t.bound && !o.infinite && o.value == 0 && o.exact) continue;
        t.entries.push_back({p, o});
    }
    return t;
}

inline TorsionStructure torsion_structure(const GeneralSequence& g, const Int& bound = 50) {
    TorsionStructure t;
    t.bound = bound;
    t.beyond = g.beyond;
    for (auto& p : detail::primes_up_to(bound)) t.entries.push_back({p, g.order(p)});
    return t;
}

struct SubgroupReport {
    std::string sequence;
    RatioSummary ratios;
    Tri ratios_bounded = Tri::Unknown;
    Tri countable = Tri::Unknown;
    Tri subset_of_q_mod_z = Tri::Unknown;
    Tri f_sigma = Tri::Unknown;
    Tri tau_star_open = Tri::Unknown;
    Tri tau_open = Tri::Unknown;
    std::string cardinality = "unknown";
    Tri tau_discrete = Tri::Unknown;
    Tri measure_zero = Tri::Yes;
    TorsionStructure torsion;
    Tri torsion_dense = Tri::Yes;
    std::vector<std::pair<std::string, std::string>> provenance;
};

inline SubgroupReport report(const ASeq& seq) {
    SubgroupReport r;
    r.sequence = seq.describe();
    r.ratios = classify_ratios(seq);
    Tri b = r.ratios.bounded;
    r.ratios_bounded = r.countable = r.subset_of_q_mod_z = r.f_sigma = r.tau_star_open = r.tau_open = b;
    r.tau_discrete = b;
    r.cardinality = b == Tri::Yes ? "aleph0" : b == Tri::No ? "continuum" : "unknown";
    r.torsion = torsion_structure(seq);

    auto note = [&](const char* field, std::string text) { r.provenance.emplace_back(field, std::move(text)); };
    note("ratios_bounded", "declared ratio metadata of the sequence rule");
    const char* chain = "equivalent to bounded ratios for a-sequences (bounded ratios, countable, inside Q/Z, "
                        "F_sigma, open in the F_sigma-test topology, open in the Polish topology)";
    for (const char* f : {"countable", "subset_of_Q_mod_Z", "f_sigma", "tau_star_open", "tau_open"}) note(f, chain);
    if (b == Tri::Yes)
        note("cardinality", "bounded ratios force finite support, so every element is k/u_m");
    else if (r.ratios.divergent == Tri::Yes)
        note("cardinality", "ratios diverging to infinity give continuum many elements");
    else if (b == Tri::No)
        note("cardinality", "unbounded ratios make the subgroup uncountable; as a Polishable subgroup it has size continuum");
    else
        note("cardinality", "ratio metadata undetermined");
    note("tau_discrete", "the Polish topology is discrete exactly when the subgroup is countable");
    note("measure_zero", "stored fact: characterized subgroups of T by a-sequences are Haar null (not computed)");
    note("torsion", "n_p(u) = liminf v_p(u_n) from the p-adic orders of the ratio rule");
    note("torsion_dense", "finite truncations of any element approximate it in rho_u");
    return r;
}

/// All k/u_m, the elements of t_u(T) with denominator dividing u_m (bounded ratios only).
inline std::vector<CirclePoint> enumerate_countable(const ASeq& seq, std::size_t m) {
    if (classify_ratios(seq).bounded != Tri::Yes)
        throw NotCountable("t_u(T) is countable only for bounded ratios; " + seq.describe() + " is not bounded");
    const Int& U = seq.term(m);
    if (U > Int(static_cast<unsigned long>(seq.caps().max_grid)))
        throw ResourceLimit("u_" + std::to_string(m) + " = " + U.get_str() + " exceeds the grid cap");
    std::vector<CirclePoint> out;
    out.reserve(U.get_ui());
    for (unsigned long k = 0; k < U.get_ui(); ++k) out.emplace_back(Int(k), U);
    return out;
}

struct ApproxResult {
    CirclePoint xprime;
    std::size_t n_star = 0;
    Interval certificate;
    Interval independent;
    bool confirmed = false;
    std::size_t independent_horizon = 0;
};

/// A finite-support x' with rho_u(x - x', 0) <= eps for a member x with u-divergent data.
/// n* is the first index of the divergent part with q_k > 2/eps on it from n* on and
/// ||u_n x|| < eps/2 for n >= n*; then rho_u(x - x', 0) <= max(1/q_{n*}, eps/2).
inline ApproxResult approx_dense(const CanonicalRep& rep, const Rational& eps) {
    if (eps <= 0) throw DomainError("eps must be positive");
    Verdict v = member_stream(rep);
    if (v.decision != Decision::In) throw DomainError("approximation needs a certified member of t_u(T)");
    ApproxResult out;
    if (auto last = rep.last_support()) {
        out.xprime = *exact_value(rep);
        out.n_star = *last;
        out.certificate = out.independent = Interval::point(0);
        out.confirmed = true;
        return out;
    }
    const ASeq& seq = rep.seq();
    const auto& b = seq.behavior();
    if (!b.divergent_part || !b.divergent_rule)
        throw CannotCertify("the sequence declares no divergent ratio subsequence");
    Rational half = eps / 2, need = 2 / eps;
    std::size_t limit = std::min(seq.caps().horizon, seq.max_computable_index());
    for (std::size_t n = 1; n <= limit; ++n) {
        if (!b.divergent_part->contains(n)) continue;
        if (Rational(b.divergent_rule->floor_after(n - 1)) <= need) continue;
        Rational tail = rep.tail_sup_bound(n);
        if (tail >= half) continue;
        out.n_star = n;
        out.xprime = CirclePoint(eval_prefix(rep, n).partial);
        out.certificate = {0, std::max(Rational(1, seq.ratio(n)), tail), false};
        CanonicalRep rest = CanonicalRep::tail_of(rep, n);
        std::size_t check = std::min(2 * n, seq.max_computable_index() - 1);
        RhoInterval ri = rho_interval(rest, check);
        out.independent = ri.bounds;
        out.independent_horizon = check;
        out.confirmed = out.certificate.hi <= eps && ri.bounds.hi <= eps;
        return out;
    }
    throw CannotCertify("no index up to " + std::to_string(limit) + " satisfies both approximation conditions");
}

}  // namespace charsub
