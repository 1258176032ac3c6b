#pragma once

// Membership x in t_u(T) = {x : u_n x -> 0}: a decision for rational points from p-adic
// orders, support-based criteria for digit streams, and a certified numeric falsifier.

#include <charsub/aseq.hpp>
#include <charsub/circle.hpp>
#include <charsub/error.hpp>
#include <charsub/numeric.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace charsub {

enum class Decision { In, Out, Unknown };

inline const char* to_string(Decision d) {
    switch (d) {
    case Decision::In: return "In";
    case Decision::Out: return "Out";
    default: return "Unknown";
    }
}

/// In: b | u_m (m absent when the orders prove it beyond the scan). Out: v_p(b) > n_p(u).
struct RationalDivisibility {
    Int denominator;
    std::optional<std::size_t> m;
    std::optional<Int> prime;
    unsigned long needed = 0;
    PAdicOrder order;
};

struct BoundedSupportFinite {
    std::size_t last_index = 0;
};

/// Infinitely many nonzero digits on a support where the ratios stay bounded.
struct BoundedSupportInfinite {
    std::string support;
    std::vector<std::size_t> witnesses;
};

/// u-divergent support with lim c_n/q_n in {0, 1}; `exceptional` is the set of support
/// indices n with n - 1 outside the divergent part (empty when the ratios diverge).
struct DivergentSupportLimit {
    Rational limit;
    bool condition2 = true;
    std::string exceptional;
};

struct DivergentSupportNonNull {
    Rational limit;
    Rational limit_norm;
};

struct NumericWitness {
    std::size_t n = 0;
    Rational lower;
    Rational eps;
};

struct HorizonCertificate {
    std::size_t scanned = 0;
    std::string reason;
};

using Certificate = std::variant<RationalDivisibility, BoundedSupportFinite, BoundedSupportInfinite,
                                 DivergentSupportLimit, DivergentSupportNonNull, NumericWitness, HorizonCertificate>;

inline const char* certificate_kind(const Certificate& c) {
    static const char* names[] = {"RationalDivisibility",   "BoundedSupportFinite", "BoundedSupportInfinite",
                                  "DivergentSupportLimit",  "DivergentSupportNonNull", "NumericWitness",
                                  "Horizon"};
    return names[c.index()];
}

struct Verdict {
    Decision decision = Decision::Unknown;
    Certificate certificate = HorizonCertificate{};
    std::string basis;
    std::size_t horizon = 0;
};

inline Verdict member_rational(const CirclePoint& x, const ASeq& seq) {
    Verdict v;
    RationalDivisibility cert;
    cert.denominator = x.den();
    if (x.is_zero()) {
        cert.m = 0;
        v.decision = Decision::In;
        v.certificate = cert;
        v.basis = "zero element";
        return v;
    }
    bool unknown = false;
    std::size_t horizon = 0;
    for (auto& [p, e] : factorize(x.den())) {
        PAdicOrder o = p_order(seq, p);
        if (o.at_least(e)) continue;
        if (o.exact) {
            cert.prime = p;
            cert.needed = e;
            cert.order = o;
            v.decision = Decision::Out;
            v.certificate = cert;
            v.basis = "prime power obstruction: v_p(b) exceeds n_p(u)";
            return v;
        }
        unknown = true;
        horizon = std::max(horizon, o.scanned_up_to);
    }
    if (unknown) {
        v.certificate = HorizonCertificate{horizon, "p-adic order known only as a lower bound"};
        v.basis = "inconclusive p-adic scan";
        v.horizon = horizon;
        return v;
    }
    const Int& b = cert.denominator;
    Int r = mod(seq.seed(), b);
    std::size_t cap = seq.caps().max_index;
    for (std::size_t m = 0; m <= cap; ++m) {
        if (m) r = mod(Int(r * seq.rule().at_mod(m, b)), b);
        if (r == 0) {
            cert.m = m;
            break;
        }
    }
    v.decision = Decision::In;
    v.certificate = cert;
    v.basis = "denominator divides u_m";
    return v;
}

inline Verdict member_stream(const CanonicalRep& rep) {
    Verdict v;
    SupportClass cls = support_class(rep);
    switch (cls) {
    case SupportClass::Finite: {
        v.decision = Decision::In;
        v.certificate = BoundedSupportFinite{rep.last_support().value_or(0)};
        v.basis = "finite support";
        return v;
    }
    case SupportClass::UBounded: {
        BoundedSupportInfinite c;
        if (auto ss = rep.support_set()) {
            c.support = ss->describe();
            std::size_t n = 0;
            while (c.witnesses.size() < 8) {
                auto next = ss->next_after(n, rep.seq().caps().max_index);
                if (!next) break;
                c.witnesses.push_back(*next);
                n = *next;
            }
        } else {
            c.support = rep.describe();
            for (std::size_t n = 1; c.witnesses.size() < 8 && n <= rep.seq().max_computable_index(); ++n)
                if (rep.digit(n) != 0) c.witnesses.push_back(n);
        }
        v.decision = Decision::Out;
        v.certificate = c;
        v.basis = "u-bounded support with infinitely many nonzero digits";
        return v;
    }
    case SupportClass::UDivergent: {
        Rational L = rep.digit_ratio_limit();
        Rational nL = circle_norm(L);
        if (nL != 0) {
            v.decision = Decision::Out;
            v.certificate = DivergentSupportNonNull{L, nL};
            v.basis = "u-divergent support, c_n/q_n does not tend to 0 in T";
            return v;
        }
        if (L == 0) {
            v.decision = Decision::In;
            v.certificate = DivergentSupportLimit{L, true, "{}"};
            v.basis = "u-divergent support, c_n/q_n -> 0 in R";
            return v;
        }
        // L = 1: c_n/q_n -> 0 in T but not in R; the limit must still vanish in R along
        // every infinite I' in the support with I' - 1 u-bounded.
        const auto& b = rep.seq().behavior();
        auto ss = rep.support_set();
        if (b.kind == RatioBehavior::Kind::Divergent) {
            v.decision = Decision::In;
            v.certificate = DivergentSupportLimit{L, true, "{}"};
            v.basis = "u-divergent support, ratios diverge so no u-bounded I' - 1 exists";
            return v;
        }
        if (ss && b.divergent_part) {
            IndexSet exceptional = intersect(*ss, shift(complement(*b.divergent_part), 1));
            Tri inf = exceptional.infinite();
            if (inf != Tri::Unknown) {
                bool ok = inf == Tri::No;
                v.decision = ok ? Decision::In : Decision::Out;
                v.certificate = DivergentSupportLimit{L, ok, exceptional.describe()};
                v.basis = ok ? "u-divergent support, limit conditions in T and along I' hold"
                             : "u-divergent support, c_n/q_n -> 1 along an infinite I' with I' - 1 u-bounded";
                return v;
            }
        }
        v.certificate = HorizonCertificate{0, "condition on I' - 1 not decidable for this descriptor"};
        v.basis = "undecided";
        return v;
    }
    default: break;
    }
    v.certificate = HorizonCertificate{0, std::string("support class ") + to_string(cls)};
    v.basis = "undecided";
    return v;
}

inline Verdict member_stream(const CanonicalRep& rep, const ASeq& seq) {
    if (!(rep.seq() == seq)) throw DomainError("representation belongs to another sequence");
    return member_stream(rep);
}

/// ||u_n x|| <= 1/M, exactly.
inline bool s_nm(const CirclePoint& x, const ASeq& seq, std::size_t n, const Int& M) {
    if (M < 1) throw DomainError("M must be >= 1");
    if (x.is_zero()) return true;
    return x.mul_int(seq.term_mod(n, x.den())).norm() <= Rational(1, M);
}

struct FalsifyResult {
    std::optional<NumericWitness> witness;
    bool inconclusive = false;
    std::size_t start = 1;
    std::size_t horizon = 0;
};

/// Searches start <= n <= N for a certified ||u_n x|| >= eps; the smallest such n wins.
inline FalsifyResult falsify(const CanonicalRep& rep, std::size_t N, const Rational& eps, std::size_t start = 1) {
    if (eps <= 0) throw DomainError("eps must be positive");
    FalsifyResult out;
    out.start = start;
    out.horizon = std::min(N, rep.seq().max_computable_index());
    if (start > out.horizon) return out;
    if (auto x = exact_value(rep)) {
        // Rational point: exact orbit norms from u_n mod b.
        const ASeq& seq = rep.seq();
        const Int b = x->den();
        Int r = seq.term_mod(start, b);
        for (std::size_t n = start; n <= out.horizon; ++n) {
            if (n > start) r = mod(Int(r * seq.rule().at_mod(n, b)), b);
            Rational v = x->mul_int(r).norm();
            if (v >= eps) {
                out.witness = NumericWitness{n, v, eps};
                return out;
            }
        }
        return out;
    }
    OrbitEnclosure oe(rep, out.horizon);
    for (std::size_t n = start; n <= out.horizon; ++n) {
        Interval iv = oe.norm_at(n);
        if (iv.lo >= eps) {
            out.witness = NumericWitness{n, iv.lo, eps};
            return out;
        }
        if (iv.hi >= eps) out.inconclusive = true;
    }
    return out;
}

inline FalsifyResult falsify(const CanonicalRep& rep, const ASeq& seq, std::size_t N, const Rational& eps,
                             std::size_t start = 1) {
    if (!(rep.seq() == seq)) throw DomainError("representation belongs to another sequence");
    return falsify(rep, N, eps, start);
}

/// For an In verdict: an index from which ||u_n x|| < eps is guaranteed, or nullopt if
/// none is found up to the horizon.
inline std::optional<std::size_t> convergence_index(const Verdict& v, const CanonicalRep& rep, const Rational& eps) {
    if (v.decision != Decision::In) return std::nullopt;
    if (auto* rd = std::get_if<RationalDivisibility>(&v.certificate); rd && rd->m) return std::max<std::size_t>(*rd->m, 1);
    if (auto last = rep.last_support()) return std::max<std::size_t>(*last, 1);
    std::size_t limit = std::min(rep.seq().caps().horizon, rep.seq().max_computable_index());
    for (std::size_t n = 1; n <= limit; ++n)
        if (rep.tail_sup_bound(n) < eps) return n;
    return std::nullopt;
}

/// Replays a certificate against the point it was issued for.
inline bool check_certificate(const Verdict& v, const CirclePoint& x, const ASeq& seq) {
    const auto* c = std::get_if<RationalDivisibility>(&v.certificate);
    if (!c || c->denominator != x.den()) return false;
    if (v.decision == Decision::In) {
        if (x.is_zero()) return true;
        if (c->m) return seq.term_mod(*c->m, x.den()) == 0;
        for (auto& [p, e] : factorize(x.den()))
            if (!p_order(seq, p).at_least(e)) return false;
        return true;
    }
    if (v.decision == Decision::Out) {
        if (!c->prime || !is_prime(*c->prime)) return false;
        unsigned long e = valuation(x.den(), *c->prime);
        PAdicOrder o = p_order(seq, *c->prime);
        return e == c->needed && o.exact && !o.at_least(e);
    }
    return false;
}

inline bool check_certificate(const Verdict& v, const CanonicalRep& rep) {
    if (auto* w = std::get_if<NumericWitness>(&v.certificate)) {
        if (v.decision != Decision::Out) return false;
        OrbitEnclosure oe(rep, w->n);
        Interval iv = oe.norm_at(w->n);
        return iv.lo >= w->lower && w->lower >= w->eps && w->eps > 0;
    }
    if (std::holds_alternative<HorizonCertificate>(v.certificate)) return v.decision == Decision::Unknown;
    Verdict again = member_stream(rep);
    if (again.decision != v.decision || again.certificate.index() != v.certificate.index()) return false;
    if (auto* f = std::get_if<BoundedSupportFinite>(&v.certificate)) {
        auto last = rep.last_support();
        if (!last || *last != f->last_index) return false;
        for (std::size_t n = f->last_index + 1; n <= f->last_index + 8 && n <= rep.seq().max_computable_index(); ++n)
            if (rep.digit(n) != 0) return false;
        return true;
    }
    if (auto* b = std::get_if<BoundedSupportInfinite>(&v.certificate)) {
        for (auto n : b->witnesses)
            if (rep.digit(n) == 0) return false;
        return rep.seq().behavior().bounded == Tri::Yes || support_class(rep) == SupportClass::UBounded;
    }
    if (auto* d = std::get_if<DivergentSupportLimit>(&v.certificate)) {
        Rational L = rep.digit_ratio_limit();
        return L == d->limit && circle_norm(L) == 0 && (v.decision == Decision::In) == d->condition2;
    }
    if (auto* d = std::get_if<DivergentSupportNonNull>(&v.certificate)) {
        Rational L = rep.digit_ratio_limit();
        return L == d->limit && circle_norm(L) == d->limit_norm && d->limit_norm != 0;
    }
    return false;
}

}  // namespace charsub
