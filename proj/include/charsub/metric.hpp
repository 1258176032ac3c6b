#pragma once

// The metric rho_u(x, y) = sup{||x - y||, ||u_n (x - y)|| : n >= 0}: exact on rationals,
// interval-certified on digit streams, plus grid enumeration of rho_u-balls.

#include <charsub/aseq.hpp>
#include <charsub/circle.hpp>
#include <charsub/error.hpp>
#include <charsub/numeric.hpp>
#include <charsub/xs.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

namespace charsub {

/// rho_u(x, 0): exact when `exact`, otherwise only `bounds` is certified.
struct RhoResult {
    bool exact = false;
    Rational value;
    Interval bounds;
    std::size_t horizon = 0;
};

inline RhoResult rho_rational(const CirclePoint& x, const ASeq& seq) {
    RhoResult out;
    if (x.is_zero()) {
        out.exact = true;
        out.bounds = Interval::point(0);
        return out;
    }
    const Int b = x.den();
    const Caps& caps = seq.caps();
    Rational best = x.norm();
    Int r = mod(Int(seq.seed() * x.num()), b);
    auto visit = [&](const Int& rn) { best = std::max(best, circle_norm(make_rational(rn, b))); };
    visit(r);

    auto mp = seq.rule().mod_period(b, caps.cycle_steps);
    if (mp) {
        // The orbit state (u_n a mod b, phase of n) is eventually periodic.
        std::map<std::pair<Int, std::size_t>, std::size_t> seen;
        for (std::size_t n = 0;; ++n) {
            if (r == 0) break;
            auto key = std::make_pair(r, mp->phase(n));
            if (!seen.emplace(key, n).second) break;
            if (n > caps.cycle_steps) throw ResourceLimit("orbit cycle detection exceeded the cycle cap");
            r = mod(Int(r * seq.rule().at_mod(n + 1, b)), b);
            visit(r);
            out.horizon = n + 1;
        }
        out.exact = true;
        out.value = best;
        out.bounds = Interval::point(best);
        return out;
    }
    std::size_t limit = std::min(caps.horizon, caps.max_index);
    for (std::size_t n = 1; n <= limit && r != 0; ++n) {
        r = mod(Int(r * seq.rule().at_mod(n, b)), b);
        visit(r);
        out.horizon = n;
    }
    if (r == 0) {
        out.exact = true;
        out.value = best;
        out.bounds = Interval::point(best);
    } else {
        out.bounds = {best, Rational(1, 2), false};
    }
    return out;
}

/// rho_u(x, y) for rational points.
inline RhoResult rho_rational(const CirclePoint& x, const CirclePoint& y, const ASeq& seq) {
    return rho_rational(x - y, seq);
}

struct RhoInterval {
    Interval bounds;
    std::size_t horizon = 0;
    std::size_t guard = 0;
    Rational tail_bound;
};

/// Interval enclosing rho_u(x, 0) from the orbit norms up to N and the tail bound beyond.
inline RhoInterval rho_interval(const CanonicalRep& rep, std::size_t N) {
    if (N < 1) throw DomainError("horizon must be >= 1");
    OrbitEnclosure oe(rep, N);
    Interval p = oe.norm_of_point();
    Rational lo = p.lo, hi = p.hi;
    for (std::size_t n = 0; n <= N; ++n) {
        Interval iv = oe.norm_at(n);
        lo = std::max(lo, iv.lo);
        hi = std::max(hi, iv.hi);
    }
    RhoInterval out;
    out.tail_bound = rep.tail_sup_bound(N + 1);
    out.bounds = {lo, std::max(hi, out.tail_bound), false};
    out.horizon = N;
    out.guard = oe.guard_index();
    return out;
}

inline RhoInterval rho_interval(const CanonicalRep& rep, const ASeq& seq, std::size_t N) {
    if (!(rep.seq() == seq)) throw DomainError("representation belongs to another sequence");
    return rho_interval(rep, N);
}

inline CanonicalRep build_xs(const XSDescriptor& desc, const ASeq& seq) {
    return CanonicalRep::alternating_xs(seq, desc);
}

/// The closed-form enclosure of ||u_{n_k - 1} x_S|| and a check of the true norm against it.
struct XSNormBounds {
    std::size_t k = 0;
    std::size_t n_k = 0;
    Interval closed_form;
    Interval enclosure;
    bool verified = false;
};

inline XSNormBounds xs_norm_bounds(const XSDescriptor& desc, const ASeq& seq, std::size_t k) {
    if (k < 1) throw DomainError("k must be >= 1");
    auto nk = desc.element(k - 1), nk1 = desc.element(k), nk2 = desc.element(k + 1);
    if (!nk || !nk1 || !nk2) throw DomainError("descriptor has fewer than k + 2 elements");
    CanonicalRep rep = build_xs(desc, seq);
    XSNormBounds out;
    out.k = k;
    out.n_k = *nk;
    const Int& base = seq.term(*nk - 1);
    Rational lo = Rational(1, seq.ratio(*nk)) - make_rational(base, seq.term(*nk1));
    Rational hi = lo + make_rational(base, seq.term(*nk2));
    out.closed_form = {lo, hi, false};
    std::size_t guard = bit_length(seq.term(*nk2)) - bit_length(base) + 16;
    OrbitEnclosure oe(rep, *nk - 1, std::max<std::size_t>(guard, 64));
    out.enclosure = oe.norm_at(*nk - 1);
    out.verified = out.enclosure.lo >= lo && out.enclosure.hi <= hi;
    return out;
}

/// Grid points k/u_N (0 <= k < u_N) with rho_u < eps (or <= eps when closed), sorted by k.
inline std::vector<CirclePoint> ball_points(const ASeq& seq, std::size_t N, const Rational& eps, bool closed) {
    if (N < 1) throw DomainError("resolution N must be >= 1");
    if (eps <= 0) throw DomainError("eps must be positive");
    const Int& U = seq.term(N);
    if (U > Int(static_cast<unsigned long>(seq.caps().max_grid)))
        throw ResourceLimit("grid u_" + std::to_string(N) + " = " + U.get_str() + " exceeds the grid cap " +
                            std::to_string(seq.caps().max_grid));
    if (!U.fits_ulong_p() || U.get_ui() > (std::uint64_t{1} << 62)) throw ResourceLimit("grid too large");
    using u128 = unsigned __int128;
    const std::uint64_t u = U.get_ui();
    std::vector<std::uint64_t> mult{1};
    for (std::size_t n = 0; n < N; ++n) mult.push_back(seq.term(n).get_ui());
    // ||m k / U|| < eps  <=>  min(r, U - r) * den < num * U with r = m k mod U.
    Rational e = std::min(eps, Rational(1));
    if (bit_length(e.get_den()) > 62) throw ResourceLimit("eps denominator too large for the grid comparison");
    const u128 den = e.get_den().get_ui();
    const u128 rhs = u128(e.get_num().get_ui()) * u;

    auto keep = [&](std::uint64_t k) {
        for (auto m : mult) {
            std::uint64_t r = static_cast<std::uint64_t>((u128(m) * k) % u);
            u128 lhs = u128(std::min(r, u - r)) * den;
            if (closed ? lhs > rhs : lhs >= rhs) return false;
        }
        return true;
    };

    unsigned workers = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
    if (u < 4096) workers = 1;
    std::vector<std::vector<std::uint64_t>> parts(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (u + workers - 1) / workers;
    auto work = [&](unsigned w) {
        std::uint64_t from = w * chunk, to = std::min<std::uint64_t>(u, from + chunk);
        for (std::uint64_t k = from; k < to; ++k)
            if (keep(k)) parts[w].push_back(k);
    };
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    std::vector<CirclePoint> out;
    for (auto& part : parts)
        for (auto k : part) out.emplace_back(Int(static_cast<unsigned long>(k)), U);
    return out;
}

/// Grid surrogate for the closure of B_{1/n}(0): the closed ball of radius 1/n on k/u_N.
inline std::vector<CirclePoint> test_topology_ball(const ASeq& seq, std::size_t N, std::size_t n) {
    if (n < 1) throw DomainError("n must be >= 1");
    return ball_points(seq, N, Rational(1, static_cast<unsigned long>(n)), true);
}

}  // namespace charsub
