#pragma once

// Exact integer/rational helpers on top of GMP, plus the closed rational interval used
// for every certified bound in the library.

#include <charsub/error.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace charsub {

using Int = mpz_class;
using Rational = mpq_class;

/// Three-valued answer for questions that a finite description may not settle.
enum class Tri { No, Yes, Unknown };

inline const char* to_string(Tri t) {
    switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    default: return "unknown";
    }
}

inline Tri tri(bool b) { return b ? Tri::Yes : Tri::No; }

inline Rational make_rational(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Nonnegative remainder a mod m for m > 0.
inline Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int floor(const Rational& r) { return floor_div(r.get_num(), r.get_den()); }

/// Fractional part in [0, 1).
inline Rational frac(const Rational& r) {
    return make_rational(mod(r.get_num(), r.get_den()), r.get_den());
}

/// Distance to the nearest integer, i.e. the circle norm of r mod 1.
inline Rational circle_norm(const Rational& r) {
    Rational f = frac(r);
    Rational g = 1 - f;
    return f < g ? f : g;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int pow_ui(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

/// p-adic valuation of n != 0.
inline unsigned long valuation(const Int& n, const Int& p) {
    if (n == 0) throw DomainError("valuation of zero");
    Int rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

inline bool is_prime(const Int& n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

inline std::size_t bit_length(const Int& n) { return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

namespace detail {

inline Int pollard_brent(const Int& n) {
    if (mod(n, Int(2)) == 0) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, g = 1, q = 1, ys;
        std::size_t r = 1;
        auto step = [&](const Int& v) { return mod(v * v + c, n); };
        while (g == 1) {
            x = y;
            for (std::size_t i = 0; i < r; ++i) y = step(y);
            std::size_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::size_t i = 0; i < std::min<std::size_t>(128, r - k); ++i) {
                    y = step(y);
                    q = mod(q * abs(Int(x - y)), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd(abs(Int(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(Int n, std::map<Int, unsigned long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_brent(n);
    factor_into(d, out);
    factor_into(Int(n / d), out);
}

}  // namespace detail

/// Prime factorization of n >= 1 as an ordered map p -> exponent.
inline std::map<Int, unsigned long> factorize(Int n) {
    if (n < 1) throw DomainError("factorize expects a positive integer");
    std::map<Int, unsigned long> out;
    for (unsigned long p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned long e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            out[Int(p)] = e;
        }
    }
    detail::factor_into(n, out);
    return out;
}

/// Machine-output form of an exact rational: always "a/b".
inline std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}
inline std::string to_string(const Int& n) { return n.get_str(); }

/// Human-readable decimal approximation (text output only), truncated toward zero.
inline std::string approx(const Rational& r, unsigned digits = 6) {
    Int scale = pow_ui(Int(10), digits);
    Int scaled = abs(Int(floor(Rational(abs(r) * scale))));
    std::string body = scaled.get_str();
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (r < 0 ? "-" : "") + body;
}

/// Closed rational interval [lo, hi]. `upper_open` records that the true quantity is
/// known to lie strictly below hi.
struct Interval {
    Rational lo = 0;
    Rational hi = 0;
    bool upper_open = false;

    static Interval point(const Rational& v) { return {v, v, false}; }

    bool contains(const Rational& v) const { return lo <= v && (upper_open ? v < hi : v <= hi); }
    Rational width() const { return hi - lo; }
};

/// Range of the circle norm over the arc [start, start + width] (start taken mod 1).
inline Interval norm_range(const Rational& start, const Rational& width) {
    if (width < 0) throw DomainError("negative arc width");
    if (width >= 1) return {0, Rational(1, 2), false};
    Rational a = frac(start);
    Rational b = a + width;
    bool hits_integer = a == 0 || b >= 1;
    Rational half = a <= Rational(1, 2) ? Rational(1, 2) : Rational(3, 2);
    bool hits_half = half <= b;
    Rational na = circle_norm(a), nb = circle_norm(b);
    Interval out;
    out.lo = hits_integer ? Rational(0) : std::min(na, nb);
    out.hi = hits_half ? Rational(1, 2) : std::max(na, nb);
    return out;
}

}  // namespace charsub
