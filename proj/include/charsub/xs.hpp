#pragma once

// Gap patterns S = {n_1 < n_2 < ...} selecting indices for the alternating points
// x_S = 1/u_{n_1} - 1/u_{n_2} + 1/u_{n_3} - ...

#include <charsub/aseq.hpp>
#include <charsub/error.hpp>
#include <charsub/index_set.hpp>

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace charsub {

struct XSDescriptor {
    enum class Tail { None, ConstantGap, DoublingGaps };

    /// Explicit elements n_1 < ... < n_r (r >= 1).
    std::vector<std::size_t> prefix;
    Tail tail = Tail::None;
    /// ConstantGap: every later gap. DoublingGaps: first later gap, then 2x, 4x, ...
    std::size_t gap = 0;

    static XSDescriptor constant_gap(std::size_t n1, std::size_t d) { return {{n1}, Tail::ConstantGap, d}; }
    static XSDescriptor doubling(std::size_t n1, std::size_t d0) { return {{n1}, Tail::DoublingGaps, d0}; }
    static XSDescriptor list(std::vector<std::size_t> elems) { return {std::move(elems), Tail::None, 0}; }

    bool infinite() const { return tail != Tail::None; }

    /// n_{i+1} for 0-based i, or nullopt past a finite list or on overflow.
    std::optional<std::size_t> element(std::size_t i) const {
        if (prefix.empty()) return std::nullopt;
        if (i < prefix.size()) return prefix[i];
        if (tail == Tail::None) return std::nullopt;
        std::size_t j = i - prefix.size() + 1;
        constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max() / 4;
        if (tail == Tail::ConstantGap) {
            if (j > kMax / gap) return std::nullopt;
            return prefix.back() + j * gap;
        }
        if (j >= 60 || gap > (kMax >> j)) return std::nullopt;
        return prefix.back() + gap * ((std::size_t{1} << j) - 1);
    }

    /// Number of elements strictly below n.
    std::size_t count_below(std::size_t n) const {
        std::size_t c = 0;
        while (true) {
            auto e = element(c);
            if (!e || *e >= n) return c;
            ++c;
        }
    }

    std::string describe() const {
        std::string s;
        if (tail == Tail::ConstantGap && prefix.size() == 1)
            return "xs:const:" + std::to_string(prefix[0]) + "," + std::to_string(gap);
        if (tail == Tail::DoublingGaps && prefix.size() == 1)
            return "xs:doubling:" + std::to_string(prefix[0]) + "," + std::to_string(gap);
        s = "xs:list:";
        for (std::size_t i = 0; i < prefix.size(); ++i) s += (i ? "," : "") + std::to_string(prefix[i]);
        if (tail == Tail::ConstantGap) s += ":then:const:" + std::to_string(gap);
        if (tail == Tail::DoublingGaps) s += ":then:doubling:" + std::to_string(gap);
        return s;
    }

    friend bool operator==(const XSDescriptor&, const XSDescriptor&) = default;
};

namespace detail {

// Proves that every element beyond the explicit prefix lies in S_u*.
// Elements up to `cap` are checked directly by the caller.
inline bool xs_tail_in_s_star(const XSDescriptor& d, const IndexSet& s_star, std::size_t cap) {
    if (!d.infinite()) return true;
    std::size_t last = d.prefix.back();
    std::set<std::size_t> head;
    for (std::size_t n = 1; n <= last; ++n) head.insert(n);
    IndexSet missing = subtract(complement(IndexSet::finite(head)), s_star);
    if (d.tail == XSDescriptor::Tail::ConstantGap) {
        IndexSet progression = intersect(IndexSet::residues(d.gap, {last % d.gap}), complement(IndexSet::finite(head)));
        missing = subtract(progression, s_star);
    } else if (missing.infinite() != Tri::No) {
        // Doubling gaps with d0 = n_r = 2^a give the elements n_r * 2^j, all powers of 2.
        bool pow2 = last >= 2 && (last & (last - 1)) == 0;
        if (!pow2 || d.gap != last) return false;
        missing = subtract(IndexSet::powers(2), s_star);
    }
    if (missing.infinite() != Tri::No) return false;
    if (auto per = missing.periodicity()) return !missing.next_after(cap, per->start + per->modulus);
    return true;
}

}  // namespace detail

/// Checks gaps >= 2 and S subset of S_u*; scans elements up to the index cap and proves the
/// infinite tail at rule level. `strict_start` also demands n_1 > min S_u*.
inline void validate_xs(const XSDescriptor& d, const ASeq& seq, bool strict_start = false) {
    if (d.prefix.empty()) throw InvalidGaps("descriptor has no elements");
    for (std::size_t i = 0; i < d.prefix.size(); ++i) {
        if (d.prefix[i] == 0) throw InvalidGaps("indices start at 1");
        if (i && d.prefix[i] < d.prefix[i - 1] + 2)
            throw InvalidGaps("gap " + std::to_string(d.prefix[i] - d.prefix[i - 1]) + " < 2 at element " +
                              std::to_string(i + 1));
    }
    if (d.infinite() && d.gap < 2) throw InvalidGaps("tail gap " + std::to_string(d.gap) + " < 2");
    const auto& b = seq.behavior();
    if (!b.limsup || !b.attaining) throw UnknownAsymptotics("x_S needs a finite q_u with known S_u*");
    std::size_t cap = seq.caps().max_index;
    for (std::size_t i = 0;; ++i) {
        auto e = d.element(i);
        if (!e || *e > cap) break;
        if (!b.attaining->contains(*e) || seq.ratio(*e) != *b.limsup)
            throw InvalidGaps("element " + std::to_string(*e) + " is not in S_u*");
    }
    if (!detail::xs_tail_in_s_star(d, *b.attaining, cap))
        throw UnsupportedDescriptor("cannot prove the tail of " + d.describe() + " stays in S_u*");
    if (strict_start) {
        std::size_t m1 = s_star(seq, 0);
        if (d.prefix.front() <= m1)
            throw InvalidGaps("n_1 = " + std::to_string(d.prefix.front()) + " must exceed min S_u* = " +
                              std::to_string(m1));
    }
}

}  // namespace charsub
