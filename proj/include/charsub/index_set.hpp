#pragma once

// Finitely described sets of positive indices: the vocabulary for override sets, digit
// supports and the sets of indices attaining limsup of the ratios.
//
// Besides membership, a set answers two asymptotic questions exactly whenever its
// expression allows it: is it infinite, and are its gaps eventually bounded.  Both are
// decided by viewing large n through (n mod K, n in a power atom?) where K is the lcm of
// all residue moduli; power atoms are sparse, so a nonempty residue pattern among indices
// outside every atom means "infinite with bounded gaps".

#include <charsub/error.hpp>
#include <charsub/numeric.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace charsub {

class IndexSet {
public:
    enum class Kind { All, Powers, Residues, Finite, Union, Intersection, Difference, Shift };

    /// Period start/modulus: for n > start, membership depends only on n mod modulus.
    struct Periodicity {
        std::size_t start = 0;
        std::size_t modulus = 1;
    };

    IndexSet() : IndexSet(finite({})) {}

    static IndexSet all() { return IndexSet(make(Kind::All)); }

    /// {b^j : j >= 1}.
    static IndexSet powers(std::size_t base) {
        if (base < 2) throw DomainError("powers base must be >= 2");
        auto n = make(Kind::Powers);
        n->param = base;
        return IndexSet(std::move(n));
    }

    static IndexSet residues(std::size_t modulus, std::vector<std::size_t> classes) {
        if (modulus == 0) throw DomainError("residue modulus must be positive");
        auto n = make(Kind::Residues);
        n->param = modulus;
        std::set<std::size_t> uniq;
        for (auto r : classes) uniq.insert(r % modulus);
        n->residues.assign(uniq.begin(), uniq.end());
        return IndexSet(std::move(n));
    }

    static IndexSet multiples(std::size_t m) {
        if (m == 0) throw DomainError("multiples of zero");
        return residues(m, {0});
    }

    static IndexSet finite(std::set<std::size_t> elems) {
        elems.erase(0);
        auto n = make(Kind::Finite);
        n->elems = std::move(elems);
        return IndexSet(std::move(n));
    }

    friend IndexSet unite(const IndexSet& a, const IndexSet& b) { return binary(Kind::Union, a, b); }
    friend IndexSet intersect(const IndexSet& a, const IndexSet& b) {
        return binary(Kind::Intersection, a, b);
    }
    friend IndexSet subtract(const IndexSet& a, const IndexSet& b) {
        return binary(Kind::Difference, a, b);
    }
    friend IndexSet complement(const IndexSet& a) { return subtract(all(), a); }

    /// {n + offset : n in a}.
    friend IndexSet shift(const IndexSet& a, std::size_t offset) {
        if (offset == 0) return a;
        auto n = make(Kind::Shift);
        n->param = offset;
        n->lhs = a.node_;
        return IndexSet(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    std::size_t param() const { return node_->param; }
    const std::vector<std::size_t>& residue_classes() const { return node_->residues; }
    const std::set<std::size_t>& elements() const { return node_->elems; }

    bool contains(std::size_t n) const { return contains(*node_, n); }

    /// Smallest element > n, scanning no further than `limit`.
    std::optional<std::size_t> next_after(std::size_t n, std::size_t limit) const {
        for (std::size_t m = n + 1; m <= limit; ++m)
            if (contains(m)) return m;
        return std::nullopt;
    }

    /// The k-th element (0-based), scanning no further than `limit`.
    std::optional<std::size_t> nth(std::size_t k, std::size_t limit) const {
        std::size_t seen = 0;
        for (std::size_t m = 1; m <= limit; ++m) {
            if (contains(m)) {
                if (seen == k) return m;
                ++seen;
            }
        }
        return std::nullopt;
    }

    Tri infinite() const { return analyse().infinite; }
    Tri gaps_bounded() const { return analyse().gaps_bounded; }

    /// Exact eventual periodicity, available when no power atom occurs.
    std::optional<Periodicity> periodicity() const { return periodicity(*node_); }

    /// Structural upper bound on the elements, when the expression makes it evident.
    std::optional<std::size_t> upper_bound() const { return upper_bound(*node_); }

    std::string describe() const { return describe(*node_); }

private:
    struct Node {
        Kind kind = Kind::Finite;
        std::size_t param = 0;
        std::vector<std::size_t> residues;
        std::set<std::size_t> elems;
        std::shared_ptr<const Node> lhs, rhs;
    };

    struct Asymptotics {
        Tri infinite = Tri::Unknown;
        Tri gaps_bounded = Tri::Unknown;
    };

    struct Atom {
        std::size_t base;
        std::size_t offset;
    };

    static constexpr std::size_t kMaxModulus = 1u << 20;

    explicit IndexSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    static IndexSet binary(Kind k, const IndexSet& a, const IndexSet& b) {
        auto n = make(k);
        n->lhs = a.node_;
        n->rhs = b.node_;
        return IndexSet(std::move(n));
    }

    static bool is_power(std::size_t n, std::size_t base) {
        if (n < base) return false;
        while (n % base == 0) n /= base;
        return n == 1;
    }

    static bool contains(const Node& n, std::size_t i) {
        if (i == 0) return false;
        switch (n.kind) {
        case Kind::All: return true;
        case Kind::Powers: return is_power(i, n.param);
        case Kind::Residues: {
            auto r = i % n.param;
            return std::binary_search(n.residues.begin(), n.residues.end(), r);
        }
        case Kind::Finite: return n.elems.count(i) > 0;
        case Kind::Union: return contains(*n.lhs, i) || contains(*n.rhs, i);
        case Kind::Intersection: return contains(*n.lhs, i) && contains(*n.rhs, i);
        case Kind::Difference: return contains(*n.lhs, i) && !contains(*n.rhs, i);
        case Kind::Shift: return i > n.param && contains(*n.lhs, i - n.param);
        }
        return false;
    }

    // Collects residue moduli (lcm) and distinct power atoms with their cumulative shift.
    static bool collect(const Node& n, std::size_t offset, std::size_t& modulus, std::vector<Atom>& atoms) {
        switch (n.kind) {
        case Kind::Powers:
            for (auto& a : atoms)
                if (a.base == n.param && a.offset == offset) return true;
            atoms.push_back({n.param, offset});
            return true;
        case Kind::Residues:
            modulus = std::lcm(modulus, n.param);
            return modulus <= kMaxModulus;
        case Kind::Union:
        case Kind::Intersection:
        case Kind::Difference:
            return collect(*n.lhs, offset, modulus, atoms) && collect(*n.rhs, offset, modulus, atoms);
        case Kind::Shift: return collect(*n.lhs, offset + n.param, modulus, atoms);
        default: return true;
        }
    }

    // Membership of a large index n with n mod modulus == r, given which atoms contain n.
    static bool eval_large(const Node& n, std::size_t r, std::size_t offset, std::size_t modulus,
                           const std::vector<Atom>& atoms, const std::vector<bool>& in_atom) {
        switch (n.kind) {
        case Kind::All: return true;
        case Kind::Finite: return false;
        case Kind::Powers:
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i].base == n.param && atoms[i].offset == offset) return in_atom[i];
            return false;
        case Kind::Residues: {
            std::size_t shifted = (r + modulus - offset % modulus) % modulus;
            auto cls = shifted % n.param;
            return std::binary_search(n.residues.begin(), n.residues.end(), cls);
        }
        case Kind::Union: {
            bool a = eval_large(*n.lhs, r, offset, modulus, atoms, in_atom);
            bool b = eval_large(*n.rhs, r, offset, modulus, atoms, in_atom);
            return a || b;
        }
        case Kind::Intersection: {
            bool a = eval_large(*n.lhs, r, offset, modulus, atoms, in_atom);
            bool b = eval_large(*n.rhs, r, offset, modulus, atoms, in_atom);
            return a && b;
        }
        case Kind::Difference: {
            bool a = eval_large(*n.lhs, r, offset, modulus, atoms, in_atom);
            bool b = eval_large(*n.rhs, r, offset, modulus, atoms, in_atom);
            return a && !b;
        }
        case Kind::Shift: return eval_large(*n.lhs, r, offset + n.param, modulus, atoms, in_atom);
        }
        return false;
    }

    Asymptotics analyse() const {
        std::size_t modulus = 1;
        std::vector<Atom> atoms;
        if (!collect(*node_, 0, modulus, atoms)) return {};
        std::vector<bool> none(atoms.size(), false);
        for (std::size_t r = 0; r < modulus; ++r)
            if (eval_large(*node_, r, 0, modulus, atoms, none)) return {Tri::Yes, Tri::Yes};
        if (atoms.empty()) return {Tri::No, Tri::No};
        if (atoms.size() > 1) return {};
        // One atom: large members are b^j + offset; (b^j + offset) mod K is eventually periodic in j.
        const Atom a = atoms.front();
        std::vector<bool> inside{true};
        std::map<std::size_t, std::size_t> seen;
        std::vector<std::size_t> order;
        std::size_t pw = a.base % modulus;
        while (!seen.count(pw)) {
            seen[pw] = order.size();
            order.push_back(pw);
            pw = (pw * (a.base % modulus)) % modulus;
        }
        // Only residues on the cycle of b^j mod K recur for infinitely many j.
        for (std::size_t i = seen[pw]; i < order.size(); ++i) {
            std::size_t r = (order[i] + a.offset) % modulus;
            if (eval_large(*node_, r, 0, modulus, atoms, inside)) return {Tri::Yes, Tri::No};
        }
        return {Tri::No, Tri::No};
    }

    static std::optional<Periodicity> periodicity(const Node& n) {
        switch (n.kind) {
        case Kind::All: return Periodicity{0, 1};
        case Kind::Powers: return std::nullopt;
        case Kind::Residues: return Periodicity{0, n.param};
        case Kind::Finite: return Periodicity{n.elems.empty() ? 0 : *n.elems.rbegin(), 1};
        case Kind::Shift: {
            auto p = periodicity(*n.lhs);
            if (!p) return std::nullopt;
            return Periodicity{p->start + n.param, p->modulus};
        }
        default: {
            auto a = periodicity(*n.lhs);
            auto b = periodicity(*n.rhs);
            if (!a || !b) return std::nullopt;
            auto m = std::lcm(a->modulus, b->modulus);
            if (m > kMaxModulus) return std::nullopt;
            return Periodicity{std::max(a->start, b->start), m};
        }
        }
    }

    static std::optional<std::size_t> upper_bound(const Node& n) {
        switch (n.kind) {
        case Kind::Finite: return n.elems.empty() ? 0 : *n.elems.rbegin();
        case Kind::Difference: return upper_bound(*n.lhs);
        case Kind::Shift: {
            auto b = upper_bound(*n.lhs);
            if (!b) return std::nullopt;
            return *b + n.param;
        }
        case Kind::Union: {
            auto a = upper_bound(*n.lhs), b = upper_bound(*n.rhs);
            if (!a || !b) return std::nullopt;
            return std::max(*a, *b);
        }
        case Kind::Intersection: {
            auto a = upper_bound(*n.lhs), b = upper_bound(*n.rhs);
            if (a && b) return std::min(*a, *b);
            return a ? a : b;
        }
        default: return std::nullopt;
        }
    }

    static std::string describe(const Node& n) {
        switch (n.kind) {
        case Kind::All: return "all";
        case Kind::Powers: return "powers:" + std::to_string(n.param);
        case Kind::Residues: {
            if (n.residues.size() == 1 && n.residues.front() == 0) return "multiples:" + std::to_string(n.param);
            std::string s = "residues:" + std::to_string(n.param) + ":";
            for (std::size_t i = 0; i < n.residues.size(); ++i)
                s += (i ? "," : "") + std::to_string(n.residues[i]);
            return s;
        }
        case Kind::Finite: {
            std::string s = "{";
            bool first = true;
            for (auto e : n.elems) {
                s += (first ? "" : ",") + std::to_string(e);
                first = false;
            }
            return s + "}";
        }
        case Kind::Union: return "union(" + describe(*n.lhs) + "," + describe(*n.rhs) + ")";
        case Kind::Intersection: return "inter(" + describe(*n.lhs) + "," + describe(*n.rhs) + ")";
        case Kind::Difference: return "minus(" + describe(*n.lhs) + "," + describe(*n.rhs) + ")";
        case Kind::Shift: return "shift(" + describe(*n.lhs) + "," + std::to_string(n.param) + ")";
        }
        return "?";
    }

    std::shared_ptr<const Node> node_;
};

}  // namespace charsub
