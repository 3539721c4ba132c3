#ifndef QMKIT_SQUARE_CLASS_HPP
#define QMKIT_SQUARE_CLASS_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arith.hpp"

namespace qmkit {

/// An element of Q*/Q*^2, stored as its squarefree integer representative.
/// The sign is kept; mod_sign() gives the class in Q*/{+-1}Q*^2.
class SquareClass {
public:
    SquareClass() : rep_(1) {}

    static SquareClass of(const Rat& x)
    {
        if (x == 0) throw InputError("squarefree_class: zero has no square class");
        Int rep = 1;
        for (const Int* part : {&x.get_num(), &x.get_den()}) {
            if (*part == 1) continue;
            for (const auto& [q, e] : factor(*part))
                if (e % 2) rep *= q;
        }
        if (x < 0) rep = -rep;
        return SquareClass(rep, 0);
    }

    static SquareClass of(long v) { return of(Rat(v)); }

    const Int& rep() const { return rep_; }
    bool is_trivial() const { return rep_ == 1; }

    SquareClass mod_sign() const { return SquareClass(abs(rep_), 0); }

    friend SquareClass operator*(const SquareClass& a, const SquareClass& b)
    {
        Int g;
        mpz_gcd(g.get_mpz_t(), a.rep_.get_mpz_t(), b.rep_.get_mpz_t());
        return SquareClass(Int(a.rep_ * b.rep_ / (g * g)), 0);
    }
    SquareClass& operator*=(const SquareClass& o) { return *this = *this * o; }

    friend bool operator==(const SquareClass& a, const SquareClass& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const SquareClass& a, const SquareClass& b) { return !(a == b); }
    friend bool operator<(const SquareClass& a, const SquareClass& b) { return a.rep_ < b.rep_; }

    /// Atoms of the F2 vector: -1 (if negative) and the prime divisors.
    std::vector<Int> atoms() const
    {
        std::vector<Int> out;
        if (rep_ < 0) out.push_back(-1);
        if (abs(rep_) != 1)
            for (const auto& [q, e] : factor(rep_)) out.push_back(q);
        return out;
    }

    std::string str() const { return rep_.get_str(); }

private:
    SquareClass(Int rep, int) : rep_(std::move(rep)) {}
    Int rep_;
};

inline SquareClass squarefree_class(const Rat& x) { return SquareClass::of(x); }

/// Subgroup of Q*/Q*^2 spanned by finitely many classes; equality of
/// multiquadratic fields is equality of these spans.
class SquareClassSpan {
public:
    SquareClassSpan() = default;
    explicit SquareClassSpan(const std::vector<SquareClass>& gens)
    {
        for (const auto& g : gens) insert(g);
    }

    /// Adds a class; returns false if it was already in the span.
    bool insert(const SquareClass& c)
    {
        auto v = reduce(to_vec(c));
        if (v.empty()) return false;
        Int pivot = v.back();
        for (auto& row : rows_)
            if (std::binary_search(row.begin(), row.end(), pivot)) row = xor_vec(row, v);
        rows_.push_back(v);
        std::sort(rows_.begin(), rows_.end(), [](const Vec& a, const Vec& b) { return a.back() < b.back(); });
        return true;
    }

    bool contains(const SquareClass& c) const { return reduce(to_vec(c)).empty(); }
    bool contains(const SquareClassSpan& o) const
    {
        return std::all_of(o.rows_.begin(), o.rows_.end(), [&](const Vec& r) { return reduce(r).empty(); });
    }

    std::size_t rank() const { return rows_.size(); }
    std::size_t size() const { return std::size_t(1) << rows_.size(); }

    /// Canonical basis (reduced echelon form, pivots at the largest atom), sorted by |rep|.
    std::vector<SquareClass> basis() const
    {
        std::vector<SquareClass> out;
        for (const auto& r : rows_) out.push_back(from_vec(r));
        std::sort(out.begin(), out.end(), [](const SquareClass& a, const SquareClass& b) {
            if (abs(a.rep()) != abs(b.rep())) return abs(a.rep()) < abs(b.rep());
            return a.rep() > b.rep();
        });
        return out;
    }

    friend bool operator==(const SquareClassSpan& a, const SquareClassSpan& b) { return a.rows_ == b.rows_; }

private:
    using Vec = std::vector<Int>; // sorted atoms

    static Vec to_vec(const SquareClass& c)
    {
        auto v = c.atoms();
        std::sort(v.begin(), v.end());
        return v;
    }
    static SquareClass from_vec(const Vec& v)
    {
        Int r = 1;
        for (const auto& a : v) r *= a;
        return SquareClass::of(Rat(r));
    }
    static Vec xor_vec(const Vec& a, const Vec& b)
    {
        Vec out;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }
    Vec reduce(Vec v) const
    {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it)
            if (std::binary_search(v.begin(), v.end(), it->back())) v = xor_vec(v, *it);
        return v;
    }

    std::vector<Vec> rows_;
};

/// Exponent vector e (bitmask over gens) with d = prod gens^e mod squares, if d is in the span.
inline std::optional<unsigned> express_in(const std::vector<SquareClass>& gens, const SquareClass& d)
{
    for (unsigned mask = 0; mask < (1u << gens.size()); ++mask) {
        SquareClass prod;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (mask >> i & 1u) prod *= gens[i];
        if (prod == d) return mask;
    }
    return std::nullopt;
}

inline bool independent(const std::vector<SquareClass>& gens)
{
    SquareClassSpan span;
    for (const auto& g : gens)
        if (!span.insert(g)) return false;
    return true;
}

} // namespace qmkit

#endif // QMKIT_SQUARE_CLASS_HPP
