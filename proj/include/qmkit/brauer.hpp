#ifndef QMKIT_BRAUER_HPP
#define QMKIT_BRAUER_HPP

// Local Hilbert symbols and 2-torsion Brauer classes of Q, represented by
// their (finite, even) sets of ramified places.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "arith.hpp"
#include "character.hpp"
#include "square_class.hpp"

namespace qmkit {

struct Place {
    Int p; // 0 encodes the infinite place

    static Place infinity() { return Place{Int(0)}; }
    static Place prime(const Int& q)
    {
        if (!is_prime(q)) throw InputError("place: " + q.get_str() + " is not prime");
        return Place{q};
    }
    /// "inf", "infinity" or a prime.
    static Place parse(const std::string& s)
    {
        if (s == "inf" || s == "infinity" || s == "oo") return infinity();
        Rat r = parse_rat(s);
        if (den(r) != 1) throw InputError("place must be a prime or 'infinity'");
        return prime(num(r));
    }

    bool is_infinite() const { return p == 0; }
    std::string str() const { return is_infinite() ? "infinity" : p.get_str(); }

    // primes increasing, infinity last
    friend bool operator<(const Place& a, const Place& b)
    {
        if (a.is_infinite() != b.is_infinite()) return b.is_infinite();
        return a.p < b.p;
    }
    friend bool operator==(const Place& a, const Place& b) { return a.p == b.p; }
};

namespace detail {

/// (u mod 8) for a 2-adic unit rational.
inline unsigned mod8(const Rat& u) { return static_cast<unsigned>(reduce_mod(u, 8)); }

inline Rat unit_part(const Rat& x, const Int& p, int& v)
{
    v = valuation(x, p);
    Rat u = x;
    if (v > 0) u /= Rat(ipow(p, static_cast<unsigned long>(v)));
    if (v < 0) u *= Rat(ipow(p, static_cast<unsigned long>(-v)));
    return u;
}

} // namespace detail

/// Local Hilbert symbol (a,b)_v.
inline int hilbert_symbol(const Rat& a, const Rat& b, const Place& v)
{
    if (a == 0 || b == 0) throw InputError("hilbert_symbol: arguments must be nonzero");
    if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    int alpha, beta;
    Rat u = detail::unit_part(a, v.p, alpha);
    Rat w = detail::unit_part(b, v.p, beta);
    if (v.p == 2) {
        unsigned u8 = detail::mod8(u), w8 = detail::mod8(w);
        auto eps = [](unsigned x) { return ((x - 1) / 2) & 1u; };
        auto omega = [](unsigned x) { return ((x * x - 1) / 8) & 1u; };
        unsigned e = eps(u8) * eps(w8) + static_cast<unsigned>(alpha & 1) * omega(w8) +
                     static_cast<unsigned>(beta & 1) * omega(u8);
        return (e & 1u) ? -1 : 1;
    }
    int s = 1;
    Int eps_p = (v.p - 1) / 2;
    if ((alpha & 1) && (beta & 1) && mpz_odd_p(eps_p.get_mpz_t())) s = -s;
    if (beta & 1) s *= legendre(u, v.p);
    if (alpha & 1) s *= legendre(w, v.p);
    return s;
}

class BrauerClass2 {
public:
    BrauerClass2() = default;
    explicit BrauerClass2(std::set<Place> ramified) : ramified_(std::move(ramified))
    {
        if (ramified_.size() % 2) throw ConsistencyError("Brauer class with an odd number of ramified places");
    }

    const std::set<Place>& ramified() const { return ramified_; }
    bool is_trivial() const { return ramified_.empty(); }

    /// Group law: symmetric difference.
    friend BrauerClass2 operator*(const BrauerClass2& a, const BrauerClass2& b)
    {
        std::set<Place> out;
        std::set_symmetric_difference(a.ramified_.begin(), a.ramified_.end(), b.ramified_.begin(), b.ramified_.end(),
                                      std::inserter(out, out.end()));
        BrauerClass2 c;
        c.ramified_ = std::move(out);
        return c;
    }
    BrauerClass2& operator*=(const BrauerClass2& o) { return *this = *this * o; }

    friend bool operator==(const BrauerClass2& a, const BrauerClass2& b) { return a.ramified_ == b.ramified_; }
    friend bool operator!=(const BrauerClass2& a, const BrauerClass2& b) { return !(a == b); }

    std::vector<std::string> strs() const
    {
        std::vector<std::string> out;
        for (const auto& v : ramified_) out.push_back(v.str());
        return out;
    }
    std::string str() const
    {
        std::string s = "{";
        for (const auto& v : ramified_) s += (s.size() > 1 ? "," : "") + v.str();
        return s + "}";
    }

private:
    std::set<Place> ramified_;
};

/// Places where (a,b) can ramify: infinity and the primes dividing 2ab.
inline std::set<Place> candidate_places(const std::vector<Rat>& xs)
{
    std::set<Place> out{Place::infinity(), Place{Int(2)}};
    for (const auto& x : xs)
        for (const Int* part : {&x.get_num(), &x.get_den()})
            if (abs(*part) != 1)
                for (const auto& [q, e] : factor(*part)) out.insert(Place{q});
    return out;
}

inline BrauerClass2 quaternion_class(const Rat& a, const Rat& b)
{
    std::set<Place> ram;
    for (const auto& v : candidate_places({a, b}))
        if (hilbert_symbol(a, b, v) == -1) ram.insert(v);
    return BrauerClass2(std::move(ram));
}

/// Obstruction to a square root of chi: ramified at finite p iff chi_p(-1) = -1,
/// at infinity iff chi(-1) = -1.
inline BrauerClass2 character_obstruction_class(const DirichletCharacter& chi)
{
    std::set<Place> ram;
    if (chi.modulus() > 1) {
        if (chi.exponent(-1) * 2 % static_cast<int>(chi.order()) != 0) throw InputError("chi(-1) is not +-1");
        if (chi.sign(-1) == -1) ram.insert(Place::infinity());
        for (const auto& [q, e] : factor(Int(std::to_string(chi.modulus()))))
            if (chi.local_sign_at_minus_one(q) == -1) ram.insert(Place{q});
    }
    return BrauerClass2(std::move(ram));
}

namespace detail {

/// Coordinates of d in Q_v*/Q_v*^2 as a bit vector.
inline unsigned local_square_vector(const SquareClass& d, const Place& v)
{
    const Rat x(d.rep());
    if (v.is_infinite()) return x < 0 ? 1u : 0u;
    int val;
    Rat u = unit_part(x, v.p, val);
    unsigned bits = static_cast<unsigned>(val & 1);
    if (v.p == 2) {
        unsigned u8 = mod8(u);
        bits |= ((((u8 - 1) / 2) & 1u) << 1) | ((((u8 * u8 - 1) / 8) & 1u) << 2);
    } else if (legendre(u, v.p) == -1) {
        bits |= 2u;
    }
    return bits;
}

} // namespace detail

/// Order of the subgroup of Q_v*/Q_v*^2 generated by the d's (the local degree).
inline unsigned local_square_class_degree(const std::vector<SquareClass>& ds, const Place& v)
{
    std::set<unsigned> span{0};
    for (const auto& d : ds) {
        const unsigned x = detail::local_square_vector(d, v);
        std::set<unsigned> grown = span;
        for (unsigned y : span) grown.insert(x ^ y);
        span = std::move(grown);
    }
    return static_cast<unsigned>(span.size());
}

/// True iff the class dies over Q(sqrt d : d in ds): every ramified place has even local degree.
inline bool splits_over_multiquadratic(const BrauerClass2& cls, const std::vector<SquareClass>& ds)
{
    for (const auto& v : cls.ramified())
        if (local_square_class_degree(ds, v) < 2) return false;
    return true;
}

} // namespace qmkit

#endif // QMKIT_BRAUER_HPP
