#ifndef QMKIT_ARITH_HPP
#define QMKIT_ARITH_HPP

// Integer and rational utilities: primality, factorization, Legendre symbols,
// valuations and parsing. Big numbers are GMP integers/rationals.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qmkit {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den = 1)
{
    if (den == 0) throw InputError("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "n" or "n/d" (optional sign, no spaces).
inline Rat parse_rat(const std::string& text)
{
    auto bad = [&] { return InputError("malformed rational '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+') throw bad();
    if (num[0] == '+') num.erase(0, 1);
    Int n(num), d(den);
    if (d == 0) throw bad();
    return make_rat(n, d);
}

inline std::string to_string(const Rat& r) { return r.get_str(); }
inline std::string to_string(const Int& n) { return n.get_str(); }

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

inline int sign(const Rat& r) { return sgn(r); }

inline Int ipow(const Int& base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rpow(const Rat& base, int e)
{
    Rat r = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= base;
    return e < 0 ? Rat(1 / r) : r;
}

/// Exponent of p in n (n != 0).
inline int valuation(Int n, const Int& p)
{
    if (n == 0) throw InputError("valuation of zero");
    int v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

inline int valuation(const Rat& x, const Int& p) { return valuation(num(x), p) - valuation(den(x), p); }

// ---------------------------------------------------------------------------
// Primality

namespace detail {

inline bool miller_rabin_round(const Int& n, const Int& a, const Int& d, unsigned s)
{
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Deterministic Miller-Rabin below 3.3e24 (first 13 prime bases); GMP's
/// probabilistic test (50 rounds) above that.
inline bool is_prime(const Int& n)
{
    if (n < 2) return false;
    static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned q : small) {
        if (n == q) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return false;
    }
    Int d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    for (unsigned q : small)
        if (!detail::miller_rabin_round(n, Int(q), d, s)) return false;
    static const Int bound("3317044064679887385961981");
    if (n < bound) return true;
    return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

inline bool is_prime(std::uint64_t n) { return is_prime(Int(std::to_string(n))); }

// ---------------------------------------------------------------------------
// Factorization: trial division to 10^6, then Pollard-Brent rho.

namespace detail {

inline Int pollard_brent(const Int& n)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 64;
        auto f = [&](const Int& v) { return Int((v * v + c) % n); };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = (q * abs(Int(x - y))) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                Int diff = abs(Int(x - ys));
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_rec(const Int& n, std::map<Int, int>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(Int(n / d), out);
}

} // namespace detail

/// Prime factorization of |n| (n != 0).
inline std::map<Int, int> factor(Int n)
{
    if (n == 0) throw InputError("cannot factor zero");
    n = abs(n);
    std::map<Int, int> out;
    for (unsigned long q = 2; q <= 1000000UL; q += (q == 2 ? 1 : 2)) {
        if (Int(q) * q > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            n /= q;
            ++out[Int(q)];
        }
    }
    if (n > 1) detail::factor_rec(n, out);
    return out;
}

/// Quadratic residue symbol (a|p); p must be an odd prime.
inline int legendre(const Int& a, const Int& p)
{
    if (p <= 2 || !is_prime(p)) throw InputError("legendre: " + p.get_str() + " is not an odd prime");
    Int r = a % p;
    if (r < 0) r += p;
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

/// Legendre symbol of a p-adic unit rational.
inline int legendre(const Rat& a, const Int& p)
{
    return legendre(num(a), p) * legendre(den(a), p);
}

/// x mod m for a rational whose denominator is coprime to m.
inline std::uint64_t reduce_mod(const Rat& x, std::uint64_t m)
{
    Int mm(std::to_string(m));
    Int d = den(x), inv;
    if (mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mm.get_mpz_t()) == 0) throw InputError("bad denominator");
    Int r = (num(x) * inv) % mm;
    if (r < 0) r += mm;
    return r.get_ui();
}

/// Exact rational square root, if any.
inline bool rational_sqrt(const Rat& x, Rat& root)
{
    if (x < 0) return false;
    if (x == 0) {
        root = 0;
        return true;
    }
    Int n = num(x), d = den(x);
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    root = make_rat(rn, rd);
    return true;
}

} // namespace qmkit

#endif // QMKIT_ARITH_HPP
