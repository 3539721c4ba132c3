#ifndef QMKIT_FINITE_FIELD_HPP
#define QMKIT_FINITE_FIELD_HPP

// F_{p^f} for p < 2^31 and 1 <= f <= 4, elements as coefficient vectors
// modulo the lexicographically least monic irreducible of degree f.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "multiquad.hpp"
#include "quadratic.hpp"

namespace qmkit {

constexpr unsigned kMaxExtDegree = 4;

struct FqElem {
    std::array<std::uint64_t, kMaxExtDegree> c{};

    friend bool operator==(const FqElem& a, const FqElem& b) { return a.c == b.c; }
    friend bool operator!=(const FqElem& a, const FqElem& b) { return a.c != b.c; }
};

/// Canonical element order: lexicographic on (c0, c1, ...).
inline bool lex_less(const FqElem& a, const FqElem& b)
{
    for (unsigned i = 0; i < kMaxExtDegree; ++i)
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
}

namespace poly_fp {

using Poly = std::vector<std::uint64_t>; // low to high

inline void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p)
{
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p)
{
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t li = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        std::uint64_t t = a.back() * li % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + (p - t) * m[i]) % p;
        trim(a);
    }
    return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return mod(r, m, p);
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p)
{
    Poly r{1};
    base = mod(base, m, p);
    while (e) {
        if (e & 1) r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Rabin's test: x^(p^f) = x mod g and gcd(x^(p^(f/r)) - x, g) = 1 for primes r | f.
inline bool is_irreducible(const Poly& g, std::uint64_t p)
{
    const unsigned f = static_cast<unsigned>(g.size() - 1);
    if (f == 1) return true;
    std::vector<Poly> frob{mod(Poly{0, 1}, g, p)}; // x^(p^k)
    for (unsigned k = 1; k <= f; ++k) frob.push_back(powmod(frob.back(), p, g, p));
    auto minus_x = [&](Poly a) {
        a.resize(std::max<std::size_t>(a.size(), 2), 0);
        a[1] = (a[1] + p - 1) % p;
        trim(a);
        return a;
    };
    if (!minus_x(frob[f]).empty()) return false;
    for (unsigned r : {2u, 3u})
        if (f % r == 0) {
            Poly h = gcd(g, minus_x(frob[f / r]), p);
            if (h.size() != 1) return false;
        }
    return true;
}

} // namespace poly_fp

class Fq {
public:
    Fq() = default;

    /// Field of order p^f with the lexicographically least monic irreducible modulus.
    Fq(std::uint64_t p, unsigned f) : p_(p), f_(f)
    {
        if (f < 1 || f > kMaxExtDegree) throw InputError("finite field degree must be in 1..4");
        if (p < 3 || p >= (1ULL << 31)) throw InputError("finite field characteristic must be an odd prime < 2^31");
        if (!is_prime(p)) throw InputError("build_field: " + std::to_string(p) + " is not prime");
        q_ = 1;
        for (unsigned i = 0; i < f; ++i) q_ *= p;
        // enumerate monic polynomials by index sum c_i p^i, i < f
        poly_fp::Poly g(f + 1, 0);
        g[f] = 1;
        for (std::uint64_t idx = 0; idx < q_; ++idx) {
            std::uint64_t v = idx;
            for (unsigned i = 0; i < f; ++i) {
                g[i] = v % p;
                v /= p;
            }
            if (f > 1 && g[0] == 0) continue;
            if (poly_fp::is_irreducible(g, p)) break;
        }
        for (unsigned i = 0; i <= f; ++i) modulus_[i] = g[i];
    }

    std::uint64_t p() const { return p_; }
    unsigned f() const { return f_; }
    std::uint64_t q() const { return q_; }
    /// Modulus coefficients, low to high (monic, length f+1).
    std::vector<std::uint64_t> modulus() const { return {modulus_.begin(), modulus_.begin() + f_ + 1}; }

    FqElem zero() const { return {}; }
    FqElem one() const { return from_u64(1); }
    FqElem from_u64(std::uint64_t v) const
    {
        FqElem e;
        e.c[0] = v % p_;
        return e;
    }
    FqElem from_int(long long v) const
    {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += static_cast<long long>(p_);
        return from_u64(static_cast<std::uint64_t>(r));
    }
    /// Throws "bad denominator" when p divides the denominator.
    FqElem from_rat(const Rat& x) const { return from_u64(reduce_mod(x, p_)); }
    /// The class of x (the generator of the modulus).
    FqElem gen() const
    {
        FqElem e;
        if (f_ == 1) return from_u64((p_ - modulus_[0]) % p_);
        e.c[1] = 1;
        return e;
    }

    bool is_zero(const FqElem& a) const { return a == FqElem{}; }
    bool in_prime_field(const FqElem& a) const
    {
        for (unsigned i = 1; i < f_; ++i)
            if (a.c[i]) return false;
        return true;
    }

    FqElem add(const FqElem& a, const FqElem& b) const
    {
        FqElem r;
        for (unsigned i = 0; i < f_; ++i) {
            r.c[i] = a.c[i] + b.c[i];
            if (r.c[i] >= p_) r.c[i] -= p_;
        }
        return r;
    }
    FqElem neg(const FqElem& a) const
    {
        FqElem r;
        for (unsigned i = 0; i < f_; ++i) r.c[i] = a.c[i] ? p_ - a.c[i] : 0;
        return r;
    }
    FqElem sub(const FqElem& a, const FqElem& b) const { return add(a, neg(b)); }

    FqElem mul(const FqElem& a, const FqElem& b) const
    {
        if (f_ == 1) {
            FqElem r;
            r.c[0] = a.c[0] * b.c[0] % p_;
            return r;
        }
        std::uint64_t t[2 * kMaxExtDegree - 1] = {};
        for (unsigned i = 0; i < f_; ++i)
            for (unsigned j = 0; j < f_; ++j) t[i + j] += a.c[i] * b.c[j];
        for (unsigned k = 0; k + 1 < 2 * f_; ++k) t[k] %= p_;
        for (unsigned k = 2 * f_ - 2; k >= f_; --k) {
            const std::uint64_t lead = t[k];
            if (!lead) continue;
            for (unsigned i = 0; i < f_; ++i) t[k - f_ + i] = (t[k - f_ + i] + lead * (p_ - modulus_[i])) % p_;
        }
        FqElem r;
        for (unsigned i = 0; i < f_; ++i) r.c[i] = t[i];
        return r;
    }
    FqElem scale(const FqElem& a, std::uint64_t s) const
    {
        FqElem r;
        for (unsigned i = 0; i < f_; ++i) r.c[i] = a.c[i] * (s % p_) % p_;
        return r;
    }

    FqElem pow(FqElem base, const Int& e) const
    {
        if (e < 0) return pow(inv(base), Int(-e));
        FqElem r = one();
        const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            r = mul(r, r);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, base);
        }
        return r;
    }
    FqElem pow(const FqElem& base, std::uint64_t e) const { return pow(base, Int(std::to_string(e))); }

    FqElem inv(const FqElem& a) const
    {
        if (is_zero(a)) throw InputError("inverse of zero in F_q");
        return pow(a, Int(std::to_string(q_)) - 2);
    }

    FqElem frobenius(const FqElem& a) const { return pow(a, p_); }

    /// Euler's criterion; zero counts as a square.
    bool is_square(const FqElem& a) const
    {
        if (is_zero(a)) return true;
        return pow(a, (Int(std::to_string(q_)) - 1) / 2) == one();
    }

    /// A square root (lexicographically least of the two), if a is a square.
    std::optional<FqElem> sqrt(const FqElem& a) const
    {
        return q_ <= 10000 ? sqrt_exhaustive(a) : sqrt_tonelli_shanks(a);
    }

    std::optional<FqElem> sqrt_exhaustive(const FqElem& a) const
    {
        std::optional<FqElem> best;
        for (std::uint64_t idx = 0; idx < q_; ++idx) {
            FqElem x = element(idx);
            if (mul(x, x) == a && (!best || lex_less(x, *best))) best = x;
        }
        return best;
    }

    std::optional<FqElem> sqrt_tonelli_shanks(const FqElem& a) const
    {
        if (is_zero(a)) return zero();
        if (!is_square(a)) return std::nullopt;
        Int t = Int(std::to_string(q_)) - 1;
        unsigned s = 0;
        while (mpz_even_p(t.get_mpz_t())) {
            t >>= 1;
            ++s;
        }
        FqElem z;
        for (std::uint64_t idx = 2;; ++idx) {
            z = element(idx);
            if (!is_square(z)) break;
        }
        unsigned m = s;
        FqElem c = pow(z, t), tt = pow(a, t), r = pow(a, Int((t + 1) / 2));
        while (tt != one()) {
            unsigned i = 0;
            for (FqElem x = tt; x != one(); x = mul(x, x)) ++i;
            FqElem b = c;
            for (unsigned k = 0; k + i + 1 < m; ++k) b = mul(b, b);
            r = mul(r, b);
            c = mul(b, b);
            tt = mul(tt, c);
            m = i;
        }
        FqElem other = neg(r);
        return lex_less(other, r) ? other : r;
    }

    std::uint64_t index(const FqElem& a) const
    {
        std::uint64_t idx = 0;
        for (unsigned i = f_; i-- > 0;) idx = idx * p_ + a.c[i];
        return idx;
    }
    FqElem element(std::uint64_t idx) const
    {
        FqElem e;
        for (unsigned i = 0; i < f_; ++i) {
            e.c[i] = idx % p_;
            idx /= p_;
        }
        return e;
    }

    std::string str(const FqElem& a) const
    {
        std::string s = "[";
        for (unsigned i = 0; i < f_; ++i) s += (i ? "," : "") + std::to_string(a.c[i]);
        return s + "]";
    }

    friend bool operator==(const Fq& a, const Fq& b) { return a.p_ == b.p_ && a.f_ == b.f_ && a.modulus_ == b.modulus_; }

private:
    std::uint64_t p_ = 0;
    unsigned f_ = 0;
    std::uint64_t q_ = 0;
    std::array<std::uint64_t, kMaxExtDegree + 1> modulus_{};
};

inline Fq build_field(std::uint64_t p, unsigned f) { return Fq(p, f); }

inline std::optional<FqElem> sqrt_in_fq(const Fq& field, const FqElem& a) { return field.sqrt(a); }

/// Inclusion F_{p^e} -> F_{p^k} (e | k), determined by a root of the small modulus.
class FqEmbedding {
public:
    FqEmbedding(const Fq& small, const Fq& big) : small_(small), big_(big)
    {
        if (small.p() != big.p() || big.f() % small.f() != 0) throw InputError("no embedding between these fields");
        const auto m = small.modulus();
        if (small.f() == 1) {
            theta_ = big.zero();
        } else if (small.f() == 2) {
            // root of x^2 + m1 x + m0
            FqElem m1 = big.from_u64(m[1]), m0 = big.from_u64(m[0]);
            FqElem disc = big.sub(big.mul(m1, m1), big.scale(m0, 4));
            auto r = big.sqrt(disc);
            if (!r) throw ConsistencyError("modulus has no root in the extension");
            FqElem half = big.inv(big.from_u64(2));
            theta_ = big.mul(big.sub(*r, m1), half);
        } else if (small.f() == big.f()) {
            theta_ = big.gen();
        } else {
            throw InputError("field embedding supported only from degree 1 or 2");
        }
        powers_[0] = big.one();
        for (unsigned i = 1; i < kMaxExtDegree; ++i) powers_[i] = big.mul(powers_[i - 1], theta_);
    }

    FqElem operator()(const FqElem& a) const
    {
        FqElem out = big_.zero();
        for (unsigned i = 0; i < small_.f(); ++i)
            if (a.c[i]) out = big_.add(out, big_.scale(powers_[i], a.c[i]));
        return out;
    }

    const Fq& big() const { return big_; }

private:
    Fq small_, big_;
    FqElem theta_;
    std::array<FqElem, kMaxExtDegree> powers_;
};

// ---------------------------------------------------------------------------
// Reduction maps

/// Q(sqrt m) -> F_q determined by the image of sqrt(m).
struct ReductionMap {
    SquareClass m;
    Fq target;
    FqElem image_of_sqrt_m;
};

/// The reduction maps of Q(sqrt m) at p: two maps into F_p ordered by image when p splits,
/// one map into F_{p^2} (lexicographically least root) when p is inert.
inline std::vector<ReductionMap> reduction_maps(const SquareClass& m, std::uint64_t p)
{
    Int pp(std::to_string(p));
    if (mpz_divisible_p(m.rep().get_mpz_t(), pp.get_mpz_t()) || p == 2) throw InputError("ramified prime");
    int ls = legendre(m.rep(), pp);
    Fq field(p, ls == 1 ? 1 : 2);
    auto r = field.sqrt(field.from_rat(Rat(m.rep())));
    if (!r) throw ConsistencyError("no square root of m in the residue field");
    if (ls == 1) {
        FqElem a = *r, b = field.neg(*r);
        if (lex_less(b, a)) std::swap(a, b);
        return {{m, field, a}, {m, field, b}};
    }
    return {{m, field, *r}};
}

inline FqElem reduce_quad(const QuadElem& x, const ReductionMap& map)
{
    if (x.m != map.m) throw InputError("reduce_quad: element and map over different fields");
    const Fq& F = map.target;
    return F.add(F.from_rat(x.a), F.mul(F.from_rat(x.b), map.image_of_sqrt_m));
}

/// Multiquadratic field -> F_q, fixed by the images of the generator square roots.
class MultiquadReduction {
public:
    MultiquadReduction(FieldPtr field, Fq target, std::vector<FqElem> gen_images)
        : field_(std::move(field)), target_(std::move(target)), gen_images_(std::move(gen_images))
    {
        if (gen_images_.size() != field_->n()) throw InputError("reduction: wrong number of generator images");
        for (unsigned i = 0; i < field_->n(); ++i) {
            FqElem sq = target_.mul(gen_images_[i], gen_images_[i]);
            if (sq != target_.from_rat(Rat(field_->gens()[i].rep())))
                throw ConsistencyError("reduction: generator image does not square to d");
        }
        mono_.assign(field_->dim(), target_.one());
        for (unsigned mask = 1; mask < field_->dim(); ++mask) {
            unsigned low = __builtin_ctz(mask);
            mono_[mask] = target_.mul(mono_[mask & (mask - 1)], gen_images_[low]);
        }
    }

    FqElem operator()(const MultiquadElem& x) const
    {
        if (!(*x.field() == *field_)) throw InputError("reduction applied to an element of the wrong field");
        FqElem out = target_.zero();
        for (unsigned mask = 0; mask < field_->dim(); ++mask)
            if (x[mask] != 0) out = target_.add(out, target_.mul(target_.from_rat(x[mask]), mono_[mask]));
        return out;
    }

    const Fq& target() const { return target_; }
    const FieldPtr& field() const { return field_; }
    const std::vector<FqElem>& gen_images() const { return gen_images_; }

private:
    FieldPtr field_;
    Fq target_;
    std::vector<FqElem> gen_images_;
    std::vector<FqElem> mono_;
};

// ---------------------------------------------------------------------------
// Small polynomials over F_q (low to high)

using FqPoly = std::vector<FqElem>;

inline void trim(const Fq& F, FqPoly& a)
{
    while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

inline FqPoly poly_mod(const Fq& F, FqPoly a, const FqPoly& m)
{
    trim(F, a);
    const FqElem li = F.inv(m.back());
    while (a.size() >= m.size()) {
        FqElem t = F.mul(a.back(), li);
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(t, m[i]));
        trim(F, a);
    }
    return a;
}

inline FqPoly poly_gcd(const Fq& F, FqPoly a, FqPoly b)
{
    trim(F, a);
    trim(F, b);
    while (!b.empty()) {
        FqPoly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline FqPoly poly_derivative(const Fq& F, const FqPoly& a)
{
    FqPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(F.scale(a[i], i));
    trim(F, d);
    return d;
}

/// Squarefree (no repeated root over the algebraic closure).
inline bool poly_squarefree(const Fq& F, FqPoly a)
{
    trim(F, a);
    if (a.size() <= 1) return true;
    return poly_gcd(F, a, poly_derivative(F, a)).size() == 1;
}

inline FqElem poly_eval(const Fq& F, const FqPoly& a, const FqElem& x)
{
    FqElem v = F.zero();
    for (std::size_t i = a.size(); i-- > 0;) v = F.add(F.mul(v, x), a[i]);
    return v;
}

} // namespace qmkit

#endif // QMKIT_FINITE_FIELD_HPP
