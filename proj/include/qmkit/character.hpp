#ifndef QMKIT_CHARACTER_HPP
#define QMKIT_CHARACTER_HPP

// Dirichlet characters of finite order with values in the roots of unity
// mu_ord, stored as an exponent table over residues mod N.

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "multiquad.hpp"

namespace qmkit {

class DirichletCharacter {
public:
    /// The trivial character mod 1.
    DirichletCharacter() : modulus_(1), order_(1), exp_{0} {}

    /// Character mod N of order dividing `order`, given by chi(g) = zeta^k on
    /// generators; extended multiplicatively. Throws if the data is inconsistent
    /// or does not generate (Z/N)*.
    DirichletCharacter(std::uint64_t modulus, unsigned order, const std::vector<std::pair<std::uint64_t, unsigned>>& gens)
        : modulus_(modulus), order_(order), exp_(modulus, -1)
    {
        if (modulus == 0 || order == 0) throw InputError("Dirichlet character: modulus and order must be positive");
        exp_[1 % modulus] = 0;
        std::vector<std::uint64_t> frontier{1 % modulus};
        // closure: multiply every reached residue by every generator
        while (!frontier.empty()) {
            std::vector<std::uint64_t> next;
            for (auto x : frontier)
                for (const auto& [g, k] : gens) {
                    if (std::gcd(g, modulus) != 1) throw InputError("Dirichlet character: generator not a unit");
                    std::uint64_t y = x * (g % modulus) % modulus;
                    int e = static_cast<int>((exp_[x] + k) % order);
                    if (exp_[y] < 0) {
                        exp_[y] = e;
                        next.push_back(y);
                    } else if (exp_[y] != e) {
                        throw InputError("Dirichlet character: generator values are not multiplicative");
                    }
                }
            frontier = std::move(next);
        }
        for (std::uint64_t a = 0; a < modulus; ++a)
            if (std::gcd(a, modulus) == 1 && exp_[a] < 0)
                throw InputError("Dirichlet character: generators do not span (Z/N)*");
    }

    /// Quadratic character of Q(sqrt d): a -> (disc/a), with disc the field discriminant.
    static DirichletCharacter quadratic(const SquareClass& d)
    {
        if (d.is_trivial()) return {};
        Int disc = d.rep();
        Int r = disc % 4;
        if (r < 0) r += 4;
        if (r != 1) disc *= 4;
        const std::uint64_t n = Int(abs(disc)).get_ui();
        DirichletCharacter chi;
        chi.modulus_ = n;
        chi.order_ = 2;
        chi.exp_.assign(n, -1);
        for (std::uint64_t a = 1; a < n; ++a)
            if (std::gcd(a, n) == 1) {
                Int aa(std::to_string(a));
                chi.exp_[a] = mpz_kronecker(disc.get_mpz_t(), aa.get_mpz_t()) == 1 ? 0 : 1;
            }
        return chi;
    }

    std::uint64_t modulus() const { return modulus_; }
    unsigned order() const { return order_; }

    /// Exponent k with chi(a) = zeta_order^k, or -1 when gcd(a, N) > 1.
    int exponent(const Int& a) const
    {
        Int r = a % Int(std::to_string(modulus_));
        if (r < 0) r += Int(std::to_string(modulus_));
        return exp_[r.get_ui()];
    }
    int exponent(long long a) const { return exponent(Int(std::to_string(a))); }

    /// chi(a) as a sign; only for values in {+-1}.
    int sign(const Int& a) const
    {
        int e = exponent(a);
        if (e < 0) return 0;
        if ((2 * e) % order_ != 0) throw InputError("character value is not real");
        return e == 0 ? 1 : -1;
    }
    int sign(long long a) const { return sign(Int(std::to_string(a))); }

    /// chi(a) inside a multiquadratic field containing the values (order | 4).
    MultiquadElem value_in(const Int& a, const FieldPtr& field) const
    {
        int e = exponent(a);
        if (e < 0) return MultiquadElem(field, Rat(0));
        if (4 % order_ != 0) throw InputError("character values outside Q(i)");
        const unsigned k = static_cast<unsigned>(e) * (4 / order_) % 4; // as a power of i
        if (k % 2 == 0) return MultiquadElem(field, Rat(k == 0 ? 1 : -1));
        MultiquadElem i = from_quad(QuadElem::sqrt_of(SquareClass::of(-1)), field);
        return k == 1 ? i : -i;
    }

    /// The p-component evaluated at -1: chi(y) with y = -1 mod p^e, y = 1 mod N/p^e.
    int local_sign_at_minus_one(const Int& p) const
    {
        Int N(std::to_string(modulus_)), pe = 1;
        while (mpz_divisible_p(N.get_mpz_t(), Int(pe * p).get_mpz_t())) pe *= p;
        if (pe == 1) return 1;
        Int rest = N / pe, y;
        // y = -1 + pe * t with pe*t = 2 mod rest
        Int inv;
        if (rest == 1) {
            y = -1;
        } else {
            mpz_invert(inv.get_mpz_t(), pe.get_mpz_t(), rest.get_mpz_t());
            Int t = (inv * 2) % rest;
            y = -1 + pe * t;
        }
        return sign(y);
    }

    /// Product of two characters (common modulus lcm, common order lcm).
    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b)
    {
        DirichletCharacter out;
        out.modulus_ = std::lcm(a.modulus_, b.modulus_);
        out.order_ = std::lcm(a.order_, b.order_);
        out.exp_.assign(out.modulus_, -1);
        for (std::uint64_t x = 0; x < out.modulus_; ++x) {
            if (std::gcd(x, out.modulus_) != 1) continue;
            int ea = a.exp_[x % a.modulus_], eb = b.exp_[x % b.modulus_];
            out.exp_[x] = static_cast<int>((ea * (out.order_ / a.order_) + eb * (out.order_ / b.order_)) % out.order_);
        }
        if (out.modulus_ == 1) out.exp_[0] = 0;
        return out;
    }

    bool is_trivial() const
    {
        for (int e : exp_)
            if (e > 0) return false;
        return true;
    }

private:
    std::uint64_t modulus_;
    unsigned order_;
    std::vector<int> exp_;
};

/// epsilon: conductor 8, eps(3) = eps(5) = -1.
inline DirichletCharacter character_epsilon() { return DirichletCharacter(8, 2, {{3, 1}, {5, 1}}); }

/// psi: conductor 16, order 4, psi(3) = -i, psi(5) = i.
inline DirichletCharacter character_psi() { return DirichletCharacter(16, 4, {{3, 3}, {5, 1}}); }

} // namespace qmkit

#endif // QMKIT_CHARACTER_HPP
