#ifndef QMKIT_TWISTED_ALGEBRA_HPP
#define QMKIT_TWISTED_ALGEBRA_HPP

// Twisted group algebras Q^c[G] for G = (Z/2)^n: basis lambda_s with
// lambda_s lambda_t = c(s,t) lambda_{st}.

#include <string>
#include <vector>

#include "brauer.hpp"
#include "cohomology.hpp"
#include "multiquad.hpp"

namespace qmkit {

class TwistedAlgebra {
public:
    using Elem = std::vector<Rat>; // coordinates on lambda_s

    explicit TwistedAlgebra(CocycleTable c) : c_(std::move(c))
    {
        if (!c_.satisfies_cocycle_identity()) throw InputError("cocycle identity violated: algebra would not be associative");
    }

    const CocycleTable& cocycle() const { return c_; }
    const MultiquadGroup& group() const { return c_.group(); }
    unsigned dim() const { return group().order(); }

    Elem mul(const Elem& x, const Elem& y) const
    {
        Elem out(dim(), Rat(0));
        for (unsigned s = 0; s < dim(); ++s) {
            if (x[s] == 0) continue;
            for (unsigned t = 0; t < dim(); ++t)
                if (y[t] != 0) out[s ^ t] += x[s] * y[t] * c_(s, t);
        }
        return out;
    }

    Elem unit() const
    {
        // lambda_1 * lambda_1 = c(1,1) lambda_1, so the unit is lambda_1 / c(1,1)
        Elem e(dim(), Rat(0));
        e[0] = 1 / c_(0, 0);
        return e;
    }

    bool is_associative() const
    {
        for (unsigned s = 0; s < dim(); ++s)
            for (unsigned t = 0; t < dim(); ++t)
                for (unsigned u = 0; u < dim(); ++u) {
                    Elem a(dim(), Rat(0)), b(dim(), Rat(0)), d(dim(), Rat(0));
                    a[s] = b[t] = d[u] = 1;
                    if (mul(mul(a, b), d) != mul(a, mul(b, d))) return false;
                }
        return true;
    }

private:
    CocycleTable c_;
};

inline TwistedAlgebra build_algebra(const CocycleTable& c) { return TwistedAlgebra(c); }

inline bool is_commutative(const TwistedAlgebra& alg) { return is_symmetric(alg.cocycle()); }

struct EtaleFactor {
    std::vector<SquareClass> generators; // canonical basis of the square-class span
    unsigned multiplicity = 1;

    unsigned degree() const { return 1u << generators.size(); }
    std::string str() const
    {
        std::string s = generators.empty() ? "Q" : "Q(";
        for (std::size_t i = 0; i < generators.size(); ++i) s += (i ? ",sqrt" : "sqrt") + generators[i].str();
        if (!generators.empty()) s += ")";
        return multiplicity > 1 ? s + "^" + std::to_string(multiplicity) : s;
    }
};

/// Q^c[G] = Q[x_1..x_n]/(x_i^2 - q_i) with q_i = c(s_i,s_i)/c(1,1) when c is
/// symmetric, i.e. L^(2^(n-r)) with L = Q(sqrt q_i) of degree 2^r.
class CommutativeDecomposition {
public:
    explicit CommutativeDecomposition(const TwistedAlgebra& alg) : alg_(alg)
    {
        if (!is_commutative(alg)) throw InputError("decompose_commutative: algebra is not commutative");
        const auto& g = alg.group();
        const auto& c = alg.cocycle();
        SquareClassSpan span;
        for (unsigned i = 0; i < g.n(); ++i) {
            q_.push_back(c(1u << i, 1u << i) / c(0, 0));
            span.insert(SquareClass::of(q_.back()));
        }
        L_ = make_field(span.basis());
        factor_ = EtaleFactor{L_->gens(), 1u << (g.n() - span.rank())};

        // Work with c' = c / c(1,1); lambda_s -> c(1,1) lambda'_s is an isomorphism.
        // kappa(s): x_{i1} x_{i2} ... (bits in increasing order) = kappa(s) lambda'_s.
        const unsigned N = g.order();
        kappa_.assign(N, Rat(1));
        for (unsigned s = 1; s < N; ++s) {
            unsigned top = 31u - static_cast<unsigned>(__builtin_clz(s));
            unsigned prefix = s & ~(1u << top);
            kappa_[s] = kappa_[prefix] * normalized(prefix, 1u << top);
        }

        // one character per Galois orbit of sign vectors
        roots_.clear();
        for (unsigned i = 0; i < g.n(); ++i) {
            auto r = sqrt_in_field(MultiquadElem(L_, q_[i]));
            if (!r) throw ConsistencyError("q_i has no square root in the compositum");
            roots_.push_back(*r);
        }
        std::vector<std::vector<MultiquadElem>> seen;
        for (unsigned e = 0; e < (1u << g.n()); ++e) {
            std::vector<MultiquadElem> images;
            for (unsigned i = 0; i < g.n(); ++i) images.push_back((e >> i & 1u) ? -roots_[i] : roots_[i]);
            bool conj = false;
            for (const auto& prev : seen)
                for (unsigned sigma = 0; sigma < L_->dim() && !conj; ++sigma) {
                    bool same = true;
                    for (unsigned i = 0; i < g.n() && same; ++i) same = prev[i].apply(sigma) == images[i];
                    conj = same;
                }
            if (!conj) seen.push_back(images);
        }
        characters_ = std::move(seen);
        if (characters_.size() != factor_.multiplicity) throw ConsistencyError("orbit count does not match multiplicity");
    }

    const EtaleFactor& factor() const { return factor_; }
    std::vector<EtaleFactor> factors() const { return {factor_}; }
    const std::vector<Rat>& squares() const { return q_; }
    const FieldPtr& field() const { return L_; }

    /// The isomorphism Q^c[G] -> L^m.
    std::vector<MultiquadElem> operator()(const TwistedAlgebra::Elem& x) const
    {
        const unsigned N = alg_.dim();
        const Rat c11 = alg_.cocycle()(0, 0);
        std::vector<MultiquadElem> out;
        for (const auto& chi : characters_) {
            MultiquadElem v(L_, Rat(0));
            for (unsigned s = 0; s < N; ++s) {
                if (x[s] == 0) continue;
                // lambda_s = c(1,1) * lambda'_s, lambda'_s = x-monomial / kappa(s)
                MultiquadElem m(L_, x[s] * c11 / kappa_[s]);
                for (unsigned i = 0; i < alg_.group().n(); ++i)
                    if (s >> i & 1u) m = m * chi[i];
                v = v + m;
            }
            out.push_back(v);
        }
        return out;
    }

private:
    Rat normalized(unsigned s, unsigned t) const { return alg_.cocycle()(s, t) / alg_.cocycle()(0, 0); }

    TwistedAlgebra alg_;
    std::vector<Rat> q_;
    FieldPtr L_;
    EtaleFactor factor_;
    std::vector<Rat> kappa_;
    std::vector<MultiquadElem> roots_;
    std::vector<std::vector<MultiquadElem>> characters_;
};

inline std::vector<EtaleFactor> decompose_commutative(const TwistedAlgebra& alg)
{
    return CommutativeDecomposition(alg).factors();
}

inline bool same_field(const EtaleFactor& a, const EtaleFactor& b)
{
    return SquareClassSpan(a.generators) == SquareClassSpan(b.generators);
}

struct FactorReport {
    EtaleFactor factor;
    bool splits;
    unsigned matrix_size;
};

/// D (x) E_i for D = (a,b)_Q: M_2(E_i) when D is nontrivial and split by E_i;
/// matrix size 1 when D is trivial (E_i itself) or stays a division algebra.
inline std::vector<FactorReport> restriction_endomorphism_description(const Rat& a, const Rat& b,
                                                                      const std::vector<EtaleFactor>& factors)
{
    const BrauerClass2 D = quaternion_class(a, b);
    std::vector<FactorReport> out;
    for (const auto& f : factors) {
        bool splits = splits_over_multiquadratic(D, f.generators);
        out.push_back({f, splits, (!D.is_trivial() && splits) ? 2u : 1u});
    }
    return out;
}

/// "A ~ A_1^2 x A_2^2"-style pattern for split factors.
inline std::string isogeny_pattern(const std::vector<FactorReport>& reports)
{
    std::string s = "A ~";
    unsigned k = 0;
    for (const auto& r : reports)
        for (unsigned m = 0; m < r.factor.multiplicity; ++m) {
            s += (k ? " x A_" : " A_") + std::to_string(k + 1);
            ++k;
            if (r.matrix_size > 1) s += "^" + std::to_string(r.matrix_size);
        }
    std::string ends;
    for (const auto& r : reports) {
        EtaleFactor single = r.factor;
        single.multiplicity = 1;
        ends += (ends.empty() ? "" : ", ") + std::string("End(A_i) = ") + single.str();
    }
    return s + " with " + ends;
}

} // namespace qmkit

#endif // QMKIT_TWISTED_ALGEBRA_HPP
