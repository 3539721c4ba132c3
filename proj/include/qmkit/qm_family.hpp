#ifndef QMKIT_QM_FAMILY_HPP
#define QMKIT_QM_FAMILY_HPP

// The family C_j of QM genus-2 curves: models, moduli fields, the class
// [c_{B_j}] and the strong-modularity analysis over a multiquadratic K.

#include <string>
#include <vector>

#include "brauer.hpp"
#include "cohomology.hpp"
#include "lfactor.hpp"
#include "twisted_algebra.hpp"

namespace qmkit {

struct JContext {
    Rat j;
    SquareClass m; // class of -6j
    Rat n16;       // 27j + 16
    Rat r;         // sqrt(-6j) = r * sqrt(m)
    bool assert_full_qm = true;

    explicit JContext(const Rat& jj, bool full_qm = true) : j(jj), assert_full_qm(full_qm)
    {
        if (j == 0) throw InputError("j = 0 is excluded");
        n16 = 27 * j + 16;
        if (n16 == 0) throw InputError("27j + 16 = 0 is excluded");
        m = SquareClass::of(Rat(-6 * j));
        if (m.is_trivial()) throw InputError("-6j is a square: Q(sqrt(-6j)) = Q is excluded");
        if (!rational_sqrt(Rat(-6 * j / Rat(m.rep())), r)) throw ConsistencyError("square class of -6j");
    }

    FieldPtr model_field() const { return make_field({m}); }
    MultiquadElem sqrt_minus_6j() const { return MultiquadElem::monomial(model_field(), 1, r); }
};

/// y^2 = F(x) over Q(sqrt(-6j)); see the README for the reading of the printed coefficients.
inline HyperellipticModel curve_model(const JContext& ctx)
{
    const FieldPtr k = ctx.model_field();
    const MultiquadElem s = ctx.sqrt_minus_6j();
    const MultiquadElem one(k, Rat(1));
    const Rat& n = ctx.n16;
    const Rat n2 = n * n, n3 = n2 * n;
    std::vector<MultiquadElem> c{
        (4 * one + 3 * s) * Rat(8 * n3),  // x^0
        MultiquadElem(k, Rat(-48 * n3)),  // x^1
        (28 * one - 9 * s) * Rat(12 * n2), // x^2
        MultiquadElem(k, Rat(-16 * n2)),  // x^3
        (28 * one + 9 * s) * Rat(-6 * n), // x^4
        MultiquadElem(k, Rat(-12 * n)),   // x^5
        -4 * one + 3 * s,                 // x^6
    };
    return HyperellipticModel(k, c);
}

struct ModuliFields {
    std::vector<SquareClass> k_Z, k_R2, k_R3, k_R6, k_O;
};

inline ModuliFields moduli_fields(const JContext& ctx)
{
    auto field_of = [](std::vector<Rat> xs) {
        SquareClassSpan span;
        for (const auto& x : xs) span.insert(SquareClass::of(x));
        return span.basis();
    };
    ModuliFields out;
    out.k_R2 = field_of({-ctx.n16});
    out.k_R6 = field_of({ctx.j});
    out.k_R3 = field_of({-ctx.j * ctx.n16});
    out.k_O = field_of({ctx.j, -ctx.n16});
    return out;
}

struct AbsoluteClass {
    BrauerClass2 sign;
    DegreeMap degree;
};

/// degree (-(27j+16),3)_P (-j(27j+16),2)_P; sign (-(27j+16),3)_Q (-j(27j+16),2)_Q (2,3)_Q.
inline AbsoluteClass absolute_class(const JContext& ctx)
{
    if (!ctx.assert_full_qm) throw InputError("absolute class requires End(B_j) = B_6 (assert_full_qm)");
    const Rat a = -ctx.n16, b = -ctx.j * ctx.n16;
    AbsoluteClass out;
    out.degree = DegreeMap({{SquareClass::of(a), SquareClass::of(3L)}, {SquareClass::of(b), SquareClass::of(2L)}});
    out.sign = quaternion_class(a, 3) * quaternion_class(b, 2) * quaternion_class(2, 3);
    return out;
}

struct CandidateReport {
    SignCoords coords;
    bool symmetric;
    std::string label;
    CocycleTable cocycle;
    std::vector<EtaleFactor> factors; // empty when not symmetric
    std::vector<FactorReport> restriction;
    std::string pattern;
};

struct AnalyzeReport {
    ModuliFields moduli;
    AbsoluteClass absolute;
    std::vector<SquareClass> K_P;
    MultiquadGroup group;
    std::vector<CandidateReport> candidates;
    VerdictReport verdict;
};

inline std::string candidate_label(const MultiquadGroup& g, const SignCoords& c)
{
    std::string s;
    const auto basis = sign_basis(g);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k]) s += (s.empty() ? "" : "*") + basis_elem_str(g, basis[k]);
    return s.empty() ? "1" : s;
}

inline AnalyzeReport analyze(const JContext& ctx, const MultiquadGroup& K)
{
    AnalyzeReport rep;
    rep.group = K;
    rep.moduli = moduli_fields(ctx);
    const SquareClassSpan span = K.field()->span();
    for (const auto& d : rep.moduli.k_O)
        if (!span.contains(d)) throw InputError("K too small: sqrt(" + d.str() + ") from k_O is not in K");
    if (!span.contains(ctx.m)) throw InputError("K too small: sqrt(-6j) = sqrt(" + ctx.m.str() + ") is not in K");

    rep.absolute = absolute_class(ctx);
    rep.K_P = degree_fixed_field(rep.absolute.degree);
    for (const auto& d : rep.K_P)
        if (!span.contains(d)) throw ConsistencyError("K_P is not contained in K");

    for (const auto& coords : candidates_over_K(rep.absolute.sign, K)) {
        CandidateReport c;
        c.coords = coords;
        c.symmetric = coords_symmetric(K, coords);
        c.label = candidate_label(K, coords);
        c.cocycle = representative(K, SignDegreeClass{coords, rep.absolute.degree});
        if (c.symmetric) {
            c.factors = decompose_commutative(build_algebra(c.cocycle));
            c.restriction = restriction_endomorphism_description(2, 3, c.factors);
            for (const auto& r : c.restriction)
                if (!r.splits)
                    throw ConsistencyError("symmetric class with a factor " + r.factor.str() + " that does not split (2,3)_Q");
            c.pattern = isogeny_pattern(c.restriction);
        }
        rep.candidates.push_back(std::move(c));
    }
    std::vector<SignCoords> coords;
    for (const auto& c : rep.candidates) coords.push_back(c.coords);
    rep.verdict = strongly_modular_verdict(K, coords);
    return rep;
}

// ---------------------------------------------------------------------------
// Splitting characters of B_{1/p}

inline unsigned ord2(Int n)
{
    unsigned e = 0;
    while (n != 0 && mpz_even_p(n.get_mpz_t())) {
        n >>= 1;
        ++e;
    }
    return e;
}

struct SplittingBound {
    Int bound;
    int symbols[3];
};

/// For p = 1 mod 2^r, p = -1 mod 3: verifies (-(27+16p)/p,3)_p = -1,
/// (-(27+16p),2)_p = 1, (2,3)_p = 1 and returns 2^ord_2(p-1).
inline SplittingBound splitting_order_bound(const Int& p, unsigned r)
{
    if (!is_prime(p) || p < 5) throw InputError("p must be a prime >= 5");
    if (r < 1) throw InputError("r must be positive");
    if ((p - 1) % ipow(Int(2), r) != 0) throw InputError("p is not 1 mod 2^" + std::to_string(r));
    if (p % 3 != 2) throw InputError("p ≢ -1 mod 3");
    const Place v = Place::prime(p);
    const Rat n = 27 + 16 * Rat(p);
    SplittingBound out;
    out.symbols[0] = hilbert_symbol(-n / Rat(p), 3, v);
    out.symbols[1] = hilbert_symbol(-n, 2, v);
    out.symbols[2] = hilbert_symbol(2, 3, v);
    if (out.symbols[0] != -1 || out.symbols[1] != 1 || out.symbols[2] != 1)
        throw ConsistencyError("local symbol triple differs from (-1, 1, 1)");
    out.bound = ipow(Int(2), ord2(p - 1));
    return out;
}

struct PrimeForOrder {
    Int p;
    Int degree_bound; // splitting fields have degree >= 2^r
    Int dim_bound;    // dim A >= phi(2^r) = 2^(r-1)
};

/// Least prime p = 1 mod 2^r with p = -1 mod 3.
inline PrimeForOrder find_prime_for_order(unsigned r)
{
    if (r < 2) throw InputError("r must be at least 2");
    if (r > 200) throw InputError("r too large");
    const Int m = ipow(Int(2), r);
    Int p = 1;
    while (p % 3 != 2) p += m;
    while (!is_prime(p)) p += 3 * m;
    return {p, m, m / 2};
}

} // namespace qmkit

#endif // QMKIT_QM_FAMILY_HPP
