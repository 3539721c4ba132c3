#ifndef QMKIT_COHOMOLOGY_HPP
#define QMKIT_COHOMOLOGY_HPP

// 2-cocycles with trivial action on Gal(K/Q) = (Z/2)^n, K multiquadratic,
// stored as explicit |G| x |G| tables. Elements of G are bitmasks: bit i set
// means sqrt(d_i) is negated.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brauer.hpp"
#include "multiquad.hpp"

namespace qmkit {

class MultiquadGroup {
public:
    MultiquadGroup() : field_(rational_field()) {}
    explicit MultiquadGroup(std::vector<SquareClass> gens) : field_(make_field(std::move(gens)))
    {
        if (field_->n() > 3) throw InputError("cocycle computations support at most 3 generators");
    }
    explicit MultiquadGroup(FieldPtr field) : field_(std::move(field))
    {
        if (field_->n() > 3) throw InputError("cocycle computations support at most 3 generators");
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<SquareClass>& gens() const { return field_->gens(); }
    unsigned n() const { return field_->n(); }
    unsigned order() const { return field_->dim(); }

    /// Exponent vector of d over the generators; throws if sqrt(d) is not in K.
    unsigned exponents(const SquareClass& d) const
    {
        auto e = express_in(gens(), d);
        if (!e) throw InputError("sqrt(" + d.str() + ") is not in " + field_->str());
        return *e;
    }

    /// Whether s negates sqrt(d) (d given by its exponent vector).
    static bool flips(unsigned s, unsigned e) { return __builtin_popcount(s & e) & 1; }

    std::string element_str(unsigned s) const
    {
        if (s == 0) return "id";
        std::string out;
        for (unsigned i = 0; i < n(); ++i)
            if (s >> i & 1u) out += (out.empty() ? "flip sqrt" : "*flip sqrt") + gens()[i].str();
        return out;
    }

private:
    FieldPtr field_;
};

class CocycleTable {
public:
    CocycleTable() = default;
    CocycleTable(MultiquadGroup g, std::vector<Rat> values) : group_(std::move(g)), v_(std::move(values))
    {
        if (v_.size() != group_.order() * group_.order()) throw InputError("cocycle table: wrong size");
        for (const auto& x : v_)
            if (x == 0) throw InputError("cocycle table: zero value");
    }
    static CocycleTable trivial(const MultiquadGroup& g) { return CocycleTable(g, std::vector<Rat>(g.order() * g.order(), Rat(1))); }

    const MultiquadGroup& group() const { return group_; }
    const Rat& operator()(unsigned s, unsigned t) const { return v_[s * group_.order() + t]; }
    Rat& at(unsigned s, unsigned t) { return v_[s * group_.order() + t]; }
    const std::vector<Rat>& values() const { return v_; }

    /// c(s,t) c(st,u) = c(t,u) c(s,tu) on all triples.
    bool satisfies_cocycle_identity() const
    {
        const unsigned N = group_.order();
        for (unsigned s = 0; s < N; ++s)
            for (unsigned t = 0; t < N; ++t)
                for (unsigned u = 0; u < N; ++u)
                    if ((*this)(s, t) * (*this)(s ^ t, u) != (*this)(t, u) * (*this)(s, t ^ u)) return false;
        return true;
    }

    bool is_normalized() const
    {
        for (unsigned s = 0; s < group_.order(); ++s)
            if ((*this)(0, s) != 1 || (*this)(s, 0) != 1) return false;
        return true;
    }

    friend CocycleTable operator*(const CocycleTable& a, const CocycleTable& b)
    {
        if (!(*a.group_.field() == *b.group_.field())) throw InputError("cocycles on different groups");
        CocycleTable out = a;
        for (std::size_t i = 0; i < out.v_.size(); ++i) out.v_[i] *= b.v_[i];
        return out;
    }

private:
    MultiquadGroup group_;
    std::vector<Rat> v_;
};

inline bool is_symmetric(const CocycleTable& c)
{
    const unsigned N = c.group().order();
    for (unsigned s = 0; s < N; ++s)
        for (unsigned t = s + 1; t < N; ++t)
            if (c(s, t) != c(t, s)) return false;
    return true;
}

/// c_{a,b}(s,t) = -1 iff s negates sqrt a and t negates sqrt b.
inline CocycleTable cup_cocycle(const MultiquadGroup& g, const SquareClass& a, const SquareClass& b)
{
    const unsigned ea = g.exponents(a), eb = g.exponents(b);
    CocycleTable c = CocycleTable::trivial(g);
    for (unsigned s = 0; s < g.order(); ++s)
        for (unsigned t = 0; t < g.order(); ++t)
            if (MultiquadGroup::flips(s, ea) && MultiquadGroup::flips(t, eb)) c.at(s, t) = -1;
    return c;
}

/// c_{eps_d}: obstruction to a square root of the quadratic character of Q(sqrt d).
inline CocycleTable char_sqrt_cocycle(const MultiquadGroup& g, const SquareClass& d) { return cup_cocycle(g, d, d); }

/// Coboundary of alpha: G -> Q*, (s,t) -> alpha(s) alpha(t) / alpha(st).
inline CocycleTable coboundary(const MultiquadGroup& g, const std::vector<Rat>& alpha)
{
    if (alpha.size() != g.order()) throw InputError("coboundary: wrong cochain size");
    CocycleTable c = CocycleTable::trivial(g);
    for (unsigned s = 0; s < g.order(); ++s)
        for (unsigned t = 0; t < g.order(); ++t) c.at(s, t) = alpha[s] * alpha[t] / alpha[s ^ t];
    return c;
}

// ---------------------------------------------------------------------------
// The basis of H^2(G, {+-1}): c_{eps_{d_i}} for each generator, then c_{d_i,d_j} for i < j.

struct SignBasisElem {
    unsigned i, j; // i == j: c_{eps_{d_i}}
};

inline std::vector<SignBasisElem> sign_basis(const MultiquadGroup& g)
{
    std::vector<SignBasisElem> out;
    for (unsigned i = 0; i < g.n(); ++i) out.push_back({i, i});
    for (unsigned i = 0; i < g.n(); ++i)
        for (unsigned j = i + 1; j < g.n(); ++j) out.push_back({i, j});
    return out;
}

using SignCoords = std::vector<int>; // entries 0/1 in sign_basis order

inline std::string coords_str(const SignCoords& c)
{
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + ")";
}

inline std::string basis_elem_str(const MultiquadGroup& g, const SignBasisElem& e)
{
    if (e.i == e.j) return "c_eps(" + g.gens()[e.i].str() + ")";
    return "c(" + g.gens()[e.i].str() + "," + g.gens()[e.j].str() + ")";
}

inline CocycleTable sign_cocycle(const MultiquadGroup& g, const SignCoords& coords)
{
    const auto basis = sign_basis(g);
    if (coords.size() != basis.size()) throw InputError("sign coordinates: expected " + std::to_string(basis.size()) + " entries");
    CocycleTable c = CocycleTable::trivial(g);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (coords[k]) c = c * cup_cocycle(g, g.gens()[basis[k].i], g.gens()[basis[k].j]);
    return c;
}

inline std::vector<SignCoords> all_sign_coords(const MultiquadGroup& g)
{
    const std::size_t k = sign_basis(g).size();
    std::vector<SignCoords> out;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        SignCoords c(k);
        for (std::size_t i = 0; i < k; ++i) c[i] = mask >> i & 1u;
        out.push_back(c);
    }
    return out;
}

namespace detail {

/// Tables of all {+-1}-valued coboundaries, encoded as bitsets of -1 entries.
inline std::set<std::vector<bool>> sign_coboundaries(const MultiquadGroup& g)
{
    std::set<std::vector<bool>> out;
    const unsigned N = g.order();
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
        std::vector<bool> tab(N * N);
        for (unsigned s = 0; s < N; ++s)
            for (unsigned t = 0; t < N; ++t)
                tab[s * N + t] = ((mask >> s) ^ (mask >> t) ^ (mask >> (s ^ t))) & 1u;
        out.insert(tab);
    }
    return out;
}

inline std::vector<bool> sign_pattern(const CocycleTable& c)
{
    std::vector<bool> out;
    for (const auto& v : c.values()) {
        if (v != 1 && v != -1) throw InputError("expected a {+-1}-valued cocycle");
        out.push_back(v == -1);
    }
    return out;
}

} // namespace detail

/// Coordinates of a {+-1}-valued cocycle by brute-force coboundary matching.
inline SignCoords sign_coordinates(const CocycleTable& c)
{
    const auto& g = c.group();
    if (!c.satisfies_cocycle_identity()) throw InputError("table violates the cocycle identity");
    const auto cob = detail::sign_coboundaries(g);
    const auto target = detail::sign_pattern(c);
    for (const auto& coords : all_sign_coords(g)) {
        auto base = detail::sign_pattern(sign_cocycle(g, coords));
        std::vector<bool> diff(target.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = target[i] != base[i];
        if (cob.count(diff)) return coords;
    }
    throw ConsistencyError("sign cocycle is not cohomologous to any basis combination");
}

/// Inf to Br_2(Q): (d,-1) for each c_{eps_d}, (a,b) for each c_{a,b}.
inline BrauerClass2 inflate_sign_to_brauer(const MultiquadGroup& g, const SignCoords& coords)
{
    const auto basis = sign_basis(g);
    if (coords.size() != basis.size()) throw InputError("sign coordinates: wrong length");
    BrauerClass2 out;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (!coords[k]) continue;
        const Rat a(g.gens()[basis[k].i].rep());
        const Rat b = basis[k].i == basis[k].j ? Rat(-1) : Rat(g.gens()[basis[k].j].rep());
        out *= quaternion_class(a, b);
    }
    return out;
}

/// Symmetric iff no cup coordinate is set.
inline bool coords_symmetric(const MultiquadGroup& g, const SignCoords& coords)
{
    const auto basis = sign_basis(g);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (coords[k] && basis[k].i != basis[k].j) return false;
    return true;
}

/// All sign classes over K inflating to the given absolute class.
inline std::vector<SignCoords> candidates_over_K(const BrauerClass2& absolute_sign, const MultiquadGroup& g)
{
    std::vector<SignCoords> out;
    for (const auto& c : all_sign_coords(g))
        if (inflate_sign_to_brauer(g, c) == absolute_sign) out.push_back(c);
    return out;
}

enum class Verdict { yes, no, conditional };

inline std::string verdict_str(Verdict v)
{
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "conditional";
    }
}

struct VerdictReport {
    Verdict verdict;
    std::string diagnostic;
};

inline VerdictReport strongly_modular_verdict(const MultiquadGroup& g, const std::vector<SignCoords>& candidates)
{
    if (candidates.empty())
        return {Verdict::no, "no sign class over K inflates to the absolute class: K is not a field of complete definition"};
    std::size_t sym = 0;
    for (const auto& c : candidates) sym += coords_symmetric(g, c);
    if (sym == candidates.size()) return {Verdict::yes, "every candidate class is symmetric"};
    if (sym == 0) return {Verdict::no, "no candidate class is symmetric"};
    return {Verdict::conditional, "symmetric and non-symmetric candidates both occur; L-factor data must select the class"};
}

// ---------------------------------------------------------------------------
// Degree components

/// Canonical formal product of (t,d)_P symbols: the morphism sending sigma to
/// the product of the d with sigma(sqrt t) = -sqrt t, modulo +-squares.
class DegreeMap {
public:
    struct Term {
        SquareClass t;
        SquareClass d; // positive squarefree
    };

    DegreeMap() = default;
    explicit DegreeMap(const std::vector<std::pair<SquareClass, SquareClass>>& raw)
    {
        // per prime q: the character whose kernel fixes sqrt(t_q)
        std::map<Int, SquareClass> tq;
        for (const auto& [t, d] : raw)
            for (const auto& q : d.mod_sign().atoms()) tq[q] *= t;
        std::map<Int, Int> grouped; // t rep -> product of primes
        for (const auto& [q, t] : tq) {
            if (t.is_trivial()) continue;
            auto it = grouped.emplace(t.rep(), Int(1)).first;
            it->second *= q;
        }
        for (const auto& [t, d] : grouped) terms_.push_back({SquareClass::of(Rat(t)), SquareClass::of(Rat(d))});
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.t < b.t; });
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_trivial() const { return terms_.empty(); }

    /// Image (positive squarefree class) of the automorphism s of K.
    SquareClass evaluate(const MultiquadGroup& g, unsigned s) const
    {
        SquareClass out;
        for (const auto& term : terms_)
            if (MultiquadGroup::flips(s, g.exponents(term.t))) out *= term.d;
        return out;
    }

    friend DegreeMap operator*(const DegreeMap& a, const DegreeMap& b)
    {
        std::vector<std::pair<SquareClass, SquareClass>> raw;
        for (const auto& t : a.terms_) raw.emplace_back(t.t, t.d);
        for (const auto& t : b.terms_) raw.emplace_back(t.t, t.d);
        return DegreeMap(raw);
    }

    friend bool operator==(const DegreeMap& a, const DegreeMap& b)
    {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].t != b.terms_[i].t || a.terms_[i].d != b.terms_[i].d) return false;
        return true;
    }

    std::string str() const
    {
        if (terms_.empty()) return "1";
        std::string s;
        for (const auto& t : terms_) s += (s.empty() ? "" : "*") + std::string("(") + t.t.str() + "," + t.d.str() + ")_P";
        return s;
    }

private:
    std::vector<Term> terms_;
};

/// Generators of K_P, the field cut out by the kernel of the degree component.
inline std::vector<SquareClass> degree_fixed_field(const DegreeMap& d)
{
    SquareClassSpan span;
    for (const auto& t : d.terms()) span.insert(t.t);
    return span.basis();
}

/// Positive cocycle representing a degree map on G: for (t,D), value D iff both arguments negate sqrt t.
inline CocycleTable degree_cocycle(const MultiquadGroup& g, const DegreeMap& d)
{
    CocycleTable c = CocycleTable::trivial(g);
    for (const auto& term : d.terms()) {
        const unsigned e = g.exponents(term.t);
        for (unsigned s = 0; s < g.order(); ++s)
            for (unsigned t = 0; t < g.order(); ++t)
                if (MultiquadGroup::flips(s, e) && MultiquadGroup::flips(t, e)) c.at(s, t) *= Rat(term.d.rep());
    }
    return c;
}

struct SignDegreeClass {
    SignCoords sign;      // over K
    DegreeMap degree;
};

inline CocycleTable representative(const MultiquadGroup& g, const SignDegreeClass& cls)
{
    return sign_cocycle(g, cls.sign) * degree_cocycle(g, cls.degree);
}

namespace detail {

/// alpha with c = d(alpha), if c is a coboundary (alpha(s)^2 = c(s,s) up to normalization).
inline std::optional<std::vector<Rat>> solve_coboundary(const CocycleTable& c)
{
    const auto& g = c.group();
    const unsigned N = g.order();
    std::vector<Rat> root(N);
    for (unsigned s = 0; s < N; ++s) {
        // c = d(alpha) with alpha(1) = c(1,1) gives c(s,s) = alpha(s)^2 / alpha(1)
        if (!rational_sqrt(c(s, s) * c(0, 0), root[s])) return std::nullopt;
    }
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
        std::vector<Rat> alpha(N);
        for (unsigned s = 0; s < N; ++s) alpha[s] = (mask >> s & 1u) ? Rat(-root[s]) : root[s];
        bool ok = true;
        for (unsigned s = 0; s < N && ok; ++s)
            for (unsigned t = 0; t < N && ok; ++t) ok = alpha[s] * alpha[t] / alpha[s ^ t] == c(s, t);
        if (ok) return alpha;
    }
    return std::nullopt;
}

} // namespace detail

/// Splits a 2-torsion class into sign coordinates and degree map; verifies that
/// c is cohomologous to representative(result).
inline SignDegreeClass class_decompose(const CocycleTable& c)
{
    const auto& g = c.group();
    if (!c.satisfies_cocycle_identity()) throw InputError("table violates the cocycle identity");
    const unsigned N = g.order();

    CocycleTable sgn = CocycleTable::trivial(g);
    for (unsigned s = 0; s < N; ++s)
        for (unsigned t = 0; t < N; ++t) sgn.at(s, t) = c(s, t) < 0 ? -1 : 1;

    // degree: s -> |c(s,s)| mod squares, read per prime as a character of G
    const Rat c11 = abs(c(0, 0));
    std::vector<SquareClass> diag(N);
    std::set<Int> primes;
    for (unsigned s = 0; s < N; ++s) {
        diag[s] = SquareClass::of(Rat(abs(c(s, s)) / c11));
        for (const auto& q : diag[s].atoms()) primes.insert(q);
    }
    std::vector<std::pair<SquareClass, SquareClass>> raw;
    for (const auto& q : primes) {
        auto has = [&](unsigned s) {
            const Int& r = diag[s].rep();
            return mpz_divisible_p(r.get_mpz_t(), q.get_mpz_t()) != 0;
        };
        SquareClass t;
        for (unsigned i = 0; i < g.n(); ++i)
            if (has(1u << i)) t *= g.gens()[i];
        const unsigned e = g.exponents(t);
        for (unsigned s = 0; s < N; ++s)
            if (has(s) != MultiquadGroup::flips(s, e)) throw InputError("not 2-torsion: diagonal is not a homomorphism");
        raw.emplace_back(t, SquareClass::of(Rat(q)));
    }

    SignDegreeClass out{sign_coordinates(sgn), DegreeMap(raw)};
    CocycleTable rep = representative(g, out);
    CocycleTable quotient = c;
    for (unsigned s = 0; s < N; ++s)
        for (unsigned t = 0; t < N; ++t) quotient.at(s, t) = c(s, t) / rep(s, t);
    if (!detail::solve_coboundary(quotient)) throw InputError("not 2-torsion");
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic twists

struct TwistClass {
    SignCoords coords;
    CocycleTable table;
    std::vector<MultiquadElem> delta; // delta_s with s(gamma) = gamma * delta_s^2
};

/// Class of the extension 1 -> Gal(K(sqrt gamma)/K) -> Gal(K(sqrt gamma)/Q) -> G -> 1.
inline TwistClass twist_extension_class(const MultiquadGroup& g, const MultiquadElem& gamma)
{
    if (!(*gamma.field() == *g.field())) throw InputError("gamma must be an element of K");
    if (gamma.is_zero()) throw InputError("gamma must be nonzero");
    if (is_square_in_field(gamma)) throw InputError("gamma is a square in K");
    const unsigned N = g.order();
    std::vector<MultiquadElem> delta(N);
    const MultiquadElem inv = gamma.inverse();
    for (unsigned s = 0; s < N; ++s) {
        auto r = sqrt_in_field(gamma.apply(s) * inv);
        if (!r) throw InputError("not Galois over Q: s(gamma)/gamma is not a square for s = " + g.element_str(s));
        delta[s] = *r;
    }
    delta[0] = MultiquadElem(g.field(), Rat(1));
    CocycleTable c = CocycleTable::trivial(g);
    for (unsigned s = 0; s < N; ++s)
        for (unsigned t = 0; t < N; ++t) {
            MultiquadElem v = delta[t].apply(s) * delta[s] / delta[s ^ t];
            Rat x = v.rational_value();
            if (x * x != 1) throw ConsistencyError("twist cocycle value is not +-1");
            c.at(s, t) = x;
        }
    return {sign_coordinates(c), c, delta};
}

} // namespace qmkit

#endif // QMKIT_COHOMOLOGY_HPP
