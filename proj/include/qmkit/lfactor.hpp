#ifndef QMKIT_LFACTOR_HPP
#define QMKIT_LFACTOR_HPP

// Genus-2 point counting over F_{p^f}, local L-factors over multiquadratic K,
// quadratic twists, newform Euler factors and comparison against tables.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "character.hpp"
#include "finite_field.hpp"
#include "multiquad.hpp"

namespace qmkit {

// ---------------------------------------------------------------------------
// Integer polynomials in T (low to high)

using IntPoly = std::vector<Int>;

inline void trim(IntPoly& a)
{
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b)
{
    IntPoly out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

inline IntPoly poly_pow(const IntPoly& a, unsigned e)
{
    IntPoly out{Int(1)};
    for (unsigned i = 0; i < e; ++i) out = poly_mul(out, a);
    return out;
}

/// P(T) -> P(T^f).
inline IntPoly substitute_power(const IntPoly& a, unsigned f)
{
    IntPoly out((a.size() - 1) * f + 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i * f] = a[i];
    return out;
}

inline std::string poly_str(const IntPoly& a)
{
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        Int c = a[i];
        std::string sign = c < 0 ? "-" : (s.empty() ? "" : "+");
        Int m = abs(c);
        std::string body;
        if (i == 0) body = m.get_str();
        else {
            body = m == 1 ? "" : m.get_str();
            body += "T";
            if (i > 1) body += "^" + std::to_string(i);
        }
        s += sign + body;
    }
    return s.empty() ? "0" : s;
}

struct LocalFactor {
    IntPoly coeffs{Int(1)};
    std::uint64_t p = 0;

    unsigned degree() const { return static_cast<unsigned>(coeffs.size() - 1); }
    std::string str() const { return poly_str(coeffs); }
    friend bool operator==(const LocalFactor& a, const LocalFactor& b) { return a.coeffs == b.coeffs; }
};

/// Functional equation and Weil bounds for a quartic L-polynomial over F_q.
inline void check_weil(const IntPoly& c, const Int& q)
{
    if (c.size() != 5 || c[0] != 1) throw ConsistencyError("Weil violation: not a monic-constant quartic");
    if (c[3] != q * c[1] || c[4] != q * q) throw ConsistencyError("Weil violation: functional equation fails");
    if (c[1] * c[1] > 16 * q || abs(c[2]) > 6 * q) throw ConsistencyError("Weil violation: coefficient bound exceeded");
}

/// L-polynomial of a genus-2 curve from N1 = #C(F_q), N2 = #C(F_{q^2}).
inline IntPoly lpoly_from_counts(const Int& q, const Int& n1, const Int& n2)
{
    Int s1 = q + 1 - n1, s2 = q * q + 1 - n2;
    Int twice_c2 = s1 * s1 - s2;
    if (mpz_odd_p(twice_c2.get_mpz_t())) throw ConsistencyError("Weil violation: c2 is not integral");
    IntPoly c{Int(1), Int(-s1), Int(twice_c2 / 2), Int(-q * s1), Int(q * q)};
    check_weil(c, q);
    return c;
}

/// P2 with P2(T^2) = P(T) P(-T) = prod (1 - alpha_i^2 T^2): the L-polynomial over the quadratic extension.
inline IntPoly base_change_quadratic(const IntPoly& a)
{
    IntPoly minus = a;
    for (std::size_t i = 1; i < minus.size(); i += 2) minus[i] = -minus[i];
    IntPoly prod = poly_mul(a, minus);
    IntPoly out;
    for (std::size_t i = 0; i < prod.size(); i += 2) out.push_back(prod[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Threads

/// QMKIT_THREADS if set (>= 1), else the hardware concurrency.
inline unsigned thread_count()
{
    if (const char* env = std::getenv("QMKIT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
        throw InputError("QMKIT_THREADS must be a positive integer");
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

// ---------------------------------------------------------------------------
// Point counting

inline unsigned poly_degree(const Fq& F, const FqPoly& a)
{
    for (std::size_t i = a.size(); i-- > 0;)
        if (!F.is_zero(a[i])) return static_cast<unsigned>(i);
    return 0;
}

/// Throws unless y^2 = F(x) is a genus-2 model with good reduction over F.
inline void check_good_model(const Fq& F, const FqPoly& a)
{
    const unsigned d = poly_degree(F, a);
    if (d < 5) throw InputError("degenerate degree: reduced polynomial has degree " + std::to_string(d));
    if (!poly_squarefree(F, a)) throw InputError("bad reduction: discriminant vanishes");
}

/// #C(F_q) for y^2 = F(x), including the points at infinity of the smooth model.
inline Int count_points(const Fq& F, const FqPoly& a, unsigned threads = 0)
{
    check_good_model(F, a);
    if (threads == 0) threads = thread_count();
    const std::uint64_t q = F.q();
    const unsigned d = poly_degree(F, a);
    FqPoly poly(a.begin(), a.begin() + d + 1);

    std::vector<unsigned char> square(q, 0);
    for (std::uint64_t i = 0; i < q; ++i) {
        FqElem x = F.element(i);
        square[F.index(F.mul(x, x))] = 1;
    }

    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, q / 1024)));
    std::vector<long long> partial(threads, 0);
    auto work = [&](unsigned k) {
        const std::uint64_t lo = q * k / threads, hi = q * (k + 1) / threads;
        long long sum = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            FqElem v = poly_eval(F, poly, F.element(i));
            if (F.is_zero(v)) sum += 1;
            else sum += square[F.index(v)] ? 2 : 0;
        }
        partial[k] = sum;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
        for (auto& t : pool) t.join();
    }
    long long total = 0;
    for (auto v : partial) total += v;
    // infinity: one point for odd degree, 1 + chi(lc) for even degree
    if (d == 5) total += 1;
    else total += F.is_square(poly[6]) ? 2 : 0;
    return Int(std::to_string(total));
}

/// Quartic L-polynomial of y^2 = F(x) over F = F_{p^f}, f <= 2.
inline IntPoly quartic_lfactor(const Fq& F, const FqPoly& a, unsigned threads = 0)
{
    check_good_model(F, a);
    const Int q(std::to_string(F.q()));
    bool descends = F.f() > 1;
    for (const auto& c : a) descends = descends && F.in_prime_field(c);
    if (descends) {
        // coefficients in F_p: count there and base-change
        Fq Fp(F.p(), 1);
        FqPoly b;
        for (const auto& c : a) b.push_back(Fp.from_u64(c.c[0]));
        IntPoly P = quartic_lfactor(Fp, b, threads);
        for (unsigned k = 1; k < F.f(); k *= 2) P = base_change_quadratic(P);
        check_weil(P, q);
        return P;
    }
    if (2 * F.f() > kMaxExtDegree) throw InputError("quartic_lfactor: residue degree too large");
    Fq F2(F.p(), 2 * F.f());
    FqEmbedding emb(F, F2);
    FqPoly b;
    for (const auto& c : a) b.push_back(emb(c));
    Int n1 = count_points(F, a, threads), n2 = count_points(F2, b, threads);
    return lpoly_from_counts(q, n1, n2);
}

// ---------------------------------------------------------------------------
// Models over multiquadratic fields

struct HyperellipticModel {
    FieldPtr field;
    std::vector<MultiquadElem> coeffs; // c_0 .. c_6

    HyperellipticModel() = default;
    HyperellipticModel(FieldPtr k, std::vector<MultiquadElem> c) : field(std::move(k)), coeffs(std::move(c))
    {
        if (coeffs.size() != 7) throw InputError("hyperelliptic model: expected 7 coefficients c0..c6");
        for (auto& x : coeffs) x = embed(x, field);
        if (coeffs[6].is_zero() && coeffs[5].is_zero()) throw InputError("hyperelliptic model: degree below 5");
    }

    std::string str() const
    {
        std::string s;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            if (coeffs[i].is_zero()) continue;
            s += (s.empty() ? "" : " + ") + std::string("(") + coeffs[i].str() + ")";
            if (i) s += i > 1 ? "*x^" + std::to_string(i) : "*x";
        }
        return "y^2 = " + s;
    }
};

/// Model of gamma*Y^2 = F(X), written as y^2 = gamma*F(x) (y = gamma*Y).
inline HyperellipticModel twist_model(const HyperellipticModel& m, const MultiquadElem& gamma)
{
    if (gamma.is_zero()) throw InputError("twist_model: gamma must be nonzero");
    FieldPtr k = join(m.field, gamma.field());
    MultiquadElem g = embed(gamma, k);
    std::vector<MultiquadElem> c;
    for (const auto& x : m.coeffs) c.push_back(embed(x, k) * g);
    return HyperellipticModel(k, c);
}

// ---------------------------------------------------------------------------
// Primes of K above p

struct PrimeAbove {
    unsigned f;                      // residue degree
    unsigned signs;                  // bit i: sqrt(d_i) -> -r_i
    MultiquadReduction reduction;
    std::string label;
};

/// Primes of the multiquadratic K over an odd unramified p, as reduction maps.
/// Residue degree 2 iff some generator is a non-residue; the two embeddings
/// e, e ^ phi of such a prime are identified (phi = non-residue mask).
inline std::vector<PrimeAbove> primes_above(const FieldPtr& K, std::uint64_t p)
{
    if (p < 5 || !is_prime(p)) throw InputError("primes_above: p must be a prime >= 5");
    const Int pp(std::to_string(p));
    unsigned phi = 0;
    for (unsigned i = 0; i < K->n(); ++i) {
        const Int& d = K->gens()[i].rep();
        if (mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t())) throw InputError("ramified prime " + std::to_string(p));
        if (legendre(d, pp) == -1) phi |= 1u << i;
    }
    const unsigned f = phi ? 2 : 1;
    Fq F(p, f);
    std::vector<FqElem> roots;
    for (const auto& d : K->gens()) roots.push_back(*F.sqrt(F.from_rat(Rat(d.rep()))));
    std::vector<PrimeAbove> out;
    for (unsigned e = 0; e < K->dim(); ++e) {
        if (phi && (e ^ phi) < e) continue;
        std::vector<FqElem> images;
        std::string label = "p=" + std::to_string(p) + ",f=" + std::to_string(f) + ",sqrt:";
        for (unsigned i = 0; i < K->n(); ++i) {
            images.push_back((e >> i & 1u) ? F.neg(roots[i]) : roots[i]);
            label += (i ? "," : "") + std::string((e >> i & 1u) ? "-" : "+");
        }
        out.push_back({f, e, MultiquadReduction(K, F, images), label});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Local models: X -> r + p^a X, Y -> p^b Y

struct ModelTransform {
    long r = 0;
    int a = 0;
    int b = 0;
    std::string str() const
    {
        if (r == 0 && a == 0 && b == 0) return "identity";
        return "x -> " + std::to_string(r) + " + p^" + std::to_string(a) + "*x, y -> p^" + std::to_string(b) + "*y";
    }
};

namespace detail {

/// Minimum p-adic valuation of the coordinates (large if zero).
inline int coord_valuation(const MultiquadElem& x, const Int& p)
{
    int v = 1 << 20;
    for (const auto& c : x.coords())
        if (c != 0) v = std::min(v, valuation(c, p));
    return v;
}

inline int floor_div2(int x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

} // namespace detail

struct LocalModel {
    ModelTransform transform;
    FqPoly reduced;
};

/// First transform (identity, pure scalings, then translated scalings) whose
/// reduction at the prime is a squarefree polynomial of degree >= 5.
inline LocalModel find_local_model(const HyperellipticModel& model, const PrimeAbove& P)
{
    const auto& red = P.reduction;
    const Fq& F = red.target();
    const std::uint64_t p = F.p();
    const Int pp(std::to_string(p));
    std::vector<MultiquadElem> coeffs;
    for (const auto& c : model.coeffs) coeffs.push_back(embed(c, red.field()));

    std::vector<ModelTransform> cands{{0, 0, 0}};
    for (int a : {1, -1, 2, -2, 3, -3}) cands.push_back({0, a, 0});
    for (long r = 1; r < static_cast<long>(p); ++r)
        for (int a : {1, 2}) cands.push_back({r, a, 0});

    for (auto t : cands) {
        const Rat scale = rpow(Rat(pp), t.a);
        std::vector<MultiquadElem> g(7, MultiquadElem(red.field(), Rat(0)));
        // G(X) = F(r + s X): coefficient of X^j is s^j sum_k a_k C(k,j) r^(k-j)
        for (unsigned j = 0; j < 7; ++j) {
            MultiquadElem acc(red.field(), Rat(0));
            for (unsigned k = j; k < 7; ++k) {
                if (coeffs[k].is_zero()) continue;
                Int binom;
                mpz_bin_uiui(binom.get_mpz_t(), k, j);
                acc = acc + coeffs[k] * Rat(binom * ipow(Int(t.r), k - j));
            }
            g[j] = acc * rpow(scale, static_cast<int>(j));
        }
        int vmin = 1 << 20;
        for (const auto& x : g)
            if (!x.is_zero()) vmin = std::min(vmin, detail::coord_valuation(x, pp));
        t.b = detail::floor_div2(vmin);
        const Rat unscale = rpow(Rat(pp), -2 * t.b);
        FqPoly reduced;
        bool ok = true;
        for (auto& x : g) {
            x = x * unscale;
            if (!x.is_zero() && detail::coord_valuation(x, pp) < 0) ok = false;
            if (ok) reduced.push_back(red(x));
        }
        if (!ok) continue;
        if (poly_degree(F, reduced) < 5 || !poly_squarefree(F, reduced)) continue;
        return {t, reduced};
    }
    throw InputError("bad reduction at " + P.label);
}

struct PrimeFactorReport {
    std::string label;
    unsigned f;
    std::string transform;
    IntPoly quartic; // in U = T^f
};

struct LFactorResult {
    LocalFactor factor;
    std::vector<PrimeFactorReport> primes;
};

/// L_p(B/K, T) = prod over P | p of L_P(T^f(P/p)).
inline LFactorResult lfactor_over_K(const HyperellipticModel& model, const FieldPtr& K, std::uint64_t p,
                                    unsigned threads = 0)
{
    if (!K->span().contains(model.field->span())) throw InputError("model field is not contained in K");
    LFactorResult out;
    out.factor.p = p;
    for (const auto& P : primes_above(K, p)) {
        LocalModel lm = find_local_model(model, P);
        IntPoly quartic = quartic_lfactor(P.reduction.target(), lm.reduced, threads);
        out.factor.coeffs = poly_mul(out.factor.coeffs, substitute_power(quartic, P.f));
        out.primes.push_back({P.label, P.f, lm.transform.str(), quartic});
    }
    if (out.factor.degree() != 4 * K->dim()) throw ConsistencyError("L_p has the wrong degree");
    return out;
}

struct PrimeSpec {
    std::vector<std::uint64_t> primes;
    std::vector<bool> from_range; // range members may be skipped (ramified, bad reduction)
};

/// "5,7,11", "5..41" or a mix; explicit entries must be primes >= 5.
inline PrimeSpec parse_prime_spec(const std::string& text)
{
    PrimeSpec out;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? s.size() + 1 : comma + 1;
        if (part.empty()) continue;
        auto to_u = [&](const std::string& t) {
            if (t.empty() || t.size() > 9 || !std::all_of(t.begin(), t.end(), ::isdigit))
                throw InputError("bad prime bound '" + t + "'");
            return std::stoull(t);
        };
        auto dots = part.find("..");
        if (dots == std::string::npos) {
            std::uint64_t p = to_u(part);
            if (p < 5 || !is_prime(p)) throw InputError(part + " is not a prime >= 5");
            out.primes.push_back(p);
            out.from_range.push_back(false);
        } else {
            std::uint64_t lo = to_u(part.substr(0, dots)), hi = to_u(part.substr(dots + 2));
            for (std::uint64_t p = std::max<std::uint64_t>(lo, 5); p <= hi; ++p)
                if (is_prime(p)) {
                    out.primes.push_back(p);
                    out.from_range.push_back(true);
                }
        }
    }
    if (out.primes.empty()) throw InputError("no primes in '" + text + "'");
    return out;
}

// ---------------------------------------------------------------------------
// Newforms

struct NewformData {
    std::string label;
    std::string level;
    DirichletCharacter nebentypus;
    FieldPtr field;
    std::map<std::uint64_t, MultiquadElem> ap;
    std::map<std::uint64_t, std::string> provenance;
};

/// Twist by a character: a_p -> chi(p) a_p, nebentypus -> nebentypus * chi^2.
inline NewformData twist_newform(const NewformData& nf, const DirichletCharacter& chi, const FieldPtr& field,
                                 const std::string& label)
{
    NewformData out;
    out.label = label;
    out.level = nf.level + " (twisted)";
    out.nebentypus = nf.nebentypus * chi * chi;
    out.field = join(field, nf.field);
    for (const auto& [p, a] : nf.ap) {
        out.ap[p] = chi.value_in(Int(std::to_string(p)), out.field) * embed(a, out.field);
        out.provenance[p] = nf.provenance.count(p) ? nf.provenance.at(p) : "";
    }
    return out;
}

/// prod over sigma of (1 - sigma(a_p) T + sigma(chi(p)) p T^2).
inline LocalFactor euler_factor_from_newform(const NewformData& nf, std::uint64_t p)
{
    auto it = nf.ap.find(p);
    if (it == nf.ap.end()) throw InputError(nf.label + ": a_p unknown for p = " + std::to_string(p));
    const Int pp(std::to_string(p));
    const FieldPtr& k = nf.field;
    const MultiquadElem a = embed(it->second, k);
    const MultiquadElem chi = nf.nebentypus.value_in(pp, k);
    if (chi.is_zero()) throw InputError(nf.label + ": p divides the level");

    // Ramanujan: |sigma(a_p)|^2 <= 4p for every conjugate
    for (unsigned s = 0; s < k->dim(); ++s) {
        MultiquadElem as = a.apply(s);
        MultiquadElem bound = MultiquadElem(k, Rat(4 * pp)) - as * complex_conjugate(as);
        if (!is_totally_nonnegative(bound)) throw ConsistencyError(nf.label + ": Ramanujan bound fails at p = " + std::to_string(p));
    }

    std::vector<MultiquadElem> poly{MultiquadElem(k, Rat(1))};
    for (unsigned s = 0; s < k->dim(); ++s) {
        std::vector<MultiquadElem> quad{MultiquadElem(k, Rat(1)), -a.apply(s), chi.apply(s) * Rat(pp)};
        std::vector<MultiquadElem> next(poly.size() + 2, MultiquadElem(k, Rat(0)));
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < 3; ++j) next[i + j] = next[i + j] + poly[i] * quad[j];
        poly = std::move(next);
    }
    LocalFactor out;
    out.p = p;
    out.coeffs.clear();
    for (const auto& c : poly) {
        Rat r = c.rational_value();
        if (den(r) != 1) throw ConsistencyError("Euler factor has a non-integral coefficient");
        out.coeffs.push_back(num(r));
    }
    trim(out.coeffs);
    return out;
}

// ---------------------------------------------------------------------------
// Fixture tables

struct FixtureFactor {
    IntPoly coeffs;
    unsigned multiplicity = 1;
};

struct FixtureRow {
    std::uint64_t p;
    std::vector<FixtureFactor> factors;
    std::string provenance;

    IntPoly expand() const
    {
        IntPoly out{Int(1)};
        for (const auto& f : factors) out = poly_mul(out, poly_pow(f.coeffs, f.multiplicity));
        return out;
    }
};

struct FixtureTable {
    std::string name;
    std::string provenance;
    std::vector<FixtureRow> rows;
};

struct CompareRow {
    std::uint64_t p;
    std::string status; // "match", "mismatch", "not computed", "no expected row"
    IntPoly expected, computed;
};

struct CompareReport {
    bool pass = true;
    std::vector<CompareRow> rows;
};

inline CompareReport compare_tables(const std::map<std::uint64_t, LocalFactor>& computed, const FixtureTable& expected)
{
    CompareReport rep;
    std::map<std::uint64_t, const FixtureRow*> by_p;
    for (const auto& r : expected.rows) by_p[r.p] = &r;
    for (const auto& [p, row] : by_p) {
        auto it = computed.find(p);
        if (it == computed.end()) {
            rep.rows.push_back({p, "not computed", row->expand(), {}});
            continue;
        }
        IntPoly e = row->expand();
        bool ok = e == it->second.coeffs;
        rep.pass = rep.pass && ok;
        rep.rows.push_back({p, ok ? "match" : "mismatch", e, it->second.coeffs});
    }
    for (const auto& [p, lf] : computed)
        if (!by_p.count(p)) rep.rows.push_back({p, "no expected row", {}, lf.coeffs});
    std::sort(rep.rows.begin(), rep.rows.end(), [](const CompareRow& a, const CompareRow& b) { return a.p < b.p; });
    return rep;
}

} // namespace qmkit

#endif // QMKIT_LFACTOR_HPP
