#ifndef QMKIT_MULTIQUAD_HPP
#define QMKIT_MULTIQUAD_HPP

// Multiquadratic fields Q(sqrt d_1, ..., sqrt d_n) with exact arithmetic on the
// monomial basis sqrt(d_S) = prod_{i in S} sqrt(d_i), S a bitmask.

#include <array>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadratic.hpp"
#include "square_class.hpp"

namespace qmkit {

class MultiquadField {
public:
    explicit MultiquadField(std::vector<SquareClass> gens) : gens_(std::move(gens))
    {
        if (gens_.size() > 8) throw InputError("multiquadratic field: at most 8 generators");
        if (!independent(gens_)) throw InputError("multiquadratic field: generators are not independent mod squares");
        squares_.assign(dim(), Int(1));
        for (unsigned mask = 0; mask < dim(); ++mask)
            for (unsigned i = 0; i < n(); ++i)
                if (mask >> i & 1u) squares_[mask] *= gens_[i].rep();
    }

    const std::vector<SquareClass>& gens() const { return gens_; }
    unsigned n() const { return static_cast<unsigned>(gens_.size()); }
    unsigned dim() const { return 1u << n(); }

    /// (sqrt d_S)^2 as an integer.
    const Int& monomial_square(unsigned mask) const { return squares_[mask]; }

    SquareClassSpan span() const { return SquareClassSpan(gens_); }
    bool contains(const SquareClass& d) const { return express_in(gens_, d).has_value(); }

    std::string str() const
    {
        std::string s = "Q(";
        for (unsigned i = 0; i < n(); ++i) s += (i ? ",sqrt" : "sqrt") + gens_[i].str();
        return s + ")";
    }

    friend bool operator==(const MultiquadField& a, const MultiquadField& b) { return a.gens_ == b.gens_; }

private:
    std::vector<SquareClass> gens_;
    std::vector<Int> squares_;
};

using FieldPtr = std::shared_ptr<const MultiquadField>;

inline FieldPtr make_field(std::vector<SquareClass> gens)
{
    return std::make_shared<const MultiquadField>(std::move(gens));
}

inline FieldPtr rational_field() { return make_field({}); }

/// Biquadratic field with the canonical basis order: |d1| <= |d2|, positive first on ties.
inline FieldPtr make_quartic_field(SquareClass d1, SquareClass d2)
{
    auto before = [](const SquareClass& a, const SquareClass& b) {
        if (abs(a.rep()) != abs(b.rep())) return abs(a.rep()) < abs(b.rep());
        return a.rep() > b.rep();
    };
    if (before(d2, d1)) std::swap(d1, d2);
    return make_field({d1, d2});
}

class MultiquadElem {
public:
    MultiquadElem() : MultiquadElem(rational_field(), Rat(0)) {}
    MultiquadElem(FieldPtr field, const Rat& r) : field_(std::move(field)), c_(field_->dim(), Rat(0)) { c_[0] = r; }
    MultiquadElem(FieldPtr field, std::vector<Rat> coords) : field_(std::move(field)), c_(std::move(coords))
    {
        if (c_.size() != field_->dim()) throw InputError("multiquadratic element: wrong coordinate count");
    }

    static MultiquadElem monomial(FieldPtr field, unsigned mask, const Rat& coef = 1)
    {
        MultiquadElem x(std::move(field), Rat(0));
        x.c_.at(mask) = coef;
        return x;
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coords() const { return c_; }
    const Rat& operator[](unsigned mask) const { return c_[mask]; }

    bool is_zero() const
    {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }
    bool is_rational() const
    {
        for (unsigned i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rat rational_value() const
    {
        if (!is_rational()) throw ConsistencyError("expected a rational value, got " + str());
        return c_[0];
    }

    /// Image under the automorphism flipping sqrt(d_i) for every bit i of sigma.
    MultiquadElem apply(unsigned sigma) const
    {
        MultiquadElem out = *this;
        for (unsigned mask = 0; mask < c_.size(); ++mask)
            if (__builtin_popcount(mask & sigma) & 1) out.c_[mask] = -out.c_[mask];
        return out;
    }

    /// Product of all conjugates.
    Rat norm() const
    {
        MultiquadElem prod(field_, Rat(1));
        for (unsigned s = 0; s < field_->dim(); ++s) prod = prod * apply(s);
        return prod.rational_value();
    }

    MultiquadElem inverse() const
    {
        MultiquadElem others(field_, Rat(1));
        for (unsigned s = 1; s < field_->dim(); ++s) others = others * apply(s);
        Rat nrm = (*this * others).rational_value();
        if (nrm == 0) throw InputError("multiquadratic element: division by zero");
        return others * Rat(1 / nrm);
    }

    friend MultiquadElem operator+(const MultiquadElem& x, const MultiquadElem& y)
    {
        check(x, y);
        MultiquadElem out = x;
        for (unsigned i = 0; i < out.c_.size(); ++i) out.c_[i] += y.c_[i];
        return out;
    }
    friend MultiquadElem operator-(const MultiquadElem& x, const MultiquadElem& y)
    {
        check(x, y);
        MultiquadElem out = x;
        for (unsigned i = 0; i < out.c_.size(); ++i) out.c_[i] -= y.c_[i];
        return out;
    }
    MultiquadElem operator-() const
    {
        MultiquadElem out = *this;
        for (auto& v : out.c_) v = -v;
        return out;
    }
    friend MultiquadElem operator*(const MultiquadElem& x, const MultiquadElem& y)
    {
        check(x, y);
        MultiquadElem out(x.field_, Rat(0));
        const unsigned dim = x.field_->dim();
        for (unsigned s = 0; s < dim; ++s) {
            if (x.c_[s] == 0) continue;
            for (unsigned t = 0; t < dim; ++t) {
                if (y.c_[t] == 0) continue;
                out.c_[s ^ t] += x.c_[s] * y.c_[t] * Rat(x.field_->monomial_square(s & t));
            }
        }
        return out;
    }
    friend MultiquadElem operator*(const MultiquadElem& x, const Rat& r)
    {
        MultiquadElem out = x;
        for (auto& v : out.c_) v *= r;
        return out;
    }
    friend MultiquadElem operator*(const Rat& r, const MultiquadElem& x) { return x * r; }
    friend MultiquadElem operator/(const MultiquadElem& x, const MultiquadElem& y) { return x * y.inverse(); }

    friend bool operator==(const MultiquadElem& x, const MultiquadElem& y)
    {
        return *x.field_ == *y.field_ && x.c_ == y.c_;
    }
    friend bool operator!=(const MultiquadElem& x, const MultiquadElem& y) { return !(x == y); }

    std::string str() const
    {
        std::string s;
        for (unsigned mask = 0; mask < c_.size(); ++mask) {
            if (c_[mask] == 0) continue;
            std::string coef = to_string(c_[mask]);
            if (!s.empty() && coef[0] != '-') s += "+";
            if (mask == 0) {
                s += coef;
                continue;
            }
            if (coef == "-1") s += "-";
            else if (coef != "1") s += coef + "*";
            for (unsigned i = 0, first = 1; i < field_->n(); ++i)
                if (mask >> i & 1u) {
                    s += (first ? "" : "*") + std::string("sqrt(") + field_->gens()[i].str() + ")";
                    first = 0;
                }
        }
        return s.empty() ? "0" : s;
    }

private:
    static void check(const MultiquadElem& x, const MultiquadElem& y)
    {
        if (x.field_ != y.field_ && !(*x.field_ == *y.field_))
            throw InputError("multiquadratic arithmetic across different fields: " + x.field_->str() + " vs " +
                             y.field_->str());
    }

    FieldPtr field_;
    std::vector<Rat> c_;
};

using QuarticElem = MultiquadElem;

/// The four sign-flip conjugates in the order (id, flip d1, flip d2, flip both).
inline std::array<QuarticElem, 4> quartic_conjugates(const QuarticElem& x)
{
    if (x.field()->n() != 2) throw InputError("quartic_conjugates: element is not in a biquadratic field");
    return {x, x.apply(1), x.apply(2), x.apply(3)};
}

// ---------------------------------------------------------------------------
// Embeddings between multiquadratic fields

/// The inclusion of `source` into `target`, fixed by sending each sqrt(d_i)
/// to the positive rational multiple of a target monomial.
class Embedding {
public:
    Embedding(FieldPtr source, FieldPtr target) : source_(std::move(source)), target_(std::move(target))
    {
        std::vector<MultiquadElem> gen_images;
        for (const auto& d : source_->gens()) {
            auto mask = express_in(target_->gens(), d);
            if (!mask) throw InputError("sqrt(" + d.str() + ") is not in " + target_->str());
            Rat rho2 = Rat(d.rep()) / Rat(target_->monomial_square(*mask));
            Rat rho;
            if (!rational_sqrt(rho2, rho)) throw ConsistencyError("embedding: non-square ratio");
            gen_images.push_back(MultiquadElem::monomial(target_, *mask, rho));
        }
        images_.reserve(source_->dim());
        for (unsigned mask = 0; mask < source_->dim(); ++mask) {
            MultiquadElem img(target_, Rat(1));
            for (unsigned i = 0; i < source_->n(); ++i)
                if (mask >> i & 1u) img = img * gen_images[i];
            images_.push_back(std::move(img));
        }
    }

    MultiquadElem operator()(const MultiquadElem& x) const
    {
        if (!(*x.field() == *source_)) throw InputError("embedding applied to an element of the wrong field");
        MultiquadElem out(target_, Rat(0));
        for (unsigned mask = 0; mask < source_->dim(); ++mask)
            if (x[mask] != 0) out = out + images_[mask] * x[mask];
        return out;
    }

    const FieldPtr& target() const { return target_; }

private:
    FieldPtr source_, target_;
    std::vector<MultiquadElem> images_;
};

inline MultiquadElem embed(const MultiquadElem& x, const FieldPtr& target)
{
    if (*x.field() == *target) return MultiquadElem(target, x.coords());
    return Embedding(x.field(), target)(x);
}

/// Smallest field (in generator order a, then new gens of b) containing both.
inline FieldPtr join(const FieldPtr& a, const FieldPtr& b)
{
    auto gens = a->gens();
    SquareClassSpan span(gens);
    for (const auto& d : b->gens())
        if (span.insert(d)) gens.push_back(d);
    if (gens.size() == a->n()) return a;
    return make_field(gens);
}

inline MultiquadElem from_quad(const QuadElem& x, const FieldPtr& target)
{
    auto src = make_field({x.m});
    return embed(MultiquadElem(src, {x.a, x.b}), target);
}

// ---------------------------------------------------------------------------
// Square roots and positivity

namespace detail {

inline MultiquadElem restrict_level(const MultiquadElem& x, unsigned k, bool upper)
{
    // coordinates of x = u + v*sqrt(d_{k-1}) over the subfield of the first k-1 generators
    const unsigned bit = 1u << (k - 1);
    MultiquadElem out(x.field(), Rat(0));
    std::vector<Rat> c(x.field()->dim(), Rat(0));
    for (unsigned mask = 0; mask < bit; ++mask) c[mask] = x[upper ? (mask | bit) : mask];
    return MultiquadElem(x.field(), std::move(c));
}

inline std::optional<MultiquadElem> sqrt_level(const MultiquadElem& x, unsigned k)
{
    if (k == 0) {
        Rat r;
        if (!rational_sqrt(x[0], r)) return std::nullopt;
        return MultiquadElem(x.field(), r);
    }
    const unsigned bit = 1u << (k - 1);
    const Rat d = Rat(x.field()->monomial_square(bit));
    const MultiquadElem root_d = MultiquadElem::monomial(x.field(), bit);
    MultiquadElem u = restrict_level(x, k, false), v = restrict_level(x, k, true);
    if (v.is_zero()) {
        if (auto r = sqrt_level(u, k - 1)) return r;
        if (auto w = sqrt_level(u * Rat(1 / d), k - 1)) return *w * root_d;
        return std::nullopt;
    }
    auto n = sqrt_level(u * u - v * v * d, k - 1);
    if (!n) return std::nullopt;
    for (int sgn : {1, -1}) {
        auto alpha = sqrt_level((u + *n * Rat(sgn)) * Rat(1, 2), k - 1);
        if (!alpha || alpha->is_zero()) continue;
        MultiquadElem beta = v / (*alpha * Rat(2));
        MultiquadElem cand = *alpha + beta * root_d;
        if (cand * cand == x) return cand;
    }
    return std::nullopt;
}

inline bool nonneg_level(const MultiquadElem& x, unsigned k)
{
    if (k == 0) return x[0] >= 0;
    const Rat d = Rat(x.field()->monomial_square(1u << (k - 1)));
    MultiquadElem u = restrict_level(x, k, false), v = restrict_level(x, k, true);
    if (v.is_zero()) return nonneg_level(u, k - 1);
    return nonneg_level(u, k - 1) && nonneg_level(u * u - v * v * d, k - 1);
}

} // namespace detail

/// A square root in the field (canonical sign: first non-zero coordinate positive), if one exists.
inline std::optional<MultiquadElem> sqrt_in_field(const MultiquadElem& x)
{
    auto r = detail::sqrt_level(x, x.field()->n());
    if (!r) return std::nullopt;
    for (const auto& v : r->coords())
        if (v != 0) {
            if (v < 0) r = -*r;
            break;
        }
    return r;
}

inline bool is_square_in_field(const MultiquadElem& x) { return sqrt_in_field(x).has_value(); }

/// Complex conjugation: flips sqrt(d) for every negative generator d.
inline MultiquadElem complex_conjugate(const MultiquadElem& x)
{
    unsigned sigma = 0;
    for (unsigned i = 0; i < x.field()->n(); ++i)
        if (x.field()->gens()[i].rep() < 0) sigma |= 1u << i;
    return x.apply(sigma);
}

/// True iff the real element x is >= 0 under every embedding into R.
inline bool is_totally_nonnegative(const MultiquadElem& x)
{
    if (complex_conjugate(x) != x) throw InputError("total positivity: element is not real");
    // real subfield: positive generators, and products of each other negative generator with the first one
    const auto& gens = x.field()->gens();
    std::vector<SquareClass> real_gens;
    int first_neg = -1;
    for (unsigned i = 0; i < gens.size(); ++i) {
        if (gens[i].rep() > 0) real_gens.push_back(gens[i]);
        else if (first_neg < 0) first_neg = static_cast<int>(i);
        else real_gens.push_back(gens[i] * gens[first_neg]);
    }
    auto real = make_field(real_gens);
    Embedding inc(real, x.field());
    std::vector<Rat> c(real->dim(), Rat(0));
    for (unsigned t = 0; t < real->dim(); ++t) {
        MultiquadElem img = inc(MultiquadElem::monomial(real, t));
        for (unsigned s = 0; s < img.field()->dim(); ++s)
            if (img[s] != 0) c[t] = x[s] / img[s];
    }
    MultiquadElem xr(real, std::move(c));
    if (inc(xr) != x) throw ConsistencyError("total positivity: real subfield projection failed");
    return detail::nonneg_level(xr, real->n());
}

// ---------------------------------------------------------------------------
// Parsing "2-sqrt2", "1/3+2*sqrt(-6)", "-4+sqrt(-6)/3"

struct ParsedTerm {
    Rat coef;
    Int radicand; // 1 for a rational term
};

inline std::vector<ParsedTerm> parse_terms(const std::string& input)
{
    std::string s;
    for (char ch : input)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    auto bad = [&](const std::string& why) { return InputError("cannot parse '" + input + "': " + why); };
    if (s.empty()) throw bad("empty expression");
    std::vector<ParsedTerm> terms;
    std::size_t i = 0;
    auto read_int = [&](bool allow_sign) {
        std::size_t start = i;
        if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        std::string tok = s.substr(start, i - start);
        if (tok.empty() || tok == "-" || tok == "+") throw bad("expected an integer at position " + std::to_string(start));
        if (tok[0] == '+') tok.erase(0, 1);
        return Int(tok);
    };
    while (i < s.size()) {
        int sgn = 1;
        if (s[i] == '+' || s[i] == '-') {
            sgn = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!terms.empty()) {
            throw bad("expected '+' or '-' at position " + std::to_string(i));
        }
        Rat coef = 1;
        bool have_coef = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            Int n = read_int(false);
            Int d = 1;
            if (i < s.size() && s[i] == '/') {
                ++i;
                d = read_int(false);
            }
            if (d == 0) throw bad("zero denominator");
            coef = make_rat(n, d);
            have_coef = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        Int radicand = 1;
        if (s.compare(i, 4, "sqrt") == 0) {
            i += 4;
            if (i < s.size() && s[i] == '(') {
                ++i;
                radicand = read_int(true);
                if (i >= s.size() || s[i] != ')') throw bad("missing ')'");
                ++i;
            } else {
                radicand = read_int(true);
            }
            if (radicand == 0) throw bad("sqrt(0)");
            if (i < s.size() && s[i] == '/') {
                ++i;
                Int d = read_int(false);
                if (d == 0) throw bad("zero denominator");
                coef /= Rat(d);
            }
        } else if (!have_coef) {
            throw bad("expected a number or sqrt at position " + std::to_string(i));
        }
        terms.push_back({coef * sgn, radicand});
    }
    return terms;
}

/// Parses an expression into the field spanned by its radicands, or into `target` when given.
inline MultiquadElem parse_multiquad(const std::string& text, FieldPtr target = nullptr)
{
    auto terms = parse_terms(text);
    if (!target) {
        std::vector<SquareClass> gens;
        SquareClassSpan span;
        for (const auto& t : terms) {
            auto c = SquareClass::of(Rat(t.radicand));
            if (!c.is_trivial() && span.insert(c)) gens.push_back(c);
        }
        target = make_field(gens);
    }
    MultiquadElem out(target, Rat(0));
    for (const auto& t : terms) {
        auto c = SquareClass::of(Rat(t.radicand));
        Rat r; // sqrt(radicand) = r * sqrt(c)
        rational_sqrt(Rat(t.radicand) / Rat(c.rep()), r);
        if (c.is_trivial()) {
            out = out + MultiquadElem(target, t.coef * r);
        } else {
            auto src = make_field({c});
            out = out + embed(MultiquadElem::monomial(src, 1, t.coef * r), target);
        }
    }
    return out;
}

} // namespace qmkit

#endif // QMKIT_MULTIQUAD_HPP
