#include <gtest/gtest.h>

#include "support.hpp"

using namespace qmkit;
using namespace qmtest;

// trial division; independent of the Pollard-rho factorizer
static std::map<long, int> trial_factor(long n)
{
    std::map<long, int> out;
    n = std::labs(n);
    for (long q = 2; q * q <= n; ++q)
        while (n % q == 0) {
            ++out[q];
            n /= q;
        }
    if (n > 1) ++out[n];
    return out;
}

TEST(Rational, ParseAndPrint)
{
    EXPECT_EQ(parse_rat("-49/3"), Rat(-49, 3));
    EXPECT_EQ(parse_rat("+8/12"), Rat(2, 3));
    EXPECT_EQ(to_string(parse_rat("10/4")), "5/2");
    for (const char* bad : {"", "1/0", "1/-2", "a", "1.5", "1//2", "-"}) EXPECT_THROW(parse_rat(bad), InputError) << bad;
}

TEST(Rational, ReduceMod)
{
    EXPECT_EQ(reduce_mod(Rat(1, 3), 5), 2u);
    EXPECT_EQ(reduce_mod(Rat(-1), 7), 6u);
    try {
        reduce_mod(Rat(1, 3), 3);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_STREQ(e.what(), "bad denominator");
    }
}

TEST(Rational, FactorMatchesTrialDivision)
{
    for (int i = 0; i < 300; ++i) {
        long n = rand_int(2, 5'000'000);
        std::map<long, int> got;
        for (const auto& [q, e] : factor(Int(std::to_string(n)))) got[q.get_si()] = e;
        EXPECT_EQ(got, trial_factor(n)) << n;
    }
    // two 31-bit primes: forces the rho path
    Int big = Int("2147483647") * Int("2147483629");
    auto f = factor(big);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f.begin()->first, Int("2147483629"));
}

TEST(Rational, LegendreMatchesExhaustiveSquares)
{
    EXPECT_EQ(legendre(Int(3), Int(17)), -1);
    EXPECT_EQ(legendre(Int(-6), Int(5)), 1);
    EXPECT_EQ(legendre(Int(1), Int(7)), 1);
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 41L, 97L}) {
        std::set<long> squares;
        for (long x = 1; x < p; ++x) squares.insert(x * x % p);
        for (long a = -60; a <= 60; ++a) {
            long r = ((a % p) + p) % p;
            int want = r == 0 ? 0 : (squares.count(r) ? 1 : -1);
            EXPECT_EQ(legendre(Int(std::to_string(a)), Int(std::to_string(p))), want) << a << " mod " << p;
        }
    }
}

TEST(Rational, ValuationAndSqrt)
{
    EXPECT_EQ(valuation(Rat(49, 3), Int(7)), 2);
    EXPECT_EQ(valuation(Rat(49, 3), Int(3)), -1);
    Rat r;
    EXPECT_TRUE(rational_sqrt(Rat(49, 9), r));
    EXPECT_EQ(r, Rat(7, 3));
    EXPECT_FALSE(rational_sqrt(Rat(2), r));
    EXPECT_FALSE(rational_sqrt(Rat(-4), r));
}

TEST(SquareClass, Examples)
{
    EXPECT_EQ(SquareClass::of(Rat(1)).rep(), 1);
    EXPECT_EQ(SquareClass::of(Rat(-49, 3)).rep(), -3);
    EXPECT_EQ(SquareClass::of(Rat(8, 9)).rep(), 2);
    EXPECT_THROW(SquareClass::of(Rat(0)), InputError);
}

TEST(SquareClass, ProductIsClassOfProduct)
{
    for (int i = 0; i < 300; ++i) {
        Rat a = rand_rat(), b = rand_rat();
        EXPECT_EQ(SquareClass::of(a) * SquareClass::of(b), SquareClass::of(a * b));
        // x * x is a square
        EXPECT_TRUE((SquareClass::of(a) * SquareClass::of(a)).is_trivial());
    }
}

TEST(SquareClass, SpanEquality)
{
    SquareClassSpan a({SquareClass::of(-6L), SquareClass::of(-1L)});
    SquareClassSpan b({SquareClass::of(6L), SquareClass::of(-6L)});
    EXPECT_TRUE(a == b);
    EXPECT_EQ(a.rank(), 2u);
    EXPECT_FALSE(a.insert(SquareClass::of(6L)));
    EXPECT_TRUE(a.contains(SquareClass::of(-1L)));
    EXPECT_FALSE(a.contains(SquareClass::of(2L)));
    EXPECT_EQ(express_in({SquareClass::of(-6L), SquareClass::of(-3L)}, SquareClass::of(2L)), 3u);
    EXPECT_FALSE(independent({SquareClass::of(2L), SquareClass::of(3L), SquareClass::of(6L)}));
}

TEST(SquareClass, SpanMembershipByBruteForce)
{
    // membership agrees with enumerating all products of the generators
    for (int i = 0; i < 200; ++i) {
        std::vector<SquareClass> gens;
        for (int k = 0; k < 3; ++k) gens.push_back(SquareClass::of(Rat(rand_nonzero(-30, 30))));
        SquareClassSpan span(gens);
        std::set<Int> all;
        for (unsigned m = 0; m < 8; ++m) {
            SquareClass p;
            for (unsigned k = 0; k < 3; ++k)
                if (m >> k & 1u) p *= gens[k];
            all.insert(p.rep());
        }
        EXPECT_EQ(span.size(), all.size());
        SquareClass probe = SquareClass::of(Rat(rand_nonzero(-30, 30)));
        EXPECT_EQ(span.contains(probe), all.count(probe.rep()) == 1);
    }
}

TEST(Multiquad, ConjugateOrbits)
{
    // sqrt6 in Q(sqrt6, sqrt-6): flipping sqrt-6 fixes it
    FieldPtr k = make_field({SquareClass::of(6L), SquareClass::of(-6L)});
    auto s6 = MultiquadElem::monomial(k, 1);
    auto c = quartic_conjugates(s6);
    EXPECT_EQ(c[0], s6);
    EXPECT_EQ(c[1], -s6);
    EXPECT_EQ(c[2], s6);
    EXPECT_EQ(c[3], -s6);

    // sqrt-6 = sqrt6 * i in Q(sqrt6, i)
    FieldPtr l = make_field({SquareClass::of(6L), SquareClass::of(-1L)});
    auto x = MultiquadElem::monomial(l, 3);
    EXPECT_EQ(x * x, MultiquadElem(l, Rat(-6)));
    auto o = quartic_conjugates(x);
    EXPECT_EQ(o[1], -x);
    EXPECT_EQ(o[2], -x);
    EXPECT_EQ(o[3], x);
}

static MultiquadElem random_elem(const FieldPtr& k)
{
    std::vector<Rat> c;
    for (unsigned i = 0; i < k->dim(); ++i) c.push_back(rand_int(0, 2) ? rand_rat(9) : Rat(0));
    if (c[0] == 0) c[0] = 1;
    return MultiquadElem(k, c);
}

TEST(Multiquad, FieldAxiomsRandomized)
{
    FieldPtr k = make_field({SquareClass::of(-6L), SquareClass::of(-3L), SquareClass::of(-1L)});
    for (int i = 0; i < 200; ++i) {
        auto x = random_elem(k), y = random_elem(k), z = random_elem(k);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        if (!x.is_zero()) EXPECT_EQ(x * x.inverse(), MultiquadElem(k, Rat(1)));
        EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
        unsigned s = rand_int(0, 7);
        EXPECT_EQ((x * y).apply(s), x.apply(s) * y.apply(s));
        // sqrt_in_field(x^2) = +-x
        auto r = sqrt_in_field(x * x);
        ASSERT_TRUE(r.has_value());
        EXPECT_TRUE(*r == x || *r == -x);
        // x * x is totally nonnegative when x is fixed by complex conjugation
        auto xr = x + complex_conjugate(x);
        EXPECT_TRUE(is_totally_nonnegative(xr * xr));
    }
}

TEST(Multiquad, EmbeddingIsHomomorphism)
{
    FieldPtr k2 = make_field({SquareClass::of(2L)});
    FieldPtr K = make_field({SquareClass::of(-6L), SquareClass::of(-3L)});
    auto s2 = embed(MultiquadElem::monomial(k2, 1), K);
    EXPECT_EQ(s2 * s2, MultiquadElem(K, Rat(2)));
    for (int i = 0; i < 200; ++i) {
        auto x = random_elem(k2), y = random_elem(k2);
        EXPECT_EQ(embed(x * y, K), embed(x, K) * embed(y, K));
    }
}

TEST(Multiquad, Parse)
{
    auto x = parse_multiquad("2-sqrt2");
    EXPECT_EQ(x.field()->gens().size(), 1u);
    EXPECT_EQ(x * x, parse_multiquad("6-4*sqrt2"));
    FieldPtr K = make_field({SquareClass::of(-6L), SquareClass::of(-3L)});
    auto y = parse_multiquad("-4+sqrt(-6)/3", K);
    EXPECT_EQ(y[0], -4);
    EXPECT_EQ(y[1], Rat(1, 3));
    EXPECT_EQ(parse_multiquad("sqrt12"), parse_multiquad("2*sqrt3"));
    EXPECT_THROW(parse_multiquad("1+sqrt5", K), InputError);
    EXPECT_THROW(parse_multiquad("2+"), InputError);
    EXPECT_THROW(parse_multiquad("sqrt(-3"), InputError);
}
