#include <cstdlib>

#include <gtest/gtest.h>

#include <qmkit/json_io.hpp>

#include "support.hpp"

using namespace qmkit;
using namespace qmtest;

namespace {

FieldPtr K63() { return make_field({SquareClass::of(-6L), SquareClass::of(-3L)}); }

IntPoly P(std::initializer_list<long> c)
{
    IntPoly out;
    for (long v : c) out.push_back(Int(v));
    return out;
}

const FixtureRow* row(const FixtureTable& t, std::uint64_t p)
{
    for (const auto& r : t.rows)
        if (r.p == p) return &r;
    return nullptr;
}

} // namespace

TEST(Poly, Helpers)
{
    EXPECT_EQ(poly_mul(P({1, -1, 13}), P({1, 1, 13})), P({1, 0, 25, 0, 169}));
    EXPECT_EQ(poly_pow(P({1, -4, 25}), 2), P({1, -8, 66, -200, 625}));
    EXPECT_EQ(substitute_power(P({1, -4, 25}), 2), P({1, 0, -4, 0, 25}));
    EXPECT_EQ(poly_str(P({1, 0, -4, 0, 25})), "1-4T^2+25T^4");
    // (1 - aT + qT^2) over F_{q^2}: 1 - (a^2 - 2q) T + q^2 T^2
    EXPECT_EQ(base_change_quadratic(P({1, -3, 7})), P({1, -(9 - 14), 49}));
}

TEST(Poly, WeilChecks)
{
    EXPECT_NO_THROW(check_weil(P({1, -8, 66, -200, 625}), Int(25)));
    EXPECT_THROW(check_weil(P({1, -8, 66, -201, 625}), Int(25)), ConsistencyError);
    EXPECT_THROW(check_weil(P({1, -30, 66, -750, 625}), Int(25)), ConsistencyError);
    // N1 = q+1, N2 = q^2+1 is a legal (supersingular-shaped) input
    EXPECT_EQ(lpoly_from_counts(Int(5), Int(6), Int(26)), P({1, 0, 0, 0, 25}));
    EXPECT_THROW(lpoly_from_counts(Int(5), Int(30), Int(26)), ConsistencyError);
}

TEST(Primes, AboveP)
{
    auto K = K63();
    auto at5 = primes_above(K, 5); // -6 = 4 square, -3 = 2 non-square
    ASSERT_EQ(at5.size(), 2u);
    EXPECT_EQ(at5[0].f, 2u);
    auto at7 = primes_above(K, 7);
    ASSERT_EQ(at7.size(), 4u);
    EXPECT_EQ(at7[0].f, 1u);
    EXPECT_THROW(primes_above(K, 3), InputError);
    EXPECT_THROW(primes_above(make_field({SquareClass::of(-7L)}), 7), InputError);
    // each reduction map respects products
    for (const auto& pr : at5) {
        auto x = parse_multiquad("1+sqrt(-6)-2*sqrt(-3)", K), y = parse_multiquad("3-sqrt(18)/3", K);
        const Fq& F = pr.reduction.target();
        EXPECT_EQ(pr.reduction(x * y), F.mul(pr.reduction(x), pr.reduction(y)));
    }
}

TEST(LFactor, PerPrimeQuartics)
{
    JContext ctx(Rat(1, 81));
    auto model = curve_model(ctx);
    auto r5 = lfactor_over_K(model, K63(), 5, 1);
    ASSERT_EQ(r5.primes.size(), 2u);
    for (const auto& pr : r5.primes) EXPECT_EQ(pr.quartic, poly_pow(P({1, -4, 25}), 2));
    EXPECT_EQ(r5.factor.coeffs, poly_pow(P({1, 0, -4, 0, 25}), 4));

    // degree-1 prime above 7: #C(F_7) = 7 + 1 - 4
    auto K = K63();
    for (const auto& pr : primes_above(K, 7)) {
        auto lm = find_local_model(model, pr);
        EXPECT_NE(lm.transform.str(), "identity"); // the model is not minimal at 7
        EXPECT_EQ(count_points(pr.reduction.target(), lm.reduced, 1), 4);
    }
}

TEST(LFactor, TwistedAt13)
{
    JContext ctx(Rat(1, 81));
    auto K = K63();
    auto tw = twist_model(curve_model(ctx), parse_multiquad("2-sqrt2", K));
    auto r = lfactor_over_K(tw, K, 13, 1);
    EXPECT_EQ(r.factor.coeffs, poly_mul(poly_pow(P({1, -1, 13}), 4), poly_pow(P({1, 1, 13}), 4)));
}

TEST(LFactor, TwistByOneIsIdentical)
{
    JContext ctx(Rat(1, 81));
    auto m = curve_model(ctx);
    auto t = twist_model(m, MultiquadElem(m.field, Rat(1)));
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(t.coeffs[i], m.coeffs[i]);
    EXPECT_THROW(twist_model(m, MultiquadElem(m.field, Rat(0))), InputError);
}

TEST(LFactor, SquareTwistInvarianceRandomized)
{
    // y^2 = x^2 F(x) is isomorphic to y^2 = F(x); also checks Weil bounds on every emitted quartic
    JContext ctx(Rat(1, 81));
    auto K = K63();
    auto model = curve_model(ctx);
    std::map<std::uint64_t, IntPoly> base;
    for (std::uint64_t p : {5, 7}) base[p] = lfactor_over_K(model, K, p, 1).factor.coeffs;
    int done = 0;
    while (done < 200) {
        std::vector<Rat> c;
        for (unsigned k = 0; k < 4; ++k) c.push_back(rand_int(0, 1) ? Rat(rand_int(-9, 9)) : Rat(0));
        MultiquadElem x(K, c);
        if (x.is_zero()) continue;
        const std::uint64_t p = done % 2 ? 5 : 7;
        Rat n = x.norm();
        if (valuation(n, Int(std::to_string(p))) != 0) continue;
        auto r = lfactor_over_K(twist_model(model, x * x), K, p, 1);
        EXPECT_EQ(r.factor.coeffs, base[p]) << x.str();
        for (const auto& pr : r.primes) EXPECT_NO_THROW(check_weil(pr.quartic, ipow(Int(std::to_string(p)), pr.f)));
        ++done;
    }
}

TEST(LFactor, WeilOnTableQuartics)
{
    JContext ctx(Rat(1, 81));
    auto K = K63();
    auto model = curve_model(ctx);
    auto tw = twist_model(model, parse_multiquad("2-sqrt2", K));
    for (std::uint64_t p : {5, 7, 11, 13, 17, 19, 23})
        for (const auto* m : {&model, &tw})
            for (const auto& pr : lfactor_over_K(*m, K, p).primes) {
                const Int q = ipow(Int(std::to_string(p)), pr.f);
                EXPECT_NO_THROW(check_weil(pr.quartic, q));
                EXPECT_EQ(pr.quartic[4], q * q);
                EXPECT_EQ(pr.quartic[3], q * pr.quartic[1]);
            }
}

TEST(LFactor, BadInputs)
{
    JContext ctx(Rat(1, 81));
    auto model = curve_model(ctx);
    EXPECT_THROW(lfactor_over_K(model, K63(), 3), InputError);
    EXPECT_THROW(lfactor_over_K(model, make_field({SquareClass::of(-3L)}), 5), InputError); // model field not in K
}

TEST(LFactor, ThreadEnv)
{
    ::setenv("QMKIT_THREADS", "3", 1);
    EXPECT_EQ(thread_count(), 3u);
    ::setenv("QMKIT_THREADS", "0", 1);
    EXPECT_THROW(thread_count(), InputError);
    ::setenv("QMKIT_THREADS", "x", 1);
    EXPECT_THROW(thread_count(), InputError);
    ::unsetenv("QMKIT_THREADS");
    EXPECT_GE(thread_count(), 1u);
}

TEST(PrimeSpec, Parsing)
{
    auto a = parse_prime_spec("5,7,11");
    EXPECT_EQ(a.primes, (std::vector<std::uint64_t>{5, 7, 11}));
    auto b = parse_prime_spec("5..41");
    EXPECT_EQ(b.primes.size(), 11u);
    EXPECT_TRUE(b.from_range[0]);
    EXPECT_EQ(parse_prime_spec("5..997").primes.size(), 166u);
    EXPECT_THROW(parse_prime_spec("9"), InputError);
    EXPECT_THROW(parse_prime_spec("3"), InputError);
    EXPECT_THROW(parse_prime_spec("5..x"), InputError);
}

// ---------------------------------------------------------------------------
// Fixture comparison harness

TEST(Compare, Harness)
{
    FixtureTable empty;
    std::map<std::uint64_t, LocalFactor> computed;
    computed[5] = LocalFactor{P({1, 0, -4, 0, 25}), 5};
    auto vac = compare_tables({}, empty);
    EXPECT_TRUE(vac.pass);
    EXPECT_TRUE(vac.rows.empty());

    auto t1 = json_io::load_fixture(fixture("table1.json"));
    EXPECT_EQ(t1.rows.size(), 11u);
    std::map<std::uint64_t, LocalFactor> from_fixture;
    for (const auto& r : t1.rows) from_fixture[r.p] = LocalFactor{r.expand(), r.p};
    EXPECT_TRUE(compare_tables(from_fixture, t1).pass);

    // corrupt one row
    auto bad = from_fixture;
    bad[13].coeffs[2] += 1;
    auto rep = compare_tables(bad, t1);
    EXPECT_FALSE(rep.pass);
    int mism = 0;
    for (const auto& r : rep.rows) mism += r.status == "mismatch";
    EXPECT_EQ(mism, 1);

    // partial computation: uncomputed rows are reported, not failed
    auto part = compare_tables(computed, t1);
    EXPECT_EQ(part.rows.front().status, "mismatch"); // computed[5] is the single-prime quartic, not the full factor
    EXPECT_EQ(part.rows.back().status, "not computed");
}

TEST(Compare, FixtureErrors)
{
    EXPECT_THROW(json_io::load_fixture("/nonexistent.json"), InputError);
    EXPECT_THROW(json_io::to_fixture(json_io::json::parse(R"({"name":"x"})")), InputError);
}

// ---------------------------------------------------------------------------
// Newforms

TEST(Newform, PublishedAgAhRows)
{
    auto g = json_io::load_newform(fixture("newform_g.json"));
    auto h = twist_newform(g, character_epsilon(), rational_field(), "h");
    EXPECT_EQ(euler_factor_from_newform(g, 5).coeffs, P({1, 0, 4, 0, 25}));
    EXPECT_EQ(euler_factor_from_newform(h, 13).coeffs, poly_pow(P({1, -1, 13}), 2));

    auto Ag = json_io::load_fixture(fixture("table2_Ag.json"));
    auto Ah = json_io::load_fixture(fixture("table2_Ah.json"));
    for (const auto& r : Ag.rows) EXPECT_EQ(euler_factor_from_newform(g, r.p).coeffs, r.expand()) << "g at " << r.p;
    for (const auto& r : Ah.rows) EXPECT_EQ(euler_factor_from_newform(h, r.p).coeffs, r.expand()) << "h at " << r.p;
}

TEST(Newform, TwistByPsiGivesTableOne)
{
    auto g = json_io::load_newform(fixture("newform_g.json"));
    auto f = twist_newform(g, character_psi(), make_field({SquareClass::of(-1L)}), "f");
    auto L5 = euler_factor_from_newform(f, 5);
    EXPECT_EQ(L5.coeffs, poly_pow(P({1, 0, -4, 0, 25}), 2));
    auto t1 = json_io::load_fixture(fixture("table1.json"));
    for (const auto& r : t1.rows)
        EXPECT_EQ(poly_pow(euler_factor_from_newform(f, r.p).coeffs, 2), r.expand()) << "p = " << r.p;
    // f at a prime dividing the level
    EXPECT_THROW(euler_factor_from_newform(f, 2), InputError);
}

TEST(Newform, RamanujanGuard)
{
    auto g = json_io::load_newform(fixture("newform_g.json"));
    g.ap[5] = parse_multiquad("5*sqrt6", g.field);
    EXPECT_THROW(euler_factor_from_newform(g, 5), ConsistencyError);
}

TEST(Newform, TableTwoIsGTimesHSquared)
{
    auto g = json_io::load_newform(fixture("newform_g.json"));
    auto h = twist_newform(g, character_epsilon(), rational_field(), "h");
    auto t2 = json_io::load_fixture(fixture("table2.json"));
    for (std::uint64_t p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
        const auto* r = row(t2, p);
        ASSERT_NE(r, nullptr);
        auto gh = poly_mul(euler_factor_from_newform(g, p).coeffs, euler_factor_from_newform(h, p).coeffs);
        EXPECT_EQ(poly_pow(gh, 2), r->expand()) << "p = " << p;
    }
}
