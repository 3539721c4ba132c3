// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <qmkit/json_io.hpp>
#include <qmkit/qmkit.hpp>

using namespace qmkit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double limit_s)
{
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && dt > limit_s) {
        o.pass = false;
        o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s budget)";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s -- %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fixture(const std::string& name) { return std::string(QMKIT_FIXTURE_DIR) + "/" + name; }

MultiquadGroup K63() { return MultiquadGroup({SquareClass::of(-6L), SquareClass::of(-3L)}); }

const std::vector<std::uint64_t> kPrimes{5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

std::map<std::uint64_t, LocalFactor> table1, table2;

Outcome reproduce(const HyperellipticModel& model, const std::string& fx, std::map<std::uint64_t, LocalFactor>& out)
{
    for (auto p : kPrimes) out[p] = lfactor_over_K(model, K63().field(), p).factor;
    auto rep = compare_tables(out, json_io::load_fixture(fixture(fx)));
    int match = 0;
    std::string bad;
    for (const auto& r : rep.rows) {
        if (r.status == "match") ++match;
        else bad += " p=" + std::to_string(r.p) + ":" + r.status;
    }
    return {rep.pass && match == 11, std::to_string(match) + "/11 rows equal" + bad};
}

} // namespace

int main(int argc, char** argv)
{
    // argv[1]: the unit-test binary hosting the property suites
    const std::string unit_tests = argc > 1 ? argv[1] : "";
    std::printf("qmkit acceptance (threads: %u)\n", thread_count());

    const JContext j81(Rat(1, 81));
    const auto model = curve_model(j81);

    report(1, "Table-1 reproduction, j=1/81, K=Q(sqrt-6,sqrt-3)", [&] { return reproduce(model, "table1.json", table1); },
           300);

    report(2, "Table-2 reproduction, twist by 2-sqrt2", [&] {
        auto tw = twist_model(model, parse_multiquad("2-sqrt2", K63().field()));
        return reproduce(tw, "table2.json", table2);
    }, 300);

    report(3, "Newform concordance (g, h = g x eps, f = g x psi)", [&] {
        if (table1.size() != 11 || table2.size() != 11) return Outcome{false, "tables 1/2 not computed"};
        auto g = json_io::load_newform(fixture("newform_g.json"));
        auto h = twist_newform(g, character_epsilon(), rational_field(), "h");
        auto f = twist_newform(g, character_psi(), make_field({SquareClass::of(-1L)}), "f");
        int ok_gh = 0, ok_f = 0;
        for (auto p : kPrimes) {
            auto gh = poly_mul(euler_factor_from_newform(g, p).coeffs, euler_factor_from_newform(h, p).coeffs);
            ok_gh += poly_pow(gh, 2) == table2.at(p).coeffs;
            ok_f += poly_pow(euler_factor_from_newform(f, p).coeffs, 2) == table1.at(p).coeffs;
        }
        return Outcome{ok_gh == 11 && ok_f == 11, "(L_g L_h)^2 = L(B_gamma/K): " + std::to_string(ok_gh) +
                                                       "/11, L_f^2 = L(B/K): " + std::to_string(ok_f) +
                                                       "/11 (Euler-factor agreement)"};
    }, 1);

    report(4, "Cohomology verdicts", [&] {
        std::ostringstream d;
        auto a = analyze(j81, K63());
        bool ok1 = a.verdict.verdict == Verdict::yes && a.candidates.size() == 2 &&
                   a.candidates[0].coords == SignCoords{0, 0, 0} && a.candidates[1].coords == SignCoords{1, 1, 0} &&
                   a.candidates[0].factors[0].str() == "Q(sqrt6)^2" &&
                   same_field(a.candidates[1].factors[0], EtaleFactor{{SquareClass::of(6L), SquareClass::of(-6L)}, 1});
        d << "j=1/81: " << verdict_str(a.verdict.verdict);
        auto b = analyze(JContext(Rat(-4, 27)), K63());
        bool ok2 = b.verdict.verdict == Verdict::no;
        d << "; j=-4/27 over Q(sqrt-6,sqrt-3): " << verdict_str(b.verdict.verdict);
        auto c = analyze(JContext(Rat(-4, 27)), MultiquadGroup({SquareClass::of(2L), SquareClass::of(-3L), SquareClass::of(-1L)}));
        bool ok3 = false;
        for (const auto& x : c.candidates) ok3 = ok3 || x.symmetric;
        d << "; over Q(sqrt2,sqrt-3,sqrt-1): " << (ok3 ? "symmetric candidate present" : "no symmetric candidate");
        return Outcome{ok1 && ok2 && ok3, d.str()};
    }, 1);

    report(5, "Twist-class lemma, gamma = 2-sqrt2", [&] {
        auto g = K63();
        auto tc = twist_extension_class(g, parse_multiquad("2-sqrt2", g.field()));
        return Outcome{tc.coords == SignCoords{1, 1, 0}, "coordinates " + coords_str(tc.coords) + " = c_eps(-6)*c_eps(-3)"};
    }, 1);

    report(6, "Splitting-bound lemma", [&] {
        auto b = splitting_order_bound(Int(17), 4);
        auto f2 = find_prime_for_order(2), f4 = find_prime_for_order(4);
        bool ok = b.bound == 16 && b.symbols[0] == -1 && b.symbols[1] == 1 && b.symbols[2] == 1 && f2.p == 5 && f4.p == 17 &&
                  f4.degree_bound == 16 && f4.dim_bound == 8;
        std::ostringstream d;
        d << "bound(17,4)=" << b.bound << " symbols (" << b.symbols[0] << "," << b.symbols[1] << "," << b.symbols[2]
          << "); find_prime(2)=" << f2.p << ", find_prime(4)=" << f4.p << " bounds (" << f4.degree_bound << ","
          << f4.dim_bound << ")";
        return Outcome{ok, d.str()};
    }, 1);

    report(7, "Property suites (>= 200 randomized cases each)", [&] {
        if (unit_tests.empty()) return Outcome{false, "unit-test binary path not given"};
        const std::string filter =
            "Hilbert.ProductFormulaRandomized:Hilbert.BilinearAndSymmetricRandomized:Hilbert.NormSearchOracle:"
            "Cocycle.IdentityOnConstructedTables:Cocycle.DecomposeIsCoboundaryInvariant:"
            "TwistedAlgebra.DecompositionIsCoboundaryInvariant:TwistedAlgebra.ExplicitIsomorphismRespectsProducts:"
            "LFactor.SquareTwistInvarianceRandomized:LFactor.WeilOnTableQuartics:PointCounting.BruteForceOracle:"
            "PointCounting.LPolynomialPredictsCubicExtension";
        std::string cmd = "\"" + unit_tests + "\" --gtest_brief=1 --gtest_filter=" + filter + " > /dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        return Outcome{rc == 0, rc == 0 ? "11 suites green" : "unit-test exit status " + std::to_string(rc)};
    }, 30);

    report(8, "Excluded: p < 1000 sweep and isogeny claims", [&] {
        auto sweep = parse_prime_spec("5..997");
        bool ok = sweep.primes.size() == 166;
        return Outcome{ok, "not run in CI; optional mode `lfactor --primes 5..997` expands to " +
                               std::to_string(sweep.primes.size()) +
                               " primes; results are reported as Euler-factor agreement only"};
    }, 1);

    std::printf("%d failure(s)\n", failures);
    return failures;
}
