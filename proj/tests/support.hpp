#ifndef QMKIT_TESTS_SUPPORT_HPP
#define QMKIT_TESTS_SUPPORT_HPP

#include <random>
#include <string>

#include <qmkit/qmkit.hpp>

namespace qmtest {

using namespace qmkit;

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20240611);
    return g;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline long rand_nonzero(long lo, long hi)
{
    long v = 0;
    while (v == 0) v = rand_int(lo, hi);
    return v;
}

inline Rat rand_rat(long bound = 60)
{
    return make_rat(Int(std::to_string(rand_nonzero(-bound, bound))), Int(std::to_string(rand_nonzero(1, bound))));
}

inline std::string fixture(const std::string& name) { return std::string(QMKIT_FIXTURE_DIR) + "/" + name; }

// y^2 = F(x) point count by looping over every (x, y) pair; q^2 work.
inline Int brute_count(const Fq& F, const FqPoly& f)
{
    std::uint64_t n = 0;
    for (std::uint64_t i = 0; i < F.q(); ++i) {
        FqElem fx = poly_eval(F, f, F.element(i));
        for (std::uint64_t k = 0; k < F.q(); ++k) {
            FqElem y = F.element(k);
            if (F.mul(y, y) == fx) ++n;
        }
    }
    // points at infinity of the smooth model: 2 or 0 when deg 6 (lc square or not), 1 when deg 5
    unsigned deg = 0;
    for (unsigned i = 0; i < f.size(); ++i)
        if (f[i] != F.zero()) deg = i;
    if (deg == 5) n += 1;
    else if (F.is_square(f[6])) n += 2;
    return Int(std::to_string(n));
}

} // namespace qmtest

#endif
