#include <gtest/gtest.h>

#include "support.hpp"

using namespace qmkit;
using namespace qmtest;

// Class of a nonzero integer in Q_p*/Q_p*^2: (v mod 2, unit mod 8) at 2, (v mod 2, unit is a square) at odd p.
static std::pair<int, long> local_class(long n, long p)
{
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    if (p == 2) return {v % 2, ((n % 8) + 8) % 8};
    long r = ((n % p) + p) % p;
    bool sq = false;
    for (long x = 1; x < p && !sq; ++x) sq = x * x % p == r;
    return {v % 2, sq ? 1 : 0};
}

// (a,b)_p = 1 iff the class of b is represented by a norm x^2 - a y^2 from Q_p(sqrt a).
// The norm group is a subgroup, so small integer norms already hit every class in it.
static int hilbert_oracle(long a, long b, long p)
{
    std::set<std::pair<int, long>> norms;
    for (long x = -40; x <= 40; ++x)
        for (long y = -40; y <= 40; ++y) {
            long n = x * x - a * y * y;
            if (n != 0) norms.insert(local_class(n, p));
        }
    return norms.count(local_class(b, p)) ? 1 : -1;
}

TEST(Hilbert, Examples)
{
    for (const char* v : {"2", "3", "17", "inf"}) EXPECT_EQ(hilbert_symbol(1, rand_rat(), Place::parse(v)), 1);
    EXPECT_EQ(hilbert_symbol(2, 3, Place::prime(3)), -1);
    EXPECT_EQ(hilbert_symbol(Rat(-299, 17), 3, Place::prime(17)), -1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::infinity()), -1);
    EXPECT_THROW(Place::parse("4"), InputError);
    EXPECT_THROW(hilbert_symbol(0, 3, Place::prime(3)), InputError);
}

TEST(Hilbert, NormSearchOracle)
{
    const std::vector<long> reps{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 14, -14, 15, -15, 21, -21};
    for (long p : {2L, 3L, 5L, 7L}) {
        for (long a : reps)
            for (long b : reps) {
                EXPECT_EQ(hilbert_symbol(a, b, Place::prime(p)), hilbert_oracle(a, b, p)) << "(" << a << "," << b << ")_" << p;
            }
    }
}

TEST(Hilbert, ProductFormulaRandomized)
{
    for (int i = 0; i < 300; ++i) {
        Rat a = rand_rat(200), b = rand_rat(200);
        int prod = 1;
        for (const auto& v : candidate_places({a, b})) prod *= hilbert_symbol(a, b, v);
        EXPECT_EQ(prod, 1) << a << " " << b;
    }
}

TEST(Hilbert, BilinearAndSymmetricRandomized)
{
    for (int i = 0; i < 300; ++i) {
        Rat a = rand_rat(), b1 = rand_rat(), b2 = rand_rat();
        for (const auto& v : candidate_places({a, b1, b2})) {
            EXPECT_EQ(hilbert_symbol(a, b1 * b2, v), hilbert_symbol(a, b1, v) * hilbert_symbol(a, b2, v));
            EXPECT_EQ(hilbert_symbol(a, b1, v), hilbert_symbol(b1, a, v));
            EXPECT_EQ(hilbert_symbol(a, -a, v), 1);
        }
        EXPECT_EQ(quaternion_class(a, b1 * b2), quaternion_class(a, b1) * quaternion_class(a, b2));
        EXPECT_EQ(quaternion_class(a * b1, b2), quaternion_class(a, b2) * quaternion_class(b1, b2));
        EXPECT_EQ(quaternion_class(a, b1 * b1 * Rat(4)), BrauerClass2());
    }
}

TEST(Brauer, QuaternionClasses)
{
    EXPECT_EQ(quaternion_class(2, 3).strs(), (std::vector<std::string>{"2", "3"}));
    EXPECT_EQ(quaternion_class(-6, -3).strs(), (std::vector<std::string>{"2", "infinity"}));
    EXPECT_EQ(quaternion_class(-6, -1), quaternion_class(-3, -1));
    EXPECT_EQ(quaternion_class(-3, -1).strs(), (std::vector<std::string>{"3", "infinity"}));
    EXPECT_TRUE((quaternion_class(-6, -1) * quaternion_class(-3, -1)).is_trivial());
}

TEST(Brauer, CharacterObstruction)
{
    EXPECT_TRUE(character_obstruction_class(DirichletCharacter()).is_trivial());
    auto eps3 = DirichletCharacter::quadratic(SquareClass::of(-3L));
    EXPECT_EQ(character_obstruction_class(eps3), quaternion_class(-3, -1));
    EXPECT_TRUE(character_obstruction_class(character_psi()).is_trivial());
    // quadratic characters: obstruction of eps_d is (d,-1)_Q
    for (long d : {-1L, 2L, -2L, 5L, -6L, 3L, 7L, -7L, 10L, -15L})
        EXPECT_EQ(character_obstruction_class(DirichletCharacter::quadratic(SquareClass::of(d))), quaternion_class(d, -1))
            << d;
}

TEST(Brauer, LocalDegreesAndSplitting)
{
    EXPECT_EQ(local_square_class_degree({SquareClass::of(1L)}, Place::prime(5)), 1u);
    EXPECT_EQ(local_square_class_degree({SquareClass::of(6L), SquareClass::of(-6L)}, Place::prime(2)), 4u);
    EXPECT_EQ(local_square_class_degree({SquareClass::of(-6L), SquareClass::of(-3L)}, Place::prime(7)), 1u);
    EXPECT_TRUE(splits_over_multiquadratic(BrauerClass2(), {}));
    EXPECT_TRUE(splits_over_multiquadratic(quaternion_class(2, 3), {SquareClass::of(6L), SquareClass::of(-6L)}));
    EXPECT_FALSE(splits_over_multiquadratic(quaternion_class(2, 3), {}));
    EXPECT_TRUE(splits_over_multiquadratic(quaternion_class(2, 3), {SquareClass::of(6L)}));
    EXPECT_TRUE(splits_over_multiquadratic(quaternion_class(2, 3), {SquareClass::of(-1L)}));
    EXPECT_FALSE(splits_over_multiquadratic(quaternion_class(2, 3), {SquareClass::of(7L)})); // 3 splits in Q(sqrt7)
}

TEST(Brauer, OddCardinalityRejected)
{
    EXPECT_THROW(BrauerClass2({Place::prime(2)}), ConsistencyError);
}

TEST(Character, Values)
{
    auto eps = character_epsilon();
    EXPECT_EQ(eps.sign(Int(5)), -1);
    EXPECT_EQ(eps.sign(Int(13)), -1);
    EXPECT_EQ(eps.sign(Int(7)), 1);
    auto psi = character_psi();
    EXPECT_EQ(psi.sign(Int(-1)), 1);
    EXPECT_EQ(psi.exponent(Int(3)), 3); // psi(3) = -i
    EXPECT_EQ((psi * psi).exponent(Int(3)), 2);
    // psi^2 = eps
    for (long a = 1; a < 16; a += 2) EXPECT_EQ((psi * psi).sign(Int(a)), eps.sign(Int(a)));
    EXPECT_THROW(DirichletCharacter(8, 2, {{3, 1}}), InputError); // does not span (Z/8)*
    EXPECT_THROW(DirichletCharacter(5, 2, {{2, 1}, {4, 1}}), InputError);
}
