#ifndef QMKIT_QUADRATIC_HPP
#define QMKIT_QUADRATIC_HPP

#include <string>

#include "square_class.hpp"

namespace qmkit {

/// a + b*sqrt(m) in Q(sqrt m), m a non-trivial squarefree class.
struct QuadElem {
    SquareClass m;
    Rat a = 0;
    Rat b = 0;

    QuadElem() = default;
    QuadElem(SquareClass base, Rat a_, Rat b_ = 0) : m(std::move(base)), a(std::move(a_)), b(std::move(b_))
    {
        if (m.is_trivial()) throw InputError("QuadElem: Q(sqrt 1) is not a quadratic field");
    }

    static QuadElem sqrt_of(const SquareClass& m) { return QuadElem(m, 0, 1); }

    QuadElem conjugate() const { return QuadElem(m, a, -b); }
    Rat norm() const { return a * a - Rat(m.rep()) * b * b; }
    Rat trace() const { return 2 * a; }
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    QuadElem inverse() const
    {
        Rat n = norm();
        if (n == 0) throw InputError("QuadElem: division by zero");
        return QuadElem(m, a / n, -b / n);
    }

    friend QuadElem operator+(const QuadElem& x, const QuadElem& y) { return QuadElem(same(x, y), x.a + y.a, x.b + y.b); }
    friend QuadElem operator-(const QuadElem& x, const QuadElem& y) { return QuadElem(same(x, y), x.a - y.a, x.b - y.b); }
    friend QuadElem operator*(const QuadElem& x, const QuadElem& y)
    {
        const auto& m = same(x, y);
        return QuadElem(m, x.a * y.a + Rat(m.rep()) * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    friend QuadElem operator/(const QuadElem& x, const QuadElem& y) { return x * y.inverse(); }
    friend QuadElem operator*(const Rat& r, const QuadElem& x) { return QuadElem(x.m, r * x.a, r * x.b); }
    QuadElem operator-() const { return QuadElem(m, -a, -b); }

    friend bool operator==(const QuadElem& x, const QuadElem& y) { return x.m == y.m && x.a == y.a && x.b == y.b; }

    std::string str() const
    {
        return "(" + to_string(a) + ")+(" + to_string(b) + ")*sqrt(" + m.str() + ")";
    }

private:
    static const SquareClass& same(const QuadElem& x, const QuadElem& y)
    {
        if (x.m != y.m) throw InputError("QuadElem: mismatched quadratic fields");
        return x.m;
    }
};

} // namespace qmkit

#endif // QMKIT_QUADRATIC_HPP
