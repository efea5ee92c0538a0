#ifndef WEIL_INTPOLY_HPP
#define WEIL_INTPOLY_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "weil/rat.hpp"

namespace weil {

// Dense univariate polynomial over Z, coefficients lowest degree first,
// trailing zeros trimmed.  The zero polynomial has an empty coefficient
// vector and degree() == -1.
struct IntPoly {
    std::vector<Int> c;

    IntPoly() = default;
    explicit IntPoly(std::vector<Int> cs) : c(std::move(cs)) { trim(); }
    IntPoly(std::initializer_list<long> cs);

    static IntPoly x();
    static IntPoly constant(const Int& v);

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Int& lc() const;
    bool is_monic() const { return !is_zero() && lc() == 1; }

    bool operator==(const IntPoly&) const = default;
};

IntPoly add(const IntPoly& a, const IntPoly& b);
IntPoly sub(const IntPoly& a, const IntPoly& b);
IntPoly mul(const IntPoly& a, const IntPoly& b);
IntPoly neg(const IntPoly& a);
IntPoly derivative(const IntPoly& a);

Int content(const IntPoly& a);           // gcd of coefficients, 0 for zero poly
IntPoly primitive_part(const IntPoly& a); // content removed, leading coefficient > 0

Rat eval(const IntPoly& a, const Rat& x);
Int eval_int(const IntPoly& a, const Int& x);

// Human-readable form for messages, e.g. "x^2 - 4*x + 5".
std::string poly_str(const IntPoly& a);

// Same shape over Q.
struct RatPoly {
    std::vector<Rat> c;

    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> cs) : c(std::move(cs)) { trim(); }

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Rat& lc() const;

    bool operator==(const RatPoly&) const = default;
};

RatPoly to_rat(const IntPoly& a);
// Clears denominators and the content; result is primitive with lc > 0.
IntPoly clear_denominators(const RatPoly& a);

RatPoly add(const RatPoly& a, const RatPoly& b);
RatPoly sub(const RatPoly& a, const RatPoly& b);
RatPoly mul(const RatPoly& a, const RatPoly& b);
RatPoly neg(const RatPoly& a);
RatPoly scale(const RatPoly& a, const Rat& s);
RatPoly derivative(const RatPoly& a);
RatPoly monic(const RatPoly& a);
Rat eval(const RatPoly& a, const Rat& x);

// Division with remainder; divisor must be nonzero.
void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r);
RatPoly gcd_monic(const RatPoly& a, const RatPoly& b);
// Extended gcd: g = u*a + v*b with g monic (or zero).
RatPoly xgcd(const RatPoly& a, const RatPoly& b, RatPoly& u, RatPoly& v);
RatPoly squarefree_part(const RatPoly& a);

// Resultant Res(f, g) via exact Gaussian elimination on the Sylvester matrix.
// Res(f, c) = c^deg f for constant c; if exactly one argument is zero the
// result is 0; both zero raises BothZero.
Rat resultant(const IntPoly& f, const IntPoly& g);
Rat resultant(const RatPoly& f, const RatPoly& g);

// Number of distinct real roots of a squarefree polynomial (Sturm chain).
int real_root_count(const IntPoly& f);

// Exact determinant of a square rational matrix (row major).
Rat det_rational(std::vector<std::vector<Rat>> m);

// Solve M x = b exactly over Q (M row-major, rows >= cols allowed).  Free
// variables are set to zero; returns false if the system is inconsistent.
bool solve_rational(std::vector<std::vector<Rat>> M, std::vector<Rat> b, std::vector<Rat>& x);

// n-th cyclotomic polynomial by exact recursive division of x^n - 1.
IntPoly cyclotomic(unsigned long n);

// Euler phi, used to enumerate cyclotomic candidates.
unsigned long euler_phi(unsigned long n);

} // namespace weil

#endif
