#ifndef WEIL_REAL_HPP
#define WEIL_REAL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "weil/rat.hpp"

namespace weil {

// Thin RAII wrapper over mpfr_t.  Every value carries its own precision;
// binary operations compute at the larger of the two operand precisions,
// rounding to nearest.  Just enough surface for this project, not a general
// numerics library.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 53); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    static Real of_long(long x, mpfr_prec_t prec);
    static Real of_int(const Int& x, mpfr_prec_t prec);
    static Real of_rat(const Rat& x, mpfr_prec_t prec);
    // Parses a decimal string (as produced by str()).
    static Real of_str(const std::string& s, mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Deterministic decimal form: "-d.dddddde<exp>" with the given number of
    // significant digits (default derived from the precision).
    std::string str(int digits = 0) const;

    friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
    Real operator-() const;

    Real& operator+=(const Real& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend Real abs(const Real& a);
    friend Real log(const Real& a);
    friend Real exp(const Real& a);
    friend Real sqrt(const Real& a);
    friend Real max(const Real& a, const Real& b);
    friend Real min(const Real& a, const Real& b);
    friend Real pow_si(const Real& a, long e);
    // a * q exactly before rounding (mpfr_mul_q).
    friend Real mul_rat(const Real& a, const Rat& q);
    friend Real pow2(long e, mpfr_prec_t prec);  // 2^e

private:
    static Real bin(const Real& a, const Real& b,
                    int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t));
    mpfr_t v_;
};

Real pow2(long e, mpfr_prec_t prec);

// Complex value as a pair of Reals; only the operations the root finder and
// place evaluations need.
struct Complex {
    Real re, im;

    explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return re.prec(); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex conj(const Complex& a);
Real abs(const Complex& a);
Real norm2(const Complex& a);  // re^2 + im^2

} // namespace weil

#endif
