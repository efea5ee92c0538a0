#include "weil/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace weil {

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real Real::of_long(long x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
}

Real Real::of_int(const Int& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::of_rat(const Rat& x, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::of_str(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        fail("BadNumber", "bad decimal literal: '" + s + "'");
    return r;
}

std::string Real::str(int digits) const {
    if (digits <= 0)
        digits = static_cast<int>(static_cast<double>(prec()) * 0.30103) + 1;
    if (mpfr_zero_p(v_)) return "0";
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
    mpfr_exp_t e;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!mant.empty() && mant[0] == '-') { sign = "-"; mant = mant.substr(1); }
    // mant is a digit string with implied decimal point before the first digit: 0.mant * 10^e
    std::string out = sign + mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(static_cast<long>(e - 1));
    return out;
}

Real Real::bin(const Real& a, const Real& b,
               int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
    Real r(std::max(a.prec(), b.prec()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real Real::operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real abs(const Real& a) {
    Real r(a.prec());
    mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

Real log(const Real& a) {
    Real r(a.prec());
    mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

Real exp(const Real& a) {
    Real r(a.prec());
    mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

Real sqrt(const Real& a) {
    Real r(a.prec());
    mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

Real max(const Real& a, const Real& b) { return (a >= b) ? a : b; }
Real min(const Real& a, const Real& b) { return (a <= b) ? a : b; }

Real pow_si(const Real& a, long e) {
    Real r(a.prec());
    mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}

Real mul_rat(const Real& a, const Rat& q) {
    Real r(a.prec());
    mpfr_mul_q(r.raw(), a.raw(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si_2exp(r.raw(), 1, e, MPFR_RNDN);
    return r;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator/(const Complex& a, const Complex& b) {
    Real d = norm2(b);
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Complex conj(const Complex& a) { return {a.re, -a.im}; }

Real norm2(const Complex& a) { return a.re * a.re + a.im * a.im; }

Real abs(const Complex& a) {
    Real r(std::max(a.re.prec(), a.im.prec()));
    mpfr_hypot(r.raw(), a.re.raw(), a.im.raw(), MPFR_RNDN);
    return r;
}

} // namespace weil
