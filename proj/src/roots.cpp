#include "weil/roots.hpp"

#include <algorithm>
#include <utility>

namespace weil {

namespace {

// Horner evaluation of a monic rational-coefficient polynomial at a complex
// point, coefficients materialized at the working precision once per call
// site via eval_ctx.
struct EvalCtx {
    std::vector<Complex> coeffs;  // lowest first, monic
    mpfr_prec_t prec;

    explicit EvalCtx(const std::vector<Rat>& monic, mpfr_prec_t w) : prec(w) {
        coeffs.reserve(monic.size());
        for (const auto& q : monic)
            coeffs.emplace_back(Real::of_rat(q, w), Real::of_long(0, w));
    }

    Complex operator()(const Complex& z) const {
        Complex acc(prec);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }
};

} // namespace

RootSet complex_roots(const IntPoly& f, long precision_bits) {
    if (f.is_zero()) fail("ZeroPolynomial", "complex_roots(0)");
    int n = f.degree();
    RootSet out;
    if (n == 0) return out;

    {
        RatPoly rf = to_rat(f);
        if (gcd_monic(rf, derivative(rf)).degree() > 0)
            fail("NotSquarefree", "complex_roots needs a squarefree polynomial: " + poly_str(f));
    }

    // monic rational coefficients
    std::vector<Rat> mc;
    mc.reserve(static_cast<size_t>(n) + 1);
    for (const auto& v : f.c) mc.emplace_back(Rat(v) / Rat(f.lc()));

    if (n == 1) {
        mpfr_prec_t w = static_cast<mpfr_prec_t>(precision_bits + 96);
        ComplexApprox r{Real::of_rat(-mc[0], w), Real::of_long(0, w), Real::of_long(0, w),
                        static_cast<long>(w)};
        out.roots.push_back(std::move(r));
        out.conj = {0};
        out.real_count = 1;
        return out;
    }

    int want_real = real_root_count(f);

    mpfr_prec_t w = static_cast<mpfr_prec_t>(precision_bits + 96);
    for (int attempt = 0; attempt < 5; ++attempt, w *= 2) {
        EvalCtx ev(mc, w);

        // Cauchy-style inclusion radius for the initial circle.
        Real bound = Real::of_long(1, w);
        for (int i = 0; i < n; ++i) bound = max(bound, abs(Real::of_rat(mc[i], w)));
        bound = bound + Real::of_long(1, w);

        std::vector<Complex> z;
        z.reserve(static_cast<size_t>(n));
        {
            Complex seed(Real::of_str("0.4", w), Real::of_str("0.9", w));
            Complex cur(bound, Real::of_long(0, w));
            for (int i = 0; i < n; ++i) {
                cur = cur * seed;
                z.push_back(cur);
            }
        }

        Real tol = pow2(-(static_cast<long>(w) - 32), w);
        bool converged = false;
        for (int iter = 0; iter < 600; ++iter) {
            Real worst = Real::of_long(0, w);
            for (int i = 0; i < n; ++i) {
                Complex denom(Real::of_long(1, w), Real::of_long(0, w));
                for (int j = 0; j < n; ++j)
                    if (j != i) denom = denom * (z[i] - z[j]);
                Complex corr = ev(z[i]) / denom;
                z[i] = z[i] - corr;
                worst = max(worst, abs(corr));
            }
            if (worst < tol) { converged = true; break; }
        }
        if (!converged) continue;

        // Pin the real/complex split with the exact Sturm count, then force
        // conjugate symmetry so downstream identities are exact.
        std::vector<int> idx(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return abs(z[a].im) < abs(z[b].im);
        });
        std::vector<Complex> fixed;
        fixed.reserve(static_cast<size_t>(n));
        for (int i = 0; i < want_real; ++i) {
            Complex r = z[idx[i]];
            fixed.emplace_back(r.re, Real::of_long(0, w));
        }
        std::vector<int> rest(idx.begin() + want_real, idx.end());
        std::vector<int> upper, lower;
        for (int i : rest) (z[i].im.sign() > 0 ? upper : lower).push_back(i);
        if (upper.size() != lower.size()) continue;
        auto by_pos = [&](int a, int b) {
            int c = mpfr_cmp(z[a].re.raw(), z[b].re.raw());
            if (c != 0) return c < 0;
            return abs(z[a].im) < abs(z[b].im);
        };
        std::sort(upper.begin(), upper.end(), by_pos);
        std::sort(lower.begin(), lower.end(), by_pos);
        bool paired = true;
        Real half = Real::of_rat(Rat(1, 2), w);
        for (size_t k = 0; k < upper.size(); ++k) {
            Complex a = z[upper[k]], b = z[lower[k]];
            Real re = (a.re + b.re) * half;
            Real im = (a.im - b.im) * half;
            if (!(im > Real::of_long(0, w))) { paired = false; break; }
            fixed.emplace_back(re, im);
            fixed.emplace_back(re, -im);
        }
        if (!paired) continue;

        // a posteriori Weierstrass disks on the symmetrized points
        std::vector<Real> radius;
        radius.reserve(static_cast<size_t>(n));
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            Complex denom(Real::of_long(1, w), Real::of_long(0, w));
            for (int j = 0; j < n; ++j)
                if (j != i) denom = denom * (fixed[i] - fixed[j]);
            Real d = abs(denom);
            if (d.is_zero()) { ok = false; break; }
            radius.push_back(abs(ev(fixed[i])) / d * Real::of_long(n, w));
        }
        if (!ok) continue;

        Real contract = pow2(-(precision_bits / 2), w);
        for (int i = 0; i < n && ok; ++i) {
            if (!(radius[i] < contract)) ok = false;
            for (int j = i + 1; j < n && ok; ++j) {
                Real dist = abs(fixed[i] - fixed[j]);
                if (!(dist > radius[i] + radius[j])) ok = false;
            }
        }
        // a claimed complex root whose disk touches the real axis is uncertified
        for (int i = want_real; i < n && ok; ++i)
            if (!(abs(fixed[i].im) > radius[i])) ok = false;
        if (!ok) continue;

        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (mpfr_cmp(fixed[a].re.raw(), fixed[b].re.raw()) != 0)
                return fixed[a].re < fixed[b].re;
            return fixed[a].im < fixed[b].im;
        });

        out.roots.clear();
        out.conj.assign(static_cast<size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            const Complex& zz = fixed[order[i]];
            out.roots.push_back(ComplexApprox{zz.re, zz.im, radius[order[i]],
                                              static_cast<long>(w)});
        }
        for (int i = 0; i < n; ++i) {
            if (out.roots[i].im.is_zero()) { out.conj[i] = i; continue; }
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                if (mpfr_cmp(out.roots[i].re.raw(), out.roots[j].re.raw()) == 0 &&
                    mpfr_cmp(Real(-out.roots[i].im).raw(), out.roots[j].im.raw()) == 0) {
                    out.conj[i] = j;
                    break;
                }
            }
            if (out.conj[i] < 0) { ok = false; break; }
        }
        if (!ok) continue;
        out.real_count = want_real;
        return out;
    }
    fail("PrecisionExhausted", "root certification failed for " + poly_str(f));
}

} // namespace weil
