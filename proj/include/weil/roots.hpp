#ifndef WEIL_ROOTS_HPP
#define WEIL_ROOTS_HPP

#include <vector>

#include "weil/intpoly.hpp"
#include "weil/real.hpp"

namespace weil {

// One certified root: a disk of the given radius around (re, im) containing
// exactly one root of the input polynomial.
struct ComplexApprox {
    Real re, im, radius;
    long precision_bits = 0;
};

// All complex roots of a squarefree integer polynomial, sorted by
// (re, im); real roots carry an exactly-zero imaginary part, and conjugate
// pairs are explicit: conj[i] is the index of the conjugate of root i
// (conj[i] == i for real roots).
struct RootSet {
    std::vector<ComplexApprox> roots;
    std::vector<int> conj;
    int real_count = 0;
};

// Simultaneous (Durand-Kerner) iteration at elevated working precision with
// a posteriori Weierstrass disks; the real/complex split is pinned down
// exactly by a Sturm count, so a disk that holds one root and is centered on
// the real axis certifies a real root.  Radii come out far below the
// 2^(-precision_bits/2) contract; if the disks fail to separate, the working
// precision doubles (a few times) before PrecisionExhausted.
// Errors: ZeroPolynomial, NotSquarefree, PrecisionExhausted.
RootSet complex_roots(const IntPoly& f, long precision_bits);

} // namespace weil

#endif
