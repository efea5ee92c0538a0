#ifndef WEIL_FPOLY_HPP
#define WEIL_FPOLY_HPP

#include <vector>

#include "weil/intpoly.hpp"

namespace weil {

// Factorization of f over F_p: monic irreducible factors lifted to integer
// coefficients in [0, p), with multiplicities, sorted by degree then by the
// coefficient sequence (lowest first).  Multiplicities sum against the image
// of f/lc(f).  Squarefree split + distinct-degree + equal-degree splitting;
// the random stream for the splitting is seeded from (f, p) so the result is
// a pure function of its inputs.
//
// Errors: NotPrime, ZeroPolynomial, and BadPrime if p divides lc(f).
std::vector<std::pair<IntPoly, int>> poly_factor_mod_p(const IntPoly& f, const Int& p);

// Deterministic Rabin irreducibility test over F_p (degree preserved).
bool is_irreducible_mod_p(const IntPoly& f, const Int& p);

// Dedekind's criterion at p for a monic irreducible f: true iff p does not
// divide the index [O_K : Z[theta]].  If p does not divide disc(f) this is
// automatically true.  Errors: NotMonic, NotPrime.
bool dedekind_maximal_at_p(const IntPoly& f, const Int& p);

// Quadratic Hensel lift of a coprime split f = g*h (mod p) with f, g monic
// and g congruent to g0 mod p, to modulus p^N (digits = N).  Requires
// gcd(g0, f/g0) = 1 in F_p[x], i.e. g0 appears in f mod p with multiplicity
// one.  Returns the lifted g with coefficients reduced into [0, p^N).
IntPoly hensel_lift_factor(const IntPoly& f, const IntPoly& g0, const Int& p, long digits);

} // namespace weil

#endif
