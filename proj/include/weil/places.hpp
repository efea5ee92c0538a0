#ifndef WEIL_PLACES_HPP
#define WEIL_PLACES_HPP

#include <optional>
#include <string>
#include <vector>

#include "weil/numberfield.hpp"
#include "weil/real.hpp"
#include "weil/roots.hpp"

namespace weil {

enum class PlaceKind { Real, ComplexPair, Finite };

// A place of a number field.  Archimedean places point at a certified complex
// root of min_poly (root_index into the deterministic root ordering);  finite
// places carry the prime, the residue factor (monic mod p, coefficients lifted
// to [0, p)), the ramification index e and residue degree f.
//
// place_id formats: "arch:r<i>", "arch:c<i>", "fin:<p>:<c0.c1...>".
struct Place {
    FieldPtr field;
    PlaceKind kind = PlaceKind::Real;
    size_t root_index = 0;
    Int p;
    IntPoly residue_factor;
    int e = 1;
    int f = 1;
    bool only_place_above_p = true;
    int local_degree = 1;  // 1, 2, or e*f
    std::string place_id;
};

struct LocalValue {
    std::string place_id;
    Real log_unnormalized;           // log ||a||_v
    Real log_normalized;             // (d_v/d) * log ||a||_v
    std::optional<long> valuation;   // finite places: v_P(a), with v_P(p) = e
};

struct HeightResult {
    Real value;
    std::string method;  // "place_sum" or "mahler"
    long precision_bits = 0;
    Real defect;         // sum of log-normalized values; ~0 by the product formula
};

// One Real place per real root, one ComplexPair per conjugate pair, in the
// deterministic root order; local degrees sum to the field degree.
std::vector<Place> arch_places(FieldPtr k, long precision_bits);

// Places above p, one per irreducible factor of min_poly mod p, with
// e = multiplicity and f = factor degree; sum of e*f equals the degree.
// Requires the order Z[theta] maximal at p, or a single irreducible factor.
// Errors: NotPrime; NonMaximalOrder (names p).
std::vector<Place> finite_places(FieldPtr k, const Int& p);

// Sorted primes p where ||a||_v can differ from 1 for some v | p: the primes
// dividing the norm's numerator or denominator or any coordinate denominator
// (a proven superset of the support).
std::vector<Int> support_primes(const FieldElement& a);

// log ||a||_v.  Archimedean: evaluation at the certified root.  Finite with a
// single place above p: valuation from the field norm.  Finite with e = 1:
// valuation via Hensel lifting of the residue factor at adaptive precision.
// Errors: ZeroElement; UnsupportedPlace (e > 1 and siblings above p);
// PrecisionExhausted.
LocalValue log_abs(const Place& v, const FieldElement& a, long precision_bits);

// Weil height by the place sum: h = sum over v of (d_v/d) log+ ||a||_v,
// with the product-formula residual reported as defect.
HeightResult height(const FieldElement& a, long precision_bits);

// Independent height oracle from the primitive integer minimal polynomial:
// (1/n)(log|lead| + sum of log+ |root|).
HeightResult height_mahler(const FieldElement& a, long precision_bits);

// Sum over the support of (d_v/d) log ||a||_v; contract: ~0.
Real product_defect(const FieldElement& a, long precision_bits);

// Horner evaluation of a rational-coefficient polynomial at a complex point.
Complex eval_poly_complex(const std::vector<Rat>& coeffs, const Complex& z, long bits);

// Valuations of the probe elements at a finite place, one reduced fraction
// valuation/e per probe — the exact invariant used to tell the members of a
// fiber apart.
std::vector<Rat> valuation_fingerprint(const Place& v, const std::vector<FieldElement>& probes,
                                       long precision_bits);

// Certified nearest-root identification among archimedean places: the index
// of the unique member of `fiber` whose root representative (or conjugate,
// for pairs) lies within 2^(-precision_bits/2) of z while every other
// candidate stays beyond 2^(-precision_bits/4); nullopt when that separation
// cannot be certified.
std::optional<size_t> match_arch_place(const std::vector<Place>& fiber, const RootSet& roots,
                                       const Complex& z, long precision_bits);

} // namespace weil

#endif
