#ifndef WEIL_GALOIS_HPP
#define WEIL_GALOIS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "weil/tower.hpp"

namespace weil {

// The permutation an automorphism induces on the fiber over one rational
// place.  `mapping` is a bijection, ordered by source place id; composing
// permutations matches composing automorphisms, and the identity automorphism
// yields the identity mapping.
struct PlacePermutation {
    FieldPtr field;
    RationalPlace base;
    Automorphism automorphism;
    std::vector<std::pair<std::string, std::string>> mapping;  // place id -> place id
};

// Where sigma sends a place: the unique place y' in the same fiber with
// log_abs(y', a) = log_abs(place, sigma^-1(a)) for all probe elements a.
// Finite fibers are matched by exact valuation fingerprints; archimedean
// fibers by certified nearest-root matching with one precision doubling.
// Errors: FieldMismatch; AmbiguousAction; UnsupportedPlace.
Place act_on_place(const Automorphism& sigma, const Place& place, long precision_bits);

// The full induced permutation of the fiber over rp.
PlacePermutation place_permutation(const Automorphism& sigma, const RationalPlace& rp,
                                   long precision_bits);

// Orbit decomposition of the fiber under the whole automorphism group; each
// orbit lists its place ids sorted, orbits ordered by their smallest member.
// For a galois field the decomposition is a single orbit.
// Errors: NotGalois; and propagation from the action.
std::vector<std::vector<std::string>> orbit(FieldPtr k, const RationalPlace& rp,
                                            long precision_bits);

// One row of an invariance report: for automorphism index s and test function
// index fi, the weighted sums over the fiber of F(sigma w) and F(w).
struct InvarianceRow {
    size_t automorphism;
    size_t function;
    Real pushforward;  // sum of weight_w * F(sigma w)
    Real direct;       // sum of weight_w * F(w)
    bool ok;           // |difference| <= 2^(-precision_bits/4)
};

// Verify that averaging against the fiber weights is unchanged by every
// automorphism.  Test functions are per-place value tables keyed by place id
// and must cover the whole fiber.  Weights enter exactly; values to
// precision.  Errors: NotGalois; BadCoordinates (incomplete table).
std::vector<InvarianceRow> check_invariance(FieldPtr k, const RationalPlace& rp,
                                            const std::vector<std::map<std::string, Real>>& fs,
                                            long precision_bits);

// Restrict an automorphism of a higher tower level to level j: the level-j
// automorphism whose generator image is sigma applied to the embedded level-j
// generator, re-expressed exactly in level-j coordinates.
// Errors: BadLevel; FieldMismatch (sigma not from a tower level above j);
// NotStabilized (image leaves the embedded subfield).
Automorphism restrict_automorphism(const Tower& t, const Automorphism& sigma, size_t level);

} // namespace weil

#endif
