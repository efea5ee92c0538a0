#ifndef WEIL_HEIGHTSPACE_HPP
#define WEIL_HEIGHTSPACE_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "weil/tower.hpp"

namespace weil {

// A step function at one tower level: finitely many supported rational
// places, a value for every member place of each supported fiber, zero
// everywhere else.
struct StepFunction {
    TowerPtr tower;
    size_t level = 0;
    std::vector<RationalPlace> support;  // sorted: infinity first, then primes
    std::map<std::string, Real> values;  // place_id -> value
    long precision_bits = 128;
};

// Validated construction from raw parts: the support is deduplicated and
// sorted, and every supported fiber must be fully populated with no stray
// ids.  Errors: BadLevel; BadCoordinates; NotPrime; NonMaximalOrder.
StepFunction make_step_function(TowerPtr t, size_t level, std::vector<RationalPlace> support,
                                std::map<std::string, Real> values, long precision_bits);

// The value at a place id, 0 when unsupported.
Real step_value(const StepFunction& F, const std::string& place_id);

// The function w -> log ||a||_w.  Support: the archimedean fiber plus every
// prime where a has a nonzero valuation; fibers whose values all vanish are
// dropped (for the archimedean fiber, vanish to within the root
// certification radius 2^(-precision_bits/2)).
// Errors: ZeroElement; FieldMismatch; NonMaximalOrder.
StepFunction embed_fa(TowerPtr t, size_t level, const FieldElement& a, long precision_bits);

// Integral against the fiber measure: sum of weight * value with exact
// rational weights.
Real integral(const StepFunction& F);

// (sum weight * |value|^p)^(1/p).  Errors: BadExponent (p < 1).
Real lp_norm(const StepFunction& F, const Rat& p);

// max |value| over the support (0 for the zero function).
Real sup_norm(const StepFunction& F);

// Pointwise rational combination sum q_i * F_i at a fixed tower level; an
// empty combination is the zero function.  Fibers whose combined values all
// cancel are dropped from the support.  Errors: LevelMismatch.
StepFunction linear_combine(TowerPtr t, size_t level,
                            const std::vector<std::pair<Rat, StepFunction>>& terms,
                            long precision_bits);

// Pull a level-j function up to level j+1: value at a fine place = value at
// its restriction.  Integral and every L^p norm are preserved.
// Errors: BadLevel (no finer level); NonMaximalOrder at the finer level.
StepFunction refine(const StepFunction& F);

// The matrix of Lemma-6 shape: rows indexed by generators, columns by the
// places of S, entries d_v * log ||xi_r||_v.
struct SUnitMatrix {
    FieldPtr field;
    std::vector<Place> S;
    std::vector<FieldElement> generators;
    std::vector<std::vector<Real>> entries;  // (s-1) x s
    int rank = 0;
    std::vector<std::vector<double>> nullspace_basis;
    long precision_bits = 128;
};

// Build and analyze the S-unit matrix: S must contain every archimedean
// place and satisfy |S| >= 2, generators must number |S| - 1 and be S-units
// (exactly zero valuation at every finite place outside S).  Rank by
// singular-value thresholding; nullspace basis returned.
// Errors: BadShape; NotAnSUnit (names the violating place); FieldMismatch.
SUnitMatrix sunit_matrix(FieldPtr k, const std::vector<Place>& S,
                         const std::vector<FieldElement>& generators, long precision_bits);

// Nearest rational with denominator <= max_den (exact search over the
// Stern-Brocot tree); ties resolved toward the smaller denominator.
Rat rational_round(const Real& x, const Int& max_den);

struct ApproxSolution {
    std::vector<Rat> coefficients;  // one exponent r/s per basis element
    Real residual_l1;               // weighted L1 residual of the rounded combination
    Real residual_l2;               // weighted L2 residual of the rounded combination
    Int denominator_bound;
};

// Least-squares approximation of target by rational combinations of the
// f_{basis[i]}: solve for real coefficients over the union support, round
// each to the nearest rational with denominator <= denominator_bound, and
// report the rounded combination's residuals.
// Errors: NotInX (|integral(target)| exceeds tolerance); EmptyBasis;
// FieldMismatch.
ApproxSolution approximate(const StepFunction& target, const std::vector<FieldElement>& basis,
                           const Int& denominator_bound, long precision_bits);

} // namespace weil

#endif
