#ifndef WEIL_RAT_HPP
#define WEIL_RAT_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "weil/error.hpp"

namespace weil {

using Int = mpz_class;
using Rat = mpq_class;

// Canonical serialized forms: integers as base-10 strings, rationals reduced
// as "n" or "n/d" with d > 0.  parse_* reject anything else.

inline std::string int_str(const Int& n) { return n.get_str(); }

inline std::string rat_str(const Rat& q) { return q.get_str(); }

Int parse_int(const std::string& s);
Rat parse_rat(const std::string& s);

inline Rat rat_of(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// p-adic valuation of a nonzero integer.
long val_p(const Int& n, const Int& p);

// Full factorization of |n| (n != 0): sorted primes with exponents.
// Trial division + Pollard rho; plenty for desk-scale norms.
std::vector<std::pair<Int, int>> factorize(const Int& n);

bool is_prime(const Int& n);

} // namespace weil

#endif
