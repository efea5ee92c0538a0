#ifndef WEIL_CHECKS_HPP
#define WEIL_CHECKS_HPP

#include <string>
#include <vector>

#include "weil/io.hpp"

namespace weil {

struct CheckRow {
    std::string check;    // "isometry", "product_formula", ...
    std::string subject;  // which element / tower / place the row is about
    bool ok = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckRow> rows;
    size_t failures = 0;
};

// The full invariant suite over a corpus: per element, the height isometry
// ||f_a||_1 = 2 h(a), the product formula (zero integral), agreement of the
// two height routes, and the torsion/height dichotomy; per tower, exact
// measure refinement, Galois invariance, and fiber transitivity; over Q and
// any shipped real quadratic field, the S-unit rank law.  Rows come back in
// a deterministic order.
CheckReport run_corpus_checks(const Corpus& corpus, long precision_bits);

Json check_report_json(const CheckReport& r);

} // namespace weil

#endif
