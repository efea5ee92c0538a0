#ifndef WEIL_NUMBERFIELD_HPP
#define WEIL_NUMBERFIELD_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weil/intpoly.hpp"

namespace weil {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Element of K = Q[x]/(min_poly), stored as exact rational coordinates in
// the power basis 1, theta, ..., theta^(d-1).
struct FieldElement {
    FieldPtr field;
    std::vector<Rat> coords;

    bool operator==(const FieldElement& o) const;
};

// Field automorphism, determined by the image of the generator.
struct Automorphism {
    FieldPtr field;
    std::vector<Rat> image;

    bool operator==(const Automorphism& o) const;
};

// Immutable number field.  Construction validates irreducibility via exact
// certificates (rational-root exclusion for degree <= 3, a mod-p witness
// with p < 100, or cyclotomic recognition) and refuses everything it cannot
// certify, so an accepted field is genuinely a field.  Automorphisms are
// validated as exact roots of min_poly and checked for group closure;
// quadratic and recognized-cyclotomic fields get their full automorphism
// group generated automatically.
class NumberField {
public:
    static FieldPtr create(IntPoly min_poly, std::string label,
                           const std::optional<std::vector<std::vector<Rat>>>& aut_images =
                               std::nullopt);
    static FieldPtr rationals();
    static FieldPtr cyclotomic_field(unsigned long n, std::string label = "");

    const IntPoly& min_poly() const { return min_poly_; }
    int degree() const { return degree_; }
    const std::string& label() const { return label_; }
    bool galois() const { return galois_; }
    std::optional<unsigned long> cyclotomic_n() const { return cyclo_n_; }
    // Which certificate established irreducibility, e.g. "irreducible-mod-p(7)".
    const std::string& certificate() const { return certificate_; }

    size_t automorphism_count() const { return aut_images_.size(); }
    Automorphism automorphism(size_t i) const;
    size_t identity_index() const { return identity_index_; }
    std::optional<size_t> find_automorphism(const std::vector<Rat>& image) const;

    bool same_field_as(const NumberField& o) const { return min_poly_ == o.min_poly_; }

private:
    NumberField(IntPoly mp, std::string label);

    IntPoly min_poly_;
    int degree_;
    std::string label_;
    std::string certificate_;
    std::vector<std::vector<Rat>> aut_images_;
    size_t identity_index_ = 0;
    bool galois_ = false;
    std::optional<unsigned long> cyclo_n_;
    std::weak_ptr<const NumberField> self_;
};

// ----- element construction

FieldElement make_element(FieldPtr k, std::vector<Rat> coords);
FieldElement element_of_rat(FieldPtr k, const Rat& q);
FieldElement generator(FieldPtr k);
FieldElement zero_element(FieldPtr k);
FieldElement one_element(FieldPtr k);

// Exact parser for generator expressions like "(1+t)/2" or "t^2 - 3", with t
// the field generator.  Errors: BadExpression, DivisionByZero.
FieldElement parse_element(FieldPtr k, const std::string& text);

// ----- element arithmetic (exact; FieldMismatch when fields differ)

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement div(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement inv(const FieldElement& a);
FieldElement pow_elem(const FieldElement& a, long e);
bool is_zero(const FieldElement& a);

// Evaluate an integer/rational polynomial at a field element.
FieldElement eval_at(const IntPoly& p, const FieldElement& a);
FieldElement eval_at(const std::vector<Rat>& coeffs, const FieldElement& a);

// ----- algebraic invariants

// Primitive integer minimal polynomial (leading coefficient > 0).
IntPoly elem_min_poly(const FieldElement& a);
// Characteristic polynomial of multiplication by a (monic over Q).
RatPoly elem_char_poly(const FieldElement& a);
Rat field_norm(const FieldElement& a);
// Kronecker test: numeric screen on the roots of the minimal polynomial,
// then an exact a^n = 1 confirmation with n <= 2 d^2.  Errors: ZeroElement.
bool is_torsion(const FieldElement& a);

// ----- automorphisms

FieldElement apply(const Automorphism& s, const FieldElement& a);
// compose(s, t) = s after t.
Automorphism compose_automorphisms(const Automorphism& s, const Automorphism& t);
Automorphism identity_automorphism(FieldPtr k);
Automorphism inverse_automorphism(const Automorphism& s);

// ----- constructors for special elements

// Fundamental unit of Z[sqrt D] for a field presented as x^2 - D, D > 0,
// via the continued fraction expansion of sqrt D.
FieldElement fundamental_unit_real_quadratic(FieldPtr k);

} // namespace weil

#endif
