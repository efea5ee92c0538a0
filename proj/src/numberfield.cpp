#include "weil/numberfield.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "weil/fpoly.hpp"
#include "weil/roots.hpp"

namespace weil {

namespace {

void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (!a.field || !b.field) fail("FieldMismatch", "element without a field");
    if (!a.field->same_field_as(*b.field))
        fail("FieldMismatch", "elements of " + a.field->label() + " and " + b.field->label());
}

std::vector<Rat> reduce_mod_min_poly(RatPoly p, const IntPoly& m) {
    RatPoly q, r;
    divmod(p, to_rat(m), q, r);
    std::vector<Rat> coords(static_cast<size_t>(m.degree()), Rat(0));
    for (size_t i = 0; i < r.c.size(); ++i) coords[i] = r.c[i];
    return coords;
}

RatPoly coord_poly(const FieldElement& a) {
    return RatPoly(std::vector<Rat>(a.coords.begin(), a.coords.end()));
}

// Does f have a rational root?  Candidates p/q with p | c0, q | lc.
bool has_rational_root(const IntPoly& f) {
    if (f.c[0] == 0) return true;
    auto divisors = [](const Int& n) {
        std::vector<Int> out{1};
        for (const auto& [p, e] : factorize(n)) {
            size_t sz = out.size();
            Int pk = 1;
            for (int k = 1; k <= e; ++k) {
                pk *= p;
                for (size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
            }
        }
        return out;
    };
    for (const Int& p : divisors(f.c[0]))
        for (const Int& q : divisors(f.lc())) {
            Rat cand(p, q);
            cand.canonicalize();
            if (eval(f, cand) == 0 || eval(f, -cand) == 0) return true;
        }
    return false;
}

// Exact recognition against cyclotomic polynomials of matching degree.
std::optional<unsigned long> recognize_cyclotomic(const IntPoly& f) {
    unsigned long d = static_cast<unsigned long>(f.degree());
    for (unsigned long n = 1; n <= 2 * d * d + 1; ++n)
        if (euler_phi(n) == d && cyclotomic(n) == f) return n;
    return std::nullopt;
}

} // namespace

bool FieldElement::operator==(const FieldElement& o) const {
    return field && o.field && field->same_field_as(*o.field) && coords == o.coords;
}

bool Automorphism::operator==(const Automorphism& o) const {
    return field && o.field && field->same_field_as(*o.field) && image == o.image;
}

NumberField::NumberField(IntPoly mp, std::string label)
    : min_poly_(std::move(mp)), degree_(min_poly_.degree()), label_(std::move(label)) {}

FieldPtr NumberField::create(IntPoly min_poly, std::string label,
                             const std::optional<std::vector<std::vector<Rat>>>& aut_images) {
    if (min_poly.is_zero() || !min_poly.is_monic())
        fail("NotMonic", "field polynomial must be monic: " + poly_str(min_poly));
    int d = min_poly.degree();
    if (d < 1) fail("NotIrreducible", "constant polynomial");

    std::optional<unsigned long> cyclo;
    std::string certificate = "degree-1";
    if (d > 1) {
        RatPoly rf = to_rat(min_poly);
        if (gcd_monic(rf, derivative(rf)).degree() > 0)
            fail("NotIrreducible", poly_str(min_poly) + " is not squarefree");
        if (has_rational_root(min_poly))
            fail("NotIrreducible", poly_str(min_poly) + " has a rational root");
        cyclo = recognize_cyclotomic(min_poly);
        if (cyclo) {
            certificate = "cyclotomic(" + std::to_string(*cyclo) + ")";
        } else if (d <= 3) {
            certificate = "no-rational-root";
        } else {
            long witness = 0;
            for (long p = 2; p < 100 && !witness; ++p) {
                if (!is_prime(Int(p))) continue;
                if (is_irreducible_mod_p(min_poly, Int(p))) witness = p;
            }
            if (!witness)
                fail("Unverifiable",
                     "no irreducibility certificate for " + poly_str(min_poly) +
                         " (no mod-p witness below 100, not cyclotomic)");
            certificate = "irreducible-mod-p(" + std::to_string(witness) + ")";
        }
    }

    auto field = std::shared_ptr<NumberField>(new NumberField(std::move(min_poly), std::move(label)));
    field->self_ = field;
    field->cyclo_n_ = cyclo;
    field->certificate_ = std::move(certificate);
    FieldPtr kc = field;

    // assemble automorphism images
    std::vector<std::vector<Rat>> images;
    std::vector<Rat> id_image(static_cast<size_t>(d), Rat(0));
    if (d > 1) id_image[1] = 1;
    else id_image[0] = -Rat(field->min_poly_.c[0]);  // degree 1: theta is rational

    if (aut_images) {
        images = *aut_images;
        if (images.empty()) fail("NotClosed", "empty automorphism set has no identity");
        for (const auto& im : images)
            if (im.size() != static_cast<size_t>(d))
                fail("BadAutomorphism", "image has wrong coordinate count");
    } else if (d == 1) {
        images = {id_image};
    } else if (d == 2) {
        // theta -> -theta - a1
        std::vector<Rat> conj_im(2, Rat(0));
        conj_im[0] = -Rat(field->min_poly_.c[1]);
        conj_im[1] = -1;
        images = {id_image, conj_im};
    } else if (cyclo) {
        unsigned long n = *cyclo;
        for (unsigned long a = 1; a < n; ++a) {
            if (std::gcd(a, n) != 1) continue;
            // theta^a reduced mod min_poly
            std::vector<Rat> acc(static_cast<size_t>(d), Rat(0));
            RatPoly power(std::vector<Rat>{Rat(1)});
            RatPoly x(std::vector<Rat>{Rat(0), Rat(1)});
            for (unsigned long i = 0; i < a; ++i) {
                power = mul(power, x);
                RatPoly q, r;
                divmod(power, to_rat(field->min_poly_), q, r);
                power = r;
            }
            for (size_t i = 0; i < power.c.size(); ++i) acc[i] = power.c[i];
            images.push_back(acc);
        }
    } else {
        images = {id_image};
    }

    // dedupe + deterministic order
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    field->aut_images_ = images;

    // validate: every image is an exact root of min_poly
    for (const auto& im : field->aut_images_) {
        FieldElement e{kc, im};
        FieldElement v = eval_at(field->min_poly_, e);
        if (!is_zero(v))
            fail("BadAutomorphism", "image is not a root of the field polynomial");
    }
    // group closure; a closed nonempty set of roots-of-min_poly maps contains
    // the identity, so its absence is also a closure failure
    bool id_found = false;
    for (size_t i = 0; i < field->aut_images_.size(); ++i) {
        if (field->aut_images_[i] == id_image) {
            field->identity_index_ = i;
            id_found = true;
        }
        for (size_t j = 0; j < field->aut_images_.size(); ++j) {
            Automorphism s{kc, field->aut_images_[i]};
            Automorphism t{kc, field->aut_images_[j]};
            Automorphism st = compose_automorphisms(s, t);
            if (!field->find_automorphism(st.image))
                fail("NotClosed", "automorphism set is not closed under composition");
        }
    }
    if (!id_found) fail("NotClosed", "automorphism set does not contain the identity");
    field->galois_ = (field->aut_images_.size() == static_cast<size_t>(d));
    return kc;
}

FieldPtr NumberField::rationals() {
    static FieldPtr q = create(IntPoly::x(), "Q");
    return q;
}

FieldPtr NumberField::cyclotomic_field(unsigned long n, std::string label) {
    if (label.empty()) label = "Q(zeta" + std::to_string(n) + ")";
    return create(cyclotomic(n), std::move(label));
}

Automorphism NumberField::automorphism(size_t i) const {
    if (i >= aut_images_.size()) fail("BadAutomorphism", "automorphism index out of range");
    return Automorphism{self_.lock(), aut_images_[i]};
}

std::optional<size_t> NumberField::find_automorphism(const std::vector<Rat>& image) const {
    for (size_t i = 0; i < aut_images_.size(); ++i)
        if (aut_images_[i] == image) return i;
    return std::nullopt;
}

// --------------------------------------------------------------- elements

FieldElement make_element(FieldPtr k, std::vector<Rat> coords) {
    if (!k) fail("FieldMismatch", "null field");
    if (coords.size() != static_cast<size_t>(k->degree()))
        fail("BadCoordinates", "expected " + std::to_string(k->degree()) + " coordinates");
    return FieldElement{std::move(k), std::move(coords)};
}

FieldElement element_of_rat(FieldPtr k, const Rat& q) {
    std::vector<Rat> c(static_cast<size_t>(k->degree()), Rat(0));
    c[0] = q;
    return FieldElement{std::move(k), std::move(c)};
}

FieldElement generator(FieldPtr k) {
    std::vector<Rat> c(static_cast<size_t>(k->degree()), Rat(0));
    if (k->degree() == 1) c[0] = -Rat(k->min_poly().c[0]);
    else c[1] = 1;
    return FieldElement{std::move(k), std::move(c)};
}

FieldElement zero_element(FieldPtr k) { return element_of_rat(std::move(k), Rat(0)); }
FieldElement one_element(FieldPtr k) { return element_of_rat(std::move(k), Rat(1)); }

FieldElement add(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    std::vector<Rat> c(a.coords);
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords[i];
    return FieldElement{a.field, std::move(c)};
}

FieldElement sub(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    std::vector<Rat> c(a.coords);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coords[i];
    return FieldElement{a.field, std::move(c)};
}

FieldElement neg(const FieldElement& a) {
    std::vector<Rat> c(a.coords);
    for (auto& v : c) v = -v;
    return FieldElement{a.field, std::move(c)};
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    RatPoly prod = mul(coord_poly(a), coord_poly(b));
    return FieldElement{a.field, reduce_mod_min_poly(std::move(prod), a.field->min_poly())};
}

bool is_zero(const FieldElement& a) {
    return std::all_of(a.coords.begin(), a.coords.end(), [](const Rat& v) { return v == 0; });
}

FieldElement inv(const FieldElement& a) {
    if (is_zero(a)) fail("DivisionByZero", "inverse of zero");
    RatPoly u, v;
    RatPoly g = xgcd(coord_poly(a), to_rat(a.field->min_poly()), u, v);
    if (g.degree() != 0) fail("Internal", "element not invertible modulo an irreducible polynomial");
    RatPoly scaled = scale(u, Rat(1) / g.c[0]);
    return FieldElement{a.field, reduce_mod_min_poly(std::move(scaled), a.field->min_poly())};
}

FieldElement div(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    return mul(a, inv(b));
}

FieldElement pow_elem(const FieldElement& a, long e) {
    FieldElement base = e < 0 ? inv(a) : a;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    FieldElement acc = one_element(a.field);
    while (n) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

FieldElement eval_at(const IntPoly& p, const FieldElement& a) {
    FieldElement acc = zero_element(a.field);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
        acc = add(mul(acc, a), element_of_rat(a.field, Rat(*it)));
    return acc;
}

FieldElement eval_at(const std::vector<Rat>& coeffs, const FieldElement& a) {
    FieldElement acc = zero_element(a.field);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = add(mul(acc, a), element_of_rat(a.field, *it));
    return acc;
}

// --------------------------------------------------------------- invariants

namespace {

// Multiplication-by-a matrix in the power basis; column j holds a * theta^j.
std::vector<std::vector<Rat>> mult_matrix(const FieldElement& a) {
    size_t d = a.coords.size();
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d, Rat(0)));
    FieldElement cur = a;
    FieldElement theta = generator(a.field);
    for (size_t j = 0; j < d; ++j) {
        for (size_t i = 0; i < d; ++i) m[i][j] = cur.coords[i];
        if (j + 1 < d) cur = mul(cur, theta);
    }
    return m;
}

} // namespace

RatPoly elem_char_poly(const FieldElement& a) {
    size_t d = a.coords.size();
    auto m = mult_matrix(a);
    // Faddeev-LeVerrier: p(y) = y^d - c1 y^(d-1) - ... - cd
    std::vector<Rat> cs;
    std::vector<std::vector<Rat>> mk = m;
    for (size_t k = 1; k <= d; ++k) {
        Rat tr = 0;
        for (size_t i = 0; i < d; ++i) tr += mk[i][i];
        Rat ck = tr / static_cast<long>(k);
        cs.push_back(ck);
        if (k == d) break;
        // mk <- m * (mk - ck I)
        std::vector<std::vector<Rat>> t = mk;
        for (size_t i = 0; i < d; ++i) t[i][i] -= ck;
        std::vector<std::vector<Rat>> next(d, std::vector<Rat>(d, Rat(0)));
        for (size_t i = 0; i < d; ++i)
            for (size_t l = 0; l < d; ++l) {
                if (m[i][l] == 0) continue;
                for (size_t j = 0; j < d; ++j) next[i][j] += m[i][l] * t[l][j];
            }
        mk = std::move(next);
    }
    std::vector<Rat> pc(d + 1, Rat(0));
    pc[d] = 1;
    for (size_t k = 1; k <= d; ++k) pc[d - k] = -cs[k - 1];
    return RatPoly(std::move(pc));
}

IntPoly elem_min_poly(const FieldElement& a) {
    RatPoly cp = elem_char_poly(a);
    RatPoly mp = squarefree_part(cp);
    return clear_denominators(mp);
}

Rat field_norm(const FieldElement& a) {
    if (is_zero(a)) return Rat(0);
    return det_rational(mult_matrix(a));
}

bool is_torsion(const FieldElement& a) {
    if (is_zero(a)) fail("ZeroElement", "torsion test on zero");
    IntPoly m = elem_min_poly(a);
    if (!m.is_monic()) return false;  // not an algebraic integer
    // numeric screen: all roots within 1 + 2^-20 of the unit circle
    RootSet rs = complex_roots(m, 64);
    Real bound = Real::of_long(1, 160) + pow2(-20, 160);
    for (const auto& r : rs.roots) {
        Complex z(r.re, r.im);
        if (abs(z) > bound) return false;
    }
    // exact confirmation: a^n = 1 for some n <= 2 d^2
    long d = a.field->degree();
    long limit = 2 * d * d;
    FieldElement one = one_element(a.field);
    FieldElement pow = a;
    for (long n = 1; n <= limit; ++n) {
        if (pow == one) return true;
        pow = mul(pow, a);
    }
    return false;
}

// ----------------------------------------------------------- automorphisms

FieldElement apply(const Automorphism& s, const FieldElement& a) {
    if (!s.field || !a.field || !s.field->same_field_as(*a.field))
        fail("FieldMismatch", "automorphism and element live in different fields");
    FieldElement im{a.field, s.image};
    return eval_at(a.coords, im);
}

Automorphism compose_automorphisms(const Automorphism& s, const Automorphism& t) {
    if (!s.field || !t.field || !s.field->same_field_as(*t.field))
        fail("FieldMismatch", "composing automorphisms of different fields");
    // (s o t)(theta) = T(s(theta)) where t(theta) = T(theta)
    FieldElement im{s.field, s.image};
    FieldElement res = eval_at(t.image, im);
    return Automorphism{s.field, res.coords};
}

Automorphism identity_automorphism(FieldPtr k) {
    return k->automorphism(k->identity_index());
}

Automorphism inverse_automorphism(const Automorphism& s) {
    FieldPtr k = s.field;
    auto id = identity_automorphism(k);
    for (size_t i = 0; i < k->automorphism_count(); ++i) {
        Automorphism cand = k->automorphism(i);
        if (compose_automorphisms(s, cand) == id) return cand;
    }
    fail("NotClosed", "automorphism has no inverse in the stored group");
}

// ----------------------------------------------------------------- parser

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    FieldPtr k;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }

    [[noreturn]] void bad(const std::string& why) {
        fail("BadExpression", why + " at offset " + std::to_string(pos) + " in '" + s + "'");
    }

    long parse_exponent() {
        skip();
        bool negate = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            negate = (s[pos] == '-');
            ++pos;
        }
        skip();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) bad("expected exponent");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            if (v > 1000000) bad("exponent too large");
            ++pos;
        }
        return negate ? -v : v;
    }

    FieldElement base() {
        skip();
        if (pos >= s.size()) bad("unexpected end of expression");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            FieldElement e = expr();
            if (!eat(')')) bad("expected ')'");
            return e;
        }
        if (c == 't') {
            ++pos;
            if (k->degree() == 1)
                bad("the rational field has no generator 't'");
            return generator(k);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return element_of_rat(k, Rat(Int(s.substr(start, pos - start), 10)));
        }
        bad("unexpected character");
    }

    FieldElement factor() {
        FieldElement b = base();
        skip();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            long e = parse_exponent();
            return pow_elem(b, e);
        }
        return b;
    }

    FieldElement unary() {
        skip();
        bool negate = false;
        while (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            if (s[pos] == '-') negate = !negate;
            ++pos;
            skip();
        }
        FieldElement f = factor();
        return negate ? neg(f) : f;
    }

    FieldElement term() {
        FieldElement acc = unary();
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                acc = mul(acc, unary());
            } else if (pos < s.size() && s[pos] == '/') {
                ++pos;
                acc = div(acc, unary());
            } else {
                return acc;
            }
        }
    }

    FieldElement expr() {
        FieldElement acc = term();
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
                acc = add(acc, term());
            } else if (pos < s.size() && s[pos] == '-') {
                ++pos;
                acc = sub(acc, term());
            } else {
                return acc;
            }
        }
    }
};

} // namespace

FieldElement parse_element(FieldPtr k, const std::string& text) {
    Parser p{text, 0, k};
    FieldElement e = p.expr();
    p.skip();
    if (p.pos != text.size()) p.bad("trailing characters");
    return e;
}

// ------------------------------------------------------- fundamental unit

FieldElement fundamental_unit_real_quadratic(FieldPtr k) {
    const IntPoly& f = k->min_poly();
    if (f.degree() != 2 || f.c[1] != 0 || f.c[0] >= 0)
        fail("BadField", "need a field presented as x^2 - D with D > 0");
    Int D = -f.c[0];
    Int a0;
    mpz_sqrt(a0.get_mpz_t(), D.get_mpz_t());
    if (a0 * a0 == D) fail("BadField", "D is a perfect square");

    // continued fraction of sqrt D; stop at the end of the first period
    Int m = 0, d = 1, a = a0;
    Int p_prev = 1, p_cur = a0, q_prev = 0, q_cur = 1;
    while (true) {
        m = d * a - m;
        d = (D - m * m) / d;
        a = (a0 + m) / d;
        if (a == 2 * a0) break;
        Int p_next = a * p_cur + p_prev;
        Int q_next = a * q_cur + q_prev;
        p_prev = p_cur; p_cur = p_next;
        q_prev = q_cur; q_cur = q_next;
    }
    FieldElement u = make_element(k, {Rat(p_cur), Rat(q_cur)});
    Rat n = field_norm(u);
    if (n != 1 && n != -1) fail("Internal", "continued fraction did not produce a unit");
    return u;
}

} // namespace weil
