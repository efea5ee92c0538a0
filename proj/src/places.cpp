#include "weil/places.hpp"

#include <algorithm>
#include <set>

#include "weil/fpoly.hpp"
#include "weil/roots.hpp"

namespace weil {

namespace {

long working_bits(long precision_bits) { return precision_bits + 96; }

// a = B(theta)/c with B integral and c the lcm of coordinate denominators.
IntPoly integral_numerator(const FieldElement& a, Int& c) {
    c = 1;
    for (const auto& q : a.coords)
        mpz_lcm(c.get_mpz_t(), c.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Int> b;
    b.reserve(a.coords.size());
    for (const auto& q : a.coords) {
        Rat scaled = q * c;
        b.push_back(Int(scaled.get_num()));
    }
    return IntPoly(std::move(b));
}

std::string finite_place_id(const Int& p, const IntPoly& g) {
    std::string id = "fin:" + int_str(p) + ":";
    for (size_t i = 0; i < g.c.size(); ++i) {
        if (i) id += '.';
        id += int_str(g.c[i]);
    }
    return id;
}

Real eval_real(const std::vector<Rat>& coeffs, const Real& x, long bits) {
    Real acc = Real::of_long(0, bits);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + Real::of_rat(*it, bits);
    return acc;
}

// |a(root)| with a small retry ladder if the value sits too close to zero to
// trust at the current root precision (a nonzero element cannot vanish at any
// embedding, so this only guards against undershooting precision).
Real arch_magnitude(const Place& v, const FieldElement& a, long precision_bits) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        long bits = precision_bits << attempt;
        long w = working_bits(bits);
        RootSet rs = complex_roots(v.field->min_poly(), bits);
        const ComplexApprox& root = rs.roots[v.root_index];
        Real mag(w);
        if (v.kind == PlaceKind::Real) {
            mag = abs(eval_real(a.coords, root.re, w));
        } else {
            mag = abs(eval_poly_complex(a.coords, Complex{root.re, root.im}, w));
        }
        if (!mag.is_zero() && !(mag < pow2(-(w / 3), w))) return mag;
    }
    fail("PrecisionExhausted", "embedding value too close to zero at place " + v.place_id);
}

long hensel_valuation(const Place& v, const IntPoly& B) {
    const IntPoly& f = v.field->min_poly();
    for (long digits = 20; digits <= 20 * 64; digits *= 2) {
        IntPoly g = hensel_lift_factor(f, v.residue_factor, v.p, digits);
        Rat r = resultant(g, B);
        if (r == 0) continue;
        long vp = val_p(Int(r.get_num()), v.p);
        if (vp * 2 >= digits) continue;      // not stable yet
        if (vp % v.f != 0)
            fail("Internal", "resultant valuation not divisible by the residue degree");
        return vp / v.f;
    }
    fail("PrecisionExhausted", "p-adic valuation did not stabilize at place " + v.place_id);
}

HeightResult height_by_places(const FieldElement& a, long precision_bits) {
    if (is_zero(a)) fail("ZeroElement", "height of zero");
    long w = working_bits(precision_bits);
    Real value = Real::of_long(0, w);
    Real defect = Real::of_long(0, w);
    Real floor = Real::of_long(0, w);
    auto absorb = [&](const LocalValue& lv) {
        value = value + max(floor, lv.log_normalized);
        defect = defect + lv.log_normalized;
    };
    for (const Place& v : arch_places(a.field, precision_bits))
        absorb(log_abs(v, a, precision_bits));
    for (const Int& p : support_primes(a))
        for (const Place& v : finite_places(a.field, p))
            absorb(log_abs(v, a, precision_bits));
    return HeightResult{value, "place_sum", precision_bits, defect};
}

} // namespace

std::vector<Place> arch_places(FieldPtr k, long precision_bits) {
    RootSet rs = complex_roots(k->min_poly(), precision_bits);
    std::vector<Place> out;
    int r = 0, c = 0, total = 0;
    for (size_t i = 0; i < rs.roots.size(); ++i) {
        if (rs.conj[i] == static_cast<int>(i)) {
            Place v;
            v.field = k;
            v.kind = PlaceKind::Real;
            v.root_index = i;
            v.local_degree = 1;
            v.place_id = "arch:r" + std::to_string(r++);
            out.push_back(std::move(v));
            total += 1;
        } else if (rs.roots[i].im.sign() > 0) {
            Place v;
            v.field = k;
            v.kind = PlaceKind::ComplexPair;
            v.root_index = i;
            v.local_degree = 2;
            v.place_id = "arch:c" + std::to_string(c++);
            out.push_back(std::move(v));
            total += 2;
        }
    }
    if (total != k->degree()) fail("Internal", "archimedean local degrees do not sum to d");
    return out;
}

std::vector<Place> finite_places(FieldPtr k, const Int& p) {
    if (!is_prime(p)) fail("NotPrime", int_str(p) + " is not prime");
    auto factors = poly_factor_mod_p(k->min_poly(), p);
    if (factors.size() > 1 && !dedekind_maximal_at_p(k->min_poly(), p))
        fail("NonMaximalOrder",
             "p = " + int_str(p) + " divides the index of Z[theta] and min_poly splits mod p");
    std::vector<Place> out;
    int total = 0;
    for (const auto& [g, mult] : factors) {
        Place v;
        v.field = k;
        v.kind = PlaceKind::Finite;
        v.p = p;
        v.residue_factor = g;
        v.e = mult;
        v.f = g.degree();
        v.only_place_above_p = (factors.size() == 1);
        v.local_degree = v.e * v.f;
        v.place_id = finite_place_id(p, g);
        total += v.local_degree;
        out.push_back(std::move(v));
    }
    if (total != k->degree()) fail("Internal", "local degrees above p do not sum to d");
    return out;
}

std::vector<Int> support_primes(const FieldElement& a) {
    if (is_zero(a)) fail("ZeroElement", "support of zero");
    std::set<Int> acc;
    auto put = [&](const Int& n) {
        if (n == 1 || n == -1) return;
        for (const auto& [q, e] : factorize(n)) {
            (void)e;
            acc.insert(q);
        }
    };
    Rat n = field_norm(a);
    put(Int(n.get_num()));
    put(Int(n.get_den()));
    for (const auto& q : a.coords) put(Int(q.get_den()));
    return {acc.begin(), acc.end()};
}

LocalValue log_abs(const Place& v, const FieldElement& a, long precision_bits) {
    if (!v.field || !a.field || !v.field->same_field_as(*a.field))
        fail("FieldMismatch", "place and element live in different fields");
    if (is_zero(a)) fail("ZeroElement", "log absolute value of zero");
    long w = working_bits(precision_bits);
    int d = v.field->degree();

    if (v.kind != PlaceKind::Finite) {
        Real mag = arch_magnitude(v, a, precision_bits);
        Real lu = log(mag);
        return LocalValue{v.place_id, lu, mul_rat(lu, Rat(v.local_degree, d)), std::nullopt};
    }

    long valuation;
    Int c;
    IntPoly B = integral_numerator(a, c);
    if (v.only_place_above_p) {
        Rat n = field_norm(a);
        long vp = val_p(Int(n.get_num()), v.p) - val_p(Int(n.get_den()), v.p);
        if (vp % v.f != 0) fail("Internal", "norm valuation not divisible by the residue degree");
        valuation = vp / v.f;
    } else if (v.e == 1) {
        valuation = hensel_valuation(v, B) - val_p(c, v.p);
    } else {
        fail("UnsupportedPlace",
             "ramified place with siblings above p = " + int_str(v.p) + ": " + v.place_id);
    }
    Real lu = mul_rat(log(Real::of_int(v.p, w)), Rat(-valuation, v.e));
    return LocalValue{v.place_id, lu, mul_rat(lu, Rat(v.local_degree, d)), valuation};
}

HeightResult height(const FieldElement& a, long precision_bits) {
    return height_by_places(a, precision_bits);
}

HeightResult height_mahler(const FieldElement& a, long precision_bits) {
    if (is_zero(a)) fail("ZeroElement", "height of zero");
    long w = working_bits(precision_bits);
    IntPoly m = elem_min_poly(a);
    int n = m.degree();
    Real acc = log(Real::of_int(m.lc(), w));
    RootSet rs = complex_roots(m, precision_bits);
    Real one = Real::of_long(1, w);
    for (const auto& root : rs.roots) {
        Real mag = abs(Complex{root.re, root.im});
        if (mag > one) acc = acc + log(mag);
    }
    return HeightResult{mul_rat(acc, Rat(1, n)), "mahler", precision_bits, Real::of_long(0, w)};
}

Real product_defect(const FieldElement& a, long precision_bits) {
    return height_by_places(a, precision_bits).defect;
}

std::vector<Rat> valuation_fingerprint(const Place& v, const std::vector<FieldElement>& probes,
                                       long precision_bits) {
    std::vector<Rat> fp;
    fp.reserve(probes.size());
    for (const auto& x : probes) {
        LocalValue lv = log_abs(v, x, precision_bits);
        Rat q(*lv.valuation, v.e);
        q.canonicalize();
        fp.push_back(q);
    }
    return fp;
}

Complex eval_poly_complex(const std::vector<Rat>& coeffs, const Complex& z, long bits) {
    Complex acc{Real::of_long(0, bits), Real::of_long(0, bits)};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z;
        acc.re = acc.re + Real::of_rat(*it, bits);
    }
    return acc;
}

std::optional<size_t> match_arch_place(const std::vector<Place>& fiber, const RootSet& roots,
                                       const Complex& z, long precision_bits) {
    auto dist = [&](const Real& re, const Real& im) { return abs(Complex{z.re - re, z.im - im}); };
    std::vector<Real> ds;
    ds.reserve(fiber.size());
    for (const Place& v : fiber) {
        const ComplexApprox& r = roots.roots[v.root_index];
        Real d = dist(r.re, r.im);
        if (v.kind == PlaceKind::ComplexPair) d = min(d, dist(r.re, -r.im));
        ds.push_back(std::move(d));
    }
    if (ds.empty()) return std::nullopt;
    size_t best = 0;
    for (size_t i = 1; i < ds.size(); ++i)
        if (ds[i] < ds[best]) best = i;
    if (!(ds[best] < pow2(-(precision_bits / 2), 64))) return std::nullopt;
    for (size_t i = 0; i < ds.size(); ++i)
        if (i != best && !(ds[i] > pow2(-(precision_bits / 4), 64))) return std::nullopt;
    return best;
}

} // namespace weil
