#include "weil/galois.hpp"

#include <algorithm>
#include <set>

#include "weil/roots.hpp"

namespace weil {

namespace {

long working_bits(long precision_bits) { return precision_bits + 96; }

// the fiber together with the index permutation sigma induces on it
struct FiberAction {
    std::vector<Place> fiber;
    std::vector<size_t> image;  // fiber[i] maps to fiber[image[i]]
};

FiberAction compute_action(const Automorphism& sigma, const RationalPlace& rp,
                           long precision_bits) {
    FieldPtr k = sigma.field;
    FiberAction fa;

    if (!rp.infinite) {
        fa.fiber = finite_places(k, rp.p);
        if (fa.fiber.size() == 1) {
            fa.image = {0};
            return fa;
        }
        Automorphism inv = inverse_automorphism(sigma);
        std::vector<FieldElement> probes = fiber_probes(k, fa.fiber);
        std::vector<FieldElement> pulled;
        pulled.reserve(probes.size());
        for (const auto& a : probes) pulled.push_back(apply(inv, a));
        std::vector<std::vector<Rat>> candidate;
        for (const auto& y : fa.fiber)
            candidate.push_back(valuation_fingerprint(y, probes, precision_bits));
        for (const auto& v : fa.fiber) {
            std::vector<Rat> goal = valuation_fingerprint(v, pulled, precision_bits);
            size_t hits = 0, match = 0;
            for (size_t i = 0; i < candidate.size(); ++i)
                if (candidate[i] == goal) {
                    ++hits;
                    match = i;
                }
            if (hits != 1)
                fail("AmbiguousAction", "image of " + v.place_id + " matched " +
                                            std::to_string(hits) + " fiber members");
            fa.image.push_back(match);
        }
    } else {
        Automorphism inv = inverse_automorphism(sigma);
        bool done = false;
        for (int attempt = 0; attempt < 2 && !done; ++attempt) {
            long bits = precision_bits << attempt;
            long w = working_bits(bits);
            fa.fiber = arch_places(k, bits);
            if (fa.fiber.size() == 1) {
                fa.image = {0};
                return fa;
            }
            RootSet roots = complex_roots(k->min_poly(), bits);
            fa.image.clear();
            bool ok = true;
            for (const auto& v : fa.fiber) {
                const ComplexApprox& z = roots.roots[v.root_index];
                Complex u = eval_poly_complex(inv.image, Complex{z.re, z.im}, w);
                auto m = match_arch_place(fa.fiber, roots, u, bits);
                if (!m) {
                    ok = false;
                    break;
                }
                fa.image.push_back(*m);
            }
            done = ok;
        }
        if (!done)
            fail("AmbiguousAction",
                 "archimedean matching stayed ambiguous after doubling precision");
    }

    std::set<size_t> targets(fa.image.begin(), fa.image.end());
    if (targets.size() != fa.fiber.size())
        fail("Internal", "induced map on the fiber is not a bijection");
    return fa;
}

} // namespace

Place act_on_place(const Automorphism& sigma, const Place& place, long precision_bits) {
    if (!sigma.field || !place.field || !place.field->same_field_as(*sigma.field))
        fail("FieldMismatch", "place and automorphism belong to different fields");
    RationalPlace rp = place.kind == PlaceKind::Finite ? RationalPlace::prime(place.p)
                                                       : RationalPlace::infinity();
    FiberAction fa = compute_action(sigma, rp, precision_bits);
    for (size_t i = 0; i < fa.fiber.size(); ++i)
        if (fa.fiber[i].place_id == place.place_id) return fa.fiber[fa.image[i]];
    fail("Internal", "place " + place.place_id + " not found in its own fiber");
}

PlacePermutation place_permutation(const Automorphism& sigma, const RationalPlace& rp,
                                   long precision_bits) {
    FiberAction fa = compute_action(sigma, rp, precision_bits);
    PlacePermutation out;
    out.field = sigma.field;
    out.base = rp;
    out.automorphism = sigma;
    for (size_t i = 0; i < fa.fiber.size(); ++i)
        out.mapping.emplace_back(fa.fiber[i].place_id, fa.fiber[fa.image[i]].place_id);
    std::sort(out.mapping.begin(), out.mapping.end());
    return out;
}

std::vector<std::vector<std::string>> orbit(FieldPtr k, const RationalPlace& rp,
                                            long precision_bits) {
    if (!k->galois()) fail("NotGalois", k->label() + " is not galois");
    std::vector<std::vector<size_t>> images;
    std::vector<Place> fiber;
    for (size_t s = 0; s < k->automorphism_count(); ++s) {
        FiberAction fa = compute_action(k->automorphism(s), rp, precision_bits);
        if (s == 0) fiber = fa.fiber;
        images.push_back(fa.image);
    }
    std::vector<bool> seen(fiber.size(), false);
    std::vector<std::vector<std::string>> orbits;
    for (size_t start = 0; start < fiber.size(); ++start) {
        if (seen[start]) continue;
        std::vector<size_t> queue = {start};
        seen[start] = true;
        std::vector<std::string> ids;
        while (!queue.empty()) {
            size_t cur = queue.back();
            queue.pop_back();
            ids.push_back(fiber[cur].place_id);
            for (const auto& img : images) {
                size_t nxt = img[cur];
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    queue.push_back(nxt);
                }
            }
        }
        std::sort(ids.begin(), ids.end());
        orbits.push_back(std::move(ids));
    }
    std::sort(orbits.begin(), orbits.end());
    return orbits;
}

std::vector<InvarianceRow> check_invariance(FieldPtr k, const RationalPlace& rp,
                                            const std::vector<std::map<std::string, Real>>& fs,
                                            long precision_bits) {
    if (!k->galois()) fail("NotGalois", k->label() + " is not galois");
    long w = working_bits(precision_bits);
    Real tol = pow2(-(precision_bits / 4), w);

    std::vector<InvarianceRow> rows;
    for (size_t s = 0; s < k->automorphism_count(); ++s) {
        FiberAction fa = compute_action(k->automorphism(s), rp, precision_bits);
        std::vector<Rat> weight;
        for (const auto& v : fa.fiber) {
            Rat q(v.local_degree, k->degree());
            q.canonicalize();
            weight.push_back(q);
        }
        for (size_t fi = 0; fi < fs.size(); ++fi) {
            const auto& table = fs[fi];
            for (const auto& v : fa.fiber)
                if (!table.count(v.place_id))
                    fail("BadCoordinates", "value table missing place " + v.place_id);
            Real pushed = Real::of_long(0, w);
            Real direct = Real::of_long(0, w);
            for (size_t i = 0; i < fa.fiber.size(); ++i) {
                pushed += mul_rat(table.at(fa.fiber[fa.image[i]].place_id), weight[i]);
                direct += mul_rat(table.at(fa.fiber[i].place_id), weight[i]);
            }
            bool ok = !(abs(pushed - direct) > tol);
            rows.push_back(InvarianceRow{s, fi, std::move(pushed), std::move(direct), ok});
        }
    }
    return rows;
}

Automorphism restrict_automorphism(const Tower& t, const Automorphism& sigma, size_t level) {
    if (!sigma.field) fail("FieldMismatch", "automorphism without a field");
    auto from = t.level_of(*sigma.field);
    if (!from) fail("FieldMismatch", "automorphism is not from any tower level");
    if (level >= t.level_count()) fail("BadLevel", "level " + std::to_string(level));
    if (*from < level) fail("BadLevel", "cannot restrict to a higher level");
    if (*from == level) return sigma;

    FieldPtr kj = t.level(level);
    if (kj->degree() == 1) return identity_automorphism(kj);

    FieldElement g = t.lift(generator(kj), *from);
    FieldElement img = apply(sigma, g);

    // express img in the power basis of the embedded generator, exactly
    size_t dj = kj->degree();
    size_t big = sigma.field->degree();
    std::vector<std::vector<Rat>> M(big, std::vector<Rat>(dj));
    FieldElement pw = one_element(sigma.field);
    for (size_t m = 0; m < dj; ++m) {
        for (size_t r = 0; r < big; ++r) M[r][m] = pw.coords[r];
        if (m + 1 < dj) pw = mul(pw, g);
    }
    std::vector<Rat> coords;
    if (!solve_rational(M, img.coords, coords))
        fail("NotStabilized", "automorphism moves the embedded level-" + std::to_string(level) +
                                  " subfield off itself");
    auto found = kj->find_automorphism(coords);
    if (!found)
        fail("NotStabilized",
             "restricted generator image is not an automorphism of the subfield");
    return kj->automorphism(*found);
}

} // namespace weil
