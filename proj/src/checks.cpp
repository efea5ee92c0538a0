#include "weil/checks.hpp"

#include <cmath>
#include <map>
#include <set>

namespace weil {

namespace {

struct Ctx {
    long bits;
    long w;          // working precision
    Real tol;        // 1e-25, the structural-identity tolerance
    Real floor_h;    // 0.2, the smallest admissible non-torsion height
};

void push(CheckReport& rep, std::string check, std::string subject, bool ok,
          std::string detail = "") {
    if (!ok) ++rep.failures;
    rep.rows.push_back(CheckRow{std::move(check), std::move(subject), ok, std::move(detail)});
}

// a one- or two-level tower with k on top, enough to embed k's elements
TowerPtr tower_over(FieldPtr k) {
    if (k->degree() == 1) return Tower::create({k}, {});
    return Tower::create({NumberField::rationals(), k}, {zero_element(k)});
}

void element_checks(CheckReport& rep, const Ctx& cx, TowerPtr t, const std::string& label,
                    const std::string& expr, const FieldElement& a) {
    std::string subject = label + ":" + expr;
    size_t top = t->level_count() - 1;

    Real h_mahler = height_mahler(a, cx.bits).value;
    Real h_sum = height(a, cx.bits).value;
    push(rep, "height_methods", subject, abs(h_sum - h_mahler) < cx.tol,
         "place_sum=" + real_str(h_sum) + " mahler=" + real_str(h_mahler));

    StepFunction f = embed_fa(t, top, a, cx.bits);
    Real l1 = lp_norm(f, Rat(1));
    push(rep, "isometry", subject, abs(l1 - h_mahler - h_mahler) < cx.tol,
         "l1=" + real_str(l1));
    Real integ = integral(f);
    push(rep, "product_formula", subject, abs(integ) < cx.tol,
         "integral=" + real_str(integ));

    bool torsion = is_torsion(a);
    bool h_ok = torsion ? (h_mahler < cx.tol) : (h_mahler > cx.floor_h);
    push(rep, "kronecker", subject, h_ok,
         (torsion ? std::string("torsion h=") : std::string("h=")) + real_str(h_mahler));
}

void wellbehaved_checks(CheckReport& rep, const Ctx& cx, FieldPtr k) {
    (void)cx;
    static const long kPrimes[] = {2, 3, 5, 7, 11, 13, 19};
    std::string seen;
    bool ok = true;
    for (long p : kPrimes) {
        std::vector<Place> fiber;
        try {
            fiber = finite_places(k, Int(p));
        } catch (const Error&) {
            continue;  // the enumerator declined this prime; nothing to verify
        }
        int total = 0;
        for (const auto& v : fiber) total += v.e * v.f;
        if (total != k->degree()) ok = false;
        if (!seen.empty()) seen += ",";
        seen += std::to_string(p);
    }
    push(rep, "well_behaved", k->label(), ok, "primes=" + seen);
}

void tower_checks(CheckReport& rep, const Ctx& cx, TowerPtr t) {
    std::string tl = tower_label(*t);
    std::vector<RationalPlace> rps = {RationalPlace::infinity()};
    for (long p : {2, 3, 5, 7, 13}) rps.push_back(RationalPlace::prime(Int(p)));

    for (const auto& rp : rps) {
        std::string subject = tl + "@" + rp.str();
        if (t->level_count() < 2) {
            push(rep, "measure_refinement", subject, true, "single level");
            continue;
        }
        try {
            auto rows = check_measure_refinement(*t, rp, cx.bits);
            push(rep, "measure_refinement", subject, true,
                 std::to_string(rows.size()) + " cells");
        } catch (const Error& e) {
            push(rep, "measure_refinement", subject, false, e.code());
        }
    }

    // Galois structure of the top field's fibers: transitivity and
    // measure-weighted invariance
    FieldPtr k = t->level(t->level_count() - 1);
    if (k->degree() == 1 || !k->galois()) return;
    std::vector<RationalPlace> grps = {RationalPlace::infinity()};
    int taken = 0;
    for (long p : {2, 3, 5, 7, 11, 13, 19, 23}) {
        if (taken == 2) break;
        try {
            finite_places(k, Int(p));
        } catch (const Error&) {
            continue;
        }
        grps.push_back(RationalPlace::prime(Int(p)));
        ++taken;
    }
    for (const auto& rp : grps) {
        std::string subject = k->label() + "@" + rp.str();
        try {
            auto orbits = orbit(k, rp, cx.bits);
            push(rep, "transitivity", subject, orbits.size() == 1,
                 std::to_string(orbits.size()) + " orbit(s)");
        } catch (const Error& e) {
            push(rep, "transitivity", subject, false, e.code());
        }
        try {
            std::vector<Place> fiber = rp.infinite ? arch_places(k, cx.bits)
                                                   : finite_places(k, rp.p);
            FieldElement a = add(generator(k), element_of_rat(k, Rat(3)));
            if (is_zero(a)) a = add(generator(k), element_of_rat(k, Rat(4)));
            std::map<std::string, Real> indicator, slice;
            for (size_t i = 0; i < fiber.size(); ++i) {
                indicator.emplace(fiber[i].place_id, Real::of_long(i == 0 ? 1 : 0, cx.w));
                slice.emplace(fiber[i].place_id,
                              log_abs(fiber[i], a, cx.bits).log_unnormalized);
            }
            auto rows = check_invariance(k, rp, {indicator, slice}, cx.bits);
            bool ok = true;
            for (const auto& r : rows)
                if (!(abs(r.pushforward - r.direct) < cx.tol)) ok = false;
            push(rep, "invariance", subject, ok, std::to_string(rows.size()) + " sums");
        } catch (const Error& e) {
            push(rep, "invariance", subject, false, e.code());
        }
    }
}

// angular distance from the all-ones line, resolvable in doubles via the
// orthogonal component
double angle_to_ones(const std::vector<double>& v) {
    double dot = 0, nv = 0;
    for (double x : v) {
        dot += x;
        nv += x * x;
    }
    if (nv == 0) return 1.0;
    double mean = dot / static_cast<double>(v.size());
    double perp = 0;
    for (double x : v) perp += (x - mean) * (x - mean);
    return std::sqrt(perp / nv);
}

void sunit_checks(CheckReport& rep, const Ctx& cx, const std::vector<FieldPtr>& fields) {
    FieldPtr q = NumberField::rationals();
    static const long kSets[][4] = {{2, 3, 0, 0}, {2, 3, 5, 0}, {2, 3, 5, 7}};
    for (const auto& set : kSets) {
        std::vector<Place> S = arch_places(q, cx.bits);
        std::vector<FieldElement> gens;
        std::string name = "Q:{inf";
        for (long p : set) {
            if (!p) break;
            for (const auto& v : finite_places(q, Int(p))) S.push_back(v);
            gens.push_back(element_of_rat(q, Rat(p)));
            name += "," + std::to_string(p);
        }
        name += "}";
        SUnitMatrix M = sunit_matrix(q, S, gens, cx.bits);
        bool ok = M.rank == static_cast<int>(S.size()) - 1 &&
                  M.nullspace_basis.size() == 1 &&
                  angle_to_ones(M.nullspace_basis[0]) < 1e-10;
        push(rep, "sunit_rank", name, ok, "rank=" + std::to_string(M.rank));
    }

    for (const auto& k : fields) {
        const auto& mp = k->min_poly().c;
        if (mp.size() != 3 || mp[1] != 0 || mp[2] != 1 || mp[0] >= 0) continue;
        try {
            FieldElement u = fundamental_unit_real_quadratic(k);
            std::vector<Place> S = arch_places(k, cx.bits);
            SUnitMatrix M = sunit_matrix(k, S, {u}, cx.bits);
            bool ok = M.rank == 1 && M.nullspace_basis.size() == 1 &&
                      angle_to_ones(M.nullspace_basis[0]) < 1e-10;
            push(rep, "sunit_rank", k->label() + ":arch", ok,
                 "rank=" + std::to_string(M.rank));
        } catch (const Error& e) {
            push(rep, "sunit_rank", k->label() + ":arch", false, e.code());
        }
    }
}

} // namespace

CheckReport run_corpus_checks(const Corpus& corpus, long precision_bits) {
    Ctx cx{precision_bits, precision_bits + 96, Real(), Real()};
    cx.tol = pow_si(Real::of_long(10, cx.w), -25);
    cx.floor_h = Real::of_rat(Rat(1, 5), cx.w);

    CheckReport rep;
    std::map<std::string, FieldPtr> field_cache;
    std::map<std::string, TowerPtr> tower_cache;
    std::vector<FieldPtr> field_order;

    for (const auto& item : corpus.items) {
        std::string subject = item.field_path + ":" + item.elem;
        try {
            FieldPtr k;
            auto it = field_cache.find(item.field_path);
            if (it != field_cache.end()) {
                k = it->second;
            } else {
                k = field_from_json(
                    read_json_file(join_path(corpus.base_dir, item.field_path)));
                field_cache.emplace(item.field_path, k);
                field_order.push_back(k);
            }
            auto tt = tower_cache.find(k->label());
            if (tt == tower_cache.end())
                tt = tower_cache.emplace(k->label(), tower_over(k)).first;
            FieldElement a = parse_element(k, item.elem);
            element_checks(rep, cx, tt->second, k->label(), item.elem, a);
        } catch (const Error& e) {
            push(rep, "element", subject, false, e.code());
        }
    }

    for (const auto& k : field_order) wellbehaved_checks(rep, cx, k);

    for (const auto& path : corpus.tower_paths) {
        try {
            TowerPtr t = tower_from_json(read_json_file(join_path(corpus.base_dir, path)));
            tower_checks(rep, cx, t);
        } catch (const Error& e) {
            push(rep, "tower", path, false, e.code());
        }
    }

    sunit_checks(rep, cx, field_order);
    return rep;
}

Json check_report_json(const CheckReport& r) {
    Json j;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json x;
        x["check"] = row.check;
        x["subject"] = row.subject;
        x["ok"] = row.ok;
        if (!row.detail.empty()) x["detail"] = row.detail;
        rows.push_back(x);
    }
    j["rows"] = rows;
    j["total"] = r.rows.size();
    j["failures"] = r.failures;
    j["ok"] = (r.failures == 0);
    return j;
}

} // namespace weil
