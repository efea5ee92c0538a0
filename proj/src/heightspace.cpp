#include "weil/heightspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

namespace weil {

namespace {

long working_bits(long precision_bits) { return precision_bits + 96; }

bool rp_less(const RationalPlace& a, const RationalPlace& b) {
    if (a.infinite != b.infinite) return a.infinite;
    if (a.infinite) return false;
    return a.p < b.p;
}

void canonicalize_support(std::vector<RationalPlace>& s) {
    std::sort(s.begin(), s.end(), rp_less);
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// exact value of an mpfr number as a rational
Rat real_to_rat(const Real& x) {
    if (x.is_zero()) return Rat(0);
    Int z;
    mp_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x.raw());
    Rat q;
    if (e >= 0) {
        Int num = z << static_cast<unsigned long>(e);
        q = Rat(num);
    } else {
        Int den = Int(1) << static_cast<unsigned long>(-e);
        q = Rat(z, den);
    }
    q.canonicalize();
    return q;
}

// nearest rational to q with denominator <= B; ties toward the smaller
// denominator (continued-fraction walk, all arithmetic exact)
Rat limit_denominator(const Rat& q, const Int& B) {
    if (q.get_den() <= B) return q;
    bool neg = q < 0;
    Int n = neg ? Int(-q.get_num()) : Int(q.get_num());
    Int d = q.get_den();
    Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    while (true) {
        Int a = n / d;
        Int q2 = q0 + a * q1;
        if (q1 != 0 && q2 > B) break;
        Int p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Int r = n - a * d;
        n = d;
        d = r;
        if (d == 0) break;  // cannot happen given den > B, kept for safety
    }
    Int k = (B - q0) / q1;
    Rat semi(p0 + k * p1, q0 + k * q1);
    semi.canonicalize();
    Rat conv(p1, q1);
    conv.canonicalize();
    Rat x = abs(q);
    Rat e_semi = abs(semi - x);
    Rat e_conv = abs(conv - x);
    Rat best;
    if (e_semi < e_conv)
        best = semi;
    else if (e_conv < e_semi)
        best = conv;
    else
        best = (semi.get_den() < conv.get_den()) ? semi : conv;
    return neg ? Rat(-best) : best;
}

struct WeightedPlace {
    std::string id;
    Rat weight;
};

// all supported cells of F's level across a support list, with exact weights
std::vector<WeightedPlace> cells_over(TowerPtr t, size_t level,
                                      const std::vector<RationalPlace>& support, long bits) {
    std::vector<WeightedPlace> out;
    for (const auto& rp : support)
        for (const auto& cell : partition(*t, level, rp, bits).cells)
            out.push_back(WeightedPlace{cell.place.place_id, cell.weight});
    return out;
}

} // namespace

StepFunction make_step_function(TowerPtr t, size_t level, std::vector<RationalPlace> support,
                                std::map<std::string, Real> values, long precision_bits) {
    if (!t || level >= t->level_count()) fail("BadLevel", "level out of range");
    canonicalize_support(support);
    std::set<std::string> valid;
    for (const auto& rp : support) {
        for (const auto& cell : partition(*t, level, rp, precision_bits).cells) {
            if (!values.count(cell.place.place_id))
                fail("BadCoordinates",
                     "supported fiber over " + rp.str() + " missing " + cell.place.place_id);
            valid.insert(cell.place.place_id);
        }
    }
    for (const auto& [id, v] : values) {
        (void)v;
        if (!valid.count(id))
            fail("BadCoordinates", "value for " + id + " outside the supported fibers");
    }
    return StepFunction{std::move(t), level, std::move(support), std::move(values),
                        precision_bits};
}

Real step_value(const StepFunction& F, const std::string& place_id) {
    auto it = F.values.find(place_id);
    if (it != F.values.end()) return it->second;
    return Real::of_long(0, working_bits(F.precision_bits));
}

StepFunction embed_fa(TowerPtr t, size_t level, const FieldElement& a, long precision_bits) {
    FieldPtr k = t->level(level);
    if (!a.field || !a.field->same_field_as(*k))
        fail("FieldMismatch", "element does not live at the requested level");
    if (is_zero(a)) fail("ZeroElement", "cannot embed zero");

    StepFunction F;
    F.tower = t;
    F.level = level;
    F.precision_bits = precision_bits;
    Real thr = pow2(-(precision_bits / 2), 64);

    // archimedean fiber, kept unless every value vanishes to certification
    {
        bool keep = false;
        std::map<std::string, Real> vals;
        for (const auto& cell : partition(*t, level, RationalPlace::infinity(),
                                          precision_bits).cells) {
            Real v = log_abs(cell.place, a, precision_bits).log_unnormalized;
            if (abs(v) > thr) keep = true;
            vals.emplace(cell.place.place_id, std::move(v));
        }
        if (keep) {
            F.support.push_back(RationalPlace::infinity());
            F.values.insert(vals.begin(), vals.end());
        }
    }

    // finite fibers over the support primes, kept when some valuation is
    // nonzero (exact)
    for (const Int& p : support_primes(a)) {
        bool keep = false;
        std::map<std::string, Real> vals;
        for (const auto& cell : partition(*t, level, RationalPlace::prime(p),
                                          precision_bits).cells) {
            LocalValue lv = log_abs(cell.place, a, precision_bits);
            if (*lv.valuation != 0) keep = true;
            vals.emplace(cell.place.place_id, std::move(lv.log_unnormalized));
        }
        if (keep) {
            F.support.push_back(RationalPlace::prime(p));
            F.values.insert(vals.begin(), vals.end());
        }
    }
    return F;
}

Real integral(const StepFunction& F) {
    long w = working_bits(F.precision_bits);
    Real acc = Real::of_long(0, w);
    for (const auto& wp : cells_over(F.tower, F.level, F.support, F.precision_bits))
        acc += mul_rat(F.values.at(wp.id), wp.weight);
    return acc;
}

Real lp_norm(const StepFunction& F, const Rat& p) {
    if (p < 1) fail("BadExponent", "L^p norms need p >= 1, got " + rat_str(p));
    long w = working_bits(F.precision_bits);
    Real acc = Real::of_long(0, w);
    for (const auto& wp : cells_over(F.tower, F.level, F.support, F.precision_bits)) {
        Real av = abs(F.values.at(wp.id));
        if (av.is_zero()) continue;
        if (p == 1)
            acc += mul_rat(av, wp.weight);
        else
            acc += mul_rat(exp(mul_rat(log(av), p)), wp.weight);
    }
    if (p == 1 || acc.is_zero()) return acc;
    Rat inv_p(p.get_den(), p.get_num());
    inv_p.canonicalize();
    return exp(mul_rat(log(acc), inv_p));
}

Real sup_norm(const StepFunction& F) {
    long w = working_bits(F.precision_bits);
    Real best = Real::of_long(0, w);
    for (const auto& [id, v] : F.values) {
        (void)id;
        best = max(best, abs(v));
    }
    return best;
}

StepFunction linear_combine(TowerPtr t, size_t level,
                            const std::vector<std::pair<Rat, StepFunction>>& terms,
                            long precision_bits) {
    FieldPtr k = t->level(level);
    for (const auto& [c, F] : terms) {
        (void)c;
        if (F.level != level || !F.tower || !F.tower->level(level)->same_field_as(*k))
            fail("LevelMismatch", "terms must live at the combining level");
    }
    long w = working_bits(precision_bits);
    Real thr = pow2(-(precision_bits / 2), 64);

    std::vector<RationalPlace> sup;
    for (const auto& [c, F] : terms) {
        (void)c;
        sup.insert(sup.end(), F.support.begin(), F.support.end());
    }
    canonicalize_support(sup);

    StepFunction out;
    out.tower = t;
    out.level = level;
    out.precision_bits = precision_bits;
    for (const auto& rp : sup) {
        bool keep = false;
        std::map<std::string, Real> vals;
        for (const auto& cell : partition(*t, level, rp, precision_bits).cells) {
            Real v = Real::of_long(0, w);
            for (const auto& [c, F] : terms) {
                auto it = F.values.find(cell.place.place_id);
                if (it != F.values.end()) v += mul_rat(it->second, c);
            }
            if (abs(v) > thr) keep = true;
            vals.emplace(cell.place.place_id, std::move(v));
        }
        if (keep) {
            out.support.push_back(rp);
            out.values.insert(vals.begin(), vals.end());
        }
    }
    return out;
}

StepFunction refine(const StepFunction& F) {
    if (F.level + 1 >= F.tower->level_count())
        fail("BadLevel", "no finer level to refine into");
    StepFunction out;
    out.tower = F.tower;
    out.level = F.level + 1;
    out.support = F.support;
    out.precision_bits = F.precision_bits;
    for (const auto& rp : F.support) {
        RefinementMap rm = refinement_map(*F.tower, F.level, rp, F.precision_bits);
        for (const auto& [fine, coarse] : rm.assignment)
            out.values.emplace(fine, F.values.at(coarse));
    }
    return out;
}

SUnitMatrix sunit_matrix(FieldPtr k, const std::vector<Place>& S,
                         const std::vector<FieldElement>& generators, long precision_bits) {
    if (S.size() < 2) fail("BadShape", "S needs at least two places");
    std::set<std::string> s_ids;
    for (const auto& v : S) {
        if (!v.field || !v.field->same_field_as(*k))
            fail("FieldMismatch", "S contains a place of another field");
        if (!s_ids.insert(v.place_id).second)
            fail("BadShape", "duplicate place " + v.place_id + " in S");
    }
    for (const auto& v : arch_places(k, precision_bits))
        if (!s_ids.count(v.place_id))
            fail("BadShape", "S must contain the archimedean place " + v.place_id);
    if (generators.size() + 1 != S.size())
        fail("BadShape", "need exactly |S| - 1 generators, got " +
                             std::to_string(generators.size()));

    for (const auto& xi : generators) {
        if (!xi.field || !xi.field->same_field_as(*k))
            fail("FieldMismatch", "generator from another field");
        if (is_zero(xi)) fail("NotAnSUnit", "zero is not an S-unit");
        for (const Int& p : support_primes(xi))
            for (const auto& w : finite_places(k, p))
                if (!s_ids.count(w.place_id) &&
                    *log_abs(w, xi, precision_bits).valuation != 0)
                    fail("NotAnSUnit", "generator has nonzero valuation at " + w.place_id);
    }

    SUnitMatrix M;
    M.field = k;
    M.S = S;
    M.generators = generators;
    M.precision_bits = precision_bits;
    for (const auto& xi : generators) {
        std::vector<Real> row;
        for (const auto& v : S)
            row.push_back(mul_rat(log_abs(v, xi, precision_bits).log_unnormalized,
                                  Rat(v.local_degree)));
        M.entries.push_back(std::move(row));
    }

    const size_t rows = generators.size(), cols = S.size();
    Eigen::MatrixXd A(rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) A(r, c) = M.entries[r][c].to_double();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double thr = sv.size() ? sv(0) * 1e-12 : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++rank;
    M.rank = rank;
    for (int c = rank; c < svd.matrixV().cols(); ++c) {
        std::vector<double> vec(cols);
        for (size_t r = 0; r < cols; ++r) vec[r] = svd.matrixV()(r, c);
        M.nullspace_basis.push_back(std::move(vec));
    }
    return M;
}

Rat rational_round(const Real& x, const Int& max_den) {
    if (max_den < 1) fail("BadShape", "denominator bound must be positive");
    return limit_denominator(real_to_rat(x), max_den);
}

ApproxSolution approximate(const StepFunction& target, const std::vector<FieldElement>& basis,
                           const Int& denominator_bound, long precision_bits) {
    if (basis.empty()) fail("EmptyBasis", "approximation needs at least one basis element");
    if (denominator_bound < 1) fail("BadShape", "denominator bound must be positive");
    long w = working_bits(precision_bits);
    Real tol = pow2(-(precision_bits / 4), w);
    if (abs(integral(target)) > tol)
        fail("NotInX", "target integral exceeds tolerance; not in the mean-zero subspace");

    std::vector<StepFunction> fs;
    fs.reserve(basis.size());
    for (const auto& b : basis)
        fs.push_back(embed_fa(target.tower, target.level, b, precision_bits));

    std::vector<RationalPlace> sup = target.support;
    for (const auto& F : fs) sup.insert(sup.end(), F.support.begin(), F.support.end());
    canonicalize_support(sup);
    std::vector<WeightedPlace> cells =
        cells_over(target.tower, target.level, sup, precision_bits);

    const size_t m = cells.size(), n = fs.size();
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd y(m);
    for (size_t r = 0; r < m; ++r) {
        double sw = std::sqrt(cells[r].weight.get_d());
        for (size_t c = 0; c < n; ++c)
            A(r, c) = sw * step_value(fs[c], cells[r].id).to_double();
        y(r) = sw * step_value(target, cells[r].id).to_double();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd c = svd.solve(y);

    ApproxSolution sol;
    sol.denominator_bound = denominator_bound;
    for (size_t i = 0; i < n; ++i)
        sol.coefficients.push_back(limit_denominator(Rat(c(i)), denominator_bound));

    Real l1 = Real::of_long(0, w);
    Real l2 = Real::of_long(0, w);
    for (const auto& cell : cells) {
        Real r = step_value(target, cell.id);
        for (size_t i = 0; i < n; ++i)
            r -= mul_rat(step_value(fs[i], cell.id), sol.coefficients[i]);
        l1 += mul_rat(abs(r), cell.weight);
        l2 += mul_rat(r * r, cell.weight);
    }
    sol.residual_l1 = std::move(l1);
    sol.residual_l2 = sqrt(l2);
    return sol;
}

} // namespace weil
