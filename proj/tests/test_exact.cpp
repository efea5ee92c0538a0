#include "doctest.h"

#include <random>

#include "weil/fpoly.hpp"
#include "weil/intpoly.hpp"
#include "weil/roots.hpp"

using namespace weil;

namespace {

// Test-side mod-p arithmetic, deliberately naive and independent of the
// library's finite-field kernel.
std::vector<long> naive_reduce(const IntPoly& f, long p) {
    std::vector<long> r;
    for (const auto& c : f.c) {
        Int m = c % p;
        if (m < 0) m += p;
        r.push_back(m.get_si());
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<long> naive_mul(const std::vector<long>& a, const std::vector<long>& b, long p) {
    if (a.empty() || b.empty()) return {};
    std::vector<long> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

bool naive_has_root(const std::vector<long>& f, long p) {
    for (long x = 0; x < p; ++x) {
        long acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % p;
        if (acc == 0) return true;
    }
    return false;
}

} // namespace

TEST_CASE("exact: rational parsing round trips and rejects junk") {
    CHECK(rat_str(parse_rat("-3/4")) == "-3/4");
    CHECK(rat_str(parse_rat("6/4")) == "3/2");
    CHECK(rat_str(parse_rat("7")) == "7");
    CHECK(rat_str(parse_rat("-0")) == "0");
    Rat a = parse_rat("1/3"), b = parse_rat("2/5");
    CHECK(rat_str((a + b) - b) == "1/3");  // exactness, no drift
    CHECK_THROWS_AS(parse_rat("1/0"), Error);
    CHECK_THROWS_AS(parse_rat("1/-2"), Error);
    CHECK_THROWS_AS(parse_rat("a"), Error);
    CHECK_THROWS_AS(parse_rat(""), Error);
    CHECK_THROWS_AS(parse_rat("1.5"), Error);
}

TEST_CASE("exact: integer factorization utility") {
    auto f = factorize(Int(2 * 2 * 3 * 5 * 5 * 13));
    REQUIRE(f.size() == 4);
    CHECK(f[0].first == 2); CHECK(f[0].second == 2);
    CHECK(f[1].first == 3); CHECK(f[1].second == 1);
    CHECK(f[2].first == 5); CHECK(f[2].second == 2);
    CHECK(f[3].first == 13); CHECK(f[3].second == 1);
    auto g = factorize(Int("-104729"));  // prime
    REQUIRE(g.size() == 1);
    CHECK(g[0].first == 104729);
    CHECK(val_p(Int(1000), Int(5)) == 3);
}

TEST_CASE("exact: polynomial arithmetic basics") {
    IntPoly f{-2, 0, 1};  // x^2 - 2
    IntPoly g{-3, 1};     // x - 3
    CHECK(f.degree() == 2);
    CHECK(mul(f, g) == IntPoly{6, -2, -3, 1});
    CHECK(add(f, g) == IntPoly{-5, 1, 1});
    CHECK(sub(f, f).is_zero());
    CHECK(derivative(f) == IntPoly{0, 2});
    CHECK(eval(f, rat_of(3)) == 7);
    CHECK(primitive_part(IntPoly{2, 4, -6}) == IntPoly{-1, -2, 3});
    CHECK(poly_str(IntPoly{5, -4, 1}) == "x^2 - 4*x + 5");
}

TEST_CASE("exact: rational polynomial division, gcd, xgcd") {
    RatPoly f = to_rat(IntPoly{-1, 0, 0, 0, 1});  // x^4 - 1
    RatPoly g = to_rat(IntPoly{-1, 0, 1});        // x^2 - 1
    RatPoly q, r;
    divmod(f, g, q, r);
    CHECK(r.is_zero());
    CHECK(q == to_rat(IntPoly{1, 0, 1}));
    CHECK(gcd_monic(f, g) == monic(g));
    // xgcd of coprime pair gives a constant combination
    RatPoly a = to_rat(IntPoly{1, 0, 1});   // x^2 + 1
    RatPoly b = to_rat(IntPoly{-1, 1});     // x - 1
    RatPoly u, v;
    RatPoly d = xgcd(a, b, u, v);
    CHECK(d.degree() == 0);
    CHECK(add(mul(u, a), mul(v, b)) == d);
    CHECK(squarefree_part(mul(g, g)) == monic(g));
}

TEST_CASE("exact: resultant matches evaluation at linear factors") {
    // Res(f, x - c) = f(c)
    CHECK(resultant(IntPoly{-2, 0, 1}, IntPoly{-3, 1}) == 7);
    CHECK(resultant(IntPoly{1, 0, 1}, IntPoly{0, 1}) == 1);
    CHECK(resultant(IntPoly{-2, 0, 1}, IntPoly{1}) == 1);  // constant g: c^deg f
    CHECK(resultant(IntPoly{3}, IntPoly{-1, 0, 0, 1}) == 27);
    CHECK(resultant(IntPoly(), IntPoly{1, 1}) == 0);
    CHECK_THROWS_AS(resultant(IntPoly(), IntPoly()), Error);
    // swap symmetry: Res(g,f) = (-1)^(mn) Res(f,g)
    IntPoly f{-2, 0, 1}, g{-1, -1, 0, 1};
    CHECK(resultant(f, g) == resultant(g, f));  // mn = 6 even
    IntPoly h{-3, 1};
    CHECK(resultant(f, h) == resultant(h, f));  // mn = 2 even
    IntPoly k{1, 1};
    CHECK(resultant(h, k) == -resultant(k, h));  // mn = 1 odd
    // multiplicativity: Res(f, g1*g2) = Res(f, g1) Res(f, g2)
    CHECK(resultant(f, mul(g, h)) == resultant(f, g) * resultant(f, h));
}

TEST_CASE("exact: Sturm real root counts") {
    CHECK(real_root_count(IntPoly{-2, 0, 1}) == 2);
    CHECK(real_root_count(IntPoly{1, 0, 1}) == 0);
    CHECK(real_root_count(IntPoly{-2, 0, 0, 1}) == 1);
    CHECK(real_root_count(cyclotomic(5)) == 0);
    CHECK(real_root_count(mul(IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1})) == 4);
    CHECK(real_root_count(IntPoly{-1, 1}) == 1);
    CHECK_THROWS_AS(real_root_count(mul(IntPoly{-1, 1}, IntPoly{-1, 1})), Error);
}

TEST_CASE("exact: cyclotomic polynomials") {
    CHECK(cyclotomic(1) == IntPoly{-1, 1});
    CHECK(cyclotomic(2) == IntPoly{1, 1});
    CHECK(cyclotomic(4) == IntPoly{1, 0, 1});
    CHECK(cyclotomic(5) == IntPoly{1, 1, 1, 1, 1});
    CHECK(cyclotomic(8) == IntPoly{1, 0, 0, 0, 1});
    CHECK(cyclotomic(12) == IntPoly{1, 0, -1, 0, 1});
    // product over divisors reconstructs x^n - 1
    for (unsigned long n : {6ul, 10ul, 12ul, 20ul, 30ul}) {
        IntPoly prod{1};
        for (unsigned long d = 1; d <= n; ++d)
            if (n % d == 0) prod = mul(prod, cyclotomic(d));
        std::vector<Int> xn(n + 1, Int(0));
        xn[0] = -1;
        xn[n] = 1;
        CHECK(prod == IntPoly(std::move(xn)));
        CHECK(static_cast<unsigned long>(cyclotomic(n).degree()) == euler_phi(n));
    }
}

TEST_CASE("exact: mod-p factorization fixtures") {
    // split prime
    auto f1 = poly_factor_mod_p(IntPoly{1, 0, 1}, Int(5));
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].first == IntPoly{2, 1});
    CHECK(f1[0].second == 1);
    CHECK(f1[1].first == IntPoly{3, 1});
    CHECK(f1[1].second == 1);
    // ramified
    auto f2 = poly_factor_mod_p(IntPoly{1, 0, 1}, Int(2));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].first == IntPoly{1, 1});
    CHECK(f2[0].second == 2);
    // inert
    auto f3 = poly_factor_mod_p(IntPoly{1, 0, 1}, Int(3));
    REQUIRE(f3.size() == 1);
    CHECK(f3[0].first == IntPoly{1, 0, 1});
    CHECK(f3[0].second == 1);
    // x^4+1 mod 2 = (x+1)^4
    auto f4 = poly_factor_mod_p(cyclotomic(8), Int(2));
    REQUIRE(f4.size() == 1);
    CHECK(f4[0].first == IntPoly{1, 1});
    CHECK(f4[0].second == 4);
    // x^4+1 mod 5: two quadratics
    auto f5 = poly_factor_mod_p(cyclotomic(8), Int(5));
    REQUIRE(f5.size() == 2);
    CHECK(f5[0].first.degree() == 2);
    CHECK(f5[1].first.degree() == 2);
    // error paths
    CHECK_THROWS_AS(poly_factor_mod_p(IntPoly{1, 0, 1}, Int(4)), Error);
    CHECK_THROWS_AS(poly_factor_mod_p(IntPoly(), Int(5)), Error);
}

TEST_CASE("exact: mod-p factorization reconstructs the input (randomized)") {
    std::mt19937_64 rng(20260822);
    for (long p : {2L, 3L, 5L, 13L, 17L, 47L}) {
        for (int trial = 0; trial < 40; ++trial) {
            int d = 1 + static_cast<int>(rng() % 8);
            std::vector<Int> cs(static_cast<size_t>(d) + 1);
            for (auto& c : cs) c = static_cast<long>(rng() % 41) - 20;
            cs.back() = 1 + static_cast<long>(rng() % 5);
            if (cs.back() % p == 0) cs.back() += 1;
            IntPoly f(std::move(cs));
            auto factors = poly_factor_mod_p(f, Int(p));
            // product of factors^mult == monic image of f, by naive test-side arithmetic
            std::vector<long> prod{1};
            int degsum = 0;
            for (const auto& [g, e] : factors) {
                auto gb = naive_reduce(g, p);
                CHECK(gb.back() == 1);  // monic
                if (g.degree() <= 3 && g.degree() > 1)
                    CHECK_FALSE(naive_has_root(gb, p));  // low-degree irreducibility, brute force
                for (int k = 0; k < e; ++k) prod = naive_mul(prod, gb, p);
                degsum += e * g.degree();
            }
            CHECK(degsum == f.degree());
            // compare against monic(f) mod p computed naively
            auto fb = naive_reduce(f, p);
            long lead = fb.back(), inv = 1;
            for (long x = 1; x < p; ++x)
                if ((x * lead) % p == 1) { inv = x; break; }
            for (auto& v : fb) v = (v * inv) % p;
            CHECK(prod == fb);
            // determinism
            auto again = poly_factor_mod_p(f, Int(p));
            CHECK(again == factors);
        }
    }
}

TEST_CASE("exact: mod-p irreducibility witness") {
    CHECK(is_irreducible_mod_p(IntPoly{1, 0, 1}, Int(3)));
    CHECK_FALSE(is_irreducible_mod_p(IntPoly{1, 0, 1}, Int(5)));
    CHECK(is_irreducible_mod_p(cyclotomic(5), Int(2)));
    CHECK(is_irreducible_mod_p(IntPoly{-2, 0, 1}, Int(3)));
    // x^4 + 1 famously splits mod every prime
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L,
                   47L, 53L, 59L, 61L, 67L, 71L, 73L, 79L, 83L, 89L, 97L})
        CHECK_FALSE(is_irreducible_mod_p(cyclotomic(8), Int(p)));
}

TEST_CASE("exact: Dedekind maximality criterion") {
    CHECK(dedekind_maximal_at_p(IntPoly{1, 0, 1}, Int(2)));
    CHECK_FALSE(dedekind_maximal_at_p(IntPoly{-5, 0, 1}, Int(2)));
    CHECK(dedekind_maximal_at_p(IntPoly{1, 0, 1}, Int(7)));   // p does not divide disc
    CHECK(dedekind_maximal_at_p(IntPoly{-2, 0, 1}, Int(2)));  // Z[sqrt 2] is maximal
    CHECK(dedekind_maximal_at_p(cyclotomic(5), Int(5)));      // Z[zeta_5] is maximal
    CHECK(dedekind_maximal_at_p(cyclotomic(8), Int(2)));      // Z[zeta_8] is maximal
    CHECK_FALSE(dedekind_maximal_at_p(IntPoly{-17, 0, 1}, Int(2)));  // index 2
    CHECK_THROWS_AS(dedekind_maximal_at_p(IntPoly{1, 0, 2}, Int(3)), Error);
    CHECK_THROWS_AS(dedekind_maximal_at_p(IntPoly{1, 0, 1}, Int(6)), Error);
}

TEST_CASE("exact: Hensel factor lifting") {
    // x^2+1 = (x+2)(x+3) mod 5; the x+2 branch lifts to x+57 mod 125
    IntPoly g = hensel_lift_factor(IntPoly{1, 0, 1}, IntPoly{2, 1}, Int(5), 3);
    CHECK(g == IntPoly{57, 1});
    // lifted factor divides f mod p^N: (57)^2 + 1 = 3250 = 26 * 125
    CHECK((eval_int(IntPoly{1, 0, 1}, Int(-57)) % Int(125)) == 0);
    // degree-2 factor of x^4+1 mod 3 lifts and still divides mod 3^8
    auto factors = poly_factor_mod_p(cyclotomic(8), Int(3));
    REQUIRE(factors.size() == 2);
    IntPoly lift = hensel_lift_factor(cyclotomic(8), factors[0].first, Int(3), 8);
    CHECK(lift.degree() == 2);
    Int mod;
    mpz_pow_ui(mod.get_mpz_t(), Int(3).get_mpz_t(), 8);
    // remainder of x^4+1 by the lifted factor must vanish mod 3^8
    RatPoly q, r;
    divmod(to_rat(cyclotomic(8)), to_rat(lift), q, r);
    for (const auto& c : r.c) {
        CHECK(c.get_den() == 1);
        CHECK((Int(c.get_num()) % mod) == 0);
    }
    // a multiplicity >= 2 factor is rejected
    CHECK_THROWS_AS(hensel_lift_factor(IntPoly{1, 0, 1}, IntPoly{1, 1}, Int(2), 4), Error);
}

TEST_CASE("exact: certified complex roots on known quadratics") {
    long bits = 128;
    // x^2 - 2: library roots against an independent mpfr sqrt oracle
    RootSet rs = complex_roots(IntPoly{-2, 0, 1}, bits);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.real_count == 2);
    Real two = Real::of_long(2, 256);
    Real s2 = sqrt(two);
    Real err0 = abs(rs.roots[0].re + s2);  // roots sorted: -sqrt2 first
    Real err1 = abs(rs.roots[1].re - s2);
    Real contract = pow2(-bits / 2, 256);
    CHECK(err0 < contract);
    CHECK(err1 < contract);
    CHECK(rs.roots[0].radius < contract);
    CHECK(rs.roots[0].im.is_zero());
    CHECK(rs.conj[0] == 0);

    // golden ratio poly x^2 - x - 1
    RootSet gr = complex_roots(IntPoly{-1, -1, 1}, bits);
    Real five = Real::of_long(5, 256);
    Real phi = (Real::of_long(1, 256) + sqrt(five)) / Real::of_long(2, 256);
    CHECK(abs(gr.roots[1].re - phi) < contract);

    // x^2 + 1: conjugate pair, zero real roots
    RootSet ip = complex_roots(IntPoly{1, 0, 1}, bits);
    CHECK(ip.real_count == 0);
    REQUIRE(ip.roots.size() == 2);
    CHECK(ip.conj[0] == 1);
    CHECK(ip.conj[1] == 0);
    CHECK(abs(ip.roots[1].im - Real::of_long(1, 256)) < contract);
    // exact mirror: same re, negated im
    CHECK(mpfr_cmp(ip.roots[0].re.raw(), ip.roots[1].re.raw()) == 0);
}

TEST_CASE("exact: complex roots reconstruct the polynomial (randomized)") {
    std::mt19937_64 rng(777);
    long bits = 128;
    int built = 0;
    while (built < 12) {
        int d = 2 + static_cast<int>(rng() % 5);
        std::vector<Int> cs(static_cast<size_t>(d) + 1);
        for (auto& c : cs) c = static_cast<long>(rng() % 21) - 10;
        cs.back() = 1;
        IntPoly f(std::move(cs));
        RatPoly rf = to_rat(f);
        if (gcd_monic(rf, derivative(rf)).degree() > 0) continue;
        ++built;
        RootSet rs = complex_roots(f, bits);
        REQUIRE(static_cast<int>(rs.roots.size()) == d);
        // multiply out (x - z_i) and compare coefficients
        mpfr_prec_t w = 256;
        std::vector<Complex> acc{Complex(Real::of_long(1, w), Real::of_long(0, w))};
        for (const auto& root : rs.roots) {
            std::vector<Complex> next(acc.size() + 1, Complex(w));
            Complex z(root.re, root.im);
            for (size_t i = 0; i < acc.size(); ++i) {
                next[i + 1] = next[i + 1] + acc[i];
                next[i] = next[i] - acc[i] * z;
            }
            acc = std::move(next);
        }
        Real tol = pow2(-40, w);
        for (int i = 0; i <= d; ++i) {
            CHECK(abs(acc[static_cast<size_t>(i)].re - Real::of_int(f.c[static_cast<size_t>(i)], w)) < tol);
            CHECK(abs(acc[static_cast<size_t>(i)].im) < tol);
        }
        // count real roots against Sturm directly
        CHECK(rs.real_count == real_root_count(f));
        // disks are pairwise disjoint
        for (size_t i = 0; i < rs.roots.size(); ++i)
            for (size_t j = i + 1; j < rs.roots.size(); ++j) {
                Complex a(rs.roots[i].re, rs.roots[i].im), b(rs.roots[j].re, rs.roots[j].im);
                CHECK(abs(a - b) > rs.roots[i].radius + rs.roots[j].radius);
            }
    }
    CHECK_THROWS_AS(complex_roots(mul(IntPoly{-1, 1}, IntPoly{-1, 1}), bits), Error);
    CHECK_THROWS_AS(complex_roots(IntPoly(), bits), Error);
}
