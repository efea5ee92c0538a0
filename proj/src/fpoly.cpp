#include "weil/fpoly.hpp"

#include <algorithm>
#include <random>

namespace weil {

namespace {

// Dense polynomial over F_p, lowest degree first, coefficients in [0, p).
// p fits a long; intermediate products accumulate in 128 bits so support
// primes read off large norms stay safe.
using FpPoly = std::vector<long>;

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

long subm(long a, long b, long p) { long r = a - b; return r < 0 ? r + p : r; }

long mulm(long a, long b, long p) {
    return static_cast<long>(static_cast<unsigned __int128>(a) * b % p);
}

long powm(long a, long e, long p) {
    long r = 1 % p;
    while (e > 0) {
        if (e & 1) r = mulm(r, a, p);
        a = mulm(a, a, p);
        e >>= 1;
    }
    return r;
}

long invm(long a, long p) { return powm(a % p, p - 2, p); }

FpPoly mul(const FpPoly& a, const FpPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
    }
    FpPoly r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<long>(acc[i] % p);
    trim(r);
    return r;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, long p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = subm(r[i], b[i], p);
    trim(r);
    return r;
}

FpPoly make_monic(const FpPoly& a, long p) {
    if (a.empty()) return a;
    long inv = invm(a.back(), p);
    FpPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mulm(a[i], inv, p);
    return r;
}

// Remainder of a modulo b (b nonzero).
FpPoly rem(FpPoly a, const FpPoly& b, long p) {
    long inv = invm(b.back(), p);
    while (deg(a) >= deg(b)) {
        long f = mulm(a.back(), inv, p);
        int k = deg(a) - deg(b);
        for (size_t i = 0; i < b.size(); ++i)
            a[k + i] = subm(a[k + i], mulm(f, b[i], p), p);
        trim(a);
    }
    return a;
}

FpPoly quot(FpPoly a, const FpPoly& b, long p) {
    if (deg(a) < deg(b)) return {};
    long inv = invm(b.back(), p);
    FpPoly q(deg(a) - deg(b) + 1, 0);
    while (deg(a) >= deg(b)) {
        long f = mulm(a.back(), inv, p);
        int k = deg(a) - deg(b);
        q[k] = f;
        for (size_t i = 0; i < b.size(); ++i)
            a[k + i] = subm(a[k + i], mulm(f, b[i], p), p);
        trim(a);
    }
    return q;
}

FpPoly gcd(FpPoly a, FpPoly b, long p) {
    while (!b.empty()) {
        FpPoly r = rem(a, b, p);
        a = b;
        b = r;
    }
    if (!a.empty()) a = make_monic(a, p);
    return a;
}

FpPoly deriv(const FpPoly& a, long p) {
    if (a.size() <= 1) return {};
    FpPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i)
        r[i - 1] = static_cast<long>(static_cast<unsigned __int128>(a[i]) * (i % p) % p);
    trim(r);
    return r;
}

// base^e mod f, e given as a big integer.
FpPoly powmod(const FpPoly& base, const Int& e, const FpPoly& f, long p) {
    FpPoly r{1 % p};
    trim(r);
    FpPoly b = rem(base, f, p);
    long bits = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        r = rem(mul(r, r, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))
            r = rem(mul(r, b, p), f, p);
    }
    return r;
}

FpPoly reduce_mod_p(const IntPoly& f, long p) {
    FpPoly r(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) {
        Int m = f.c[i] % p;
        if (m < 0) m += p;
        r[i] = m.get_si();
    }
    trim(r);
    return r;
}

IntPoly lift_to_int(const FpPoly& f) {
    std::vector<Int> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = f[i];
    return IntPoly(std::move(c));
}

// In F_p, c^(1/p) = c, so the p-th root of g(x^p) just compresses indices.
FpPoly pth_root(const FpPoly& a, long p) {
    FpPoly r(a.size() / p + 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        r[i / p] = a[i];
    }
    trim(r);
    return r;
}

long check_small_prime(const Int& p) {
    if (!is_prime(p)) fail("NotPrime", p.get_str() + " is not prime");
    if (!p.fits_slong_p()) fail("BadPrime", "prime too large: " + p.get_str());
    return p.get_si();
}

// (squarefree factor, multiplicity) pairs; characteristic-p Yun.
void squarefree_split(const FpPoly& f, long p, long mult,
                      std::vector<std::pair<FpPoly, long>>& out) {
    if (deg(f) < 1) return;
    FpPoly d = deriv(f, p);
    if (d.empty()) {
        squarefree_split(pth_root(f, p), p, mult * p, out);
        return;
    }
    FpPoly c = gcd(f, d, p);
    FpPoly w = quot(f, c, p);
    long i = 1;
    while (deg(w) > 0) {
        FpPoly y = gcd(w, c, p);
        FpPoly z = quot(w, y, p);
        if (deg(z) > 0) out.emplace_back(make_monic(z, p), mult * i);
        w = y;
        c = quot(c, y, p);
        ++i;
    }
    if (deg(c) > 0) squarefree_split(pth_root(c, p), p, mult * p, out);
}

uint64_t stream_seed(const IntPoly& f, long p) {
    // FNV-1a over (p, coefficients mod p) so the splitting stream is a pure
    // function of the factorization problem.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<uint64_t>(p));
    for (const auto& c : f.c) {
        Int m = c % p;
        if (m < 0) m += p;
        mix(m.get_ui());
    }
    return h;
}

// Split a product of distinct irreducibles, all of degree d.
void equal_degree_split(const FpPoly& f, int d, long p, std::mt19937_64& rng,
                        std::vector<FpPoly>& out) {
    if (deg(f) == d) {
        out.push_back(f);
        return;
    }
    FpPoly split;
    while (true) {
        FpPoly a(static_cast<size_t>(deg(f)), 0);
        for (auto& v : a) v = static_cast<long>(rng() % static_cast<unsigned long>(p));
        trim(a);
        if (deg(a) < 1) continue;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1)) mod f
            FpPoly t = a, sq = a;
            for (int i = 1; i < d; ++i) {
                sq = rem(mul(sq, sq, 2), f, 2);
                t = sub(t, sq, 2);  // char 2: sub == add
            }
            FpPoly g = gcd(f, t, 2);
            if (deg(g) > 0 && deg(g) < deg(f)) { split = g; break; }
        } else {
            FpPoly g = gcd(f, a, p);
            if (deg(g) > 0 && deg(g) < deg(f)) { split = g; break; }
            Int pd;
            mpz_pow_ui(pd.get_mpz_t(), Int(p).get_mpz_t(), static_cast<unsigned long>(d));
            Int half = (pd - 1) / 2;
            FpPoly b = powmod(a, half, f, p);
            if (b.empty()) continue;
            b[0] = subm(b[0], 1, p);
            trim(b);
            g = gcd(f, b, p);
            if (deg(g) > 0 && deg(g) < deg(f)) { split = g; break; }
        }
    }
    equal_degree_split(split, d, p, rng, out);
    equal_degree_split(quot(f, split, p), d, p, rng, out);
}

} // namespace

std::vector<std::pair<IntPoly, int>> poly_factor_mod_p(const IntPoly& f, const Int& pz) {
    long p = check_small_prime(pz);
    if (f.is_zero()) fail("ZeroPolynomial", "factoring the zero polynomial");
    FpPoly fb = reduce_mod_p(f, p);
    if (deg(fb) != f.degree()) fail("BadPrime", "leading coefficient vanishes mod " + pz.get_str());
    if (deg(fb) < 1) return {};
    fb = make_monic(fb, p);

    std::mt19937_64 rng(stream_seed(f, p));
    std::vector<std::pair<FpPoly, long>> sqf;
    squarefree_split(fb, p, 1, sqf);

    std::vector<std::pair<IntPoly, int>> result;
    for (const auto& [g, mult] : sqf) {
        // distinct-degree split of the squarefree g
        FpPoly h = g;
        FpPoly xp = powmod(FpPoly{0, 1}, Int(p), h, p);  // x^p mod h
        FpPoly power = xp;                               // x^(p^d) mod h
        for (int d = 1; deg(h) > 0; ++d) {
            if (2 * d > deg(h)) {
                // what remains is a single irreducible factor
                std::vector<FpPoly> parts{h};
                for (const auto& part : parts)
                    result.emplace_back(lift_to_int(part), static_cast<int>(mult));
                break;
            }
            FpPoly diff = sub(power, FpPoly{0, 1}, p);
            FpPoly gd = gcd(h, diff, p);
            if (deg(gd) > 0) {
                std::vector<FpPoly> parts;
                equal_degree_split(gd, d, p, rng, parts);
                for (const auto& part : parts)
                    result.emplace_back(lift_to_int(part), static_cast<int>(mult));
                h = quot(h, gd, p);
                if (deg(h) == 0) break;
            }
            // advance x^(p^d) -> x^(p^(d+1)) modulo the (possibly shrunk) h
            power = powmod(rem(power, h, p), Int(p), h, p);
        }
    }

    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.c < b.first.c;
    });
    return result;
}

bool is_irreducible_mod_p(const IntPoly& f, const Int& pz) {
    long p = check_small_prime(pz);
    FpPoly fb = reduce_mod_p(f, p);
    if (deg(fb) != f.degree()) return false;  // degree collapsed: no witness
    int d = deg(fb);
    if (d < 1) return false;
    if (d == 1) return true;
    fb = make_monic(fb, p);
    // Rabin: x^(p^d) == x mod f, and gcd(x^(p^(d/q)) - x, f) = 1 for primes q | d.
    Int pz_l(p);
    auto xq = [&](long e) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), pz_l.get_mpz_t(), static_cast<unsigned long>(e));
        return powmod(FpPoly{0, 1}, pe, fb, p);
    };
    FpPoly top = sub(xq(d), FpPoly{0, 1}, p);
    if (!top.empty()) return false;
    for (long q = 2; q <= d; ++q) {
        if (d % q != 0 || !is_prime(Int(q))) continue;
        FpPoly diff = sub(xq(d / q), FpPoly{0, 1}, p);
        FpPoly g = gcd(fb, diff, p);
        if (deg(g) != 0) return false;
    }
    return true;
}

bool dedekind_maximal_at_p(const IntPoly& f, const Int& pz) {
    if (f.is_zero() || !f.is_monic()) fail("NotMonic", "Dedekind criterion needs a monic polynomial");
    long p = check_small_prime(pz);
    auto factors = poly_factor_mod_p(f, pz);
    // radical g = prod g_i, h = f/g mod p
    FpPoly g{1};
    for (const auto& [gi, e] : factors) {
        (void)e;
        g = mul(g, reduce_mod_p(gi, p), p);
    }
    FpPoly fb = make_monic(reduce_mod_p(f, p), p);
    FpPoly h = quot(fb, g, p);
    // T = (g* h* - f)/p over Z with monic lifts g*, h*
    IntPoly gl = lift_to_int(g), hl = lift_to_int(h);
    IntPoly prod = mul(gl, hl);
    IntPoly diff = sub(prod, f);
    std::vector<Int> tc(diff.c.size());
    for (size_t i = 0; i < diff.c.size(); ++i) {
        if (diff.c[i] % pz != 0) fail("Internal", "Dedekind lift out of step");
        tc[i] = diff.c[i] / pz;
    }
    FpPoly tbar = reduce_mod_p(IntPoly(std::move(tc)), p);
    FpPoly d1 = gcd(tbar, g, p);
    FpPoly d2 = gcd(d1, h, p);
    return deg(d2) == 0;
}

IntPoly hensel_lift_factor(const IntPoly& f, const IntPoly& g0, const Int& pz, long digits) {
    long p = check_small_prime(pz);
    if (!f.is_monic()) fail("NotMonic", "Hensel lift needs a monic polynomial");
    FpPoly fb = make_monic(reduce_mod_p(f, p), p);
    FpPoly gb = reduce_mod_p(g0, p);
    if (gb.empty() || gb.back() != 1) gb = make_monic(gb, p);
    FpPoly hb = quot(fb, gb, p);
    if (!rem(fb, gb, p).empty()) fail("Internal", "factor does not divide mod p");
    if (deg(gcd(gb, hb, p)) != 0)
        fail("NotSquarefree", "residue factor is not coprime to the cofactor mod " + pz.get_str());

    // Bezout s*g + t*h = 1 mod p via extended Euclid over F_p.
    FpPoly r0 = gb, r1 = hb;
    FpPoly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        FpPoly q = quot(r0, r1, p);
        FpPoly r2 = sub(r0, mul(q, r1, p), p);
        FpPoly s2 = sub(s0, mul(q, s1, p), p);
        FpPoly t2 = sub(t0, mul(q, t1, p), p);
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    long inv = invm(r0.back(), p);
    for (auto& v : s0) v = mulm(v, inv, p);
    for (auto& v : t0) v = mulm(v, inv, p);
    // Now s0*g + t0*h = 1 mod p (note: s0 pairs with g).

    // Work over Z/m with mpz coefficients; quadratic lifting until m >= p^digits.
    using ZPoly = std::vector<Int>;
    auto ztrim = [](ZPoly& a) { while (!a.empty() && a.back() == 0) a.pop_back(); };
    auto zred = [&](ZPoly a, const Int& m) {
        for (auto& v : a) { v %= m; if (v < 0) v += m; }
        ztrim(a);
        return a;
    };
    auto zmul = [&](const ZPoly& a, const ZPoly& b, const Int& m) {
        if (a.empty() || b.empty()) return ZPoly{};
        ZPoly r(a.size() + b.size() - 1, Int(0));
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        }
        return zred(std::move(r), m);
    };
    auto zsub = [&](const ZPoly& a, const ZPoly& b, const Int& m) {
        ZPoly r(std::max(a.size(), b.size()), Int(0));
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (size_t i = 0; i < b.size(); ++i) { r[i] -= b[i]; if (r[i] < 0) r[i] += m; }
        ztrim(r);
        return r;
    };
    auto zadd = [&](const ZPoly& a, const ZPoly& b, const Int& m) {
        ZPoly r(std::max(a.size(), b.size()), Int(0));
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (size_t i = 0; i < b.size(); ++i) { r[i] += b[i]; if (r[i] >= m) r[i] -= m; }
        ztrim(r);
        return r;
    };
    // divmod by a monic divisor
    auto zdivmod = [&](ZPoly a, const ZPoly& b, const Int& m, ZPoly& q) {
        q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Int(0));
        while (a.size() >= b.size() && !a.empty()) {
            Int f0 = a.back();
            size_t k = a.size() - b.size();
            if (f0 != 0) {
                q[k] = f0;
                for (size_t i = 0; i < b.size(); ++i) {
                    a[k + i] -= f0 * b[i];
                    a[k + i] %= m;
                    if (a[k + i] < 0) a[k + i] += m;
                }
            }
            if (!a.empty() && a.back() == 0) ztrim(a);
            else break;
        }
        ztrim(a);
        return a;
    };

    auto to_z = [&](const FpPoly& a) {
        ZPoly r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        return r;
    };
    ZPoly fz(f.c.begin(), f.c.end());
    ZPoly g = to_z(gb), h = to_z(hb), s = to_z(s0), t = to_z(t0);

    Int target;
    mpz_pow_ui(target.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(digits));
    Int m = pz;
    while (m < target) {
        Int m2 = m * m;
        ZPoly fr = zred(fz, m2);
        ZPoly e = zsub(fr, zmul(g, h, m2), m2);
        ZPoly q, r;
        r = zdivmod(zmul(s, e, m2), h, m2, q);
        ZPoly gstar = zadd(zadd(g, zmul(t, e, m2), m2), zmul(q, g, m2), m2);
        ZPoly hstar = zadd(h, r, m2);
        ZPoly one{Int(1)};
        ZPoly b = zsub(zadd(zmul(s, gstar, m2), zmul(t, hstar, m2), m2), one, m2);
        ZPoly c, d;
        d = zdivmod(zmul(s, b, m2), hstar, m2, c);
        ZPoly sstar = zsub(s, d, m2);
        ZPoly tstar = zsub(zsub(t, zmul(t, b, m2), m2), zmul(c, gstar, m2), m2);
        g = gstar; h = hstar; s = sstar; t = tstar;
        m = m2;
    }
    // final reduction to exactly p^digits
    ZPoly gfin = zred(g, target);
    ZPoly hfin = zred(h, target);
    // sanity: f == g*h mod p^digits
    ZPoly check = zsub(zred(fz, target), zmul(gfin, hfin, target), target);
    if (!check.empty()) fail("Internal", "Hensel lift verification failed");
    return IntPoly(ZPoly(gfin.begin(), gfin.end()));
}

} // namespace weil
