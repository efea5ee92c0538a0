#include "weil/intpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>

namespace weil {

// ---------------------------------------------------------------- rationals

Int parse_int(const std::string& s) {
    if (s.empty()) fail("BadNumber", "empty integer literal");
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) fail("BadNumber", "bare sign: '" + s + "'");
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            fail("BadNumber", "bad integer literal: '" + s + "'");
    return Int(s, 10);
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den <= 0) fail("BadNumber", "denominator must be positive: '" + s + "'");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

long val_p(const Int& n, const Int& p) {
    if (n == 0) fail("ZeroValue", "valuation of zero");
    Int rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

namespace {

Int pollard_rho(const Int& n) {
    // n odd composite, not a prime power of interest; Brent variant.
    if (n % 2 == 0) return 2;
    Int x = 2, y = 2, d = 1, c = 1;
    while (true) {
        x = 2; y = 2; d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 0 && d != n && d != 1) return d;
        c += 1;
    }
}

void factor_into(Int n, std::map<Int, int>& out) {
    if (n <= 1) return;
    if (is_prime(n)) { out[n] += 1; return; }
    // strip small primes first
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % q == 0) { out[Int(q)] += 1; n /= q; }
    }
    if (n == 1) return;
    if (is_prime(n)) { out[n] += 1; return; }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n) {
    if (n == 0) fail("ZeroValue", "factorize(0)");
    Int m = n < 0 ? Int(-n) : n;
    std::map<Int, int> acc;
    factor_into(m, acc);
    return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::initializer_list<long> cs) {
    c.reserve(cs.size());
    for (long v : cs) c.emplace_back(v);
    trim();
}

IntPoly IntPoly::x() { return IntPoly{0, 1}; }

IntPoly IntPoly::constant(const Int& v) {
    IntPoly p;
    if (v != 0) p.c.push_back(v);
    return p;
}

void IntPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

const Int& IntPoly::lc() const {
    if (is_zero()) fail("ZeroPolynomial", "leading coefficient of zero polynomial");
    return c.back();
}

IntPoly add(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> r(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return IntPoly(std::move(r));
}

IntPoly sub(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> r(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return IntPoly(std::move(r));
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<Int> r(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(r));
}

IntPoly neg(const IntPoly& a) {
    IntPoly r = a;
    for (auto& v : r.c) v = -v;
    return r;
}

IntPoly derivative(const IntPoly& a) {
    if (a.degree() < 1) return IntPoly();
    std::vector<Int> r(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r[i - 1] = a.c[i] * static_cast<long>(i);
    return IntPoly(std::move(r));
}

Int content(const IntPoly& a) {
    Int g = 0;
    for (const auto& v : a.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
}

IntPoly primitive_part(const IntPoly& a) {
    if (a.is_zero()) return a;
    Int g = content(a);
    if (a.lc() < 0) g = -g;
    IntPoly r = a;
    for (auto& v : r.c) v /= g;
    return r;
}

Rat eval(const IntPoly& a, const Rat& x) {
    Rat acc = 0;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

Int eval_int(const IntPoly& a, const Int& x) {
    Int acc = 0;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string poly_str(const IntPoly& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (int i = a.degree(); i >= 0; --i) {
        const Int& v = a.c[i];
        if (v == 0) continue;
        if (!out.empty()) out += (v > 0) ? " + " : " - ";
        else if (v < 0) out += "-";
        Int av = v < 0 ? Int(-v) : v;
        bool unit = (av == 1 && i > 0);
        if (!unit) out += av.get_str();
        if (i > 0) {
            if (!unit) out += "*";
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// ---------------------------------------------------------------- RatPoly

void RatPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

const Rat& RatPoly::lc() const {
    if (is_zero()) fail("ZeroPolynomial", "leading coefficient of zero polynomial");
    return c.back();
}

RatPoly to_rat(const IntPoly& a) {
    std::vector<Rat> r;
    r.reserve(a.c.size());
    for (const auto& v : a.c) r.emplace_back(v);
    return RatPoly(std::move(r));
}

IntPoly clear_denominators(const RatPoly& a) {
    if (a.is_zero()) return IntPoly();
    Int l = 1;
    for (const auto& q : a.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Int> r;
    r.reserve(a.c.size());
    for (const auto& q : a.c) r.push_back(Int(q.get_num() * (l / q.get_den())));
    return primitive_part(IntPoly(std::move(r)));
}

RatPoly add(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return RatPoly(std::move(r));
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return RatPoly(std::move(r));
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return RatPoly(std::move(r));
}

RatPoly neg(const RatPoly& a) {
    RatPoly r = a;
    for (auto& v : r.c) v = -v;
    return r;
}

RatPoly scale(const RatPoly& a, const Rat& s) {
    if (s == 0) return RatPoly();
    RatPoly r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

RatPoly derivative(const RatPoly& a) {
    if (a.degree() < 1) return RatPoly();
    std::vector<Rat> r(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r[i - 1] = a.c[i] * static_cast<long>(i);
    return RatPoly(std::move(r));
}

RatPoly monic(const RatPoly& a) {
    if (a.is_zero()) return a;
    return scale(a, Rat(1) / a.lc());
}

Rat eval(const RatPoly& a, const Rat& x) {
    Rat acc = 0;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
    if (b.is_zero()) fail("ZeroPolynomial", "division by zero polynomial");
    q = RatPoly();
    r = a;
    int db = b.degree();
    if (a.degree() < db) return;
    std::vector<Rat> qc(a.degree() - db + 1, Rat(0));
    while (!r.is_zero() && r.degree() >= db) {
        int k = r.degree() - db;
        Rat f = r.lc() / b.lc();
        qc[k] = f;
        // r -= f * x^k * b
        for (int i = 0; i <= db; ++i) r.c[k + i] -= f * b.c[i];
        r.trim();
    }
    q = RatPoly(std::move(qc));
}

RatPoly gcd_monic(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b, q, r;
    while (!y.is_zero()) {
        divmod(x, y, q, r);
        x = y;
        y = r;
    }
    return monic(x);
}

RatPoly xgcd(const RatPoly& a, const RatPoly& b, RatPoly& u, RatPoly& v) {
    RatPoly r0 = a, r1 = b;
    RatPoly u0(std::vector<Rat>{Rat(1)}), u1;
    RatPoly v0, v1(std::vector<Rat>{Rat(1)});
    RatPoly q, r;
    while (!r1.is_zero()) {
        divmod(r0, r1, q, r);
        RatPoly u2 = sub(u0, mul(q, u1));
        RatPoly v2 = sub(v0, mul(q, v1));
        r0 = r1; r1 = r;
        u0 = u1; u1 = u2;
        v0 = v1; v1 = v2;
    }
    if (r0.is_zero()) { u = u0; v = v0; return r0; }
    Rat s = Rat(1) / r0.lc();
    u = scale(u0, s);
    v = scale(v0, s);
    return scale(r0, s);
}

RatPoly squarefree_part(const RatPoly& a) {
    if (a.degree() < 1) return monic(a);
    RatPoly g = gcd_monic(a, derivative(a));
    RatPoly q, r;
    divmod(a, g, q, r);
    return monic(q);
}

// ---------------------------------------------------------- linear algebra

Rat det_rational(std::vector<std::vector<Rat>> m) {
    size_t n = m.size();
    Rat det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) { std::swap(m[piv], m[col]); det = -det; }
        det *= m[col][col];
        Rat inv = Rat(1) / m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            Rat f = m[row][col] * inv;
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

bool solve_rational(std::vector<std::vector<Rat>> M, std::vector<Rat> b, std::vector<Rat>& x) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[r]);
        std::swap(b[piv], b[r]);
        Rat inv = Rat(1) / M[r][c];
        for (size_t k = c; k < cols; ++k) M[r][k] *= inv;
        b[r] *= inv;
        for (size_t row = 0; row < rows; ++row) {
            if (row == r || M[row][c] == 0) continue;
            Rat f = M[row][c];
            for (size_t k = c; k < cols; ++k) M[row][k] -= f * M[r][k];
            b[row] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t row = r; row < rows; ++row)
        if (b[row] != 0) return false;
    x.assign(cols, Rat(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
    return true;
}

// ---------------------------------------------------------------- resultant

Rat resultant(const RatPoly& f, const RatPoly& g) {
    if (f.is_zero() && g.is_zero()) fail("BothZero", "resultant of two zero polynomials");
    if (f.is_zero() || g.is_zero()) return Rat(0);
    int m = f.degree(), n = g.degree();
    if (m == 0 && n == 0) return Rat(1);
    if (m == 0) { Rat r; mpq_class base = f.c[0]; r = 1; for (int i = 0; i < n; ++i) r *= base; return r; }
    if (n == 0) { Rat r = 1; for (int i = 0; i < m; ++i) r *= g.c[0]; return r; }
    size_t size = static_cast<size_t>(m + n);
    std::vector<std::vector<Rat>> s(size, std::vector<Rat>(size, Rat(0)));
    // n rows of f's coefficients (highest first), then m rows of g's.
    for (int row = 0; row < n; ++row)
        for (int k = 0; k <= m; ++k)
            s[row][row + k] = f.c[m - k];
    for (int row = 0; row < m; ++row)
        for (int k = 0; k <= n; ++k)
            s[n + row][row + k] = g.c[n - k];
    return det_rational(std::move(s));
}

Rat resultant(const IntPoly& f, const IntPoly& g) {
    return resultant(to_rat(f), to_rat(g));
}

// ---------------------------------------------------------------- Sturm

namespace {

int sign_at_inf(const RatPoly& p, bool plus) {
    if (p.is_zero()) return 0;
    int s = sgn(p.lc());
    if (!plus && p.degree() % 2 == 1) s = -s;
    return s;
}

} // namespace

int real_root_count(const IntPoly& f) {
    if (f.is_zero()) fail("ZeroPolynomial", "real_root_count(0)");
    if (f.degree() == 0) return 0;
    RatPoly p0 = to_rat(f);
    {
        RatPoly g = gcd_monic(p0, derivative(p0));
        if (g.degree() > 0) fail("NotSquarefree", "Sturm chain needs a squarefree input");
    }
    std::vector<RatPoly> chain{p0, derivative(p0)};
    while (!chain.back().is_zero()) {
        RatPoly q, r;
        divmod(chain[chain.size() - 2], chain.back(), q, r);
        chain.push_back(neg(r));
    }
    chain.pop_back();
    auto variations = [&](bool plus) {
        int var = 0, prev = 0;
        for (const auto& p : chain) {
            int s = sign_at_inf(p, plus);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++var;
            prev = s;
        }
        return var;
    };
    return variations(false) - variations(true);
}

// ---------------------------------------------------------------- cyclotomic

unsigned long euler_phi(unsigned long n) {
    unsigned long result = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

IntPoly cyclotomic(unsigned long n) {
    if (n == 0) fail("BadNumber", "cyclotomic(0)");
    static std::mutex mtx;
    static std::map<unsigned long, IntPoly> memo;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    // x^n - 1 divided by all proper cyclotomic divisors, exactly.
    std::vector<Int> xn(n + 1, Int(0));
    xn[0] = -1;
    xn[n] = 1;
    RatPoly acc = to_rat(IntPoly(std::move(xn)));
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        RatPoly q, r;
        divmod(acc, to_rat(cyclotomic(d)), q, r);
        if (!r.is_zero()) fail("Internal", "cyclotomic division left a remainder");
        acc = q;
    }
    IntPoly out = clear_denominators(acc);
    std::lock_guard<std::mutex> lock(mtx);
    memo.emplace(n, out);
    return out;
}

} // namespace weil
