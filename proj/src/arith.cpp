#include "traceform/arith.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace traceform {

std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n <= 0) throw std::domain_error("factorize: n must be positive");
    std::vector<std::pair<i64, int>> f;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

std::vector<i64> primes_in(i64 lo, i64 hi) {
    std::vector<i64> out;
    for (i64 n = std::max<i64>(2, lo); n <= hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

i64 sigma_k(i64 n, int k) {
    if (n <= 0) throw std::domain_error("sigma_k: n must be positive");
    if (k <= 0) throw std::domain_error("sigma_k: k must be positive");
    i64 out = 1;
    for (auto [p, e] : factorize(n)) {
        (void)p;
        // binom(e + k - 1, k - 1), built incrementally (exact in i64 at desk scale)
        i64 b = 1;
        for (int i = 1; i <= e; ++i) b = b * (k - 1 + i) / i;
        out *= b;
    }
    return out;
}

int moebius(i64 n) {
    if (n <= 0) throw std::domain_error("moebius: n must be positive");
    int sign = 1;
    for (auto [p, e] : factorize(n)) {
        (void)p;
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

i64 euler_phi(i64 n) {
    if (n <= 0) throw std::domain_error("euler_phi: n must be positive");
    i64 out = n;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        out -= out / p;
    }
    return out;
}

bool sigma_product_identity_check(i64 n1, i64 n2) {
    if (n1 <= 0 || n2 <= 0) throw std::domain_error("sigma_product_identity_check: positive args");
    i64 lhs = sigma(n1 * n2);
    i64 g = std::gcd(n1, n2);
    i64 rhs = 0;
    for (i64 d = 1; d <= g; ++d)
        if (g % d == 0) rhs += moebius(d) * sigma(n1 / d) * sigma(n2 / d);
    return lhs == rhs;
}

i64 a_coefficient(i64 b, i64 c, i64 d, i64 j) {
    if (b <= 0 || c <= 0 || d <= 0 || j <= 0)
        throw std::domain_error("a_coefficient: positive args");
    int mb = moebius(b), mc = moebius(c);
    if (mb == 0 || mc == 0) return 0;
    i64 l = std::lcm(b, c);
    return i64(mb) * mc * sigma(d * (l / b)) * sigma(d * (l / c)) * sigma(j);
}

i64 mod_pow(i64 base, i64 exp, i64 mod) {
    if (mod <= 0) throw std::domain_error("mod_pow: modulus must be positive");
    i64 r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = (__int128)r * base % mod;
        base = (__int128)base * base % mod;
        exp >>= 1;
    }
    return r;
}

i64 mod_inverse(i64 a, i64 mod) {
    if (mod <= 0) throw std::domain_error("mod_inverse: modulus must be positive");
    a %= mod;
    if (a < 0) a += mod;
    // extended Euclid
    i64 r0 = mod, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 qt = r0 / r1;
        i64 r2 = r0 - qt * r1;
        i64 s2 = s0 - qt * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
    return ((s0 % mod) + mod) % mod;
}

i64 ramanujan_sum(i64 h, i64 t) {
    if (h <= 0 || t <= 0) throw std::domain_error("ramanujan_sum: positive args");
    i64 g = std::gcd(t, h);
    i64 tg = t / g;
    i64 mu = moebius(tg);
    if (mu == 0) return 0;
    return mu * (euler_phi(t) / euler_phi(tg));
}

double ramanujan_sum_enum(i64 h, i64 t) {
    if (h <= 0 || t <= 0) throw std::domain_error("ramanujan_sum_enum: positive args");
    if (t == 1) return 1.0;  // single empty residue term
    cplx acc = 0.0;
    for (i64 r = 1; r < t; ++r) {
        if (std::gcd(r, t) != 1) continue;
        acc += unit_e(double((__int128)h * mod_inverse(r, t) % t) / double(t));
    }
    if (std::fabs(acc.imag()) > 1e-9)
        throw std::runtime_error("ramanujan_sum_enum: nonreal sum (internal error)");
    return acc.real();
}

std::shared_ptr<const CharacterTable> character_table(i64 q) {
    static std::map<i64, std::shared_ptr<const CharacterTable>> cache;
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;

    if (!is_prime(q) || q < 3)
        throw std::domain_error("character_table: modulus must be an odd prime");
    auto tab = std::make_shared<CharacterTable>();
    tab->q = q;
    // least primitive root: order check against each prime divisor of q-1
    auto fac = factorize(q - 1);
    for (i64 g = 2; g < q; ++g) {
        bool ok = true;
        for (auto [p, e] : fac) {
            (void)e;
            if (mod_pow(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            tab->generator = g;
            break;
        }
    }
    tab->ind.assign(q, 0);
    i64 pw = 1;
    for (i64 i = 0; i < q - 1; ++i) {
        tab->ind[pw] = std::int32_t(i);
        pw = (__int128)pw * tab->generator % q;
    }
    cache[q] = tab;
    return tab;
}

DirichletCharacter::DirichletCharacter(i64 q, i64 index) : tab_(character_table(q)), a_(index) {
    if (index < 0 || index > q - 2)
        throw std::domain_error("DirichletCharacter: index out of [0, q-2]");
}

DirichletCharacter DirichletCharacter::conjugate() const {
    return DirichletCharacter(tab_->q, a_ == 0 ? 0 : tab_->q - 1 - a_);
}

i64 DirichletCharacter::angle_num(i64 n) const {
    i64 q = tab_->q;
    i64 r = n % q;
    if (r < 0) r += q;
    if (r == 0) throw std::domain_error("angle_num: argument divisible by modulus");
    return a_ * tab_->ind[r] % (q - 1);
}

cplx DirichletCharacter::value(i64 n) const {
    i64 q = tab_->q;
    i64 r = n % q;
    if (r < 0) r += q;
    if (r == 0) return 0.0;
    return unit_e(double(a_ * i64(tab_->ind[r]) % (q - 1)) / double(q - 1));
}

std::vector<i64> inverse_table(i64 c) {
    if (c <= 0) throw std::domain_error("inverse_table: c must be positive");
    std::vector<i64> inv(c, 0);
    if (c == 1) return inv;
    inv[1] = 1;
    for (i64 a = 2; a < c; ++a) {
        if (std::gcd(a, c) != 1) continue;
        // inv[a] = -(c/a) * inv[c mod a] works only for prime c; use Euclid.
        i64 r0 = c, r1 = a, s0 = 0, s1 = 1;
        while (r1 != 0) {
            i64 qt = r0 / r1;
            i64 r2 = r0 - qt * r1, s2 = s0 - qt * s1;
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        inv[a] = ((s0 % c) + c) % c;
    }
    return inv;
}

double kloosterman(i64 m, i64 n, i64 c) {
    if (c <= 0) throw std::domain_error("kloosterman: c must be positive");
    if (c == 1) return 1.0;  // empty-modulus convention
    auto inv = inverse_table(c);
    i64 mr = ((m % c) + c) % c, nr = ((n % c) + c) % c;
    std::vector<cplx> terms;
    for (i64 a = 1; a < c; ++a) {
        if (inv[a] == 0) continue;
        terms.push_back(unit_e(double(a * mr % c + inv[a] * nr % c) / double(c)));
    }
    cplx s = pairwise_sum(terms);
    if (std::fabs(s.imag()) > 1e-9)
        throw std::runtime_error("kloosterman: nonreal sum (internal error)");
    return s.real();
}

cplx kloosterman_twisted(i64 m, i64 n, i64 c, const DirichletCharacter& chi) {
    if (c <= 0) throw std::domain_error("kloosterman_twisted: c must be positive");
    if (c == 1) return 1.0;
    auto inv = inverse_table(c);
    i64 mr = ((m % c) + c) % c, nr = ((n % c) + c) % c;
    std::vector<cplx> terms;
    for (i64 a = 1; a < c; ++a) {
        if (inv[a] == 0) continue;
        i64 d = inv[a];
        cplx ch = chi.value(d);
        if (ch == 0.0) continue;
        terms.push_back(ch * unit_e(double(a * mr % c + d * nr % c) / double(c)));
    }
    return terms.empty() ? cplx(0.0) : pairwise_sum(terms);
}

}  // namespace traceform
