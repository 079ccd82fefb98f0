#pragma once
// Exact integer / complex arithmetic kernels: divisor-tuple counts, Moebius,
// Euler phi, Dirichlet characters mod a prime (discrete-log representation),
// Ramanujan sums, Kloosterman sums (plain and character-twisted), and the
// squarefree-weighted coefficient A(b,c;d,j).
//
// Conventions used throughout the library:
//   sigma_k(n, k) = #{(n_1,...,n_k) : n_1 n_2 ... n_k = n}  (ordered tuples),
//   so sigma(n) := sigma_k(n, 2) is the divisor COUNT tau(n).

#include <cstdint>
#include <memory>
#include <vector>

#include "traceform/numeric.hpp"

namespace traceform {

using i64 = std::int64_t;

// Trial-division factorization, (prime, exponent) pairs in ascending order.
std::vector<std::pair<i64, int>> factorize(i64 n);

bool is_prime(i64 n);
std::vector<i64> primes_in(i64 lo, i64 hi);  // inclusive range

// Number of ordered k-tuples with product n; multiplicative with
// sigma_k(p^a) = binom(a+k-1, k-1).
i64 sigma_k(i64 n, int k);
inline i64 sigma(i64 n) { return sigma_k(n, 2); }

int moebius(i64 n);
i64 euler_phi(i64 n);

// sigma(n1 n2) == sum_{d | gcd(n1,n2)} mu(d) sigma(n1/d) sigma(n2/d),
// checked in exact integer arithmetic.
bool sigma_product_identity_check(i64 n1, i64 n2);

// A(b,c;d,j) = mu(b) mu(c) sigma(d[b,c]/b) sigma(d[b,c]/c) sigma(j).
i64 a_coefficient(i64 b, i64 c, i64 d, i64 j);

i64 mod_pow(i64 base, i64 exp, i64 mod);
i64 mod_inverse(i64 a, i64 mod);  // throws std::domain_error unless gcd(a,mod)=1

// Ramanujan sum c_t(h) = mu(t/(t,h)) phi(t) / phi(t/(t,h)).
i64 ramanujan_sum(i64 h, i64 t);
// Independent enumeration sum_{r mod t, (r,t)=1} e(h r^{-1} / t); real part
// (the imaginary part must vanish and is checked internally).
double ramanujan_sum_enum(i64 h, i64 t);

// Group data for characters mod a prime q: least primitive root and the
// discrete-log table ind[] with g^{ind[r]} = r (mod q).
struct CharacterTable {
    i64 q = 0;
    i64 generator = 0;
    std::vector<std::int32_t> ind;  // size q; ind[0] unused
};

std::shared_ptr<const CharacterTable> character_table(i64 q);

// chi_a(n) = e(a * ind(n) / (q-1)) for (n, q) = 1, zero on multiples of q.
// Enumeration order over a in [0, q-2] fixes a deterministic group listing.
class DirichletCharacter {
  public:
    DirichletCharacter(i64 q, i64 index);

    i64 modulus() const { return tab_->q; }
    i64 index() const { return a_; }
    bool is_trivial() const { return a_ == 0; }
    // chi(-1) = (-1)^index: +1 even, -1 odd.
    int parity() const { return (a_ % 2 == 0) ? 1 : -1; }
    DirichletCharacter conjugate() const;

    cplx value(i64 n) const;
    // For (n,q)=1, the angle numerator: chi(n) = e(angle_num(n) / (q-1)).
    i64 angle_num(i64 n) const;

  private:
    std::shared_ptr<const CharacterTable> tab_;
    i64 a_;
};

// S(m,n;c) = sum_{a abar == 1 (c)} e((a m + abar n)/c); real by the a <-> -a
// pairing, which is checked to 1e-9 before the imaginary part is dropped.
double kloosterman(i64 m, i64 n, i64 c);

// S_chi(m,n;c) = sum_{a d == 1 (c)} chi(d) e((a m + d n)/c); chi is evaluated
// at d mod q, so the sum is well-defined for any c >= 1 (the cases used by
// the trace formula have q | c).
cplx kloosterman_twisted(i64 m, i64 n, i64 c, const DirichletCharacter& chi);

// Unit inverses mod c: inv[a] = a^{-1} mod c for (a,c)=1, 0 elsewhere.
// Shared by the Kloosterman evaluators and the trace-formula inner loops.
std::vector<i64> inverse_table(i64 c);

}  // namespace traceform
