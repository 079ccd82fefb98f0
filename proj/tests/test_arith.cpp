#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "traceform/arith.hpp"
#include "traceform/rng.hpp"

using namespace traceform;

TEST_CASE("factorization and primality") {
    CHECK(factorize(360) == std::vector<std::pair<i64, int>>{{2, 3}, {3, 2}, {5, 1}});
    CHECK(factorize(1).empty());
    CHECK(factorize(9973) == std::vector<std::pair<i64, int>>{{9973, 1}});

    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(91));  // 7*13

    CHECK(primes_in(2, 20) == std::vector<i64>{2, 3, 5, 7, 11, 13, 17, 19});
    CHECK(primes_in(41, 43) == std::vector<i64>{41, 43});
    CHECK(primes_in(24, 28).empty());
}

TEST_CASE("ordered divisor tuple counts") {
    // sigma_k(p^a) = binom(a+k-1, k-1); frozen small values
    CHECK(sigma(1) == 1);
    CHECK(sigma(6) == 4);
    CHECK(sigma(12) == 6);
    CHECK(sigma(16) == 5);
    CHECK(sigma(97) == 2);
    CHECK(sigma_k(2, 4) == 4);
    CHECK(sigma_k(12, 3) == 18);
    CHECK(sigma_k(64, 6) == 462);  // binom(11,5)
    CHECK(sigma_k(30, 3) == 27);   // 3^3, one factor each

    // multiplicative in coprime arguments
    for (int k = 2; k <= 6; ++k)
        for (i64 m = 1; m <= 100; ++m)
            for (i64 n = 1; n <= 100; ++n)
                if (std::gcd(m, n) == 1) CHECK(sigma_k(m * n, k) == sigma_k(m, k) * sigma_k(n, k));
}

TEST_CASE("moebius and phi") {
    CHECK(moebius(1) == 1);
    CHECK(moebius(2) == -1);
    CHECK(moebius(4) == 0);
    CHECK(moebius(6) == 1);
    CHECK(moebius(30) == -1);
    CHECK(moebius(210) == 1);

    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(97) == 96);

    // sum_{d|n} phi(d) = n on a small range
    for (i64 n = 1; n <= 200; ++n) {
        i64 s = 0;
        for (i64 d = 1; d <= n; ++d)
            if (n % d == 0) s += euler_phi(d);
        CHECK(s == n);
    }
}

TEST_CASE("divisor convolution identity, exhaustive") {
    for (i64 n1 = 1; n1 <= 200; ++n1)
        for (i64 n2 = 1; n2 <= 200; ++n2) CHECK(sigma_product_identity_check(n1, n2));
}

TEST_CASE("squarefree-weighted coefficient") {
    CHECK(a_coefficient(1, 1, 1, 1) == 1);
    CHECK(a_coefficient(2, 1, 1, 1) == -2);
    CHECK(a_coefficient(2, 3, 1, 2) == 8);
    CHECK(a_coefficient(4, 1, 1, 1) == 0);  // mu(4) = 0
    CHECK(a_coefficient(2, 2, 3, 1) == 4);
}

TEST_CASE("modular arithmetic helpers") {
    CHECK(mod_pow(2, 10, 1000) == 24);
    CHECK(mod_pow(3, 0, 7) == 1);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(1, 2) == 1);
    CHECK_THROWS_AS(mod_inverse(6, 9), std::domain_error);
    CHECK_THROWS_AS(mod_inverse(0, 5), std::domain_error);

    auto inv = inverse_table(12);
    CHECK(inv[1] == 1);
    CHECK(inv[5] == 5);
    CHECK(inv[7] == 7);
    CHECK(inv[11] == 11);
    CHECK(inv[0] == 0);
    CHECK(inv[2] == 0);
    for (i64 c = 1; c <= 60; ++c) {
        auto t = inverse_table(c);
        for (i64 a = 0; a < c; ++a)
            if (t[a] != 0 || (c == 1 && a == 0)) CHECK((a * t[a]) % c == 1 % c);
    }
}

TEST_CASE("Ramanujan sums: closed form vs unit enumeration") {
    CHECK(ramanujan_sum(1, 4) == 0);
    CHECK(ramanujan_sum(5, 5) == 4);
    CHECK(ramanujan_sum(2, 6) == -1);
    CHECK(ramanujan_sum(3, 9) == -3);
    for (i64 p : primes_in(2, 50)) CHECK(ramanujan_sum(1, p) == -1);

    for (i64 t = 1; t <= 120; ++t)
        for (i64 h = 1; h <= 120; ++h)
            CHECK(std::fabs(ramanujan_sum_enum(h, t) - double(ramanujan_sum(h, t))) < 1e-9);
}

TEST_CASE("Kloosterman sums: anchors, symmetry, periodicity") {
    CHECK(kloosterman(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kloosterman(1, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kloosterman(1, 1, 3) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(kloosterman(1, 2, 5) == doctest::Approx(-1.0 - std::sqrt(5.0)).epsilon(1e-12));

    Rng rng(1);
    for (int rep = 0; rep < 500; ++rep) {
        i64 c = 1 + i64(rng.uniform() * 400);
        i64 m = 1 + i64(rng.uniform() * 1000);
        i64 n = 1 + i64(rng.uniform() * 1000);
        double s = kloosterman(m, n, c);
        CHECK(std::fabs(s - kloosterman(n, m, c)) < 1e-9);
        CHECK(std::fabs(s - kloosterman(m + c, n, c)) < 1e-9);
    }
}

TEST_CASE("Kloosterman sums: square-root cancellation at prime modulus") {
    for (i64 p : primes_in(2, 300))
        for (i64 m : {i64(1), i64(2), i64(3)})
            for (i64 n : {i64(1), i64(5), i64(7)}) {
                if (m % p == 0 || n % p == 0) continue;
                CHECK(std::fabs(kloosterman(m, n, p)) <= 2.0 * std::sqrt(double(p)) + 1e-9);
            }
}

TEST_CASE("Dirichlet characters mod a prime") {
    auto tab = character_table(13);
    CHECK(tab->q == 13);
    CHECK(tab->generator == 2);
    // ind is a bijection {1..q-1} -> {0..q-2} with g^ind(r) = r
    for (i64 r = 1; r < 13; ++r) CHECK(mod_pow(tab->generator, tab->ind[r], 13) == r);

    for (i64 q : {i64(5), i64(7), i64(13), i64(29)}) {
        for (i64 a = 0; a < q - 1; ++a) {
            DirichletCharacter chi(q, a);
            CHECK(chi.index() == a);
            CHECK(chi.is_trivial() == (a == 0));
            CHECK(std::abs(chi.value(q)) == 0.0);
            // parity: chi(-1) matches the declared sign
            cplx at_minus1 = chi.value(q - 1);
            CHECK(std::abs(at_minus1 - cplx(chi.parity(), 0)) < 1e-12);
            // multiplicativity on units
            for (i64 m = 1; m < q; ++m)
                for (i64 n = 1; n < q; ++n)
                    CHECK(std::abs(chi.value(m * n) - chi.value(m) * chi.value(n)) < 1e-12);
            // column orthogonality
            cplx col = 0;
            for (i64 n = 1; n < q; ++n) col += chi.value(n);
            CHECK(std::abs(col - (a == 0 ? cplx(q - 1, 0) : cplx(0, 0))) < 1e-10);
            // conjugate really conjugates
            DirichletCharacter bar = chi.conjugate();
            for (i64 n = 1; n < q; ++n)
                CHECK(std::abs(bar.value(n) - std::conj(chi.value(n))) < 1e-12);
        }
    }
}

TEST_CASE("twisted Kloosterman reduces to plain under the trivial character") {
    // With q | c every unit d mod c is a unit mod q, so the trivial twist
    // changes nothing.
    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        i64 q = std::vector<i64>{5, 7, 11, 13}[rep % 4];
        i64 j = 1 + i64(rng.uniform() * 30);
        i64 c = q * j;
        i64 m = 1 + i64(rng.uniform() * 500);
        i64 n = 1 + i64(rng.uniform() * 500);
        DirichletCharacter chi0(q, 0);
        cplx tw = kloosterman_twisted(m, n, c, chi0);
        CHECK(std::abs(tw - cplx(kloosterman(m, n, c), 0)) < 1e-9);
    }
}

TEST_CASE("character sums isolate inverse residue classes") {
    // (1/(q-1)) sum_chi chi(rho) S_chi(m,n;c) keeps only d == rho^{-1} mod q.
    i64 q = 7, c = 21, m = 2, n = 3;
    for (i64 rho = 1; rho < q; ++rho) {
        cplx lhs = 0;
        for (i64 a = 0; a < q - 1; ++a) {
            DirichletCharacter chi(q, a);
            lhs += chi.value(rho) * kloosterman_twisted(m, n, c, chi);
        }
        lhs /= double(q - 1);
        i64 target = mod_inverse(rho, q);
        cplx rhs = 0;
        auto inv = inverse_table(c);
        for (i64 a = 1; a < c; ++a) {
            if (inv[a] == 0) continue;
            i64 d = inv[a];
            if (d % q != target) continue;
            rhs += unit_e(double(a * m % c + d * n % c) / double(c));
        }
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}
