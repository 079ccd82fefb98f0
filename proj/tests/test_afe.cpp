#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "traceform/afe.hpp"
#include "traceform/rng.hpp"

using namespace traceform;

TEST_CASE("family parameter validation") {
    CHECK_THROWS_AS(PrimeLevel(10, 3), std::domain_error);
    CHECK_THROWS_AS(PrimeLevel(3, 3), std::domain_error);   // prime but < 5
    CHECK_THROWS_AS(PrimeLevel(13, 1), std::domain_error);  // weight too small
    CHECK_THROWS_WITH(PrimeLevel(10, 3), "PrimeLevel: q must be a prime >= 5");
    CHECK(PrimeLevel(5, 11).certified_range());
    CHECK(PrimeLevel(41, 3).certified_range());
    CHECK_FALSE(PrimeLevel(5, 4).certified_range());
    CHECK_FALSE(PrimeLevel(5, 2).certified_range());
}

TEST_CASE("H factor: identity default, even cos variants") {
    AfeWeightConfig w;
    CHECK(afe_h(w, cplx(0.3, 1.7)) == cplx(1.0, 0.0));
    w.h_cos_power = 2;
    CHECK(std::abs(afe_h(w, cplx(0, 0)) - cplx(1, 0)) < 1e-15);
    for (cplx s : {cplx(0.5, 0.0), cplx(1.0, 2.0), cplx(-0.3, 1.1)})
        CHECK(std::abs(afe_h(w, s) - afe_h(w, -s)) < 1e-12);
}

TEST_CASE("smooth weight: frozen quadrature anchors") {
    AfeWeightConfig w;  // k = 3, H == 1, gamma base k/2
    // reference values from an independent 40-digit contour integration
    struct Row {
        double xi, v;
    };
    const Row rows[] = {
        {0.5, 0.69116902378635283},   {1.0, 0.55996435606878666}, {2.0, 0.41419393204626375},
        {10.0, 0.12391874002865321},  {1000.0, 1.0486459414248035e-6},
    };
    for (const auto& r : rows)
        CHECK(std::fabs(v_weight(r.xi, w) - r.v) <= 1e-11 * r.v);

    AfeWeightConfig wc = w;
    wc.gamma_form = AfeWeightConfig::GammaForm::completed_half_km1;
    CHECK(std::fabs(v_weight(1.0, wc) - 0.18294602570271695) <= 1e-11);
    CHECK(std::fabs(v_weight(1000.0, wc) - 1.8607914650149133e-8) <= 1e-10 * 1.86e-8);

    // cos-power variants; m = 3 needs a taller contour before the kernel
    // decay wins (checked against the same independent integration)
    AfeWeightConfig wm = w;
    wm.h_cos_power = 1;
    CHECK(std::fabs(v_weight(1.0, wm) - 0.57134613653956156) <= 1e-11);
    wm.h_cos_power = 2;
    CHECK(std::fabs(v_weight(1.0, wm) - 0.5878241655773327) <= 1e-11);
    wm.h_cos_power = 3;
    wm.truncation_height = 40.0;
    CHECK(std::fabs(v_weight(1.0, wm) - 0.61204992503504145) <= 1e-11);
}

TEST_CASE("smooth weight: limit laws, reality, monotone decay") {
    AfeWeightConfig w;
    double im = 0;
    CHECK(std::fabs(v_weight(1e-10, w, &im) - 1.0) <= 1e-6);  // actual gap ~2e-12
    CHECK(im < 1e-10);
    for (double xi : {0.1, 1.0, 10.0}) {
        v_weight(xi, w, &im);
        CHECK(im < 1e-10);
    }
    // strictly decreasing across ten decades
    double prev = v_weight(1e-3, w);
    for (int i = 1; i < 30; ++i) {
        double x = std::pow(10.0, -3.0 + 6.0 * i / 29.0);
        double v = v_weight(x, w);
        CHECK(v < prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("smooth weight: config validation and truncation guard") {
    AfeWeightConfig w;
    CHECK_THROWS_AS(v_weight(0.0, w), std::domain_error);
    AfeWeightConfig bad = w;
    bad.contour_re = 0.0;
    CHECK_THROWS_AS(v_weight(1.0, bad), std::domain_error);
    bad = w;
    bad.h_cos_power = 4;
    CHECK_THROWS_AS(v_weight(1.0, bad), std::domain_error);
    bad = w;
    bad.truncation_height = -1.0;
    CHECK_THROWS_AS(v_weight(1.0, bad), std::domain_error);
    // cos^12 growth is not resolved at the default height; the doubling
    // check must refuse rather than return a wrong value
    bad = w;
    bad.h_cos_power = 3;
    CHECK_THROWS_AS(v_weight(1.0, bad), std::runtime_error);
}

TEST_CASE("smooth weight: Monte Carlo tail-probability oracle") {
    // The contour integral equals P(X1 X2 X3 X4 > xi) for iid Gamma(k/2, 1)
    // factors (Mellin moments Gamma(k/2+s)/Gamma(k/2)).  For k = 3 each
    // factor is half a chi-squared with 3 degrees of freedom, so plain
    // Box-Muller sampling gives a quadrature-free estimate.
    AfeWeightConfig w;
    const int N = 500000;
    Rng rng(42);
    int cnt[3] = {0, 0, 0};
    const double xis[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < N; ++i) {
        double prod = 1.0;
        for (int f = 0; f < 4; ++f) {
            double z1 = rng.normal(), z2 = rng.normal(), z3 = rng.normal();
            prod *= 0.5 * (z1 * z1 + z2 * z2 + z3 * z3);
        }
        for (int j = 0; j < 3; ++j) cnt[j] += (prod > xis[j]);
    }
    for (int j = 0; j < 3; ++j) {
        double mc = double(cnt[j]) / N;
        double v = v_weight(xis[j], w);
        double sigma = std::sqrt(v * (1.0 - v) / N);
        CHECK(std::fabs(mc - v) <= 4.5 * sigma);
    }
}

TEST_CASE("calibrated decay constant majorizes on a fresh grid") {
    AfeWeightConfig w;
    double ca = v_weight_tail_constant(w);
    CHECK(ca == doctest::Approx(3.792617179638e4).epsilon(1e-9));
    // grid deliberately offset from the calibration probe points
    for (int i = 0; i < 37; ++i) {
        double x = 2.0 * std::pow(4000.0, i / 36.0);
        CHECK(std::fabs(v_weight(x, w)) * x * x * x <= ca);
    }
}

TEST_CASE("synthetic eigenvalue systems satisfy the Hecke relation") {
    PrimeLevel lv(13, 3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto sys = make_hecke_system(lv, i64(seed % 12), seed, 500);
        CHECK(sys.lam[1] == cplx(1.0, 0.0));
        CHECK(std::abs(sys.lam[13]) == 0.0);  // ramified prime
        DirichletCharacter chi = sys.character();
        for (i64 p : primes_in(2, 500))
            if (p != 13) CHECK(std::abs(sys.lam[std::size_t(p)]) <= 2.0 + 1e-12);
        // lambda(p^2) = lambda(p)^2 - chi(p)
        for (i64 p : {i64(2), i64(3), i64(5), i64(7), i64(11), i64(17)})
            CHECK(std::abs(sys.lam[std::size_t(p * p)] -
                           (sys.lam[std::size_t(p)] * sys.lam[std::size_t(p)] - chi.value(p))) <
                  1e-12);
        CHECK(std::abs(sys.lam[6] - sys.lam[2] * sys.lam[3]) < 1e-12);
        double worst = 0;
        for (i64 m = 1; m <= 500; ++m)
            for (i64 n = 1; m * n <= 500; ++n) {
                cplx rhs = 0;
                i64 g = std::gcd(m, n);
                for (i64 d = 1; d <= g; ++d)
                    if (g % d == 0) rhs += chi.value(d) * sys.lam[std::size_t(m * n / (d * d))];
                worst = std::max(worst, std::abs(sys.lam[std::size_t(m)] * sys.lam[std::size_t(n)] - rhs));
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("sigma-normalized test system") {
    PrimeLevel lv(13, 3);
    auto sys = make_sigma_system(lv, 600);
    for (i64 n = 1; n <= 600; ++n) {
        if (n % 13 == 0)
            CHECK(std::abs(sys.lam[std::size_t(n)]) == 0.0);
        else
            CHECK(std::abs(sys.lam[std::size_t(n)] - cplx(double(sigma(n)), 0)) < 1e-12);
    }
    CHECK(sys.lam[16] == cplx(5.0, 0.0));
}

TEST_CASE("cap extension preserves the table bit-for-bit") {
    PrimeLevel lv(13, 3);
    auto sys = make_hecke_system(lv, 5, 77, 200);
    auto big = hecke_extend(sys, 500);
    REQUIRE(big.size() == 501);
    for (i64 n = 1; n <= 200; ++n) CHECK(big[std::size_t(n)] == sys.lam[std::size_t(n)]);
}

TEST_CASE("fourth-power coefficients: expansion equals direct convolution") {
    PrimeLevel lv(13, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto sys = make_hecke_system(lv, i64((5 * seed + 1) % 12), 100 + seed, 300);
        auto direct = l4_coefficients_direct(sys, 300);
        auto expanded = l4_coefficients_expanded(sys, 300);
        CHECK(std::abs(direct[1] - cplx(1, 0)) < 1e-14);
        double worst = 0;
        for (i64 n = 1; n <= 300; ++n)
            worst = std::max(worst, std::abs(direct[std::size_t(n)] - expanded[std::size_t(n)]));
        CHECK(worst < 1e-9);
    }
    // sigma-normalized spot check away from the ramified prime
    auto ssys = make_sigma_system(lv, 300);
    auto d = l4_coefficients_direct(ssys, 300);
    auto e = l4_coefficients_expanded(ssys, 300);
    CHECK(std::abs(d[16] - e[16]) < 1e-10);
}

TEST_CASE("AFE term enumeration with certified tail") {
    AfeWeightConfig w;
    PrimeLevel q53(53, 3);
    auto en = afe_enumerate(q53, w, 5e4);
    CHECK(en.terms.size() == 38);
    CHECK(en.c_a == doctest::Approx(v_weight_tail_constant(w)).epsilon(1e-12));
    CHECK(en.s2 == doctest::Approx(13.37222).epsilon(1e-4));
    CHECK(en.tail_bound == doctest::Approx(5e4).epsilon(1e-12));

    // every emitted term satisfies the cap and recomputes its own fields
    int below_one = 0;
    for (const auto& t : en.terms) {
        CHECK(t.xi <= en.xi_cap);
        i64 L = std::lcm(t.b, t.c);
        double coef = double(a_coefficient(t.b, t.c, t.d, t.j)) * double(sigma_k(t.n, 4)) /
                      (double(t.j * L * t.d) * std::sqrt(double(t.b) * t.c * t.n));
        CHECK(std::fabs(t.coefficient - coef) < 1e-12 * (1.0 + std::fabs(coef)));
        double xi = std::pow(TWO_PI, 4.0) *
                    double(t.b * t.c * (L * t.d * t.j) * (L * t.d * t.j) * t.n) / (53.0 * 53.0);
        CHECK(std::fabs(t.xi - xi) < 1e-12 * xi);
        below_one += (t.xi <= 1.0);
    }
    // independent quintuple recount of the xi <= 1 population
    int brute = 0;
    for (i64 b = 1; b <= 4; ++b)
        for (i64 c = 1; c <= 4; ++c)
            for (i64 d = 1; d <= 4; ++d)
                for (i64 j = 1; j <= 4; ++j)
                    for (i64 n = 1; n <= 4; ++n) {
                        if (moebius(b) == 0 || moebius(c) == 0) continue;
                        i64 L = std::lcm(b, c);
                        double xi =
                            std::pow(TWO_PI, 4.0) * double(b * c * (L * d * j) * (L * d * j) * n) /
                            (53.0 * 53.0);
                        brute += (xi <= 1.0);
                    }
    CHECK(below_one == brute);
    CHECK(brute == 1);

    // loose tolerance at small q: the cap falls below the smallest xi and
    // the enumeration is empty while the bound is still reported
    PrimeLevel q5(5, 3);
    auto empty = afe_enumerate(q5, w, 1.0);
    CHECK(empty.terms.empty());
    CHECK(empty.tail_bound == doctest::Approx(1.0).epsilon(1e-12));
    auto one = afe_enumerate(q5, w, 0.5);
    CHECK(one.terms.size() == 1);
    CHECK(one.terms[0].b == 1);
    CHECK(one.terms[0].n == 1);

    // unreachable tolerance trips the term budget instead of allocating
    CHECK_THROWS_AS(afe_enumerate(q53, w, 1e-4), std::runtime_error);
    CHECK_THROWS_AS(afe_enumerate(q53, w, 0.0), std::domain_error);
}
