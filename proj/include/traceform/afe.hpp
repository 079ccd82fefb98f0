#pragma once
// Approximate-functional-equation engine: the smooth cutoff weight V(xi)
// evaluated by contour quadrature, synthetic multiplicative eigenvalue
// systems (Satake pairs on the unit circle), the fourth-power coefficient
// identity, and enumeration of AFE terms with a certified tail bound.

#include <cstdint>
#include <vector>

#include "traceform/arith.hpp"
#include "traceform/numeric.hpp"

namespace traceform {

// Global family parameters (q, k).  The asymptotic machinery (certified
// Kloosterman-side tails, growth-trend statements) needs k >= 3 odd; the
// engine accepts k >= 2 and lets callers flag the uncertified ranges.
struct PrimeLevel {
    i64 q;
    int k;
    PrimeLevel(i64 q_, int k_);
    bool certified_range() const { return k >= 3 && k % 2 == 1; }
};

struct AfeWeightConfig {
    int k = 3;
    // H(s) = cos(pi s / 8)^m; m = 0 means H identically 1.  m must stay
    // below 4 or H^4 outgrows the Gamma^4 decay on vertical lines.
    int h_cos_power = 0;
    // Two gamma-factor completions circulate for the same weight: the
    // archimedean ratio at k/2 + s, and the one normalized at (k-1)/2 + s.
    // Both are implemented; weight_half_k is the default.
    enum class GammaForm { weight_half_k, completed_half_km1 };
    GammaForm gamma_form = GammaForm::weight_half_k;
    double contour_re = 1.0;
    double truncation_height = 16.0;
};

cplx afe_h(const AfeWeightConfig& cfg, cplx s);

// V(xi) = (1/2 pi i) int_(c) H^4(s) G(s) xi^{-s} ds / s with G the chosen
// normalized Gamma^4 ratio.  For xi < 1/2 the contour is shifted left past
// the simple pole at s = 0 (residue 1), which exposes V = 1 + O(xi^A)
// directly.  Each call verifies truncation-height doubling to 1e-8; the
// imaginary accumulator (conjugate-symmetry residual) is exposed for tests.
double v_weight(double xi, const AfeWeightConfig& cfg, double* imag_accum = nullptr);

// Calibrated constant C with |V(x)| <= C x^{-3}: max over a fixed log-spaced
// probe grid of x^3 |V(x)|, times a safety factor 10.
double v_weight_tail_constant(const AfeWeightConfig& cfg);

// Synthetic eigenvalue system: for each prime p != q an alpha_p uniform on
// the unit circle (seeded), beta_p = chi(p)/alpha_p, lambda(p) = alpha_p +
// beta_p; lambda(q) = 0 at the ramified prime; prime powers by the
// three-term recursion lambda(p^{j+1}) = lambda(p) lambda(p^j) -
// chi(p) lambda(p^{j-1}); multiplicative across coprime arguments.
struct HeckeSystem {
    i64 q;
    int k;
    i64 chi_index;
    std::uint64_t seed;
    bool sigma_mode = false;  // lambda(p) = 2 test system (=> lambda = sigma)
    std::vector<cplx> lam;    // lam[n], n = 1..cap; lam[0] unused

    i64 cap() const { return i64(lam.size()) - 1; }
    DirichletCharacter character() const { return DirichletCharacter(q, chi_index); }
};

HeckeSystem make_hecke_system(const PrimeLevel& lv, i64 chi_index, std::uint64_t seed, i64 cap);
// Deterministic test system with trivial character and lambda(p) = 2 for all
// p != q, so lambda(n) = sigma(n) on (n, q) = 1.
HeckeSystem make_sigma_system(const PrimeLevel& lv, i64 cap);
// Same seed, new cap; agrees with the original table on the overlap.
std::vector<cplx> hecke_extend(const HeckeSystem& sys, i64 cap);

// Dirichlet coefficients of L(f, s)^4 for n <= cap, by convolving the
// lambda sequence with itself four times (the oracle route).
std::vector<cplx> l4_coefficients_direct(const HeckeSystem& sys, i64 cap);
// The same coefficients assembled from the expansion over tuples
// (b, c, d, j, n) with bc([b,c]dj)^2 n = N and weight
// chi(j[b,c]d) A(b,c;d,j) lambda(bcn) sigma_4(n).
std::vector<cplx> l4_coefficients_expanded(const HeckeSystem& sys, i64 cap);

struct AfeTerm {
    i64 b, c, d, j, n;
    double coefficient;  // A(b,c;d,j) sigma_4(n) / (j [b,c] d sqrt(b c n))
    double xi;           // (2 pi)^4 (j [b,c] d)^2 b c n / q^2
};

struct AfeEnumeration {
    std::vector<AfeTerm> terms;
    double xi_cap = 0;      // terms with xi <= xi_cap are emitted
    double tail_bound = 0;  // certified bound on the neglected |coef * V(xi)| mass
    double c_a = 0;         // calibrated decay constant, |V(x)| <= c_a x^{-3}
    double s2 = 0;          // convergent majorant entering the tail bound
};

// All AFE terms needed so that the neglected mass is below tail_tol, with
// the bound certified from the calibrated decay constant.  Throws if the
// enumeration would exceed 1e8 tuples.
AfeEnumeration afe_enumerate(const PrimeLevel& lv, const AfeWeightConfig& cfg, double tail_tol);

}  // namespace traceform
