#pragma once
// Bessel evaluators J_nu (integer nu >= 1), Y_0, K_0 with three independent
// representation families that cross-validate each other:
//   * power series (double for guarded ranges, __float128 as a slow oracle,
//     long double for Y0/K0),
//   * large-argument asymptotic expansions (Hankel P/Q form),
//   * Mellin-Barnes contour integrals for Y0/K0 at small argument.
// Production routing:
//   J: series when x < 2*sqrt(nu+1) (terms alternate and decrease, so no
//      cancellation), otherwise normalized backward (Miller) recurrence.
//      A wide switch at x = max(20, 2 nu) would cancel catastrophically in
//      double (e.g. nu=10, x=30 loses ~11 digits), hence this routing.
//   Y0/K0: series up to x = 12, asymptotics beyond (crossover error ~4e-11).

#include <string>
#include <vector>

#include "traceform/numeric.hpp"

namespace traceform {

// ---- production evaluators ----
double bessel_j(int order, double x);  // order in [1,200], x >= 0
double y0_bessel(double x);            // x > 0
double k0_bessel(double x);            // x > 0

// ---- individual representations (cross-check routes) ----
// Alternating ascending series summed in __float128; guarded against
// cancellation (throws std::domain_error when >1e20 of it would occur).
double bessel_j_series_quad(int order, double x);
// Backward recurrence normalized by J_0 + 2*sum J_{2m} = 1.
double bessel_j_recurrence(int order, double x);
// Hankel asymptotic expansion; throws std::domain_error when no term of the
// divergent series is small enough to certify 1e-10.
double bessel_j_asymptotic(int order, double x);

double y0_series(double x);  // long double ascending series, x <= 16
double k0_series(double x);
double y0_asymptotic(double x);  // P/Q form, x >= 8
double k0_asymptotic(double x);

// ---- Mellin-Barnes representation ----
struct MellinKernel {
    enum class Kind { Y0, K0 };
    Kind kind = Kind::Y0;
    double contour_sigma = 0.5;      // Re s = -sigma, sigma in (0,1)
    double truncation_height = 40.0; // vertical leg [0, i T] before the ray

    cplx gamma_fn(cplx s) const;  // the integrand kernel gamma / gamma_1
};

// Y0(x) = (1/2 pi i) int_(-sigma) gamma(s) x^{-s} ds + (2/pi) ln x + kappa,
// kappa = -(2/pi) ln 2 + 2 EULER_GAMMA / pi.  The contour runs up the line
// Re s = -sigma to height T and is then completed by a ray at angle 3pi/4,
// along which the kernel decays superexponentially; no poles lie above the
// real axis, so the value is T-independent.  Each call evaluates at T and
// 2T and reports disagreement > 1e-8 as std::runtime_error.
double y0_via_mellin(double x, const MellinKernel& kernel);
// K0(x) = (contour integral with gamma_1) - ln x + kappa_1,
// kappa_1 = ln 2 - EULER_GAMMA.
double k0_via_mellin(double x, const MellinKernel& kernel);

// sup over t in [1,100] (dense grid) of |gamma(-sigma+it)| t^{sigma+1};
// finite and O(1) for the Y0 kernel, which decays only algebraically.
double kernel_decay_sup(const MellinKernel& kernel);

// int_{-T}^{T} |gamma(-sigma+it)| dt.  Uses direct kernel evaluation for
// |t| <= 1e4 and a Stirling form beyond, with the exp(pi t / 2) growth of
// cos(pi s/2) cancelled against Gamma(s/2)^2 symbolically so the modulus
// stays meaningful out to t ~ 1e16.
double kernel_abs_integral(const MellinKernel& kernel, double T);

// Successive-doubling stabilization record for the integral above.
struct StabilizationReport {
    std::vector<double> heights;
    std::vector<double> values;
    double final_value = 0.0;
    double last_increment = 0.0;
    bool stabilized = false;  // last increment < 1e-8
};
StabilizationReport kernel_abs_integral_stabilized(const MellinKernel& kernel);

// Table-emission hook for the CLI: rows of (x, value, representation label,
// crude error estimate from the dual-representation gap).
struct BesselTableRow {
    double x = 0;
    double value = 0;
    std::string representation;
    double est_error = 0;
};
std::vector<BesselTableRow> bessel_table(const std::string& kind, const std::vector<double>& xs);

}  // namespace traceform
