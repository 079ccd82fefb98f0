#pragma once

#include <string>
#include <vector>

#include "traceform/afe.hpp"
#include "traceform/arith.hpp"
#include "traceform/numeric.hpp"

namespace traceform {

// Compactly supported smooth test functions on (x0, x1).  The bump is the
// unit template exp(-1/t - 1/(1-t)) rescaled to the support (t = (x-x0)/L,
// L = x1-x0), i.e. exp(-L/(x-x0) - L/(x1-x)); the rescaling keeps the
// endpoint sharpness proportional to the support so the transform's
// oscillatory series reaches its plateau at a feasible truncation.
//   bump       : exp(-L/(x-x0) - L/(x1-x))
//   gauss_bump : exp(-((x-mu)/s)^2) * bump cutoff, mu = midpoint, s = L/6
//   log_odd    : W(u) (u - mu) / ((u + s) x), u = log x, W an even bump in u;
//                built so int (log x + s) g(x) dx vanishes identically (the
//                integrand is odd about the log-midpoint), killing the main
//                term of the transform and isolating the Bessel series.
struct SmoothTestFunction {
    enum class Family { bump, gauss_bump, log_odd };
    Family family = Family::bump;
    double x0 = 0.0, x1 = 1.0;
    double mu = 0.0, s = 1.0;

    double operator()(double x) const;
    std::string description() const;
};

SmoothTestFunction make_bump(double x0, double x1);
SmoothTestFunction make_gauss_bump(double x0, double x1);
// main-term-free test function for modulus c (s = 2 EULER_GAMMA - 2 log c);
// requires x0 > c^2 exp(-2 EULER_GAMMA) so the denominator stays positive.
SmoothTestFunction make_log_odd(double x0, double x1, i64 c);

// lhs of the divisor-sum transform: sum_n sigma(n) e(an/c) g(n), gcd(a,c)=1.
cplx voronoi_lhs(const SmoothTestFunction& g, i64 a, i64 c);

struct VoronoiEval {
    cplx value{};          // main + Y-series + K-series
    cplx main{};           // (1/c) int (log x + 2 EULER_GAMMA - 2 log c) g(x) dx
    i64 ell_cap = 0;       // where the Y-series was truncated
    double y_tail = 0;     // empirical: last dyadic Y-block magnitude x 10
    double k_tail = 0;     // certified from the exponential K-kernel decay
    bool plateau = false;  // the empirical stopping rule fired before the cap
};

// rhs of the transform, d = a^{-1} mod c:
//   (1/c) int (log x + 2g - 2 log c) g
//   - (2pi/c) sum_l sigma(l) e(-dl/c) int Y0(4pi sqrt(lx)/c) g
//   + (4/c)   sum_l sigma(l) e(+dl/c) int K0(4pi sqrt(lx)/c) g
// refine doubles quadrature density; ell_cap = 0 selects the cap adaptively.
VoronoiEval voronoi_rhs(const SmoothTestFunction& g, i64 a, i64 c, int refine = 1, i64 ell_cap = 0);

struct VoronoiCase {
    i64 a = 0, c = 1;
    SmoothTestFunction g;
    double expected_gap = 1e-6;  // per-case budget for |lhs-rhs| / (1+|lhs|)
};

// fixed 12-case corpus, c = 1..12, supports inside [5, 200]
std::vector<VoronoiCase> voronoi_corpus();

// External corpus interface: a JSON array of records
//   {"g": {"family": "bump"|"gauss_bump"|"log_odd", "x0": .., "x1": ..},
//    "a": .., "c": ..}
// ("mu"/"s" optional for gauss_bump; log_odd derives them from the record's c).
std::vector<VoronoiCase> corpus_from_json(const std::string& path);

// Shifted-sum decomposition: for the weighted sum
//   N(n1; r, t, h, bc) = sum_{n2} sigma(n2)/sqrt(n2)
//                        * J_{k-1}((4pi/t) sqrt(h*bc*n1*n2/q))
//                        * Psi1(bc*n1*n2/Y) * e(r*bc*n1*n2/t)
// the additive phase collapses to e(m*r*n2/eta) with eta = t/(bc*n1, t),
// m = bc*n1/(bc*n1, t), and the transform above (modulus eta, twist
// inverse (m*r)^{-1} mod eta) re-expresses it as R1 + R2 + R3.
struct NsumCase {
    i64 n1 = 1, r = 1, t = 1, h = 1, bc = 1;
    double Y = 40.0;
};

struct NsumCheck {
    cplx direct{};      // finite sum over the window integers
    cplx decomposed{};  // R1 + R2 + R3
    cplx r1{}, r2{}, r3{};
    i64 eta = 1, m = 1;
    double rel_gap = 0.0;
    bool inverse_match = false;  // (m*r)^{-1} == mbar * rbar mod eta
    i64 ell_cap = 0;
    double y_tail = 0, k_tail = 0;
};

NsumCheck nsum_decomposition_check(const NsumCase& cs, const PrimeLevel& lv,
                                   const AfeWeightConfig& wcfg, int refine = 1);

// fixed 10-case corpus at level q = 5, k = 11 (covers t = 1 and eta = 1)
std::vector<NsumCase> nsum_corpus();

}  // namespace traceform
