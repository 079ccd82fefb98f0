#pragma once
// Harmonic averages over holomorphic newform families via the Petersson
// trace formula, the quasi-orthogonality (large sieve) experiment with both
// sides computed independently, the GL(1) large-sieve inequality checker,
// and the growth-trend moment experiment over a range of prime levels.
//
// The family average engine evaluates, for all characters chi mod q of one
// parity, the pair averages
//   Delta_chi(m, n) = delta_{m=n} + 2 pi i^{-k} sum_{c = 0 mod q, c <= C}
//                     S_chi(m, n; c)/c J_{k-1}(4 pi sqrt(mn)/c)
// for every ordered pair (m, n) in a window (N, 2N].  Because chi enters
// only through chi(d mod q), the c/a loops are done once into buckets
//   T[(m,n)][rho] = sum_c (J/c) sum_{a d = 1 (c), d = rho (q)} e((am+dn)/c),
// after which any character (or the folded parity average, which collapses
// the character sum to the rho = +-1 buckets) is a cheap linear pass.

#include <cstdint>
#include <string>
#include <vector>

#include "traceform/afe.hpp"
#include "traceform/arith.hpp"
#include "traceform/numeric.hpp"

namespace traceform {

// Smooth dyadic cutoff on [1,2]: exp(4 + 1/((x-1)(x-2))), peak-normalized
// to 1 at x = 3/2, identically zero outside (1, 2).
double window_psi(double x);
// Psi_1(x) = Psi(x) V(x X / q^{2.01}) — the AFE-damped window.
double window_psi1(double x, double X, const PrimeLevel& lv, const AfeWeightConfig& wcfg);

// Complex coefficients supported on integers in (N, 2N].
struct CoefficientVector {
    double N = 0;          // support bound (N, 2N]
    i64 first = 0;         // smallest integer > N
    std::vector<cplx> a;   // a[i] is the coefficient of n = first + i
    double stored_norm2 = 0;

    i64 count() const { return i64(a.size()); }
    i64 last() const { return first + count() - 1; }
    cplx at(i64 n) const {
        return (n >= first && n <= last()) ? a[std::size_t(n - first)] : cplx(0.0);
    }
    double norm2() const;                   // recomputed from entries
    bool norm2_consistent(double tol = 1e-12) const;
};

// a_{bcn} = sigma_4(n) Psi_1(bcn/Y) / sqrt(bcn) on the window bcn in (Y, 2Y],
// Y = X/(16 pi^4 (j[b,c]d)^2); entries off multiples of bc are zero.
CoefficientVector prop25_vector(i64 b, i64 c, i64 d, i64 j, const PrimeLevel& lv, double X,
                                const AfeWeightConfig& wcfg);
// Seeded unit-modulus coefficients on (N, 2N] (for the sieve experiments).
CoefficientVector random_unit_vector(double N, std::uint64_t seed);

struct PeterssonEval {
    cplx value;
    double tail;  // certified bound on the dropped c > c_cap mass
};

// delta_{m=n} + 2 pi i^{-k} sum_{c = 0 (q), c <= c_cap} S_chi(m,n;c)/c
// J_{k-1}(4 pi sqrt(mn)/c), tail certified from |S_chi| <= c and
// J_{k-1}(x) <= (x/2)^{k-1}/(k-1)!.
PeterssonEval petersson_delta(i64 m, i64 n, const PrimeLevel& lv, const DirichletCharacter& chi,
                              i64 c_cap);

double petersson_tail_bound(const PrimeLevel& lv, double mn_max, i64 c_cap);
// Smallest multiple of q with certified tail < 1e-10, capped at 200 q.
i64 default_c_cap(const PrimeLevel& lv, double mn_max);

class PairAverageEngine {
  public:
    // Builds the buckets for all ordered pairs over integers in (N, 2N].
    PairAverageEngine(const PrimeLevel& lv, double N, i64 c_cap);

    // (2/phi(q)) sum_{chi(-1)=parity} sum_f^h |sum_n a_n lambda_f(n)|^2.
    // Per-character route by default; folded = true collapses the character
    // average to congruence conditions d = +-1 (q) (must agree to 1e-10).
    double parity_average(const CoefficientVector& alpha, int parity, bool folded = false) const;
    // The per-character contributions (2/phi(q)) V_chi in index order of chi,
    // so callers can re-reduce in any order.
    std::vector<double> per_character_terms(const CoefficientVector& alpha, int parity) const;

    i64 c_cap() const { return c_cap_; }
    double tail() const { return tail_; }

  private:
    PrimeLevel lv_;
    double N_;
    i64 first_ = 0;
    i64 n_count_ = 0;
    i64 c_cap_ = 0;
    double tail_ = 0;
    std::vector<cplx> buckets_;  // flattened [ordered pair][rho mod q], stride q

    cplx pair_sum(std::size_t pair_idx, const DirichletCharacter& chi) const;
};

// Parity-class averaged square.  alpha is usually prop25_vector output;
// result is real up to a checked accumulator and must exceed -1e-8
// (mean of squared magnitudes), else a truncation failure is raised.
double prop25_quantity(i64 b, i64 c, const CoefficientVector& alpha, const PrimeLevel& lv,
                       int parity, i64 c_cap, bool folded = false);

// Independent oracle: plain per-character double loop over (m, n) calling
// petersson_delta directly (no shared bucket machinery).
double prop25_oracle(const CoefficientVector& alpha, const PrimeLevel& lv, int parity, i64 c_cap);

struct SieveSides {
    double lhs = 0;       // trace-formula route
    double rhs_main = 0;  // (1/q) sum_t (2pi/t)^2 sum_h |P_ht|^2
    double residual = 0;  // lhs - rhs_main
    double envelope = 0;  // N^0.1 (N/q^2 + sqrt(N/(q H))) ||alpha||^2
};

// P_ht(alpha) = sum_n a_n S(h qbar, n; t) J_{k-1}((4 pi / t) sqrt(hn/q)),
// qbar = q^{-1} mod t.
cplx p_ht(const CoefficientVector& alpha, const PrimeLevel& lv, i64 h, i64 t);

// Both sides of the quasi-orthogonality identity with T = N/q and
// 1 <= H_cut <= T; parity fixed to (-1)^k as in the identity.
SieveSides large_sieve_sides(const CoefficientVector& alpha, const PrimeLevel& lv, i64 h_cut,
                             i64 c_cap);

struct Gl1Result {
    double lhs = 0;
    double rhs = 0;
    bool ok = false;
};
// sum_{q<=Q} sum*_{a mod q} |sum sum_{(mn,q)=1} alpha_m beta_n e(a m nbar/q)|^2
// <= (Q^2 + MN) ||alpha||^2 ||beta||^2  (vectors indexed from 1).
Gl1Result gl1_large_sieve_check(const std::vector<cplx>& alpha_m, const std::vector<cplx>& beta_n,
                                i64 Q);

// Configuration carrier for dyadic experiments; constructor computes and
// enforces the coupled quantities (T = H = Y/q, dyadic anchors in range).
struct SieveExperiment {
    PrimeLevel level;
    double X, Y, T, H, T1, H1, N;
    SieveExperiment(const PrimeLevel& lv, double X_, i64 b, i64 c, i64 d, i64 j, double T1_,
                    double H1_, double N_);
};

struct MomentTrendRow {
    i64 q = 0;
    int k = 0;
    double X = 0, Y = 0;
    double value = 0;   // parity-averaged squared sum
    double norm2 = 0;   // ||alpha||^2
    double ratio = 0;   // value / norm2 (0 when norm2 = 0)
    double prefactor_a1 = 0, prefactor_a2 = 0;  // Cauchy-Schwarz arithmetic sums
    i64 c_cap = 0;
    i64 window_count = 0;
    double tail = 0;
    bool failed = false;
    std::string error;
};

// One row per prime level, X = q^2, b = c = d = j = 1; failures are
// isolated per row.  Uses the per-character default route.
std::vector<MomentTrendRow> moment_trend(const std::vector<PrimeLevel>& levels,
                                         const AfeWeightConfig& wcfg);

// The two arithmetic sums from the Cauchy-Schwarz split, over all
// b, c, d, j >= 1 with j [b,c] d <= sqrt(X):
//   a1: (b,c) sigma^2(j) sigma^2(d[b,c]/b) sigma^2(d[b,c]/c) / (jdbc)
//   a2: (b,c) / (jdbc)
std::pair<double, double> cauchy_prefactors(double X);

// Log-log OLS slope of the value column against q, over rows with
// positive value; throws if fewer than 2 usable rows.
double trend_slope(const std::vector<MomentTrendRow>& rows, bool use_ratio = false);

}  // namespace traceform
