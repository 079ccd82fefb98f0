#include "traceform/afe.hpp"

#include <cmath>
#include <stdexcept>

#include "traceform/cgamma.hpp"
#include "traceform/quadrature.hpp"
#include "traceform/rng.hpp"

namespace traceform {

PrimeLevel::PrimeLevel(i64 q_, int k_) : q(q_), k(k_) {
    if (!is_prime(q) || q < 5) throw std::domain_error("PrimeLevel: q must be a prime >= 5");
    if (k < 2) throw std::domain_error("PrimeLevel: k must be >= 2");
}

cplx afe_h(const AfeWeightConfig& cfg, cplx s) {
    if (cfg.h_cos_power == 0) return 1.0;
    return std::pow(std::cos(PI * s / 8.0), cfg.h_cos_power);
}

static void check_weight_config(const AfeWeightConfig& cfg) {
    if (cfg.k < 2) throw std::domain_error("v_weight: k must be >= 2");
    if (cfg.h_cos_power < 0 || cfg.h_cos_power >= 4)
        throw std::domain_error("v_weight: cos-power H needs exponent in [0,3]");
    if (cfg.contour_re <= 0) throw std::domain_error("v_weight: contour_re must be positive");
    if (cfg.truncation_height <= 0)
        throw std::domain_error("v_weight: truncation_height must be positive");
}

static double gamma_base(const AfeWeightConfig& cfg) {
    return cfg.gamma_form == AfeWeightConfig::GammaForm::weight_half_k ? 0.5 * cfg.k
                                                                       : 0.5 * (cfg.k - 1);
}

// (1/2 pi) int_{-T}^{T} H^4 G xi^{-s} / s dt on Re s = sig (complex result;
// the imaginary part is a numerical-consistency residual).
static cplx v_weight_line(double xi, const AfeWeightConfig& cfg, double sig, double T) {
    const double base = gamma_base(cfg);
    const double lg0 = std::lgamma(base);
    const double lxi = std::log(xi);
    auto f = [&](double t) {
        cplx s(sig, t);
        cplx val = std::exp(4.0 * (clgamma(base + s) - lg0) - s * lxi) / s;
        if (cfg.h_cos_power) val *= std::pow(afe_h(cfg, s), 4);
        return val;
    };
    // panel width limited by the xi-oscillation AND by the horizontal
    // distance to the nearest singularity (1/s at 0, Gamma^4 at -base-j);
    // otherwise the two truncation heights quantize panels differently and
    // the doubling check trips on pure quadrature error.
    double dpole = std::min(std::fabs(sig), std::fabs(sig + base));
    double pw = std::min({1.0, dpole, TWO_PI / (2.0 * (1.0 + std::fabs(lxi)))});
    int np = std::max(8, (int)std::ceil(2.0 * T / pw));
    return gl_composite(f, -T, T, np, 20) / TWO_PI;
}

double v_weight(double xi, const AfeWeightConfig& cfg, double* imag_accum) {
    if (!(xi > 0)) throw std::domain_error("v_weight: xi must be positive");
    check_weight_config(cfg);
    const double base = gamma_base(cfg);
    // Left of the pole at s = 0 for small xi (picks up residue 1; the
    // remaining integral is O(xi^{base/2})), right contour otherwise.  The
    // midpoint -base/2 maximizes clearance from both the s = 0 pole and the
    // first Gamma pole at s = -base.
    bool small = xi < 0.5;
    double sig = small ? -0.5 * base : cfg.contour_re;
    double T = cfg.truncation_height;
    cplx a = v_weight_line(xi, cfg, sig, T);
    cplx b = v_weight_line(xi, cfg, sig, 2.0 * T);
    if (std::abs(a - b) > 1e-8)
        throw std::runtime_error("v_weight: truncation-height doubling disagrees > 1e-8");
    if (imag_accum) *imag_accum = std::fabs(b.imag());
    return (small ? 1.0 : 0.0) + b.real();
}

double v_weight_tail_constant(const AfeWeightConfig& cfg) {
    check_weight_config(cfg);
    // Fixed probe grid: 40 log-spaced points on [1, 1e4].
    double best = 0.0;
    for (int i = 0; i < 40; ++i) {
        double x = std::pow(10.0, 4.0 * i / 39.0);
        double v = std::fabs(v_weight(x, cfg));
        best = std::max(best, x * x * x * v);
    }
    return 10.0 * best;
}

// ---------- synthetic eigenvalue systems ----------

static void fill_lambda(HeckeSystem& sys, i64 cap) {
    sys.lam.assign(cap + 1, 0.0);
    if (cap >= 1) sys.lam[1] = 1.0;
    DirichletCharacter chi = sys.character();
    Rng rng(sys.seed);
    // lambda at prime powers; alpha draws consumed in ascending-prime order
    // so extending the cap preserves every earlier value.
    for (i64 p : primes_in(2, cap)) {
        cplx lp;
        cplx chip = chi.value(p);
        if (p == sys.q) {
            lp = 0.0;  // ramified prime
        } else if (sys.sigma_mode) {
            lp = 2.0;
        } else {
            cplx alpha = rng.unit_circle();
            lp = alpha + chip / alpha;
        }
        cplx prev = 1.0, cur = lp;  // lambda(p^0), lambda(p^1)
        for (i64 pw = p; pw <= cap; pw *= p) {
            sys.lam[pw] = cur;
            if (pw > cap / p) break;
            cplx nxt = lp * cur - chip * prev;
            prev = cur;
            cur = nxt;
        }
    }
    // multiplicative fill: n = p^e * m with m > 1 coprime
    for (i64 n = 2; n <= cap; ++n) {
        i64 p = 0;
        for (i64 d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                p = d;
                break;
            }
        if (p == 0) continue;  // prime, already set
        i64 pe = 1;
        i64 m = n;
        while (m % p == 0) m /= p, pe *= p;
        if (m > 1) sys.lam[n] = sys.lam[pe] * sys.lam[m];
    }
}

HeckeSystem make_hecke_system(const PrimeLevel& lv, i64 chi_index, std::uint64_t seed, i64 cap) {
    if (cap < 1) throw std::domain_error("make_hecke_system: cap must be >= 1");
    HeckeSystem sys;
    sys.q = lv.q;
    sys.k = lv.k;
    sys.chi_index = chi_index;
    sys.seed = seed;
    fill_lambda(sys, cap);
    return sys;
}

HeckeSystem make_sigma_system(const PrimeLevel& lv, i64 cap) {
    if (cap < 1) throw std::domain_error("make_sigma_system: cap must be >= 1");
    HeckeSystem sys;
    sys.q = lv.q;
    sys.k = lv.k;
    sys.chi_index = 0;
    sys.seed = 0;
    sys.sigma_mode = true;
    fill_lambda(sys, cap);
    return sys;
}

std::vector<cplx> hecke_extend(const HeckeSystem& sys, i64 cap) {
    HeckeSystem copy = sys;
    fill_lambda(copy, cap);
    return copy.lam;
}

std::vector<cplx> l4_coefficients_direct(const HeckeSystem& sys, i64 cap) {
    if (cap < 1) throw std::domain_error("l4_coefficients_direct: cap must be >= 1");
    std::vector<cplx> lam = sys.cap() >= cap ? sys.lam : hecke_extend(sys, cap);
    auto square = [cap](const std::vector<cplx>& a) {
        std::vector<cplx> out(cap + 1, 0.0);
        for (i64 m = 1; m <= cap; ++m)
            for (i64 n = 1; m * n <= cap; ++n) out[m * n] += a[m] * a[n];
        return out;
    };
    lam.resize(cap + 1);
    return square(square(lam));
}

std::vector<cplx> l4_coefficients_expanded(const HeckeSystem& sys, i64 cap) {
    if (cap < 1) throw std::domain_error("l4_coefficients_expanded: cap must be >= 1");
    std::vector<cplx> lam = sys.cap() >= cap ? sys.lam : hecke_extend(sys, cap);
    DirichletCharacter chi = sys.character();
    std::vector<cplx> out(cap + 1, 0.0);
    for (i64 b = 1; b <= cap; ++b) {
        if (moebius(b) == 0) continue;
        for (i64 c = 1; b * c <= cap; ++c) {
            if (moebius(c) == 0) continue;
            i64 L = std::lcm(b, c);
            for (i64 d = 1; b * c * (L * d) * (L * d) <= cap; ++d)
                for (i64 j = 1; b * c * (L * d * j) * (L * d * j) <= cap; ++j) {
                    i64 A = a_coefficient(b, c, d, j);
                    if (A == 0) continue;
                    cplx ch = chi.value(j * L * d);
                    if (ch == 0.0) continue;
                    i64 base = b * c * (L * d * j) * (L * d * j);
                    for (i64 n = 1; base * n <= cap; ++n)
                        out[base * n] += ch * double(A) * lam[b * c * n] * double(sigma_k(n, 4));
                }
        }
    }
    return out;
}

// ---------- AFE term enumeration with certified tail ----------

static const double ZETA_5_2 = 1.3414872572509171798;
static const double ZETA_5 = 1.0369277551433699263;
static const double ZETA_3 = 1.2020569031595942854;
static const double ZETA_7_2 = 1.1267338673170566464;

// B = sum_{b,c squarefree, d >= 1} sigma(dL/b) sigma(dL/c) / (L^5 d^5 (bc)^{5/2}),
// L = [b,c]; computed over a box with an explicit remainder bound added on
// top (sigma(m) <= m turns each tail into elementary zeta tails).
static double majorant_b_sum() {
    const i64 D = 80;
    double s = 0.0;
    for (i64 b = 1; b <= D; ++b) {
        if (moebius(b) == 0) continue;
        for (i64 c = 1; c <= D; ++c) {
            if (moebius(c) == 0) continue;
            double L = double(std::lcm(b, c));
            double l5 = L * L * L * L * L;
            double bc52 = std::pow(double(b) * c, 2.5);
            for (i64 d = 1; d <= D; ++d) {
                double num = double(sigma(d * (std::lcm(b, c) / b))) *
                             double(sigma(d * (std::lcm(b, c) / c)));
                s += num / (l5 * std::pow(double(d), 5.0) * bc52);
            }
        }
    }
    // remainder: with sigma(m) <= m each term is <= 1/(L^3 d^3 (bc)^{7/2})
    double d_tail = ZETA_7_2 * ZETA_7_2 * 0.5 / (double(D) * D);
    double b_tail = 2.0 * (ZETA_7_2 * ZETA_3) * (2.0 / 7.0) * std::pow(double(D), -3.5);
    return s + d_tail + b_tail;
}

AfeEnumeration afe_enumerate(const PrimeLevel& lv, const AfeWeightConfig& cfg, double tail_tol) {
    if (!(tail_tol > 0)) throw std::domain_error("afe_enumerate: tail_tol must be positive");
    AfeEnumeration out;
    out.c_a = v_weight_tail_constant(cfg);
    const double q2 = double(lv.q) * lv.q;
    const double twopi4 = std::pow(TWO_PI, 4.0);
    // |V(xi)| <= C xi^{-3} <= (C/Xi) xi^{-2} on xi > Xi turns the neglected
    // mass into (C/Xi) * S2 with S2 = q^4 (2 pi)^{-8} zeta(5/2)^4 zeta(5)^2 B.
    out.s2 = q2 * q2 / std::pow(TWO_PI, 8.0) * std::pow(ZETA_5_2, 4.0) * ZETA_5 * ZETA_5 *
             majorant_b_sum();
    out.xi_cap = out.c_a * out.s2 / tail_tol;
    out.tail_bound = out.c_a * out.s2 / out.xi_cap;  // == tail_tol by construction

    // xi <= Xi  <=>  (j L d)^2 b c n <= Xi q^2 / (2 pi)^4
    const double mcap_f = out.xi_cap * q2 / twopi4;
    const std::size_t budget = 100000000;
    // the (1,1,1,1,n) strip alone emits mcap terms, so this cap certifies
    // the in-loop budget would trip; refuse before allocating gigabytes
    if (mcap_f >= double(budget))
        throw std::runtime_error("afe_enumerate: term budget of 1e8 exceeded");
    if (mcap_f >= 1.0) {
        const i64 mcap = i64(mcap_f);
        for (i64 b = 1; b <= mcap; ++b) {
            if (moebius(b) == 0) continue;
            for (i64 c = 1; b * c <= mcap; ++c) {
                if (moebius(c) == 0) continue;
                i64 L = std::lcm(b, c);
                if (b * c * L * L > mcap) break;
                for (i64 d = 1; b * c * (L * d) * (L * d) <= mcap; ++d)
                    for (i64 j = 1; b * c * (L * d * j) * (L * d * j) <= mcap; ++j) {
                        i64 base = b * c * (L * d * j) * (L * d * j);
                        for (i64 n = 1; base * n <= mcap; ++n) {
                            if (out.terms.size() >= budget)
                                throw std::runtime_error(
                                    "afe_enumerate: term budget of 1e8 exceeded");
                            AfeTerm t;
                            t.b = b;
                            t.c = c;
                            t.d = d;
                            t.j = j;
                            t.n = n;
                            double denom =
                                double(j * L * d) * std::sqrt(double(b) * c * n);
                            t.coefficient =
                                double(a_coefficient(b, c, d, j)) * double(sigma_k(n, 4)) / denom;
                            t.xi = twopi4 * double(base * n) / q2;
                            out.terms.push_back(t);
                        }
                    }
            }
        }
    }
    return out;
}

}  // namespace traceform
