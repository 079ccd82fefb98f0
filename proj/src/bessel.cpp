#include "traceform/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "traceform/cgamma.hpp"
#include "traceform/quadrature.hpp"

namespace traceform {

static void check_j_domain(int order, double x) {
    if (order < 1 || order > 200)
        throw std::domain_error("bessel_j: order must be in [1,200]");
    if (x < 0) throw std::domain_error("bessel_j: x must be >= 0");
}

// Ascending series in double.  Safe only for x < 2 sqrt(order+1): there the
// term ratio |t_{l+1}/t_l| = (x/2)^2 / ((l+1)(l+order+1)) < 1 from l = 0, so
// the alternating sum never cancels more than ~2 digits.
static double j_series_double(int nu, double x) {
    if (x == 0) return 0.0;
    const double h = 0.5 * x;
    double lt0 = nu * std::log(h) - std::lgamma(nu + 1.0);
    if (lt0 < -740.0) return 0.0;  // below double underflow, value is 0 to 1e-300
    double t = std::exp(lt0), s = t;
    const double h2 = h * h;
    for (int l = 1; l <= 500; ++l) {
        t *= -h2 / (double(l) * (l + nu));
        s += t;
        if (std::fabs(t) <= 1e-18 * std::fabs(s)) break;
    }
    return s;
}

double bessel_j_series_quad(int order, double x) {
    check_j_domain(order, x);
    if (x == 0) return 0.0;
    __float128 h = (__float128)x / 2, t = 1;
    for (int i = 1; i <= order; ++i) t *= h / (__float128)i;  // (x/2)^nu / nu!
    __float128 s = t, h2 = h * h;
    __float128 amax = t < 0 ? -t : t;
    for (int l = 1; l <= 3000; ++l) {
        t *= -h2 / ((__float128)l * (l + order));
        s += t;
        __float128 at = t < 0 ? -t : t;
        if (at > amax) amax = at;
        if (double(l) > h && at <= amax * (__float128)1e-42) break;
    }
    __float128 as = s < 0 ? -s : s;
    if (as == 0 || amax / as > (__float128)1e20)
        throw std::domain_error("bessel_j_series_quad: cancellation beyond quad headroom");
    return (double)s;
}

double bessel_j_recurrence(int order, double x) {
    check_j_domain(order, x);
    if (x == 0) return 0.0;
    // Miller's algorithm: downward three-term recurrence from a start index
    // comfortably past the turning point, normalized by J_0 + 2 sum J_{2m} = 1.
    int M = std::max(order, (int)std::ceil(x + 12.6 * std::cbrt(x))) + 25;
    if (M % 2) ++M;
    double jnp1 = 0.0, jn = 1e-30;
    double res = (M == order) ? jn : 0.0;
    double acc = 0.0;      // 2 * sum of even-index values, indices >= 2
    double base = 0.0;     // J_0 slot
    if (M % 2 == 0) acc += 2.0 * jn;
    for (int n = M; n >= 1; --n) {
        double jnm1 = (2.0 * n / x) * jn - jnp1;
        jnp1 = jn;
        jn = jnm1;
        int idx = n - 1;
        if (idx == order) res = jn;
        if (idx == 0)
            base = jn;
        else if (idx % 2 == 0)
            acc += 2.0 * jn;
        if (std::fabs(jn) > 1e250) {
            jn *= 1e-250;
            jnp1 *= 1e-250;
            res *= 1e-250;
            acc *= 1e-250;
            base *= 1e-250;
        }
    }
    double norm = base + acc;
    if (norm == 0) throw std::runtime_error("bessel_j_recurrence: normalization collapsed");
    return res / norm;
}

double bessel_j_asymptotic(int order, double x) {
    check_j_domain(order, x);
    if (x <= 0) throw std::domain_error("bessel_j_asymptotic: x must be positive");
    // Hankel expansion J_nu = sqrt(2/(pi x)) (P cos w - Q sin w),
    // w = x - (nu/2 + 1/4) pi; divergent series truncated at smallest term,
    // which also certifies the error.
    const double mu = 4.0 * double(order) * order;
    double A = 1.0, P = 1.0, Q = 0.0, amin = 1.0;
    bool certified = false;
    for (int k = 1; k <= 60; ++k) {
        double An = A * (mu - double(2 * k - 1) * (2 * k - 1)) / (8.0 * k * x);
        if (std::fabs(An) >= amin) break;  // series turned divergent
        A = An;
        amin = std::fabs(A);
        int m = k / 2;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1)
            Q += sgn * A;
        else
            P += sgn * A;
        if (amin < 1e-12) {
            certified = true;
            break;
        }
    }
    if (!certified)
        throw std::domain_error("bessel_j_asymptotic: cannot certify 1e-10 at this (order, x)");
    double w = x - (0.5 * order + 0.25) * PI;
    return std::sqrt(2.0 / (PI * x)) * (P * std::cos(w) - Q * std::sin(w));
}

double bessel_j(int order, double x) {
    check_j_domain(order, x);
    if (x == 0) return 0.0;
    if (x < 2.0 * std::sqrt(order + 1.0)) return j_series_double(order, x);
    return bessel_j_recurrence(order, x);
}

// ---------- Y0 / K0 series (long double working precision) ----------

static const long double EG_L = 0.577215664901532860606512090082L;

double y0_series(double x) {
    if (x <= 0) throw std::domain_error("y0_series: x must be positive");
    if (x > 16) throw std::domain_error("y0_series: series route limited to x <= 16");
    const long double h2 = (long double)x * x / 4.0L;
    long double t = 1.0L, j0 = 1.0L;
    for (int k = 1; k <= 80; ++k) {
        t *= -h2 / ((long double)k * k);
        j0 += t;
        if (fabsl(t) < 1e-24L) break;
    }
    // sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2
    long double u = 1.0L, Hk = 0.0L, s = 0.0L;
    for (int k = 1; k <= 80; ++k) {
        u *= h2 / ((long double)k * k);
        Hk += 1.0L / k;
        s += ((k % 2) ? 1.0L : -1.0L) * Hk * u;
        if (Hk * u < 1e-24L) break;
    }
    long double lead = (logl((long double)x / 2.0L) + EG_L) * j0;
    return (double)((2.0L / 3.14159265358979323846264338327950288L) * (lead + s));
}

double k0_series(double x) {
    if (x <= 0) throw std::domain_error("k0_series: x must be positive");
    if (x > 16) throw std::domain_error("k0_series: series route limited to x <= 16");
    const long double h2 = (long double)x * x / 4.0L;
    long double t = 1.0L, i0 = 1.0L;
    long double u = 1.0L, Hk = 0.0L, s = 0.0L;
    for (int k = 1; k <= 80; ++k) {
        t *= h2 / ((long double)k * k);
        i0 += t;
        u = t;
        Hk += 1.0L / k;
        s += Hk * u;
        if (t * (Hk + 1.0L) < 1e-24L) break;
    }
    return (double)(-(logl((long double)x / 2.0L) + EG_L) * i0 + s);
}

// ---------- Y0 / K0 large-argument asymptotics ----------

double y0_asymptotic(double x) {
    if (x < 8) throw std::domain_error("y0_asymptotic: valid for x >= 8");
    double A = 1.0, P = 1.0, Q = 0.0, amin = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double An = A * (0.0 - double(2 * k - 1) * (2 * k - 1)) / (8.0 * k * x);
        if (std::fabs(An) >= amin) break;
        A = An;
        amin = std::fabs(A);
        int m = k / 2;
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1)
            Q += sgn * A;
        else
            P += sgn * A;
        if (amin < 1e-17) break;
    }
    double w = x - 0.25 * PI;
    return std::sqrt(2.0 / (PI * x)) * (P * std::sin(w) + Q * std::cos(w));
}

double k0_asymptotic(double x) {
    if (x < 8) throw std::domain_error("k0_asymptotic: valid for x >= 8");
    if (x > 700) return 0.0;  // below double underflow
    double c = 1.0, s = 1.0, cmin = 1.0;
    for (int k = 1; k <= 40; ++k) {
        double cn = c * (-(double(2 * k - 1) * (2 * k - 1))) / (8.0 * k * x);
        if (std::fabs(cn) >= cmin) break;
        c = cn;
        cmin = std::fabs(c);
        s += c;
        if (cmin < 1e-17) break;
    }
    return std::sqrt(PI / (2.0 * x)) * std::exp(-x) * s;
}

double y0_bessel(double x) {
    if (x <= 0) throw std::domain_error("y0_bessel: x must be positive");
    return (x <= 12.0) ? y0_series(x) : y0_asymptotic(x);
}

double k0_bessel(double x) {
    if (x <= 0) throw std::domain_error("k0_bessel: x must be positive");
    return (x <= 12.0) ? k0_series(x) : k0_asymptotic(x);
}

// ---------- Mellin-Barnes representation ----------

cplx MellinKernel::gamma_fn(cplx s) const {
    if (kind == Kind::K0) return std::exp((s - 2.0) * LOG2 + 2.0 * clgamma(0.5 * s));
    // gamma(s) = -2^{s-1} pi^{-1} Gamma(s/2)^2 cos(pi s/2), with
    // cos(pi s/2) = sin(pi (s+1)/2) kept in log form: on a vertical line the
    // e^{pi|t|/2} growth of the cosine cancels the Gamma^2 decay, and doing
    // the cancellation inside the exponent keeps the modulus accurate.
    return -std::exp((s - 1.0) * LOG2 - std::log(PI) + 2.0 * clgamma(0.5 * s) +
                     log_sin_pi(0.5 * (s + 1.0)));
}

// A = int gamma(s) x^{-s} ds along: up the line Re s = -sigma from t=0 to
// t=T, then out the ray s = (-sigma + iT) + r e^{3 i pi/4}.  The kernel has
// all poles on the real axis and decays superexponentially along the ray, so
// A is independent of T; the caller exploits that as a convergence check.
static cplx mellin_contour_A(const MellinKernel& krn, double x, double T) {
    const double sig = krn.contour_sigma;
    const double lx = std::log(x);
    const cplx I(0.0, 1.0);

    auto vert = [&](double t) {
        cplx s(-sig, t);
        return krn.gamma_fn(s) * std::exp(-s * lx) * I;
    };
    // panel width tracks the oscillation e^{-i t ln x}
    double pw = std::min(2.0, TWO_PI / (2.0 * (1.0 + std::fabs(lx))));
    int np = std::max(8, (int)std::ceil(T / pw));
    cplx A = gl_composite(vert, 0.0, T, np, 20);

    const cplx u = std::polar(1.0, 0.75 * PI);
    const cplx s0(-sig, T);
    auto ray = [&](double r) {
        cplx s = s0 + r * u;
        return krn.gamma_fn(s) * std::exp(-s * lx) * u;
    };
    double R = std::max(60.0, 2.0 * T);
    A += gl_composite(ray, 0.0, R, (int)std::ceil(R / 1.5), 20);
    return A;
}

static double mellin_core(const MellinKernel& krn, double x) {
    if (!(x > 0) || x > 4)
        throw std::domain_error("mellin evaluation: x must lie in (0, 4]");
    if (!(krn.contour_sigma > 0 && krn.contour_sigma < 1))
        throw std::domain_error("mellin evaluation: contour_sigma must lie in (0,1)");
    double T = krn.truncation_height;
    double v1 = std::imag(mellin_contour_A(krn, x, T)) / PI;
    double v2 = std::imag(mellin_contour_A(krn, x, 2.0 * T)) / PI;
    if (std::fabs(v1 - v2) > 1e-8)
        throw std::runtime_error("mellin evaluation: truncation-height doubling disagrees > 1e-8");
    return v2;
}

double y0_via_mellin(double x, const MellinKernel& kernel) {
    if (kernel.kind != MellinKernel::Kind::Y0)
        throw std::domain_error("y0_via_mellin: kernel kind mismatch");
    const double kappa = -(2.0 / PI) * LOG2 + 2.0 * EULER_GAMMA / PI;
    return mellin_core(kernel, x) + (2.0 / PI) * std::log(x) + kappa;
}

double k0_via_mellin(double x, const MellinKernel& kernel) {
    if (kernel.kind != MellinKernel::Kind::K0)
        throw std::domain_error("k0_via_mellin: kernel kind mismatch");
    const double kappa1 = LOG2 - EULER_GAMMA;
    return mellin_core(kernel, x) - std::log(x) + kappa1;
}

double kernel_decay_sup(const MellinKernel& kernel) {
    const double sig = kernel.contour_sigma;
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double t = 1.0 + 99.0 * i / 2000.0;
        double v = std::abs(kernel.gamma_fn(cplx(-sig, t))) * std::pow(t, sig + 1.0);
        if (v > sup) sup = v;
    }
    return sup;
}

// log |gamma(-sigma+it)| for large t via Stirling with explicit symbolic
// cancellation of the pi t/2 exponents; valid (1e-10 relative on the log)
// for t >= ~1e3, usable out to t ~ 1e16 where direct evaluation would
// subtract two O(pi t/2) exponents and keep only rounding noise.
static double log_abs_kernel_large(const MellinKernel& krn, double t) {
    const double sig = krn.contour_sigma;
    const cplx z(-0.5 * sig, 0.5 * t);  // s/2
    const double r2 = std::norm(z);
    const double lnr = 0.5 * std::log(r2);
    // Stirling real part of 2 lgamma(z), with the -2 Im(z) * (pi/2) piece of
    // -2 Im(z) arg(z) split off:  arg z = pi/2 + atan(sigma/t)  (Re z < 0).
    const double atan_corr = std::atan(sig / t);
    cplx zinv = 1.0 / z;
    double corr = 2.0 * std::real(zinv / 12.0 - zinv * zinv * zinv / 360.0);
    double two_re_lg_wo_pi = 2.0 * ((z.real() - 0.5) * lnr) - t * atan_corr - 2.0 * z.real() +
                             std::log(TWO_PI) + corr;  // omits the -pi t/2 term
    if (krn.kind == MellinKernel::Kind::K0)
        return (-sig - 2.0) * LOG2 + two_re_lg_wo_pi - 0.5 * PI * t;
    // Y0: Re log cos(pi s/2) = +pi t/2 - ln 2 + O(e^{-pi t}); the pi t/2
    // cancels the omitted Gamma^2 exponent exactly.
    return (-sig - 1.0) * LOG2 - std::log(PI) + two_re_lg_wo_pi - LOG2;
}

double kernel_abs_integral(const MellinKernel& kernel, double T) {
    if (T <= 0) throw std::domain_error("kernel_abs_integral: T must be positive");
    const double sig = kernel.contour_sigma;
    const double t_big = 1e4;
    auto direct = [&](double t) { return std::abs(kernel.gamma_fn(cplx(-sig, t))); };
    double total = gl_composite(direct, 0.0, std::min(T, 1.0), 4, 20);
    if (T > 1.0) {
        // log substitution t = e^v keeps node counts O(log T)
        double vhi = std::log(std::min(T, t_big));
        auto f = [&](double v) {
            double t = std::exp(v);
            return direct(t) * t;
        };
        total += gl_composite(f, 0.0, vhi, std::max(4, (int)std::ceil(vhi / 0.5)), 16);
    }
    if (T > t_big) {
        double vhi = std::log(T);
        double vlo = std::log(t_big);
        auto f = [&](double v) {
            double t = std::exp(v);
            return std::exp(log_abs_kernel_large(kernel, t)) * t;
        };
        total += gl_composite(f, vlo, vhi, std::max(4, (int)std::ceil((vhi - vlo) / 0.5)), 12);
    }
    return 2.0 * total;  // symmetric in t -> -t
}

StabilizationReport kernel_abs_integral_stabilized(const MellinKernel& kernel) {
    StabilizationReport rep;
    double T = 100.0;
    double prev = kernel_abs_integral(kernel, T);
    rep.heights.push_back(T);
    rep.values.push_back(prev);
    for (int j = 0; j < 60; ++j) {
        T *= 2.0;
        double cur = kernel_abs_integral(kernel, T);
        rep.heights.push_back(T);
        rep.values.push_back(cur);
        rep.last_increment = cur - prev;
        prev = cur;
        if (std::fabs(rep.last_increment) < 1e-8) {
            rep.stabilized = true;
            break;
        }
    }
    rep.final_value = prev;
    return rep;
}

// ---------- table hook ----------

std::vector<BesselTableRow> bessel_table(const std::string& kind, const std::vector<double>& xs) {
    std::vector<BesselTableRow> rows;
    rows.reserve(xs.size());
    int order = 0;
    bool is_j = kind.rfind("j:", 0) == 0;
    if (is_j) order = std::stoi(kind.substr(2));
    else if (kind != "y0" && kind != "k0")
        throw std::domain_error("bessel_table: kind must be y0, k0, or j:<order>");

    for (double x : xs) {
        BesselTableRow row;
        row.x = x;
        if (is_j) {
            row.value = bessel_j(order, x);
            bool series = x < 2.0 * std::sqrt(order + 1.0);
            row.representation = series ? "series" : "recurrence";
            double alt;
            try {
                alt = series ? bessel_j_recurrence(order, x) : bessel_j_series_quad(order, x);
            } catch (const std::domain_error&) {
                try {
                    alt = bessel_j_asymptotic(order, x);
                } catch (const std::domain_error&) {
                    alt = row.value;  // no second representation available here
                }
            }
            row.est_error = std::fabs(row.value - alt);
        } else if (kind == "y0") {
            row.value = y0_bessel(x);
            row.representation = (x <= 12.0) ? "series" : "asymptotic";
            MellinKernel krn;
            krn.kind = MellinKernel::Kind::Y0;
            if (x <= 4.0)
                row.est_error = std::fabs(row.value - y0_via_mellin(x, krn));
            else if (x >= 8.0 && x <= 16.0)
                row.est_error = std::fabs(y0_series(x) - y0_asymptotic(x));
            else
                row.est_error = 1e-13 * std::max(1.0, std::fabs(row.value));
        } else {
            row.value = k0_bessel(x);
            row.representation = (x <= 12.0) ? "series" : "asymptotic";
            MellinKernel krn;
            krn.kind = MellinKernel::Kind::K0;
            if (x <= 4.0)
                row.est_error = std::fabs(row.value - k0_via_mellin(x, krn));
            else if (x >= 8.0 && x <= 16.0)
                row.est_error = std::fabs(k0_series(x) - k0_asymptotic(x));
            else
                row.est_error = 1e-13 * std::max(1.0, std::fabs(row.value));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace traceform
