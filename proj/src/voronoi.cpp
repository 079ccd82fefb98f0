#include "traceform/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "traceform/bessel.hpp"
#include "traceform/quadrature.hpp"
#include "traceform/spectral.hpp"

namespace traceform {

double SmoothTestFunction::operator()(double x) const {
    if (x <= x0 || x >= x1) return 0.0;
    if (family == Family::log_odd) {
        double a = std::log(x0), b = std::log(x1), u = std::log(x);
        double d = b - a;
        double w = std::exp(-d / (u - a) - d / (b - u));  // even about mu in u
        return w * (u - mu) / ((u + s) * x);
    }
    double L = x1 - x0;
    double cutoff = std::exp(-L / (x - x0) - L / (x1 - x));
    if (family == Family::bump) return cutoff;
    double u = (x - mu) / s;
    return std::exp(-u * u) * cutoff;
}

std::string SmoothTestFunction::description() const {
    const char* name = family == Family::bump        ? "bump"
                       : family == Family::gauss_bump ? "gauss_bump"
                                                       : "log_odd";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s[%g,%g]", name, x0, x1);
    return buf;
}

SmoothTestFunction make_bump(double x0, double x1) {
    if (!(x0 < x1)) throw std::domain_error("make_bump: needs x0 < x1");
    SmoothTestFunction g;
    g.family = SmoothTestFunction::Family::bump;
    g.x0 = x0;
    g.x1 = x1;
    return g;
}

SmoothTestFunction make_gauss_bump(double x0, double x1) {
    if (!(x0 < x1)) throw std::domain_error("make_gauss_bump: needs x0 < x1");
    SmoothTestFunction g;
    g.family = SmoothTestFunction::Family::gauss_bump;
    g.x0 = x0;
    g.x1 = x1;
    g.mu = 0.5 * (x0 + x1);
    g.s = (x1 - x0) / 6.0;
    return g;
}

SmoothTestFunction make_log_odd(double x0, double x1, i64 c) {
    if (!(x0 < x1) || c < 1) throw std::domain_error("make_log_odd: needs x0 < x1, c >= 1");
    SmoothTestFunction g;
    g.family = SmoothTestFunction::Family::log_odd;
    g.x0 = x0;
    g.x1 = x1;
    g.mu = 0.5 * (std::log(x0) + std::log(x1));
    g.s = 2.0 * EULER_GAMMA - 2.0 * std::log(double(c));
    if (std::log(x0) + g.s <= 0.0)
        throw std::domain_error("make_log_odd: support must sit right of c^2 e^{-2 gamma}");
    return g;
}

cplx voronoi_lhs(const SmoothTestFunction& g, i64 a, i64 c) {
    if (c < 1) throw std::domain_error("voronoi_lhs: c must be >= 1");
    i64 am = ((a % c) + c) % c;
    if (std::gcd(am, c) != 1) throw std::domain_error("voronoi_lhs: needs gcd(a,c)=1");
    i64 n0 = i64(std::ceil(g.x0)), n1 = i64(std::floor(g.x1));
    std::vector<cplx> terms;
    for (i64 n = n0; n <= n1; ++n) {
        double gv = g(double(n));
        if (gv == 0.0) continue;
        terms.push_back(double(sigma(n)) * unit_e(double(am * (n % c) % c) / double(c)) * gv);
    }
    return terms.empty() ? cplx(0.0) : pairwise_sum(terms);
}

namespace {

// Chebyshev interpolant on [a,b]; used to cache the smooth-weight factor so
// the oscillatory quadratures below do not re-run its contour integral.
struct Cheb {
    double a = 0, b = 1;
    std::vector<double> c;
    double operator()(double x) const {
        double u = (2.0 * x - a - b) / (b - a);
        double b0 = 0, b1 = 0;
        for (std::size_t i = c.size(); i-- > 1;) {
            double t = 2.0 * u * b0 - b1 + c[i];
            b1 = b0;
            b0 = t;
        }
        return u * b0 - b1 + c[0];
    }
};

template <class F>
Cheb cheb_fit(const F& f, double a, double b, int n) {
    std::vector<double> fv(n);
    for (int j = 0; j < n; ++j) {
        double xj = std::cos(PI * (j + 0.5) / n);
        fv[std::size_t(j)] = f(0.5 * (a + b) + 0.5 * (b - a) * xj);
    }
    Cheb ch;
    ch.a = a;
    ch.b = b;
    ch.c.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += fv[std::size_t(j)] * std::cos(PI * i * (j + 0.5) / n);
        ch.c[std::size_t(i)] = (i == 0 ? 1.0 : 2.0) * s / n;
    }
    return ch;
}

struct RhsResult {
    cplx value{}, main{}, y_part{}, k_part{};
    i64 ell_cap = 0;
    double y_tail = 0, k_tail = 0;
    bool plateau = false;
};

// Shared rhs evaluator over a general real test function on (x0, x1):
// modulus c, twist d, with extra_cycles accounting for oscillation already
// present in g.  All integrals run in u = sqrt(x), where the Bessel phase
// (4 pi / c) sqrt(l x) = (4 pi sqrt(l)/c) u is linear, so uniform panels at
// one cycle each keep the Gauss error flat across the support.
template <class G>
RhsResult rhs_core(const G& g, double x0, double x1, i64 c, i64 d, double extra_cycles, int refine,
                   i64 ell_cap_req) {
    if (!(x0 > 0 && x0 < x1)) throw std::domain_error("rhs_core: bad support");
    if (c < 1 || refine < 1) throw std::domain_error("rhs_core: bad parameters");
    const double sq0 = std::sqrt(x0), sq1 = std::sqrt(x1);
    const double dc = double(c);

    RhsResult out;
    out.main = gl_adaptive(
        [&](double u) {
            return 2.0 * u * g(u * u) *
                   (2.0 * std::log(u) + 2.0 * EULER_GAMMA - 2.0 * std::log(dc));
        },
        sq0, sq1, 1e-12) / dc;

    auto osc_int = [&](i64 ell, auto&& kernel) {
        double cycles = 2.0 * std::sqrt(double(ell)) * (sq1 - sq0) / dc + extra_cycles;
        int panels = refine * std::max(6, int(std::ceil(cycles)) + 2);
        return gl_composite([&](double u) { return 2.0 * u * g(u * u) * kernel(u); }, sq0, sq1,
                            panels, 16);
    };

    // |g| mass for the certified K-series remainder
    int gpan = std::max(6, int(std::ceil(extra_cycles)) + 2);
    double gmass =
        gl_composite([&](double u) { return 2.0 * u * std::fabs(g(u * u)); }, sq0, sq1, gpan, 16);

    // K-series: K0(z) <= sqrt(pi/(2z)) e^{-z} and sigma(l) <= 2 sqrt(l) give a
    // provable per-term bound; sum terms until the bound is negligible, then
    // accumulate the remaining bounds as the certified tail.
    auto k_bound = [&](i64 ell) {
        double z = 4.0 * PI * std::sqrt(double(ell) * x0) / dc;
        return (4.0 / dc) * 2.0 * std::sqrt(double(ell)) * std::sqrt(PI / (2.0 * z)) *
               std::exp(-z) * gmass;
    };
    std::vector<cplx> kterms;
    i64 ell = 1;
    for (; ell <= 200000; ++ell) {
        double b = k_bound(ell);
        if (b < 1e-17) break;
        double omega = 4.0 * PI * std::sqrt(double(ell)) / dc;
        double I = osc_int(ell, [&](double u) { return k0_bessel(omega * u); });
        kterms.push_back((4.0 / dc) * double(sigma(ell)) *
                         unit_e(double(d % c * (ell % c) % c) / dc) * I);
    }
    double ktail = 0;
    for (i64 l2 = ell; l2 <= ell + 400000; ++l2) {
        double b = k_bound(l2);
        ktail += b;
        if (b < 1e-300) break;
    }
    out.k_tail = ktail;

    // Y-series in dyadic blocks; no pointwise decay, so the stopping rule is
    // empirical: quit once a whole block contributes below threshold.
    const double scale = 1.0 + std::abs(out.main);
    const i64 auto_cap = 32768;
    const i64 cap = ell_cap_req > 0 ? ell_cap_req : auto_cap;
    std::vector<cplx> yterms;
    double block_mag = 0, last_block = 0;
    i64 block_end = 8;
    i64 l = 1;
    for (; l <= cap; ++l) {
        double omega = 4.0 * PI * std::sqrt(double(l)) / dc;
        double I = osc_int(l, [&](double u) { return y0_bessel(omega * u); });
        double mag = (TWO_PI / dc) * double(sigma(l));
        yterms.push_back(-mag * unit_e(double((c - d % c) % c * (l % c) % c) / dc) * I);
        block_mag += mag * std::fabs(I);
        if (l == block_end) {
            last_block = block_mag;
            if (block_mag < 3e-10 * scale && l >= 32) {
                out.plateau = true;
                if (ell_cap_req == 0) {
                    ++l;
                    break;
                }
            }
            block_mag = 0;
            block_end *= 2;
        }
    }
    out.ell_cap = l - 1;
    out.y_tail = 10.0 * last_block;
    out.y_part = yterms.empty() ? cplx(0) : pairwise_sum(yterms);
    out.k_part = kterms.empty() ? cplx(0) : pairwise_sum(kterms);
    out.value = out.main + out.y_part + out.k_part;
    return out;
}

}  // namespace

VoronoiEval voronoi_rhs(const SmoothTestFunction& g, i64 a, i64 c, int refine, i64 ell_cap) {
    if (c < 1) throw std::domain_error("voronoi_rhs: c must be >= 1");
    i64 am = ((a % c) + c) % c;
    if (std::gcd(am, c) != 1) throw std::domain_error("voronoi_rhs: needs gcd(a,c)=1");
    i64 d = (c == 1) ? 0 : mod_inverse(am, c);
    auto res = rhs_core([&](double x) { return g(x); }, g.x0, g.x1, c, d, 0.0, refine, ell_cap);
    VoronoiEval ev;
    ev.value = res.value;
    ev.main = res.main;
    ev.ell_cap = res.ell_cap;
    ev.y_tail = res.y_tail;
    ev.k_tail = res.k_tail;
    ev.plateau = res.plateau;
    return ev;
}

std::vector<VoronoiCase> voronoi_corpus() {
    std::vector<VoronoiCase> cs;
    auto add = [&](i64 a, i64 c, SmoothTestFunction g) { cs.push_back({a, c, std::move(g)}); };
    add(1, 1, make_bump(9, 11));
    add(1, 2, make_bump(5, 20));
    add(1, 3, make_bump(5, 20));
    add(2, 3, make_gauss_bump(10, 40));
    add(3, 4, make_bump(8, 30));
    add(2, 5, make_bump(10, 50));
    add(5, 6, make_gauss_bump(12, 60));
    add(3, 7, make_bump(15, 80));
    add(5, 8, make_bump(20, 90));
    add(4, 9, make_gauss_bump(20, 120));
    add(7, 11, make_bump(25, 150));
    add(5, 12, make_bump(30, 200));
    return cs;
}

std::vector<VoronoiCase> corpus_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("corpus_from_json: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    if (!doc.is_array()) throw std::domain_error("corpus_from_json: top level must be an array");

    std::vector<VoronoiCase> cs;
    for (const auto& rec : doc) {
        const auto& jg = rec.at("g");
        std::string family = jg.at("family").get<std::string>();
        double x0 = jg.at("x0").get<double>();
        double x1 = jg.at("x1").get<double>();
        SmoothTestFunction g;
        if (family == "bump") {
            g = make_bump(x0, x1);
        } else if (family == "gauss_bump") {
            g = make_gauss_bump(x0, x1);
            if (jg.contains("mu")) g.mu = jg.at("mu").get<double>();
            if (jg.contains("s")) g.s = jg.at("s").get<double>();
        } else if (family == "log_odd") {
            g = make_log_odd(x0, x1, rec.at("c").get<i64>());
        } else {
            throw std::domain_error("corpus_from_json: unknown family " + family);
        }
        VoronoiCase c{rec.at("a").get<i64>(), rec.at("c").get<i64>(), std::move(g),
                      rec.value("expected_gap", 1e-6)};
        cs.push_back(std::move(c));
    }
    return cs;
}

NsumCheck nsum_decomposition_check(const NsumCase& cs, const PrimeLevel& lv,
                                   const AfeWeightConfig& wcfg, int refine) {
    if (cs.n1 < 1 || cs.r < 1 || cs.t < 1 || cs.h < 1 || cs.bc < 1 || !(cs.Y > 0))
        throw std::domain_error("nsum_decomposition_check: bad case");
    if (std::gcd(cs.r, cs.t) != 1)
        throw std::domain_error("nsum_decomposition_check: needs gcd(r,t)=1");

    NsumCheck out;
    i64 g0 = std::gcd(cs.bc * cs.n1, cs.t);
    out.eta = cs.t / g0;
    out.m = cs.bc * cs.n1 / g0;

    // test function in the inner variable x: sigma-weighted window
    //   g(x) = J_{k-1}(w sqrt(x)) Psi(u) V(u) / sqrt(x),  u = x / x0
    // where u in (1,2) is the dyadic window coordinate. The smooth V factor is
    // evaluated through a Chebyshev cache (it is analytic on the window).
    const double x0 = cs.Y / double(cs.bc * cs.n1);
    const double x1 = 2.0 * x0;
    const double w =
        4.0 * PI / double(cs.t) * std::sqrt(double(cs.h * cs.bc * cs.n1) / double(lv.q));
    AfeWeightConfig cfg = wcfg;
    cfg.k = lv.k;
    Cheb vfac = cheb_fit([&](double u) { return v_weight(u, cfg); }, 1.0, 2.0, 32);
    auto g = [&](double x) {
        double u = x / x0;
        double psi = window_psi(u);
        if (psi == 0.0) return 0.0;
        return bessel_j(lv.k - 1, w * std::sqrt(x)) * psi * vfac(u) / std::sqrt(x);
    };

    // direct route: finite sum over window integers with the raw phase
    std::vector<cplx> terms;
    for (i64 n2 = i64(std::floor(x0)) + 1; n2 < i64(std::ceil(x1)); ++n2) {
        double gv = g(double(n2));
        if (gv == 0.0) continue;
        i64 num = cs.r % cs.t * (cs.bc * cs.n1 % cs.t) % cs.t * (n2 % cs.t) % cs.t;
        terms.push_back(double(sigma(n2)) * gv * unit_e(double(num) / double(cs.t)));
    }
    out.direct = terms.empty() ? cplx(0.0) : pairwise_sum(terms);

    // transform route: phase collapses to modulus eta with twist (m r)^{-1}
    i64 dinv = 0;
    if (out.eta > 1) {
        i64 b = out.m % out.eta * (cs.r % out.eta) % out.eta;
        dinv = mod_inverse(b, out.eta);
        i64 mb = mod_inverse(out.m % out.eta, out.eta);
        i64 rb = mod_inverse(cs.r % out.eta, out.eta);
        out.inverse_match = dinv == mb * rb % out.eta;
    } else {
        out.inverse_match = true;
    }
    double extra = w * (std::sqrt(x1) - std::sqrt(x0)) / TWO_PI + 2.0;
    auto res = rhs_core(g, x0, x1, out.eta, dinv, extra, refine, 0);
    out.r1 = res.main;
    out.r2 = res.y_part;
    out.r3 = res.k_part;
    out.decomposed = res.value;
    out.ell_cap = res.ell_cap;
    out.y_tail = res.y_tail;
    out.k_tail = res.k_tail;
    out.rel_gap = std::abs(out.direct - out.decomposed) / (1e-12 + std::abs(out.direct));
    return out;
}

std::vector<NsumCase> nsum_corpus() {
    // level q = 5, k = 11 throughout; covers t = 1 and a fully collapsed
    // modulus (eta = 1), plus mixed gcd(bc*n1, t) patterns
    return {
        {1, 1, 3, 1, 1, 40.0},  //
        {1, 1, 1, 1, 1, 40.0},  // t = 1 degenerate
        {1, 2, 3, 1, 1, 40.0},  //
        {1, 1, 3, 2, 1, 60.0},  //
        {1, 1, 4, 1, 1, 40.0},  //
        {1, 3, 4, 1, 2, 80.0},  // eta = 2
        {2, 1, 6, 1, 1, 100.0}, // eta = 3
        {3, 1, 2, 3, 1, 90.0},  //
        {1, 1, 3, 1, 3, 120.0}, // eta = 1 (phase fully absorbed)
        {1, 4, 7, 2, 1, 50.0},  //
    };
}

}  // namespace traceform
