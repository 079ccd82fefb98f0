#include "traceform/quadrature.hpp"

#include <map>
#include <stdexcept>

namespace traceform {

// Evaluate P_n(t) and P_n'(t) by the three-term recurrence.
static void legendre_pair(int n, double t, double& p, double& dp) {
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (t * p1 - p0) / (t * t - 1.0);
}

const GlRule& gl_rule(int order) {
    if (order < 2) throw std::invalid_argument("gl_rule: order must be >= 2");
    static std::map<int, GlRule> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GlRule r;
    r.x.resize(order);
    r.w.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton to machine precision.
        double t = std::cos(PI * (i + 0.75) / (order + 0.5));
        double p, dp;
        for (int it2 = 0; it2 < 64; ++it2) {
            legendre_pair(order, t, p, dp);
            double step = p / dp;
            t -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        legendre_pair(order, t, p, dp);
        double w = 2.0 / ((1.0 - t * t) * dp * dp);
        // cos() gave positive-x roots for small i; mirror onto both ends.
        r.x[order - 1 - i] = t;
        r.x[i] = -t;
        r.w[order - 1 - i] = w;
        r.w[i] = w;
    }
    if (order % 2 == 1) {
        r.x[order / 2] = 0.0;
        double p, dp;
        legendre_pair(order, 0.0, p, dp);
        r.w[order / 2] = 2.0 / (dp * dp);
    }
    auto [pos, ok] = cache.emplace(order, std::move(r));
    (void)ok;
    return pos->second;
}

}  // namespace traceform
