#pragma once
// Gauss-Legendre quadrature.  Nodes/weights are computed once per order by
// Newton iteration on P_n (no tabulated magic numbers) and cached.  Panel,
// composite and adaptive drivers are templated so the same machinery
// integrates real- and complex-valued functions of a real parameter.

#include <complex>
#include <vector>

#include "traceform/numeric.hpp"

namespace traceform {

struct GlRule {
    std::vector<double> x;  // nodes on (-1,1), ascending
    std::vector<double> w;
};

// Cached rule of the given order (order >= 2).
const GlRule& gl_rule(int order);

namespace detail {
inline double nrm(double v) { return std::fabs(v); }
inline double nrm(const cplx& v) { return std::abs(v); }
}  // namespace detail

template <typename F>
auto gl_panel(F&& f, double a, double b, int order = 20) -> decltype(f(a)) {
    const GlRule& r = gl_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) acc{};
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return half * acc;
}

// Fixed partition into `panels` equal panels; deterministic left-to-right
// pairwise accumulation.
template <typename F>
auto gl_composite(F&& f, double a, double b, int panels, int order = 20) -> decltype(f(a)) {
    std::vector<decltype(f(a))> parts;
    parts.reserve(panels);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        parts.push_back(gl_panel(f, a + p * h, a + (p + 1) * h, order));
    return pairwise_sum(parts);
}

namespace detail {
template <typename F, typename T>
T gl_adapt_rec(F& f, double a, double b, T whole, double tol, int order, int depth) {
    const double m = 0.5 * (a + b);
    T left = gl_panel(f, a, m, order);
    T right = gl_panel(f, m, b, order);
    T refined = left + right;
    if (depth <= 0 || nrm(refined - whole) <= tol) return refined;
    return gl_adapt_rec(f, a, m, left, 0.5 * tol, order, depth - 1) +
           gl_adapt_rec(f, m, b, right, 0.5 * tol, order, depth - 1);
}
}  // namespace detail

// Adaptive bisection; `tol` is an absolute target for the whole interval.
template <typename F>
auto gl_adaptive(F&& f, double a, double b, double tol, int order = 20, int max_depth = 26)
    -> decltype(f(a)) {
    auto whole = gl_panel(f, a, b, order);
    return detail::gl_adapt_rec(f, a, b, whole, tol, order, max_depth);
}

}  // namespace traceform
