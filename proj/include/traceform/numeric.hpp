#pragma once
// Small numeric helpers shared across the library.  Everything here is
// deterministic: no clocks, no locale, no platform-dependent math paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace traceform {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;
// Euler-Mascheroni constant, 30 digits.
inline constexpr double EULER_GAMMA = 0.577215664901532860606512090082;
inline constexpr double LOG2 = 0.693147180559945309417232121458;

// e(x) = exp(2*pi*i*x).  Reduce the argument to [0,1) first so huge rationals
// like a*m/c with a,m ~ 1e6 keep full phase accuracy.
inline cplx unit_e(double x) {
    double f = x - std::floor(x);
    return {std::cos(TWO_PI * f), std::sin(TWO_PI * f)};
}

// Pairwise (cascade) summation.  Order-stable and far less lossy than a naive
// left fold when terms alternate in sign; used wherever a sum feeds a
// tolerance check so results do not depend on accumulation luck.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    std::size_t n = hi - lo;
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[lo];
        for (std::size_t i = lo + 1; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + n / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v, 0, v.size());
}

// Least-squares slope of y against x.  Used for growth-trend readouts.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope: need >= 2 paired points");
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("ols_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

inline bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
inline bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace traceform
