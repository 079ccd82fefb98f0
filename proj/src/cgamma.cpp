#include "traceform/cgamma.hpp"

#include <stdexcept>

namespace traceform {

// Lanczos g = 7, 9-term coefficient set.
static const double LCZ[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};
static const double LOG_SQRT_2PI = 0.91893853320467274178032973640562;

cplx log_sin_pi(cplx z) {
    const double y = z.imag();
    if (std::fabs(y) <= 1.0) return std::log(std::sin(PI * z));
    const cplx i(0.0, 1.0);
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); keep the large factor
    // in log form.  |e^{-i pi z}| = e^{pi y} dominates for y > 0.
    if (y > 0) return -i * PI * z + std::log(i / 2.0) + std::log(1.0 - std::exp(2.0 * i * PI * z));
    return i * PI * z - std::log(2.0 * i) + std::log(1.0 - std::exp(-2.0 * i * PI * z));
}

cplx clgamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("clgamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z).
        return std::log(PI) - log_sin_pi(z) - clgamma(1.0 - z);
    }
    cplx zm1 = z - 1.0;
    cplx a = LCZ[0];
    for (int k = 1; k < 9; ++k) a += LCZ[k] / (zm1 + double(k));
    cplx t = zm1 + 7.5;  // g + 1/2
    return LOG_SQRT_2PI + (zm1 + 0.5) * std::log(t) - t + std::log(a);
}

cplx cgamma(cplx z) { return std::exp(clgamma(z)); }

}  // namespace traceform
