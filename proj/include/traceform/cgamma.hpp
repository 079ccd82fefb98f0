#pragma once
// Complex gamma function.  Lanczos approximation (g = 7, 9 terms) with the
// reflection formula for Re z < 1/2; relative accuracy ~1e-13 across the
// strips used by the Mellin-Barnes kernels.  Poles raise std::domain_error.

#include "traceform/numeric.hpp"

namespace traceform {

// log Gamma(z); imaginary part is NOT guaranteed to be the principal branch
// far from the real axis (callers exponentiate or take real parts).
cplx clgamma(cplx z);

cplx cgamma(cplx z);

// log(sin(pi z)) computed by factoring out the dominant exponential, so it
// stays finite for |Im z| far beyond overflow of sin itself.
cplx log_sin_pi(cplx z);

}  // namespace traceform
