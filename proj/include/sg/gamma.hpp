#pragma once

#include "sg/core.hpp"

namespace sg {

// Principal log Gamma for Re z > 0 (Lanczos, g = 7, nine coefficients). The imaginary part is
// continuous in z on the right half-plane. Throws DomainError for Re z <= 0.
cplx log_gamma(cplx z);

// arg Gamma(i nu) on the branch continuous in nu > 0 with limit -pi/2 as nu -> 0+.
double log_gamma_arg(double nu);

}  // namespace sg
