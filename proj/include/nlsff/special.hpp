#pragma once

#include <complex>

namespace nlsff {

using cplx = std::complex<double>;

/// Principal log Gamma (Lanczos, g=7), valid off the poles.
cplx log_gamma(cplx z);

/// log of the Barnes G function: asymptotic series for large |z|, shifted
/// there by log G(z+1) = log Gamma(z) + log G(z). Throws BarnesRange for
/// Re z <= -10 (outside the implemented range).
cplx log_barnes_g(cplx z);

cplx barnes_g(cplx z);
double barnes_g(double z);

} // namespace nlsff
