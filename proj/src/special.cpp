#include "nlsff/special.hpp"

#include <cmath>

#include "nlsff/errors.hpp"

namespace nlsff {

namespace {

const double kLanczosG = 7.0;
const double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

// zeta'(-1) = 1/12 - ln A (Glaisher).
const double kZetaPrimeMinusOne = -0.16542114370045092921;

} // namespace

cplx log_gamma(cplx z) {
    if (z.real() < 0.5) {
        // Reflection; adequate for the moderate arguments used here.
        return std::log(cplx(M_PI, 0.0)) - std::log(std::sin(M_PI * z)) - log_gamma(1.0 - z);
    }
    cplx a(kLanczos[0], 0.0);
    for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    const cplx t = z + (kLanczosG - 0.5);
    return 0.5 * std::log(2.0 * M_PI) + (z - 0.5) * std::log(t) - t + std::log(a);
}

namespace {

// log G(w+1) for large |w|, |arg w| < pi.
cplx log_barnes_series(cplx w) {
    static const double bern[6] = {-1.0 / 30.0,  1.0 / 42.0,      -1.0 / 30.0,
                                   5.0 / 66.0,   -691.0 / 2730.0, 7.0 / 6.0};
    cplx acc = 0.25 * w * w + w * log_gamma(w + 1.0) -
               (0.5 * w * (w + 1.0) + 1.0 / 12.0) * std::log(w) - kZetaPrimeMinusOne;
    const cplx w2 = w * w;
    cplx wp = w2;
    for (int k = 1; k <= 6; ++k) {
        const double denom = 2.0 * k * (2.0 * k + 1.0) * (2.0 * k + 2.0);
        acc += bern[k - 1] / (denom * wp);
        wp *= w2;
    }
    return acc;
}

} // namespace

cplx log_barnes_g(cplx z) {
    if (z.real() <= -10.0)
        throw BarnesRange("barnes_g: argument outside the implemented range Re z > -10");
    // Shift into the asymptotic region, peeling log Gamma factors.
    cplx acc(0.0, 0.0);
    cplx w = z;
    while (w.real() < 20.0) {
        acc -= log_gamma(w);
        w += 1.0;
    }
    return acc + log_barnes_series(w - 1.0);
}

cplx barnes_g(cplx z) { return std::exp(log_barnes_g(z)); }

double barnes_g(double z) {
    const cplx v = barnes_g(cplx(z, 0.0));
    return v.real();
}

} // namespace nlsff
