#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace nlsff {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule on [-1,1]; Newton on the Legendre recurrence.
inline QuadRule gauss_legendre(std::size_t m) {
    QuadRule r;
    r.x.resize(m);
    r.w.resize(m);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th root (descending order).
        double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(m) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[m - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[i] = w;
        r.w[m - 1 - i] = w;
    }
    return r;
}

inline QuadRule gauss_legendre(std::size_t m, double a, double b) {
    QuadRule r = gauss_legendre(m);
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        r.x[i] = mid + rad * r.x[i];
        r.w[i] *= rad;
    }
    return r;
}

} // namespace nlsff
