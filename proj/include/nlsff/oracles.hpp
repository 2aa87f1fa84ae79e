#pragma once

#include <vector>

#include "nlsff/bethe.hpp"

namespace nlsff {

/// Positions in [0,L] plus pairwise-distinct rapidities for the coordinate
/// Bethe-ansatz wavefunction.
struct WaveFunctionInput {
    std::vector<double> positions;
    std::vector<cplx> rapidities;
    double L = 0.0;
    double c = 0.0;
};

struct OracleLimits {
    std::size_t max_overlap_order = 3; // continuum overlap N
    std::size_t max_ff_order = 2;      // continuum form factor N
    long max_sites = 30;               // lattice tuple sums
    std::size_t max_lattice_order = 3;
};

/// N!-term coordinate Bethe-ansatz wavefunction, sgn(0) = 0 convention.
cplx bethe_wavefunction(const WaveFunctionInput& in);

/// Integral oracle for the scalar product:
/// int_{[0,L]^N} d^N x / N!  conj(phi(x|mu)) phi(x|lambda),
/// evaluated exactly on the ordered simplex by iterated antiderivatives.
cplx continuum_overlap_oracle(const std::vector<cplx>& mu, const std::vector<cplx>& lam,
                              double c, double L, const OracleLimits& lim = {});

/// Integral oracle for the conjugated-field form factor:
/// int d^N x / N!  conj(phi(0, x | mu_{N+1})) phi(x | lambda_N).
cplx continuum_ff_oracle(const std::vector<cplx>& mu, const std::vector<cplx>& lam,
                         double c, double L, const OracleLimits& lim = {});

/// Weakly increasing site tuple 1 <= n_1 <= ... <= n_N <= M.
struct LatticeTuple {
    std::vector<long> n;
};

/// Combinatorial Fock amplitude f_{lambda}(n_1,...,n_N) of the lattice
/// eigenstate decomposition.
cplx lattice_f(const LatticeTuple& t, const std::vector<cplx>& rapidities,
               const ModelGeometry& geometry);

/// Fock-space sum for the lattice scalar product <psi(mu)|psi(lambda)>.
cplx lattice_overlap_oracle(const std::vector<cplx>& mu, const BetheState& lam_state,
                            const ModelGeometry& geometry, const OracleLimits& lim = {});

/// Fock-space sum for the leading part of the lattice conjugated-field form
/// factor, rescaled by 2i/(Delta sqrt(c)); agrees with the determinant
/// representation up to the O(Delta^{3/2}) operator remainder.
cplx lattice_ff_oracle(const BetheState& mu_state, const BetheState& lam_state,
                       const ModelGeometry& geometry, const OracleLimits& lim = {});

} // namespace nlsff
