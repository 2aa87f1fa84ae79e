#pragma once

#include <optional>
#include <vector>

#include "nlsff/bethe.hpp"
#include "nlsff/linalg.hpp"

namespace nlsff {

struct DeterminantOptions {
    double eps_sep = 1e-8; // minimal root/parameter separation
};

/// A form-factor evaluation. The value is carried in log form (log|.| + i arg
/// accumulated factor by factor) so that very large prefactor products stay
/// representable; `value` is exp(log_value) and may overflow for large N.
struct FormFactorValue {
    cplx value;
    cplx log_value;
    struct Parts {
        cplx log_prefactor;
        cplx log_det;
        Matrix<cplx> kernel; // the U matrix
    };
    std::optional<Parts> parts;
};

/// Slavnov determinant for <psi(mu)|psi(lambda)> with mu on-shell and lambda
/// a generic set. Continuum geometries use a = e^{-i lambda L/2}, d = conj.
cplx slavnov_overlap(const BetheState& mu_state, const std::vector<cplx>& lam,
                     const ModelGeometry& geometry, const DeterminantOptions& opts = {});
cplx slavnov_overlap_log(const BetheState& mu_state, const std::vector<cplx>& lam,
                         const ModelGeometry& geometry, const DeterminantOptions& opts = {});

/// Gaudin-type determinant for the squared norm of an on-shell state.
double gaudin_norm(const BetheState& state);
/// log of the squared norm; safe for large N.
double gaudin_norm_log(const BetheState& state);

/// Determinant representation of the continuum conjugated-field form factor
/// between an (N+1)-root state mu and an N-root state lambda.
FormFactorValue ff_det_continuum(const BetheState& mu_state, const BetheState& lam_state,
                                 bool keep_parts = false, const DeterminantOptions& opts = {});

/// Lattice determinant representation at spacing Delta (nu = -2i/Delta+ic/2).
FormFactorValue ff_det_lattice(const BetheState& mu_state, const BetheState& lam_state,
                               const ModelGeometry& geometry, bool keep_parts = false,
                               const DeterminantOptions& opts = {});

/// The finite-size factorization of the normalized squared form factor into
/// smooth and discrete parts; lambda must be the N-root ground state.
struct NormalizedFFSquared {
    double direct;
    double smooth_part;
    double discrete_part;
};

NormalizedFFSquared normalized_ff_parts(const BetheState& mu_state, const BetheState& lam_state,
                                        const DeterminantOptions& opts = {});

} // namespace nlsff
