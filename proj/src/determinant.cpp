#include "nlsff/determinant.hpp"

#include <cmath>

#include "nlsff/errors.hpp"

namespace nlsff {

namespace {

cplx t_fn(cplx lam, cplx mu, double c) {
    const cplx ic(0.0, c);
    return -ic / ((lam - mu) * (lam - mu - ic));
}

void check_separation(const std::vector<cplx>& mu, const std::vector<cplx>& lam, double eps,
                      const char* what) {
    for (const cplx& m : mu)
        for (const cplx& l : lam)
            if (std::abs(m - l) < eps)
                throw SeparationTooSmall(std::string(what) + ": parameter sets too close");
}

std::vector<cplx> as_cplx(const std::vector<double>& v) {
    return std::vector<cplx>(v.begin(), v.end());
}

} // namespace

cplx slavnov_overlap_log(const BetheState& mu_state, const std::vector<cplx>& lam,
                         const ModelGeometry& geometry, const DeterminantOptions& opts) {
    if (!mu_state.geometry.same_as(geometry))
        throw RegimeMismatch("slavnov_overlap: state geometry differs from the given one");
    const std::size_t n = mu_state.n();
    if (lam.size() != n) throw ConfigError("slavnov_overlap: set sizes differ");
    if (n == 0) return cplx(0.0, 0.0); // log 1

    const double c = geometry.c();
    const cplx ic(0.0, c);
    const std::vector<cplx> mu = as_cplx(mu_state.roots);
    check_separation(mu, lam, opts.eps_sep, "slavnov_overlap");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (std::abs(lam[a] - lam[b]) < opts.eps_sep)
                throw SeparationTooSmall("slavnov_overlap: lambda set nearly degenerate");

    // Column data: a(lambda_k), d(lambda_k), prod_a (mu_a - lambda_k -+ ic).
    Matrix<cplx> omega(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [ak, dk] = geometry.lattice_ad(lam[k]);
        cplx prod_m(1.0, 0.0), prod_p(1.0, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            prod_m *= mu[a] - lam[k] - ic;
            prod_p *= mu[a] - lam[k] + ic;
        }
        for (std::size_t j = 0; j < n; ++j)
            omega(j, k) = ak * t_fn(mu[j], lam[k], c) * prod_m -
                          dk * t_fn(lam[k], mu[j], c) * prod_p;
    }

    cplx log_acc = log_det(omega);
    for (std::size_t a = 0; a < n; ++a) {
        log_acc += geometry.log_ad(mu[a], geometry.regime()).second;
        for (std::size_t b = 0; b < a; ++b)
            log_acc -= std::log(mu[a] - mu[b]) + std::log(lam[b] - lam[a]);
    }
    return log_acc;
}

cplx slavnov_overlap(const BetheState& mu_state, const std::vector<cplx>& lam,
                     const ModelGeometry& geometry, const DeterminantOptions& opts) {
    if (mu_state.n() == 0) return cplx(1.0, 0.0);
    return std::exp(slavnov_overlap_log(mu_state, lam, geometry, opts));
}

double gaudin_norm_log(const BetheState& state) {
    const std::size_t n = state.n();
    if (n == 0) return 0.0;
    const ModelGeometry& g = state.geometry;
    const double L = g.L();
    const std::vector<double>& mu = state.roots;

    CountingFunction xi(state);
    std::vector<double> xi_p(n);
    for (std::size_t a = 0; a < n; ++a) xi_p[a] = xi.deriv(mu[a]);

    Matrix<double> Xi(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            Xi(j, k) = (j == k ? 1.0 : 0.0) -
                       g.kernel_K(mu[j] - mu[k]) / (2.0 * M_PI * L * xi_p[k]);

    cplx log_acc(0.0, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto [la, ld] = g.log_ad(cplx(mu[a], 0.0), g.regime());
        log_acc += std::log(cplx(0.0, 2.0 * M_PI * L * xi_p[a])) + la + ld;
    }
    const cplx ic(0.0, g.c());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            log_acc += std::log(cplx(mu[a] - mu[b], 0.0) - ic);
            if (a != b) log_acc -= std::log(cplx(mu[a] - mu[b], 0.0));
        }
    int sign = 1;
    log_acc += log_abs_det(Xi, sign);
    if (sign < 0) log_acc += cplx(0.0, M_PI);

    // A positive real result accumulates a phase that is 0 mod 2pi.
    const double phase_residual = std::remainder(log_acc.imag(), 2.0 * M_PI);
    if (std::abs(phase_residual) > 1e-8) {
        if (std::abs(std::abs(phase_residual) - M_PI) < 1e-6)
            throw NonPositiveResult("gaudin_norm: negative value, solver or formula fault");
        throw NonPositiveResult("gaudin_norm: stray phase, solver or formula fault");
    }
    return log_acc.real();
}

double gaudin_norm(const BetheState& state) {
    if (state.n() == 0) return 1.0;
    return std::exp(gaudin_norm_log(state));
}

FormFactorValue ff_det_continuum(const BetheState& mu_state, const BetheState& lam_state,
                                 bool keep_parts, const DeterminantOptions& opts) {
    const ModelGeometry& g = mu_state.geometry;
    if (g.is_lattice()) throw RegimeMismatch("ff_det_continuum: continuum states required");
    if (!g.same_as(lam_state.geometry))
        throw GeometryMismatch("ff_det_continuum: geometry mismatch");
    const std::size_t n = lam_state.n();
    if (mu_state.n() != n + 1) throw ConfigError("ff_det_continuum: need N+1 and N roots");

    const double c = g.c();
    const double L = g.L();
    const cplx ic(0.0, c);
    const std::vector<double>& mu = mu_state.roots;
    const std::vector<double>& lam = lam_state.roots;
    for (double m : mu)
        for (double l : lam)
            if (std::abs(m - l) < opts.eps_sep)
                throw RootCollision("ff_det_continuum: mu and lambda roots collide");

    const ShiftFunctionFinite F(mu_state, lam_state);

    cplx log_pref = std::log(cplx(0.0, std::sqrt(c)));
    for (double m : mu) log_pref += cplx(0.0, 0.5 * L * m);
    std::vector<cplx> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        phase[k] = F.phase(lam[k]);
        log_pref += cplx(0.0, -0.5 * L * lam[k]) + std::log(1.0 - phase[k]);
        for (double m : mu)
            log_pref += std::log((m - lam[k] - ic) / cplx(m - lam[k], 0.0));
    }

    Matrix<cplx> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx w = cplx(0.0, -1.0);
        for (double m : mu) w *= cplx(lam[j] - m, 0.0) / (cplx(lam[j] - m, 0.0) + ic);
        for (std::size_t a = 0; a < n; ++a) {
            w *= cplx(lam[j] - lam[a], 0.0) + ic;
            if (a != j) w /= cplx(lam[j] - lam[a], 0.0);
        }
        w /= phase[j] - 1.0;
        for (std::size_t k = 0; k < n; ++k) u(j, k) = w * g.kernel_K(lam[j] - lam[k]);
    }

    Matrix<cplx> id_u(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) id_u(j, k) = (j == k ? 1.0 : 0.0) + u(j, k);
    const cplx log_d = log_det(id_u);

    FormFactorValue out;
    out.log_value = log_pref + log_d;
    out.value = std::exp(out.log_value);
    if (keep_parts) out.parts = FormFactorValue::Parts{log_pref, log_d, std::move(u)};
    return out;
}

namespace {

// Modified kernel K(omega, omega' | nu) of the lattice representation.
cplx kernel_K_nu(const ModelGeometry& g, double w, double wp) {
    const double c = g.c();
    const cplx ic(0.0, c);
    const cplx nu = g.nu();
    const cplx ratio = 1.0 - (nu - wp + ic) / (nu - wp - ic);
    return (nu - w - ic) / (nu - w) *
           (g.kernel_K(w - wp) -
            cplx(0.0, 1.0) * ratio * (1.0 / (cplx(w - wp, 0.0) + ic) - 1.0 / (w - nu + ic)));
}

} // namespace

FormFactorValue ff_det_lattice(const BetheState& mu_state, const BetheState& lam_state,
                               const ModelGeometry& geometry, bool keep_parts,
                               const DeterminantOptions& opts) {
    if (!geometry.is_lattice()) throw RegimeMismatch("ff_det_lattice: lattice geometry required");
    if (!mu_state.geometry.same_as(geometry) || !lam_state.geometry.same_as(geometry))
        throw GeometryMismatch("ff_det_lattice: states solved at a different geometry");
    const std::size_t n = lam_state.n();
    if (mu_state.n() != n + 1) throw ConfigError("ff_det_lattice: need N+1 and N roots");

    const double c = geometry.c();
    const double delta = geometry.lattice_data().delta;
    const cplx ic(0.0, c);
    const cplx nu = geometry.nu();
    const std::vector<double>& mu = mu_state.roots;
    const std::vector<double>& lam = lam_state.roots;
    for (double m : mu)
        for (double l : lam)
            if (std::abs(m - l) < opts.eps_sep)
                throw RootCollision("ff_det_lattice: mu and lambda roots collide");

    const ShiftFunctionFinite F(mu_state, lam_state);

    cplx log_pref = std::log(cplx(-2.0 * std::sqrt(c) / delta, 0.0));
    for (double m : mu) {
        log_pref += std::log((nu - m) / (nu - m - ic));
        log_pref -= std::log(m - nu);
        log_pref += geometry.log_ad(cplx(m, 0.0), Regime::Lattice).second;
        for (double l : lam) log_pref -= std::log(cplx(m - l, 0.0));
    }
    std::vector<cplx> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        phase[k] = F.phase(lam[k]);
        log_pref += std::log(lam[k] - nu + ic);
        log_pref += geometry.log_ad(cplx(lam[k], 0.0), Regime::Lattice).first;
        log_pref += std::log(1.0 - phase[k]);
        for (double m : mu) log_pref += std::log(cplx(m - lam[k], 0.0) - ic);
    }

    Matrix<cplx> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx w = cplx(0.0, -1.0);
        for (double m : mu) w *= cplx(lam[j] - m, 0.0) / (cplx(lam[j] - m, 0.0) + ic);
        for (std::size_t a = 0; a < n; ++a) {
            w *= cplx(lam[j] - lam[a], 0.0) + ic;
            if (a != j) w /= cplx(lam[j] - lam[a], 0.0);
        }
        w /= phase[j] - 1.0;
        for (std::size_t k = 0; k < n; ++k) u(j, k) = w * kernel_K_nu(geometry, lam[j], lam[k]);
    }

    Matrix<cplx> id_u(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) id_u(j, k) = (j == k ? 1.0 : 0.0) + u(j, k);
    const cplx log_d = log_det(id_u);

    FormFactorValue out;
    out.log_value = log_pref + log_d;
    out.value = std::exp(out.log_value);
    if (keep_parts) out.parts = FormFactorValue::Parts{log_pref, log_d, std::move(u)};
    return out;
}

namespace {

double log_det_xi(const BetheState& state) {
    const std::size_t n = state.n();
    const ModelGeometry& g = state.geometry;
    const double L = g.L();
    CountingFunction xi(state);
    Matrix<double> Xi(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            Xi(j, k) = (j == k ? 1.0 : 0.0) -
                       g.kernel_K(state.roots[j] - state.roots[k]) /
                           (2.0 * M_PI * L * xi.deriv(state.roots[k]));
    int sign = 1;
    const double l = log_abs_det(Xi, sign);
    if (sign < 0) throw NonPositiveResult("det Xi negative; solver fault");
    return l;
}

} // namespace

NormalizedFFSquared normalized_ff_parts(const BetheState& mu_state, const BetheState& lam_state,
                                        const DeterminantOptions& opts) {
    const ModelGeometry& g = mu_state.geometry;
    if (g.is_lattice()) throw RegimeMismatch("normalized_ff_parts: continuum only");
    const std::size_t n = lam_state.n();
    for (std::size_t a = 0; a < n; ++a)
        if (lam_state.qn.ells()[a] != static_cast<long>(a) + 1)
            throw ConfigError("normalized_ff_parts: lambda must be the ground state");

    const double c = g.c();
    const double L = g.L();
    const std::vector<double>& mu = mu_state.roots;
    const std::vector<double>& lam = lam_state.roots;
    const double mu_last = mu.back();

    const FormFactorValue ff = ff_det_continuum(mu_state, lam_state, true, opts);
    const double log_norm_mu = gaudin_norm_log(mu_state);
    const double log_norm_lam = gaudin_norm_log(lam_state);
    const double log_direct = 2.0 * ff.log_value.real() - log_norm_mu - log_norm_lam;

    // --- smooth part ---------------------------------------------------
    cplx log_w(0.0, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const cplx ic(0.0, c);
            log_w += std::log(cplx(mu[a] - lam[b], 0.0) - ic);
            log_w += std::log(cplx(lam[a] - mu[b], 0.0) - ic);
            log_w -= std::log(cplx(mu[a] - mu[b], 0.0) - ic);
            log_w -= std::log(cplx(lam[a] - lam[b], 0.0) - ic);
        }
    double log_smooth = log_w.real(); // W_N is real positive
    if (std::abs(std::remainder(log_w.imag(), 2.0 * M_PI)) > 1e-8)
        throw NonPositiveResult("normalized_ff_parts: W_N picked up a phase");
    for (std::size_t a = 0; a < n; ++a) {
        log_smooth += std::log(std::norm(cplx(lam[a] - mu_last, -c)));
        log_smooth -= std::log(std::norm(cplx(mu[a] - mu_last, -c)));
    }
    log_smooth += 2.0 * ff.parts->log_det.real();
    log_smooth -= log_det_xi(mu_state);
    log_smooth -= log_det_xi(lam_state);

    // --- discrete part ---------------------------------------------------
    const ShiftFunctionFinite F(mu_state, lam_state);
    CountingFunction xi_mu(mu_state), xi_lam(lam_state);
    double log_disc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sin(M_PI * F(lam[k]));
        log_disc += std::log(4.0 * s * s);
    }
    for (double m : mu) log_disc -= std::log(2.0 * M_PI * L * xi_mu.deriv(m));
    for (double l : lam) log_disc -= std::log(2.0 * M_PI * L * xi_lam.deriv(l));
    for (std::size_t a = 0; a < n; ++a) {
        log_disc += 2.0 * std::log(std::abs(mu[a] - mu_last));
        log_disc -= 2.0 * std::log(std::abs(lam[a] - mu_last));
    }
    // Cauchy determinant over the first N mu-roots, squared; closed form.
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            log_disc += 2.0 * (std::log(std::abs(mu[b] - mu[a])) +
                               std::log(std::abs(lam[b] - lam[a])));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            log_disc -= 2.0 * std::log(std::abs(mu[a] - lam[b]));

    return NormalizedFFSquared{std::exp(log_direct), std::exp(log_smooth), std::exp(log_disc)};
}

} // namespace nlsff
