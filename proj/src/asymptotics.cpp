#include "nlsff/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "nlsff/errors.hpp"

namespace nlsff {

// ---------------------------------------------------------------------------
// Cauchy transform

double CauchyTransform::segment_distance(cplx lambda, double q) {
    if (std::abs(lambda.real()) <= q) return std::abs(lambda.imag());
    const double dx = std::abs(lambda.real()) - q;
    return std::hypot(dx, lambda.imag());
}

CauchyTransform::CauchyTransform(const ThermoModel& model, std::function<cplx(cplx)> F)
    : model_(&model), f_(std::move(F)) {
    fgrid_.resize(model.m());
    for (std::size_t k = 0; k < model.m(); ++k)
        fgrid_[k] = f_(cplx(model.nodes()[k], 0.0));
    near_ = std::min(0.5 * model.q(), 0.45 * model.c());
}

cplx CauchyTransform::operator()(cplx lambda) const {
    const ThermoModel& tm = *model_;
    const double q = tm.q();
    const double dist = segment_distance(lambda, q);
    if (dist < 1e-10) throw OnSegment("cauchy_transform: evaluation point on [-q,q]");
    const cplx norm = 1.0 / cplx(0.0, 2.0 * M_PI);
    if (dist >= near_) {
        cplx s(0.0, 0.0);
        for (std::size_t k = 0; k < tm.m(); ++k)
            s += fgrid_[k] * tm.weights()[k] / (tm.nodes()[k] - lambda);
        return norm * s;
    }
    // Singularity-subtracted form; needs F at the (near-segment) point, which
    // by construction lies well inside the analyticity strip.
    const cplx flam = f_(lambda);
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s += (fgrid_[k] - flam) * tm.weights()[k] / (tm.nodes()[k] - lambda);
    s += flam * (std::log(q - lambda) - std::log(-q - lambda));
    return norm * s;
}

// ---------------------------------------------------------------------------
// C0 functional and the interval Fredholm determinant

double c0_functional(const std::function<double(double)>& F, const ThermoModel& model) {
    const std::size_t m = model.m();
    std::vector<double> fv(m);
    for (std::size_t k = 0; k < m; ++k) fv[k] = F(model.nodes()[k]);
    const cplx ic(0.0, model.c());
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        cplx row(0.0, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            const cplx d = cplx(model.nodes()[j] - model.nodes()[k], 0.0) - ic;
            row += fv[k] * model.weights()[k] / (d * d);
        }
        acc += fv[j] * model.weights()[j] * row;
    }
    const cplx val = -acc;
    if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
        throw ContractError("c0_functional: imaginary residue too large");
    return val.real();
}

double fredholm_det_interval(const ThermoModel& model) {
    const std::size_t m = model.m();
    Matrix<double> a(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            a(j, k) = (j == k ? 1.0 : 0.0) -
                      model.weights()[k] *
                          (2.0 * model.c() /
                           (std::pow(model.nodes()[j] - model.nodes()[k], 2) +
                            model.c() * model.c())) /
                          (2.0 * M_PI);
    return det(a);
}

// ---------------------------------------------------------------------------
// The U / Ubar kernels

KernelU::KernelU(const ThermoModel& model, const ExcitationThermo& exc,
                 std::function<cplx(cplx)> nu, bool bar, cplx gamma)
    : model_(&model),
      particles_(exc.particles),
      holes_(exc.holes),
      nu_(std::move(nu)),
      gamma_(gamma),
      sign_(bar ? 1.0 : -1.0) {
    c2pinu_ = std::make_shared<CauchyTransform>(
        model, [f = nu_](cplx z) { return cplx(0.0, 2.0 * M_PI) * f(z); });
}

cplx KernelU::omega_part(cplx w) const {
    const double c = model_->c();
    const double q = model_->q();
    const cplx ic_eff(0.0, sign_ < 0 ? c : -c); // +ic for U, -ic for Ubar

    cplx pref = -sign_ / (2.0 * M_PI) * (w - q) / (w - q + ic_eff);
    for (std::size_t a = 0; a < particles_.size(); ++a)
        pref *= (w - particles_[a]) * (w - holes_[a] + ic_eff) /
                ((w - holes_[a]) * (w - particles_[a] + ic_eff));

    const cplx cexp = std::exp(gamma_ * ((*c2pinu_)(w) - (*c2pinu_)(w + ic_eff)));

    // gamma / (e^x - 1), x = -+ 2 i pi gamma nu(w); series through the
    // removable point at gamma nu -> 0.
    const cplx nuw = nu_(w);
    const cplx x = sign_ * cplx(0.0, 2.0 * M_PI) * gamma_ * nuw;
    cplx s;
    if (std::abs(x) < 1e-4) {
        if (std::abs(nuw) < 1e-12)
            throw DenominatorZero("kernel U: shift function vanishes on the contour");
        const cplx corr = 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
        s = 1.0 / (sign_ * cplx(0.0, 2.0 * M_PI) * nuw) / corr;
    } else {
        const cplx den = std::exp(x) - 1.0;
        if (std::abs(den) < 1e-10)
            throw DenominatorZero("kernel U: e^{-+2 i pi F} - 1 vanishes on the contour");
        s = gamma_ / den;
    }
    return pref * cexp * s;
}

cplx KernelU::operator()(cplx w, cplx wp) const {
    if (!memo_set_ || w != memo_w_) {
        memo_val_ = omega_part(w);
        memo_w_ = w;
        memo_set_ = true;
    }
    const double c = model_->c();
    return memo_val_ * (2.0 * c / ((w - wp) * (w - wp) + c * c));
}

// ---------------------------------------------------------------------------
// Contours and their validation

ClosedContour make_contour(const ThermoModel& model, double height_scale, double reach_scale,
                           std::size_t nodes) {
    const double h = std::min(0.4 * model.c() * height_scale, 0.45 * model.c());
    const double eps = 0.1 * model.q() * reach_scale;
    return ClosedContour(h, model.q() + eps, nodes);
}

ContourReport contour_check(const std::function<cplx(cplx)>& F, const ExcitationThermo& exc,
                            const ClosedContour& contour) {
    ContourReport rep;
    rep.nodes = contour.node_count();
    auto g = [&](cplx z) { return std::exp(cplx(0.0, -2.0 * M_PI) * F(z)) - 1.0; };

    rep.min_denominator = 1e300;
    for (const cplx& z : contour.nodes())
        rep.min_denominator = std::min(rep.min_denominator, std::abs(g(z)));

    try {
        rep.zeros_inside = winding_number(g, contour.polyline(48));
    } catch (const ContractError& e) {
        rep.failure = std::string("winding failed: ") + e.what();
        rep.ok = false;
        return rep;
    }

    for (double h : exc.holes) {
        const cplx wnd = contour.winding(cplx(h, 0.0));
        if (!contour.encloses(cplx(h, 0.0)) || std::abs(wnd - 1.0) > 1e-6)
            rep.holes_inside = false;
    }
    for (double p : exc.particles) {
        const cplx wnd = contour.winding(cplx(p, 0.0));
        if (contour.encloses(cplx(p, 0.0)) || std::abs(wnd) > 1e-6)
            rep.particles_outside = false;
    }

    rep.ok = rep.min_denominator > 1e-6 && rep.zeros_inside == 0 && rep.holes_inside &&
             rep.particles_outside;
    if (!rep.ok && rep.failure.empty()) {
        if (rep.min_denominator <= 1e-6)
            rep.failure = "denominator e^{-2 i pi F}-1 too small on the contour";
        else if (rep.zeros_inside != 0)
            rep.failure = "zeros of e^{-2 i pi F}-1 inside the contour";
        else if (!rep.holes_inside)
            rep.failure = "a hole rapidity is not enclosed";
        else
            rep.failure = "a particle rapidity is enclosed";
    }
    return rep;
}

ClosedContour admissible_contour(const ThermoModel& model, const ExcitationThermo& exc,
                                 const std::function<cplx(cplx)>& F, ContourReport* report,
                                 std::size_t nodes) {
    static const double hs[] = {1.0, 0.75, 0.55, 0.4, 0.3, 0.2, 0.12, 0.07};
    static const double rs[] = {1.0, 1.0, 0.8, 0.8, 0.6, 0.6, 0.5, 0.4};

    double pmin = 1e300;
    for (double p : exc.particles) pmin = std::min(pmin, std::abs(p));

    ContourReport last;
    for (std::size_t j = 0; j < sizeof(hs) / sizeof(hs[0]); ++j) {
        double h = std::min(0.4 * model.c() * hs[j], 0.45 * model.c());
        const double eps = 0.1 * model.q() * rs[j];
        if (!exc.particles.empty()) {
            const double room = pmin - model.q() - eps;
            if (room <= 0.0) continue;
            h = std::min(h, 0.8 * room);
        }
        if (h <= 0.0) continue;
        ClosedContour cand(h, model.q() + eps, nodes);
        last = contour_check(F, exc, cand);
        if (last.ok) {
            if (report) *report = last;
            return cand;
        }
    }
    if (report) *report = last;
    throw ContourInvalid("admissible_contour: " +
                         (last.failure.empty() ? std::string("no candidate contour passed")
                                               : last.failure));
}

// ---------------------------------------------------------------------------
// Smooth part

double smooth_part(const ThermoModel& model, const ExcitationThermo& exc,
                   const std::function<cplx(cplx)>& F, const SmoothOptions& opts,
                   ContourReport* report) {
    exc.validate(model);
    const double q = model.q();
    const cplx ic(0.0, model.c());
    const ClosedContour contour = admissible_contour(model, exc, F, report, opts.contour_nodes);

    const CauchyTransform CF(model, F);
    const cplx twoPiI(0.0, 2.0 * M_PI);

    cplx log_acc(0.0, 0.0);
    for (std::size_t a = 0; a < exc.n(); ++a) {
        const double mp = exc.particles[a], mh = exc.holes[a];
        for (int e = -1; e <= 1; e += 2) {
            const cplx eic = static_cast<double>(e) * ic;
            log_acc += std::log((mh - q + eic) / (mp - q + eic));
            log_acc += twoPiI * (CF(mh + eic) - CF(mp + eic));
        }
    }
    log_acc -= twoPiI * (CF(cplx(q, model.c())) + CF(cplx(q, -model.c())));
    log_acc -= 2.0 * std::log(fredholm_det_interval(model));
    log_acc += c0_functional([&](double x) { return F(cplx(x, 0.0)).real(); }, model);
    for (std::size_t a = 0; a < exc.n(); ++a)
        for (std::size_t b = 0; b < exc.n(); ++b) {
            const double za = exc.particles[a], zb = exc.particles[b];
            const double wa = exc.holes[a], wb = exc.holes[b];
            log_acc += std::log(cplx(za - wb, 0.0) - ic) + std::log(cplx(wa - zb, 0.0) - ic);
            log_acc -= std::log(cplx(za - zb, 0.0) - ic) + std::log(cplx(wa - wb, 0.0) - ic);
        }

    const cplx det_u =
        fredholm_det_contour(KernelU(model, exc, F, false), contour, opts.det_tol);
    const cplx det_ubar =
        fredholm_det_contour(KernelU(model, exc, F, true), contour, opts.det_tol);

    const cplx value = std::exp(log_acc) * det_u * det_ubar;
    if (std::abs(value.imag()) > 1e-8 * std::abs(value))
        throw ContractError("smooth_part: imaginary residue too large");
    return value.real();
}

// ---------------------------------------------------------------------------
// Special auxiliaries of the discrete part

double kappa(const std::function<double(double)>& nu, double lambda, const ThermoModel& model) {
    const double nl = nu(lambda);
    double s = 0.0;
    for (std::size_t k = 0; k < model.m(); ++k)
        s += (nl - nu(model.nodes()[k])) * model.weights()[k] / (lambda - model.nodes()[k]);
    return std::exp(-s);
}

double varphi_p(const ThermoModel& model, double lam, double mu) {
    if (std::abs(lam - mu) < 1e-8) return 2.0 * M_PI / model.p_prime(0.5 * (lam + mu));
    return 2.0 * M_PI * (lam - mu) / (model.p(lam) - model.p(mu));
}

double aleph(const std::function<double(double)>& nu, double omega, const ThermoModel& model) {
    const double no = nu(omega);
    double s = 2.0 * no * std::log(varphi_p(model, omega, model.q()) /
                                   varphi_p(model, omega, -model.q()));
    for (std::size_t k = 0; k < model.m(); ++k)
        s += 2.0 * (nu(model.nodes()[k]) - no) * model.weights()[k] /
             (model.nodes()[k] - omega);
    return s;
}

double lambda_next(const ThermoModel& model, const ShiftThermo& F, long N, double L) {
    auto g = [&](double x) { return L * model.xi(x) + F(x) - static_cast<double>(N + 1); };
    double lo = model.q();
    double hi = model.q();
    double span = 0.5 * model.q();
    for (int it = 0; it < 200 && g(lo) > 0.0; ++it) lo -= (span *= 1.5);
    span = 0.5 * model.q();
    for (int it = 0; it < 200 && g(hi) < 0.0; ++it) hi += (span *= 1.5);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = g(x);
        if (std::abs(f) < 1e-11 * std::max(1.0, static_cast<double>(std::abs(N)))) return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        const double deriv = L * model.xi_prime(x) + F.deriv(x);
        double next = x - f / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw NonConvergence("lambda_next: iteration stalled");
}

double discrete_part(const ThermoModel& model, const ExcitationThermo& exc, long N, double L,
                     const ShiftThermo& F) {
    exc.validate(model);
    if (exc.n() > 0 && (!exc.particle_ints || !exc.hole_ints))
        throw ConfigError("discrete_part: excitation lacks integer data");
    const double q = model.q();
    auto nu_real = [&](double x) { return F(x); };

    const double nu_m = F(-q), nu_p = F(q);
    const double kap_m = kappa(nu_real, -q, model);
    const double kap_p = kappa(nu_real, q, model);
    const double xi_plus = model.xi_prime(q);
    const double lamN1 = lambda_next(model, F, N, L);

    double log_d0 = std::log(q / M_PI);
    log_d0 += nu_m * std::log(kap_m) - (nu_p + 2.0) * std::log(kap_p);
    for (std::size_t a = 0; a < exc.n(); ++a)
        log_d0 += 2.0 * (std::log(std::abs(lamN1 - exc.particles[a])) -
                         std::log(std::abs(lamN1 - exc.holes[a])));
    log_d0 += 2.0 * (log_barnes_g(cplx(1.0 - nu_m, 0.0)).real() +
                     log_barnes_g(cplx(2.0 + nu_p, 0.0)).real());
    log_d0 -= (nu_p - nu_m) * std::log(2.0 * M_PI);
    log_d0 -= ((nu_p + 1.0) * (nu_p + 1.0) + nu_m * nu_m) * std::log(2.0 * q * L * xi_plus);

    // (1/2) int int (nu'(l) nu(m) - nu'(m) nu(l))/(l-m); diagonal by the limit.
    double i2 = 0.0;
    const std::size_t m = model.m();
    std::vector<double> fv(m), fpv(m);
    for (std::size_t k = 0; k < m; ++k) {
        fv[k] = F(model.nodes()[k]);
        fpv[k] = F.deriv(model.nodes()[k]);
    }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            double g;
            if (j == k)
                g = F.second(model.nodes()[j]) * fv[j] - fpv[j] * fpv[j];
            else
                g = (fpv[j] * fv[k] - fpv[k] * fv[j]) / (model.nodes()[j] - model.nodes()[k]);
            i2 += model.weights()[j] * model.weights()[k] * g;
        }
    log_d0 += 0.5 * i2;

    // R_{N,n}
    double log_r = 0.0;
    if (exc.n() > 0) {
        const std::vector<long>& pi = *exc.particle_ints;
        const std::vector<long>& hi = *exc.hole_ints;
        for (std::size_t a = 0; a < exc.n(); ++a) {
            const double mp = exc.particles[a], mh = exc.holes[a];
            log_r += std::log(varphi_p(model, mh, mh)) + std::log(varphi_p(model, mp, mp));
            log_r -= std::log(varphi_p(model, mp, mh)) + std::log(varphi_p(model, mh, mp));
            log_r += aleph(nu_real, mp, model) - aleph(nu_real, mh, model);
            const double s = std::sin(M_PI * F(mh)) / M_PI;
            if (s == 0.0) return 0.0;
            log_r += 2.0 * std::log(std::abs(s));
        }
        for (std::size_t a = 0; a < exc.n(); ++a)
            for (std::size_t b = 0; b < exc.n(); ++b) {
                if (a < b)
                    log_r += 2.0 * (std::log(std::abs(varphi_p(model, exc.particles[a],
                                                               exc.particles[b]))) +
                                    std::log(std::abs(varphi_p(model, exc.holes[a],
                                                               exc.holes[b]))));
                if (a != b)
                    log_r -= 2.0 * std::log(std::abs(varphi_p(model, exc.particles[a],
                                                              exc.holes[b])));
            }
        // Cauchy determinant over the integers, squared, in closed form.
        for (std::size_t a = 0; a < exc.n(); ++a)
            for (std::size_t b = 0; b < exc.n(); ++b) {
                if (a < b)
                    log_r += 2.0 * (std::log(std::abs(static_cast<double>(hi[b] - hi[a]))) +
                                    std::log(std::abs(static_cast<double>(pi[a] - pi[b]))));
                log_r -= 2.0 * std::log(std::abs(static_cast<double>(hi[a] - pi[b])));
            }
        // Gamma ratios; everything is squared so log|Gamma| suffices.
        auto lg = [](double x) {
            if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-9)
                throw RangeViolation("discrete_part: Gamma argument at a nonpositive integer");
            return std::lgamma(x);
        };
        const double Nd = static_cast<double>(N);
        for (std::size_t a = 0; a < exc.n(); ++a) {
            const double nup = F(exc.particles[a]);
            const double nuh = F(exc.holes[a]);
            const double pa = static_cast<double>(pi[a]);
            const double ha = static_cast<double>(hi[a]);
            double acc = 0.0;
            acc += lg(pa - Nd - 1.0 + nup) + lg(pa) + lg(Nd + 2.0 - ha - nuh) + lg(ha + nuh);
            acc -= lg(pa - Nd - 1.0) + lg(pa + nup) + lg(Nd + 2.0 - ha) + lg(ha);
            log_r += 2.0 * acc;
        }
    }
    return std::exp(log_d0 + log_r);
}

AsymptoticFFResult asymptotic_ff(const ThermoModel& model, const ExcitationThermo& exc, long N,
                                 double L, const SmoothOptions& opts) {
    const ShiftThermo F(model, exc);
    AsymptoticFFResult out;
    out.smooth = smooth_part(model, exc, [&F](cplx z) { return F(z); }, opts, &out.contour);
    out.discrete = discrete_part(model, exc, N, L, F);
    out.total = out.smooth * out.discrete;
    return out;
}

// ---------------------------------------------------------------------------
// Regularized Fredholm determinant

cplx regularized_det(const std::function<cplx(cplx)>& nu, const std::function<cplx(cplx)>& h,
                     cplx beta, cplx gamma, const ExcitationThermo& exc,
                     const ThermoModel& model, const RegularizedOptions& opts) {
    const double q = model.q();
    auto nu_beta = [&](cplx z) { return nu(z) + cplx(0.0, 1.0) * beta * h(z); };
    auto g = [&](cplx z) {
        return std::exp(cplx(0.0, -2.0 * M_PI) * gamma * nu_beta(z)) - 1.0;
    };

    const double h0 = std::min(0.4 * model.c() * opts.height_scale, 0.45 * model.c());

    // Zeros of e^{-2 i pi gamma nu_beta} - 1 in the region any candidate
    // contour could cover.
    std::vector<cplx> zeros;
    if (std::abs(gamma) > 0.0) {
        const double xb = q + 0.1 * q + h0 + 0.05 * q;
        const double yb = std::min(1.2 * h0, 0.9 * model.c());
        zeros = find_zeros(g, cplx(-xb, -yb), cplx(xb, yb), 1e-10);
    }
    for (const cplx& z : zeros) {
        if (std::abs(z - q) < 1e-8 || std::abs(z + q) < 1e-8)
            throw DeformationImpossible("regularized_det: zero collides with +-q");
        for (double mh : exc.holes)
            if (std::abs(z - mh) < 1e-8)
                throw DeformationImpossible("regularized_det: zero collides with a hole");
    }

    double pmin = 1e300;
    for (double p : exc.particles) pmin = std::min(pmin, std::abs(p));

    static const double hs[] = {1.0, 0.82, 0.66, 0.5, 0.36, 0.25, 0.16, 0.1};
    static const double rs[] = {1.0, 1.0, 0.85, 0.85, 0.7, 0.7, 0.55, 0.45};
    std::optional<ClosedContour> chosen;
    for (std::size_t j = 0; j < sizeof(hs) / sizeof(hs[0]) && !chosen; ++j) {
        double hh = h0 * hs[j];
        const double eps = 0.1 * q * rs[j];
        if (!exc.particles.empty()) {
            const double room = pmin - q - eps;
            if (room <= 0.0) continue;
            hh = std::min(hh, 0.8 * room);
        }
        if (hh <= 0.0) continue;
        ClosedContour cand(hh, q + eps, opts.contour_nodes);
        bool ok = true;
        for (const cplx& z : zeros)
            if (cand.encloses(z)) ok = false;
        for (double mh : exc.holes)
            if (!cand.encloses(cplx(mh, 0.0))) ok = false;
        if (!cand.encloses(cplx(q, 0.0)) || !cand.encloses(cplx(-q, 0.0))) ok = false;
        for (double p : exc.particles)
            if (cand.encloses(cplx(p, 0.0))) ok = false;
        for (const cplx& z : cand.nodes())
            if (std::abs(g(z)) < 1e-12 * std::max(1.0, std::abs(gamma))) ok = false;
        if (ok) chosen = cand;
    }
    if (!chosen)
        throw DeformationImpossible("regularized_det: no admissible deformed contour found");

    cplx value = std::exp(log_barnes_g(1.0 - gamma * nu_beta(cplx(-q, 0.0))) +
                          log_barnes_g(2.0 + gamma * nu_beta(cplx(q, 0.0))));
    for (double mh : exc.holes)
        value *= std::exp(cplx(0.0, -2.0 * M_PI) * gamma * nu_beta(cplx(mh, 0.0))) - 1.0;
    if (value == cplx(0.0, 0.0)) return value; // the hole product vanished exactly

    const KernelU kernel(model, exc, nu_beta, false, gamma);
    value *= fredholm_det_contour(kernel, *chosen, opts.det_tol);
    return value;
}

} // namespace nlsff
