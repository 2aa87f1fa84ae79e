#include "nlsff/bethe.hpp"

#include <algorithm>
#include <cmath>

#include "nlsff/errors.hpp"

namespace nlsff {

ModelGeometry ModelGeometry::continuum(double c, double L) {
    if (!(c > 0.0)) throw ConfigError("ModelGeometry: c must be positive");
    if (!(L > 0.0)) throw ConfigError("ModelGeometry: L must be positive");
    ModelGeometry g;
    g.c_ = c;
    g.L_ = L;
    g.regime_ = Regime::Continuum;
    return g;
}

ModelGeometry ModelGeometry::lattice(double c, double L, double delta) {
    if (!(c > 0.0)) throw ConfigError("ModelGeometry: c must be positive");
    if (!(L > 0.0)) throw ConfigError("ModelGeometry: L must be positive");
    if (!(delta > 0.0)) throw ConfigError("ModelGeometry: delta must be positive");
    const double m_exact = L / delta;
    long M = 2 * static_cast<long>(std::llround(m_exact / 2.0));
    if (M < 2) M = 2;
    if (std::abs(static_cast<double>(M) * delta - L) > 1e-9 * L)
        throw ConfigError("ModelGeometry: delta*M does not match L (even M required)");
    ModelGeometry g;
    g.c_ = c;
    g.L_ = L;
    g.regime_ = Regime::Lattice;
    g.lat_ = LatticeData{delta, M};
    return g;
}

const LatticeData& ModelGeometry::lattice_data() const {
    if (!lat_) throw RegimeMismatch("lattice data requested from a continuum geometry");
    return *lat_;
}

cplx ModelGeometry::nu() const {
    const double d = lattice_data().delta;
    return {0.0, -2.0 / d + 0.5 * c_};
}

bool ModelGeometry::same_as(const ModelGeometry& o) const {
    if (c_ != o.c_ || L_ != o.L_ || regime_ != o.regime_) return false;
    if (lat_ && (lat_->delta != o.lat_->delta || lat_->M != o.lat_->M)) return false;
    return true;
}

double ModelGeometry::theta(double lambda) const { return 2.0 * std::atan(lambda / c_); }

cplx ModelGeometry::theta(cplx lambda) const {
    // i [Log(ic+z) - Log(ic-z)]; analytic on |Im z| < c, agrees with the real
    // formula on the axis.
    const cplx ic(0.0, c_);
    return cplx(0.0, 1.0) * (std::log(ic + lambda) - std::log(ic - lambda));
}

double ModelGeometry::kernel_K(double lambda) const {
    return 2.0 * c_ / (lambda * lambda + c_ * c_);
}

cplx ModelGeometry::kernel_K(cplx lambda) const {
    return 2.0 * c_ / (lambda * lambda + c_ * c_);
}

double ModelGeometry::kernel_K_prime(double lambda) const {
    const double s = lambda * lambda + c_ * c_;
    return -4.0 * c_ * lambda / (s * s);
}

cplx ModelGeometry::kernel_K_prime(cplx lambda) const {
    const cplx s = lambda * lambda + c_ * c_;
    return -4.0 * c_ * lambda / (s * s);
}

double ModelGeometry::kernel_K_second(double lambda) const {
    const double s = lambda * lambda + c_ * c_;
    return -4.0 * c_ * (c_ * c_ - 3.0 * lambda * lambda) / (s * s * s);
}

std::pair<cplx, cplx> ModelGeometry::log_ad(cplx lambda, Regime force) const {
    if (force == Regime::Continuum) {
        const cplx e(0.0, -0.5 * L_);
        return {e * lambda, -e * lambda};
    }
    const LatticeData& ld = lattice_data();
    const cplx ix(0.0, 1.0);
    const cplx t = 0.5 * ld.delta * lambda;
    const double u = 0.25 * c_ * ld.delta;
    const double half_m = 0.5 * static_cast<double>(ld.M);
    const cplx la = half_m * (std::log(1.0 + u - ix * t) + std::log(1.0 - u - ix * t));
    const cplx ldv = half_m * (std::log(1.0 + u + ix * t) + std::log(1.0 - u + ix * t));
    return {la, ldv};
}

std::pair<cplx, cplx> ModelGeometry::lattice_ad(cplx lambda, Regime force) const {
    auto [la, ld] = log_ad(lambda, force);
    return {std::exp(la), std::exp(ld)};
}

std::pair<cplx, cplx> ModelGeometry::lattice_ad(cplx lambda) const {
    return lattice_ad(lambda, regime_);
}

double ModelGeometry::bae_drive(double lambda) const {
    if (regime_ == Regime::Continuum) return L_ * lambda;
    const LatticeData& ld = lattice_data();
    const double x = 0.5 * ld.delta * lambda;
    const double u = 0.25 * c_ * ld.delta;
    return static_cast<double>(ld.M) * (std::atan2(x, 1.0 + u) + std::atan2(x, 1.0 - u));
}

double ModelGeometry::bae_drive_deriv(double lambda) const {
    if (regime_ == Regime::Continuum) return L_;
    const LatticeData& ld = lattice_data();
    const double x = 0.5 * ld.delta * lambda;
    const double u = 0.25 * c_ * ld.delta;
    const double ap = 1.0 + u, am = 1.0 - u;
    return static_cast<double>(ld.M) * 0.5 * ld.delta *
           (ap / (ap * ap + x * x) + am / (am * am + x * x));
}

QuantumNumbers::QuantumNumbers(std::vector<long> ells) : ells_(std::move(ells)) {
    for (std::size_t i = 1; i < ells_.size(); ++i)
        if (ells_[i] <= ells_[i - 1])
            throw DegenerateQuantumNumbers("quantum numbers must be strictly increasing");
}

QuantumNumbers QuantumNumbers::parity_flipped() const {
    const long n = static_cast<long>(ells_.size());
    std::vector<long> out(ells_.size());
    for (long a = 0; a < n; ++a) out[a] = n + 1 - ells_[n - 1 - a];
    return QuantumNumbers(out);
}

namespace {

std::vector<double> bae_defect_vec(const ModelGeometry& g, const std::vector<long>& ells,
                                   const std::vector<double>& mu) {
    const std::size_t n = mu.size();
    std::vector<double> d(n);
    for (std::size_t r = 0; r < n; ++r) {
        double s = g.bae_drive(mu[r]);
        for (std::size_t p = 0; p < n; ++p) s += g.theta(mu[r] - mu[p]);
        d[r] = s - 2.0 * M_PI * (static_cast<double>(ells[r]) - 0.5 * (static_cast<double>(n) + 1.0));
    }
    return d;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

double bae_defect(const ModelGeometry& g, const std::vector<long>& ells,
                  const std::vector<double>& roots) {
    return max_abs(bae_defect_vec(g, ells, roots));
}

BetheState solve_bae(const QuantumNumbers& qn, const ModelGeometry& geometry,
                     const SolveOptions& opts) {
    const std::size_t n = qn.size();
    const std::vector<long>& ells = qn.ells();

    // Free-fermion roots as the initial guess.
    std::vector<double> mu(n);
    for (std::size_t a = 0; a < n; ++a)
        mu[a] = 2.0 * M_PI *
                (static_cast<double>(ells[a]) - 0.5 * (static_cast<double>(n) + 1.0)) /
                geometry.L();

    if (geometry.is_lattice()) {
        const double delta = geometry.lattice_data().delta;
        for (double m : mu)
            if (std::abs(m * delta * 0.5) > 0.5)
                throw DeltaTooLarge("solve_bae: |lambda*Delta/2| > 0.5 at the initial guess");
    }

    if (n == 0) return BetheState{geometry, qn, {}, 0.0};

    std::vector<double> defect = bae_defect_vec(geometry, ells, mu);
    double norm = max_abs(defect);
    int iter = 0;
    while (norm > opts.tol) {
        if (++iter > opts.max_iter) throw NonConvergence("solve_bae: max iterations exceeded");
        Matrix<double> jac(n);
        for (std::size_t r = 0; r < n; ++r) {
            double diag = geometry.bae_drive_deriv(mu[r]);
            for (std::size_t p = 0; p < n; ++p) {
                if (p == r) continue;
                const double k = geometry.kernel_K(mu[r] - mu[p]);
                diag += k;
                jac(r, p) = -k;
            }
            jac(r, r) = diag;
        }
        LuFactors<double> lu(std::move(jac));
        const std::vector<double> step = lu.solve(defect);

        // Damp by halving until the defect norm decreases.
        double scale = 1.0;
        std::vector<double> trial(n);
        for (int h = 0; h < 60; ++h) {
            for (std::size_t a = 0; a < n; ++a) trial[a] = mu[a] - scale * step[a];
            const std::vector<double> td = bae_defect_vec(geometry, ells, trial);
            const double tn = max_abs(td);
            if (tn < norm) {
                mu = trial;
                defect = td;
                norm = tn;
                break;
            }
            scale *= 0.5;
            if (h == 59) throw NonConvergence("solve_bae: damping failed to reduce the defect");
        }
    }

    for (std::size_t a = 1; a < n; ++a)
        if (!(mu[a] > mu[a - 1]))
            throw NonConvergence("solve_bae: roots not strictly increasing (repulsion violated)");

    return BetheState{geometry, qn, mu, norm};
}

CountingFunction::CountingFunction(const BetheState& state)
    : geom_(state.geometry),
      roots_(state.roots),
      const_term_((static_cast<double>(state.n()) + 1.0) / (2.0 * state.geometry.L())) {}

double CountingFunction::operator()(double omega) const {
    const double twoPiL = 2.0 * M_PI * geom_.L();
    double s = geom_.bae_drive(omega);
    for (double r : roots_) s += geom_.theta(omega - r);
    return s / twoPiL + const_term_;
}

double CountingFunction::deriv(double omega) const {
    const double twoPiL = 2.0 * M_PI * geom_.L();
    double s = geom_.bae_drive_deriv(omega);
    for (double r : roots_) s += geom_.kernel_K(omega - r);
    return s / twoPiL;
}

ShiftFunctionFinite::ShiftFunctionFinite(const BetheState& mu_state, const BetheState& lam_state)
    : geom_(mu_state.geometry), mu_(mu_state.roots), lam_(lam_state.roots) {
    if (!mu_state.geometry.same_as(lam_state.geometry))
        throw GeometryMismatch("shift function: states live in different geometries");
    if (mu_state.n() != lam_state.n() + 1)
        throw ConfigError("shift function: mu-state must have one more root than lambda-state");
}

double ShiftFunctionFinite::operator()(double omega) const {
    // The driving terms cancel between the two counting functions.
    double s = 0.0;
    for (double l : lam_) s += geom_.theta(omega - l);
    for (double m : mu_) s -= geom_.theta(omega - m);
    return s / (2.0 * M_PI) - 0.5;
}

cplx ShiftFunctionFinite::operator()(cplx omega) const {
    cplx s(0.0, 0.0);
    for (double l : lam_) s += geom_.theta(omega - l);
    for (double m : mu_) s -= geom_.theta(omega - m);
    return s / (2.0 * M_PI) - 0.5;
}

cplx ShiftFunctionFinite::phase(double omega) const {
    return std::exp(cplx(0.0, -2.0 * M_PI) * (*this)(omega));
}

cplx ShiftFunctionFinite::phase_product(cplx omega) const {
    const cplx ic(0.0, geom_.c());
    cplx p(1.0, 0.0);
    for (double m : mu_) p *= (m - omega + ic) / (m - omega - ic);
    for (double l : lam_) p *= (l - omega - ic) / (l - omega + ic);
    return p;
}

} // namespace nlsff
