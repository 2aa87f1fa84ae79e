#include "nlsff/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "nlsff/errors.hpp"
#include "nlsff/quadrature.hpp"

namespace nlsff {

namespace {

double theta_c(double c, double x) { return 2.0 * std::atan(x / c); }
cplx theta_c(double c, cplx x) {
    const cplx ic(0.0, c);
    return cplx(0.0, 1.0) * (std::log(ic + x) - std::log(ic - x));
}
double kern(double c, double x) { return 2.0 * c / (x * x + c * c); }
cplx kern(double c, cplx x) { return 2.0 * c / (x * x + c * c); }
double kern_p(double c, double x) {
    const double s = x * x + c * c;
    return -4.0 * c * x / (s * s);
}

} // namespace

ThermoModel::ThermoModel(double c, double q, std::size_t m) : c_(c), q_(q) {
    if (!(c > 0.0) || !(q > 0.0)) throw ConfigError("ThermoModel: c and q must be positive");
    if (m < 8) throw ConfigError("ThermoModel: need at least 8 quadrature nodes");
    const QuadRule rule = gauss_legendre(m, -q, q);
    x_ = rule.x;
    w_ = rule.w;
    build_derived();
}

void ThermoModel::build_derived() {
    const std::size_t m = x_.size();

    // Resolvent I - K/2pi diag(w); the kernel is a contraction for c > 0.
    Matrix<double> res(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            res(j, k) = (j == k ? 1.0 : 0.0) - kern(c_, x_[j] - x_[k]) * w_[k] / (2.0 * M_PI);
    resolvent_ = LuFactors<double>(std::move(res));

    // Dressed charge: (I - K/2pi w) Z = 1.
    Z_ = resolvent_.solve(std::vector<double>(m, 1.0));

    // Dressed momentum: integrate the theta-form by parts, then solve the
    // augmented system with the scalar p(q) as the last unknown.
    Matrix<double> sys(m + 1);
    std::vector<double> rhs(m + 1);
    auto drive = [&](double lam) { return (theta_c(c_, lam - q_) + theta_c(c_, lam + q_)) / (2.0 * M_PI); };
    for (std::size_t j = 0; j <= m; ++j) {
        const double lam = (j < m) ? x_[j] : q_;
        for (std::size_t k = 0; k < m; ++k)
            sys(j, k) = ((j == k) ? 1.0 : 0.0) - kern(c_, lam - x_[k]) * w_[k] / (2.0 * M_PI);
        sys(j, m) = ((j == m) ? 1.0 : 0.0) - drive(lam);
        rhs[j] = lam;
    }
    LuFactors<double> lu(std::move(sys));
    std::vector<double> sol = lu.solve(rhs);
    p_.assign(sol.begin(), sol.begin() + m);
    p_at_q_ = sol[m];

    // p' from the differentiated p-representation: an independent route from
    // the Z system, compared against it by the tests.
    pprime_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = 1.0 + p_at_q_ * (kern(c_, x_[j] - q_) + kern(c_, x_[j] + q_)) / (2.0 * M_PI);
        for (std::size_t k = 0; k < m; ++k)
            s += kern_p(c_, x_[j] - x_[k]) * p_[k] * w_[k] / (2.0 * M_PI);
        pprime_[j] = s;
    }
}

void ThermoModel::strip_guard(cplx lam) const {
    if (std::abs(lam.imag()) >= c_)
        throw StripViolation("thermo: argument outside the analyticity strip |Im| < c");
}

double ThermoModel::p(double lam) const {
    double s = lam + p_at_q_ * (theta_c(c_, lam - q_) + theta_c(c_, lam + q_)) / (2.0 * M_PI);
    for (std::size_t k = 0; k < x_.size(); ++k)
        s += kern(c_, lam - x_[k]) * p_[k] * w_[k] / (2.0 * M_PI);
    return s;
}

cplx ThermoModel::p(cplx lam) const {
    strip_guard(lam);
    cplx s = lam + p_at_q_ * (theta_c(c_, lam - q_) + theta_c(c_, lam + q_)) / (2.0 * M_PI);
    for (std::size_t k = 0; k < x_.size(); ++k)
        s += kern(c_, lam - x_[k]) * p_[k] * w_[k] / (2.0 * M_PI);
    return s;
}

double ThermoModel::Z(double lam) const {
    double s = 1.0;
    for (std::size_t k = 0; k < x_.size(); ++k)
        s += kern(c_, lam - x_[k]) * Z_[k] * w_[k] / (2.0 * M_PI);
    return s;
}

cplx ThermoModel::Z(cplx lam) const {
    strip_guard(lam);
    cplx s(1.0, 0.0);
    for (std::size_t k = 0; k < x_.size(); ++k)
        s += kern(c_, lam - x_[k]) * Z_[k] * w_[k] / (2.0 * M_PI);
    return s;
}

double ThermoModel::p_prime(double lam) const { return Z(lam); }
cplx ThermoModel::p_prime(cplx lam) const { return Z(lam); }

double ThermoModel::xi(double lam) const { return p(lam) / (2.0 * M_PI) + 0.5 * density(); }
double ThermoModel::xi_prime(double lam) const { return p_prime(lam) / (2.0 * M_PI); }

std::vector<double> ThermoModel::resolve(const std::vector<double>& rhs) const {
    return resolvent_.solve(rhs);
}

double find_q(double c, double D, std::size_t m) {
    if (!(D > 0.0)) throw ConfigError("find_q: D must be positive");
    const double target = M_PI * D;
    auto residual = [&](double q) {
        ThermoModel tm(c, q, m);
        return tm.p_at_q() - target;
    };
    double lo = 1e-6 * D, hi = 1e3 * D;
    double flo = residual(lo), fhi = residual(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw BracketingFailure("find_q: no sign change in [1e-6, 1e3]*D");
    // Safeguarded secant; p(q) is strictly increasing in q.
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int it = 0; it < 200; ++it) {
        double mid = b - fb * (b - a) / (fb - fa);
        if (!(mid > a && mid < b)) mid = 0.5 * (a + b);
        const double fm = residual(mid);
        if (std::abs(fm) < 1e-10) return mid;
        if (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    throw NonConvergence("find_q: secant iteration did not reach tolerance");
}

DressedPhase::DressedPhase(const ThermoModel& model, double mu0) : model_(&model), mu0_(mu0) {
    const std::size_t m = model.m();
    std::vector<double> rhs(m);
    for (std::size_t k = 0; k < m; ++k)
        rhs[k] = theta_c(model.c(), model.nodes()[k] - mu0) / (2.0 * M_PI);
    phi_ = model.resolve(rhs);
}

double DressedPhase::operator()(double lam) const {
    const ThermoModel& tm = *model_;
    double s = theta_c(tm.c(), lam - mu0_) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s += kern(tm.c(), lam - tm.nodes()[k]) * phi_[k] * tm.weights()[k] / (2.0 * M_PI);
    return s;
}

cplx DressedPhase::operator()(cplx lam) const {
    const ThermoModel& tm = *model_;
    tm.strip_guard(lam);
    cplx s = theta_c(tm.c(), lam - mu0_) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s += kern(tm.c(), lam - tm.nodes()[k]) * phi_[k] * tm.weights()[k] / (2.0 * M_PI);
    return s;
}

double DressedPhase::deriv(double lam) const {
    const ThermoModel& tm = *model_;
    double s = kern(tm.c(), lam - mu0_) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s += kern_p(tm.c(), lam - tm.nodes()[k]) * phi_[k] * tm.weights()[k] / (2.0 * M_PI);
    return s;
}

cplx dressed_phase_at(const ThermoModel& model, cplx lam, double mu0) {
    return DressedPhase(model, mu0)(lam);
}

void ExcitationThermo::validate(const ThermoModel& model) const {
    if (particles.size() != holes.size())
        throw ConfigError("excitation: particle and hole counts differ");
    for (double p : particles)
        if (std::abs(p) <= model.q())
            throw ConfigError("excitation: particle rapidity inside the Fermi interval");
    for (double h : holes)
        if (std::abs(h) >= model.q())
            throw ConfigError("excitation: hole rapidity outside the Fermi interval");
    if (!std::is_sorted(particles.begin(), particles.end()) ||
        !std::is_sorted(holes.begin(), holes.end()))
        throw ConfigError("excitation: rapidities must be sorted");
}

double rapidity_from_integer(const ThermoModel& model, long k, double L) {
    const double target = static_cast<double>(k) / L;
    // xi is strictly increasing; bracket by doubling, then bisect + Newton.
    double lo = -model.q(), hi = model.q();
    double span = model.q();
    for (int it = 0; it < 80 && model.xi(lo) > target; ++it) lo -= (span *= 1.6);
    span = model.q();
    for (int it = 0; it < 80 && model.xi(hi) < target; ++it) hi += (span *= 1.6);
    if (model.xi(lo) > target || model.xi(hi) < target)
        throw OutOfRange("rapidity_from_integer: k/L outside the reachable range of xi");
    double mu = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = model.xi(mu) - target;
        if (std::abs(f) < 1e-10 * std::max(1.0, std::abs(target))) return mu;
        if (f > 0.0)
            hi = mu;
        else
            lo = mu;
        const double step = f / model.xi_prime(mu);
        double next = mu - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        mu = next;
    }
    throw NonConvergence("rapidity_from_integer: Newton did not converge");
}

ExcitationThermo excitation_from_integers(const ThermoModel& model, std::vector<long> p_ints,
                                          std::vector<long> h_ints, double L) {
    if (p_ints.size() != h_ints.size())
        throw ConfigError("excitation_from_integers: particle/hole count mismatch");
    ExcitationThermo exc;
    exc.L = L;
    for (long p : p_ints) exc.particles.push_back(rapidity_from_integer(model, p, L));
    for (long h : h_ints) exc.holes.push_back(rapidity_from_integer(model, h, L));
    std::sort(exc.particles.begin(), exc.particles.end());
    std::sort(exc.holes.begin(), exc.holes.end());
    std::sort(p_ints.begin(), p_ints.end());
    std::sort(h_ints.begin(), h_ints.end());
    exc.particle_ints = std::move(p_ints);
    exc.hole_ints = std::move(h_ints);
    exc.validate(model);
    return exc;
}

ShiftThermo::ShiftThermo(const ThermoModel& model, const ExcitationThermo& exc)
    : model_(&model) {
    exc.validate(model);
    sources_.push_back(model.q());
    source_signs_.push_back(1.0);
    for (double p : exc.particles) {
        sources_.push_back(p);
        source_signs_.push_back(1.0);
    }
    for (double h : exc.holes) {
        sources_.push_back(h);
        source_signs_.push_back(-1.0);
    }
    // One combined grid vector: K-extension of  sum_s sign_s phi(., s) + Z/2.
    const std::size_t m = model.m();
    std::vector<double> g(m, 0.0);
    for (std::size_t s = 0; s < sources_.size(); ++s) {
        const DressedPhase phi(model, sources_[s]);
        for (std::size_t k = 0; k < m; ++k) g[k] += source_signs_[s] * phi.grid_values()[k];
    }
    v_.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        v_[k] = model.weights()[k] * (g[k] + 0.5 * model.Z_grid()[k]);
}

double ShiftThermo::operator()(double lam) const {
    const ThermoModel& tm = *model_;
    double s = -0.5; // driving term of -Z/2
    for (std::size_t j = 0; j < sources_.size(); ++j)
        s -= source_signs_[j] * theta_c(tm.c(), lam - sources_[j]) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s -= kern(tm.c(), lam - tm.nodes()[k]) * v_[k] / (2.0 * M_PI);
    return s;
}

cplx ShiftThermo::operator()(cplx lam) const {
    const ThermoModel& tm = *model_;
    tm.strip_guard(lam);
    cplx s(-0.5, 0.0);
    for (std::size_t j = 0; j < sources_.size(); ++j)
        s -= source_signs_[j] * theta_c(tm.c(), lam - sources_[j]) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s -= kern(tm.c(), lam - tm.nodes()[k]) * v_[k] / (2.0 * M_PI);
    return s;
}

double ShiftThermo::deriv(double lam) const {
    const ThermoModel& tm = *model_;
    double s = 0.0;
    for (std::size_t j = 0; j < sources_.size(); ++j)
        s -= source_signs_[j] * kern(tm.c(), lam - sources_[j]) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k)
        s -= kern_p(tm.c(), lam - tm.nodes()[k]) * v_[k] / (2.0 * M_PI);
    return s;
}

double ShiftThermo::second(double lam) const {
    const ThermoModel& tm = *model_;
    const double c = tm.c();
    double s = 0.0;
    for (std::size_t j = 0; j < sources_.size(); ++j)
        s -= source_signs_[j] * kern_p(c, lam - sources_[j]) / (2.0 * M_PI);
    for (std::size_t k = 0; k < tm.m(); ++k) {
        const double x = lam - tm.nodes()[k];
        const double r = x * x + c * c;
        const double kpp = -4.0 * c * (c * c - 3.0 * x * x) / (r * r * r);
        s -= kpp * v_[k] / (2.0 * M_PI);
    }
    return s;
}

cplx ShiftThermo::phase(cplx lam) const {
    return std::exp(cplx(0.0, -2.0 * M_PI) * (*this)(lam));
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json vec17(const std::vector<double>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double x : v) arr.push_back(fmt17(x));
    return arr;
}

std::vector<double> parse_vec(const nlohmann::json& arr) {
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& s : arr) v.push_back(std::stod(s.get<std::string>()));
    return v;
}

} // namespace

std::string ThermoModel::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["c"] = fmt17(c_);
    j["q"] = fmt17(q_);
    j["m"] = x_.size();
    j["p_at_q"] = fmt17(p_at_q_);
    j["x"] = vec17(x_);
    j["w"] = vec17(w_);
    j["p"] = vec17(p_);
    j["pprime"] = vec17(pprime_);
    j["Z"] = vec17(Z_);
    return j.dump(1);
}

ThermoModel ThermoModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw CacheError("ThermoModel: unknown serialization version");
    ThermoModel tm;
    tm.c_ = std::stod(j["c"].get<std::string>());
    tm.q_ = std::stod(j["q"].get<std::string>());
    tm.p_at_q_ = std::stod(j["p_at_q"].get<std::string>());
    tm.x_ = parse_vec(j["x"]);
    tm.w_ = parse_vec(j["w"]);
    tm.p_ = parse_vec(j["p"]);
    tm.pprime_ = parse_vec(j["pprime"]);
    tm.Z_ = parse_vec(j["Z"]);
    const std::size_t m = tm.x_.size();
    if (tm.w_.size() != m || tm.p_.size() != m || tm.pprime_.size() != m || tm.Z_.size() != m ||
        m != j["m"].get<std::size_t>())
        throw CacheError("ThermoModel: inconsistent array lengths in record");
    // The resolvent is rebuilt; it is a deterministic function of (c, q, grid).
    Matrix<double> res(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            res(a, b) = (a == b ? 1.0 : 0.0) -
                        kern(tm.c_, tm.x_[a] - tm.x_[b]) * tm.w_[b] / (2.0 * M_PI);
    tm.resolvent_ = LuFactors<double>(std::move(res));
    return tm;
}

} // namespace nlsff
