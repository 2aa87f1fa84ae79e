#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlsff/bethe.hpp"
#include "nlsff/linalg.hpp"

namespace nlsff {

/// Dressed momentum / charge data on the Fermi interval [-q,q], solved once
/// on a Gauss-Legendre grid and extendable anywhere in the strip |Im| < c by
/// the natural Nystrom formulas. Immutable after construction.
class ThermoModel {
  public:
    ThermoModel(double c, double q, std::size_t m);

    double c() const { return c_; }
    double q() const { return q_; }
    std::size_t m() const { return x_.size(); }
    double density() const { return p_at_q_ / M_PI; } // D with p(q) = pi D

    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& p_grid() const { return p_; }
    const std::vector<double>& pprime_grid() const { return pprime_; }
    const std::vector<double>& Z_grid() const { return Z_; }
    double p_at_q() const { return p_at_q_; }

    // Dressed momentum p and its derivative; valid for complex arguments in
    // the strip. p' is evaluated through the dressed-charge route.
    double p(double lam) const;
    cplx p(cplx lam) const;
    double p_prime(double lam) const;
    cplx p_prime(cplx lam) const;
    double Z(double lam) const;
    cplx Z(cplx lam) const;

    // Thermodynamic counting function xi = p/2pi + D/2 and derivative.
    double xi(double lam) const;
    double xi_prime(double lam) const;

    // Solve (I - K/2pi w) f = rhs with the cached factorization.
    std::vector<double> resolve(const std::vector<double>& rhs) const;

    void strip_guard(cplx lam) const;

    std::string to_json() const;
    static ThermoModel from_json(const std::string& text);

  private:
    ThermoModel() = default;
    void build_derived();

    double c_ = 0.0, q_ = 0.0;
    std::vector<double> x_, w_;
    std::vector<double> p_, pprime_, Z_;
    double p_at_q_ = 0.0;
    LuFactors<double> resolvent_;
};

/// Fermi boundary from density: the q with p_q(q) = pi D, re-solving the
/// integral equation at every trial q.
double find_q(double c, double D, std::size_t m = 64);

/// Dressed phase phi(.,mu0): one Nystrom solve against the cached resolvent,
/// evaluable afterwards at real or complex arguments in the strip.
class DressedPhase {
  public:
    DressedPhase(const ThermoModel& model, double mu0);

    double operator()(double lam) const;
    cplx operator()(cplx lam) const;
    double deriv(double lam) const;
    const std::vector<double>& grid_values() const { return phi_; }

  private:
    const ThermoModel* model_;
    double mu0_;
    std::vector<double> phi_;
};

cplx dressed_phase_at(const ThermoModel& model, cplx lam, double mu0);

/// Particle/hole content of an excited state in the thermodynamic
/// parameterization; rapidities outside/inside [-q,q], optionally remembering
/// the integers they came from.
struct ExcitationThermo {
    std::vector<double> particles;
    std::vector<double> holes;
    std::optional<std::vector<long>> particle_ints;
    std::optional<std::vector<long>> hole_ints;
    double L = 0.0;

    std::size_t n() const { return particles.size(); }
    void validate(const ThermoModel& model) const;
};

/// Rapidity of the integer k: the unique solution of xi(mu) = k/L.
double rapidity_from_integer(const ThermoModel& model, long k, double L);

ExcitationThermo excitation_from_integers(const ThermoModel& model, std::vector<long> p_ints,
                                          std::vector<long> h_ints, double L);

/// Thermodynamic shift function
/// F(lambda) = -Z/2 - phi(lambda,q) - sum_a [phi(lambda,mu_pa) - phi(lambda,mu_ha)].
class ShiftThermo {
  public:
    ShiftThermo(const ThermoModel& model, const ExcitationThermo& exc);

    double operator()(double lam) const;
    cplx operator()(cplx lam) const;
    double deriv(double lam) const;
    double second(double lam) const;
    cplx phase(cplx lam) const; // e^{-2 i pi F}

  private:
    const ThermoModel* model_;
    std::vector<double> sources_;      // q, particles (+), holes (-)
    std::vector<double> source_signs_;
    std::vector<double> v_;            // combined weighted grid vector
};

} // namespace nlsff
