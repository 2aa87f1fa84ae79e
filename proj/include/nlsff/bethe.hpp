#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nlsff/linalg.hpp"

namespace nlsff {

enum class Regime { Continuum, Lattice };

struct LatticeData {
    double delta = 0.0; // lattice spacing
    long M = 0;         // number of sites, even, delta*M == L
};

/// Model constants: repulsive coupling c, volume L, and (optionally) the
/// Izergin-Korepin lattice data. Immutable after construction.
class ModelGeometry {
  public:
    static ModelGeometry continuum(double c, double L);
    // M is derived from delta and L (nearest even integer); rejects a
    // mismatch of delta*M vs L beyond 1 part in 1e9.
    static ModelGeometry lattice(double c, double L, double delta);

    double c() const { return c_; }
    double L() const { return L_; }
    Regime regime() const { return regime_; }
    bool is_lattice() const { return regime_ == Regime::Lattice; }
    const LatticeData& lattice_data() const;

    // The distinguished lattice point nu = -2i/Delta + ic/2.
    cplx nu() const;

    bool same_as(const ModelGeometry& o) const;

    // --- scattering data ---------------------------------------------------

    // theta(lambda) = i ln((ic+lambda)/(ic-lambda)); odd, valued in (-pi,pi)
    // on the real line, computed there as 2*atan(lambda/c).
    double theta(double lambda) const;
    cplx theta(cplx lambda) const;

    // K = theta' = 2c/(lambda^2+c^2) and its derivatives.
    double kernel_K(double lambda) const;
    cplx kernel_K(cplx lambda) const;
    double kernel_K_prime(double lambda) const;
    cplx kernel_K_prime(cplx lambda) const;
    double kernel_K_second(double lambda) const;

    // --- transfer-matrix eigenvalue data ------------------------------------

    // a(lambda), d(lambda). In the Lattice regime these are the M/2-fold
    // products of the two single-site factors; in the Continuum regime the
    // limits exp(-i lambda L/2), exp(i lambda L/2). A regime may be forced.
    std::pair<cplx, cplx> lattice_ad(cplx lambda) const;
    std::pair<cplx, cplx> lattice_ad(cplx lambda, Regime force) const;
    // log a, log d accumulated per site pair (never as log of the full power).
    std::pair<cplx, cplx> log_ad(cplx lambda, Regime force) const;

    // Driving term of the logarithmic Bethe equations: L*lambda in the
    // continuum, -i ln(d/a)(lambda) on the lattice, with the per-site
    // principal branch. Both exact and smooth for real lambda.
    double bae_drive(double lambda) const;
    double bae_drive_deriv(double lambda) const;

  private:
    ModelGeometry() = default;
    double c_ = 0.0;
    double L_ = 0.0;
    Regime regime_ = Regime::Continuum;
    std::optional<LatticeData> lat_;
};

/// Strictly increasing integers, one-to-one with Bethe states.
class QuantumNumbers {
  public:
    explicit QuantumNumbers(std::vector<long> ells);
    const std::vector<long>& ells() const { return ells_; }
    std::size_t size() const { return ells_.size(); }

    // ell_a -> N+1-ell_{N+1-a}; negates and reverses the solved roots.
    QuantumNumbers parity_flipped() const;

  private:
    std::vector<long> ells_;
};

struct SolveOptions {
    double tol = 1e-12;
    int max_iter = 200;
};

/// A solved Bethe state: geometry, quantum numbers, strictly increasing real
/// roots and the residual max |log-BAE defect|.
struct BetheState {
    ModelGeometry geometry;
    QuantumNumbers qn;
    std::vector<double> roots;
    double residual = 0.0;

    std::size_t n() const { return roots.size(); }
};

/// Damped-Newton solve of the logarithmic Bethe equations.
BetheState solve_bae(const QuantumNumbers& qn, const ModelGeometry& geometry,
                     const SolveOptions& opts = {});

// Residual of a root vector against the logarithmic BAE; exposed for tests.
double bae_defect(const ModelGeometry& g, const std::vector<long>& ells,
                  const std::vector<double>& roots);

/// Counting function xi-hat of a solved state and its derivative.
/// xi(omega) = drive(omega)/(2 pi L) + (1/2 pi L) sum_a theta(omega-lambda_a)
///             + (N+1)/(2L),  so that xi(lambda_{ell_a}) = ell_a / L.
class CountingFunction {
  public:
    explicit CountingFunction(const BetheState& state);

    double operator()(double omega) const;
    double deriv(double omega) const;

  private:
    ModelGeometry geom_;
    std::vector<double> roots_;
    double const_term_;
};

/// Finite-size shift function F-hat between an (N+1)-root state mu and an
/// N-root state lambda: F(omega) = L [ xi_lambda(omega) - xi_mu(omega) ].
class ShiftFunctionFinite {
  public:
    ShiftFunctionFinite(const BetheState& mu_state, const BetheState& lam_state);

    double operator()(double omega) const;
    cplx operator()(cplx omega) const;
    // exp(-2 i pi F(omega)); equals the two-product rational formula exactly.
    cplx phase(double omega) const;
    // The displayed product form, kept as an independent route for tests.
    cplx phase_product(cplx omega) const;

  private:
    ModelGeometry geom_;
    std::vector<double> mu_;
    std::vector<double> lam_;
};

} // namespace nlsff
