#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nlsff/contour.hpp"
#include "nlsff/special.hpp"
#include "nlsff/thermo.hpp"

namespace nlsff {

/// Cauchy transform C[F](lambda) = (1/2 i pi) int_{-q}^{q} F(mu)/(mu-lambda).
/// Grid values of F are cached; near the segment the singularity-subtracted
/// form is used (which evaluates F at the complex point), far from it plain
/// Gauss-Legendre quadrature.
class CauchyTransform {
  public:
    CauchyTransform(const ThermoModel& model, std::function<cplx(cplx)> F);
    cplx operator()(cplx lambda) const;

    static double segment_distance(cplx lambda, double q);

  private:
    const ThermoModel* model_;
    std::function<cplx(cplx)> f_;
    std::vector<cplx> fgrid_;
    double near_;
};

/// C0[F] = -int int F(l)F(m)/(l-m-ic)^2 over the Fermi square; real for real F.
double c0_functional(const std::function<double(double)>& F, const ThermoModel& model);

/// det(I - K/2pi) on [-q,q] by Nystrom on the model grid.
double fredholm_det_interval(const ThermoModel& model);

/// The integral kernels U[F] (bar=false) and Ubar[F] (bar=true) on a closed
/// contour around [-q,q]. `nu` is the shift data and `gamma` the overall
/// coupling: the object evaluates gamma*U[gamma*nu](w,w'), with the removable
/// gamma -> 0 limit handled by a series. Not shareable across threads (keeps
/// a one-entry memo of the omega-only factor).
class KernelU {
  public:
    KernelU(const ThermoModel& model, const ExcitationThermo& exc,
            std::function<cplx(cplx)> nu, bool bar, cplx gamma = cplx(1.0, 0.0));

    cplx operator()(cplx w, cplx wp) const;

  private:
    cplx omega_part(cplx w) const;

    const ThermoModel* model_;
    std::vector<double> particles_, holes_;
    std::function<cplx(cplx)> nu_;
    cplx gamma_;
    double sign_; // -1 for U, +1 for Ubar
    std::shared_ptr<CauchyTransform> c2pinu_;
    mutable bool memo_set_ = false;
    mutable cplx memo_w_, memo_val_;
};

struct ContourReport {
    bool ok = false;
    double min_denominator = 0.0; // min |e^{-2 i pi F} - 1| over nodes
    long zeros_inside = 0;         // winding count of e^{-2 i pi F} - 1
    bool holes_inside = true;
    bool particles_outside = true;
    std::size_t nodes = 0;
    std::string failure;
};

/// Validates a contour against the shift data: denominator bounded away from
/// zero, no zeros of e^{-2 i pi F}-1 inside (argument principle), holes
/// inside and particles outside (winding numbers).
ContourReport contour_check(const std::function<cplx(cplx)>& F, const ExcitationThermo& exc,
                            const ClosedContour& contour);

/// Stadium around [-q,q]; height_scale/reach_scale shrink the default shape.
ClosedContour make_contour(const ThermoModel& model, double height_scale = 1.0,
                           double reach_scale = 1.0, std::size_t nodes = 128);

/// First admissible contour from a deterministic deformation ladder;
/// throws ContourInvalid when every candidate fails.
ClosedContour admissible_contour(const ThermoModel& model, const ExcitationThermo& exc,
                                 const std::function<cplx(cplx)>& F,
                                 ContourReport* report = nullptr, std::size_t nodes = 128);

struct SmoothOptions {
    std::size_t contour_nodes = 128;
    double det_tol = 1e-8;
};

/// Smooth part G_n of the large-volume normalized |form factor|^2.
double smooth_part(const ThermoModel& model, const ExcitationThermo& exc,
                   const std::function<cplx(cplx)>& F, const SmoothOptions& opts = {},
                   ContourReport* report = nullptr);

// --- special auxiliary functions of the discrete part -----------------------

/// kappa[nu](lambda) = exp{ -int (nu(lambda)-nu(mu))/(lambda-mu) dmu }.
double kappa(const std::function<double(double)>& nu, double lambda, const ThermoModel& model);

/// aleph(omega) = 2 nu(omega) log(varphi(omega,q)/varphi(omega,-q))
///              + 2 int (nu(lambda)-nu(omega))/(lambda-omega) dlambda.
double aleph(const std::function<double(double)>& nu, double omega, const ThermoModel& model);

/// varphi(lambda,mu) = 2 pi (lambda-mu)/(p(lambda)-p(mu)), 2 pi / p'(lambda)
/// on the diagonal.
double varphi_p(const ThermoModel& model, double lam, double mu);

/// Discrete part D0[F] * R_{N,n}[F]; the excitation must carry integer data.
double discrete_part(const ThermoModel& model, const ExcitationThermo& exc, long N, double L,
                     const ShiftThermo& F);

/// lambda_{N+1}: the unique solution of L xi(x) + F(x) = N+1.
double lambda_next(const ThermoModel& model, const ShiftThermo& F, long N, double L);

struct AsymptoticFFResult {
    double smooth = 0.0;
    double discrete = 0.0;
    double total = 0.0;
    ContourReport contour;
};

AsymptoticFFResult asymptotic_ff(const ThermoModel& model, const ExcitationThermo& exc, long N,
                                 double L, const SmoothOptions& opts = {});

struct RegularizedOptions {
    std::size_t contour_nodes = 128;
    double height_scale = 1.0;
    double det_tol = 1e-8;
};

/// The regularized Fredholm determinant functional
///   F(z) = G(1-g nu_b(-q)) G(2+g nu_b(q)) prod_a (e^{-2 i pi g nu_b(mu_ha)}-1)
///          det(I + g U[g nu_b]),   nu_b = nu + i beta h,
/// evaluated by locating the zeros of e^{-2 i pi g nu_b}-1 and deforming the
/// contour so they stay outside while +-q and the holes stay inside.
cplx regularized_det(const std::function<cplx(cplx)>& nu, const std::function<cplx(cplx)>& h,
                     cplx beta, cplx gamma, const ExcitationThermo& exc,
                     const ThermoModel& model, const RegularizedOptions& opts = {});

} // namespace nlsff
