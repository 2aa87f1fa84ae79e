#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlsff/linalg.hpp"

namespace nlsff {

/// Closed counterclockwise stadium: straight segments at +-h over
/// [-x_straight, x_straight] joined by semicircular caps of radius h.
/// Quadrature is piecewise Gauss-Legendre, so every piece is analytic and
/// node doubling converges spectrally.
class ClosedContour {
  public:
    ClosedContour(double half_height, double x_straight, std::size_t target_nodes);

    double half_height() const { return h_; }
    double x_straight() const { return xr_; }
    double reach() const { return xr_ + h_; } // real-axis crossing
    std::size_t node_count() const { return z_.size(); }

    const std::vector<cplx>& nodes() const { return z_; }
    // complex weights: contour integral of f is sum f(z_j) w_j
    const std::vector<cplx>& weights() const { return w_; }

    ClosedContour refined(std::size_t factor = 2) const;

    bool encloses(cplx p) const;
    // Quadrature winding number (1/2pi i) oint dz/(z - p).
    cplx winding(cplx p) const;
    // Dense boundary polyline (for argument tracking), counterclockwise.
    std::vector<cplx> polyline(std::size_t per_unit_arclength = 64) const;

  private:
    double h_, xr_;
    std::size_t target_;
    std::vector<cplx> z_, w_;
};

/// det(I + A), A_{jk} = kernel(z_j, z_k) w_k, on the contour quadrature.
cplx fredholm_det_contour_once(const std::function<cplx(cplx, cplx)>& kernel,
                               const ClosedContour& contour);

/// Same, with a node-doubling stability check: throws NonConvergedNodes when
/// the refined value moves by more than rel_tol; returns the refined value.
cplx fredholm_det_contour(const std::function<cplx(cplx, cplx)>& kernel,
                          const ClosedContour& contour, double rel_tol = 1e-8);

/// Winding number of f along a closed polyline (argument principle); refines
/// between samples until every argument step is below pi/2.
long winding_number(const std::function<cplx(cplx)>& f, const std::vector<cplx>& path,
                    int max_refine = 18);

/// Zeros of an analytic function inside a rectangle, by argument-principle
/// counting on a quadtree of rectangles refined until each cell holds at
/// most one zero, followed by Newton polishing.
std::vector<cplx> find_zeros(const std::function<cplx(cplx)>& f, cplx lo, cplx hi,
                             double resolution = 1e-10);

} // namespace nlsff
