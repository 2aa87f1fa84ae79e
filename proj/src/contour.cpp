#include "nlsff/contour.hpp"

#include <algorithm>
#include <cmath>

#include "nlsff/errors.hpp"
#include "nlsff/quadrature.hpp"

namespace nlsff {

ClosedContour::ClosedContour(double half_height, double x_straight, std::size_t target_nodes)
    : h_(half_height), xr_(x_straight), target_(target_nodes) {
    if (!(h_ > 0.0) || !(xr_ > 0.0)) throw ConfigError("ClosedContour: bad stadium dimensions");
    const double seg_len = 2.0 * xr_;
    const double cap_len = M_PI * h_;
    const double total = 2.0 * (seg_len + cap_len);
    auto piece_nodes = [&](double len) {
        return std::max<std::size_t>(8, static_cast<std::size_t>(
                                            std::lround(static_cast<double>(target_nodes) * len / total)));
    };
    const std::size_t n_seg = piece_nodes(seg_len);
    const std::size_t n_cap = piece_nodes(cap_len);

    const QuadRule seg = gauss_legendre(n_seg, -xr_, xr_);
    const QuadRule cap = gauss_legendre(n_cap, -0.5 * M_PI, 0.5 * M_PI);

    // bottom: z = t - ih, dz = dt
    for (std::size_t k = 0; k < n_seg; ++k) {
        z_.push_back(cplx(seg.x[k], -h_));
        w_.push_back(cplx(seg.w[k], 0.0));
    }
    // right cap: z = xr + h e^{i th}, th in (-pi/2, pi/2), dz = i h e^{i th} dth
    for (std::size_t k = 0; k < n_cap; ++k) {
        const cplx e = std::exp(cplx(0.0, cap.x[k]));
        z_.push_back(xr_ + h_ * e);
        w_.push_back(cplx(0.0, h_) * e * cap.w[k]);
    }
    // top: z = -t + ih, dz = -dt
    for (std::size_t k = 0; k < n_seg; ++k) {
        z_.push_back(cplx(-seg.x[k], h_));
        w_.push_back(cplx(-seg.w[k], 0.0));
    }
    // left cap: z = -xr + h e^{i(th+pi)}
    for (std::size_t k = 0; k < n_cap; ++k) {
        const cplx e = std::exp(cplx(0.0, cap.x[k] + M_PI));
        z_.push_back(-xr_ + h_ * e);
        w_.push_back(cplx(0.0, h_) * e * cap.w[k]);
    }
}

ClosedContour ClosedContour::refined(std::size_t factor) const {
    return ClosedContour(h_, xr_, target_ * factor);
}

bool ClosedContour::encloses(cplx p) const {
    if (std::abs(p.imag()) >= h_ && std::abs(p.real()) <= xr_) return false;
    if (std::abs(p.real()) <= xr_) return std::abs(p.imag()) < h_;
    const double dx = std::abs(p.real()) - xr_;
    return dx * dx + p.imag() * p.imag() < h_ * h_;
}

cplx ClosedContour::winding(cplx p) const {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < z_.size(); ++k) acc += w_[k] / (z_[k] - p);
    return acc / cplx(0.0, 2.0 * M_PI);
}

std::vector<cplx> ClosedContour::polyline(std::size_t per_unit) const {
    std::vector<cplx> out;
    const auto seg_pts = static_cast<std::size_t>(std::ceil(2.0 * xr_ * per_unit)) + 2;
    const auto cap_pts = static_cast<std::size_t>(std::ceil(M_PI * h_ * per_unit)) + 2;
    for (std::size_t k = 0; k < seg_pts; ++k)
        out.push_back(cplx(-xr_ + 2.0 * xr_ * k / seg_pts, -h_));
    for (std::size_t k = 0; k < cap_pts; ++k)
        out.push_back(xr_ + h_ * std::exp(cplx(0.0, -0.5 * M_PI + M_PI * k / cap_pts)));
    for (std::size_t k = 0; k < seg_pts; ++k)
        out.push_back(cplx(xr_ - 2.0 * xr_ * k / seg_pts, h_));
    for (std::size_t k = 0; k < cap_pts; ++k)
        out.push_back(-xr_ + h_ * std::exp(cplx(0.0, 0.5 * M_PI + M_PI * k / cap_pts)));
    out.push_back(out.front()); // close the loop
    return out;
}

cplx fredholm_det_contour_once(const std::function<cplx(cplx, cplx)>& kernel,
                               const ClosedContour& contour) {
    const auto& z = contour.nodes();
    const auto& w = contour.weights();
    const std::size_t m = z.size();
    Matrix<cplx> a(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
            a(j, k) = (j == k ? cplx(1.0, 0.0) : cplx(0.0, 0.0)) + kernel(z[j], z[k]) * w[k];
    return std::exp(log_det(a));
}

cplx fredholm_det_contour(const std::function<cplx(cplx, cplx)>& kernel,
                          const ClosedContour& contour, double rel_tol) {
    const cplx coarse = fredholm_det_contour_once(kernel, contour);
    const cplx fine = fredholm_det_contour_once(kernel, contour.refined(2));
    const double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(fine - coarse) > rel_tol * scale)
        throw NonConvergedNodes("fredholm_det_contour: node doubling moved the result");
    return fine;
}

long winding_number(const std::function<cplx(cplx)>& f, const std::vector<cplx>& path,
                    int max_refine) {
    if (path.size() < 2 || std::abs(path.front() - path.back()) > 1e-14)
        throw ConfigError("winding_number: path must be closed");

    // Walk segments, recursively bisecting (in the parameter) until the
    // argument of f moves by less than pi/2 per step.
    double total = 0.0;
    std::function<void(cplx, cplx, cplx, cplx, int)> walk = [&](cplx za, cplx zb, cplx fa,
                                                                cplx fb, int depth) {
        if (std::abs(fa) == 0.0 || std::abs(fb) == 0.0)
            throw ContractError("winding_number: zero on the path");
        const double d = std::arg(fb / fa);
        if (std::abs(d) < 0.5 * M_PI) {
            total += d;
            return;
        }
        if (depth >= max_refine)
            throw ContractError("winding_number: argument step failed to resolve");
        const cplx zm = 0.5 * (za + zb);
        const cplx fm = f(zm);
        walk(za, zm, fa, fm, depth + 1);
        walk(zm, zb, fm, fb, depth + 1);
    };

    std::vector<cplx> fv(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) fv[k] = f(path[k]);
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        walk(path[k], path[k + 1], fv[k], fv[k + 1], 0);

    const double turns = total / (2.0 * M_PI);
    const long rounded = std::lround(turns);
    if (std::abs(turns - static_cast<double>(rounded)) > 1e-6)
        throw ContractError("winding_number: non-integer winding");
    return rounded;
}

namespace {

std::vector<cplx> rect_path(cplx lo, cplx hi, std::size_t per_edge) {
    std::vector<cplx> p;
    const double x0 = lo.real(), x1 = hi.real(), y0 = lo.imag(), y1 = hi.imag();
    for (std::size_t k = 0; k < per_edge; ++k)
        p.push_back(cplx(x0 + (x1 - x0) * k / per_edge, y0));
    for (std::size_t k = 0; k < per_edge; ++k)
        p.push_back(cplx(x1, y0 + (y1 - y0) * k / per_edge));
    for (std::size_t k = 0; k < per_edge; ++k)
        p.push_back(cplx(x1 - (x1 - x0) * k / per_edge, y1));
    for (std::size_t k = 0; k < per_edge; ++k)
        p.push_back(cplx(x0, y1 - (y1 - y0) * k / per_edge));
    p.push_back(p.front());
    return p;
}

long count_zeros_rect(const std::function<cplx(cplx)>& f, cplx lo, cplx hi) {
    return winding_number(f, rect_path(lo, hi, 12));
}

cplx newton_polish(const std::function<cplx(cplx)>& f, cplx z0, double scale) {
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        const cplx fz = f(z);
        if (std::abs(fz) < 1e-14) break;
        const double dd = 1e-7 * std::max(scale, std::abs(z));
        const cplx fp = (f(z + dd) - f(z - dd)) / (2.0 * dd);
        if (std::abs(fp) == 0.0) break;
        const cplx step = fz / fp;
        z -= step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

void subdivide(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, double resolution,
               std::vector<cplx>& out, int depth) {
    long count;
    try {
        count = count_zeros_rect(f, lo, hi);
    } catch (const ContractError&) {
        // A zero sits on (or hugs) the boundary: nudge the box outward a bit.
        const cplx pad = 1.37e-3 * (hi - lo);
        count = count_zeros_rect(f, lo - pad, hi + pad);
        lo -= pad;
        hi += pad;
    }
    if (count == 0) return;
    const double size = std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
    if (count == 1 && size < 64.0 * resolution) {
        const cplx z = newton_polish(f, 0.5 * (lo + hi), size);
        for (const cplx& seen : out)
            if (std::abs(seen - z) < 4.0 * resolution) return;
        out.push_back(z);
        return;
    }
    if (depth > 48 || size < 4.0 * resolution) {
        // Cluster tighter than the resolution: report the center once.
        const cplx z = newton_polish(f, 0.5 * (lo + hi), size);
        for (long k = 0; k < count; ++k) out.push_back(z);
        return;
    }
    // Slightly off-center split so zeros rarely land on the cut lines.
    const double fx = 0.5003, fy = 0.4997;
    const double xm = lo.real() + fx * (hi.real() - lo.real());
    const double ym = lo.imag() + fy * (hi.imag() - lo.imag());
    subdivide(f, lo, cplx(xm, ym), resolution, out, depth + 1);
    subdivide(f, cplx(xm, lo.imag()), cplx(hi.real(), ym), resolution, out, depth + 1);
    subdivide(f, cplx(lo.real(), ym), cplx(xm, hi.imag()), resolution, out, depth + 1);
    subdivide(f, cplx(xm, ym), hi, resolution, out, depth + 1);
}

} // namespace

std::vector<cplx> find_zeros(const std::function<cplx(cplx)>& f, cplx lo, cplx hi,
                             double resolution) {
    std::vector<cplx> out;
    subdivide(f, lo, hi, resolution, out, 0);
    std::sort(out.begin(), out.end(), [](const cplx& a, const cplx& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

} // namespace nlsff
