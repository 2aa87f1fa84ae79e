#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nlsff/errors.hpp"

namespace nlsff {

using cplx = std::complex<double>;

// Dense row-major square matrix, just enough for the determinant work here.
template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

// In-place partial-pivot LU. Returns the pivot row permutation; sign_flips
// counts row swaps. Throws SingularNystrom on an exactly singular pivot.
template <typename T>
std::vector<std::size_t> lu_decompose(Matrix<T>& a, int& sign_flips) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    sign_flips = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw SingularNystrom("LU: exactly singular pivot");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
            ++sign_flips;
        }
        const T inv = T(1) / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a(i, k) * inv;
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return perm;
}

// log(det A) as a complex number: real part log|det|, imaginary part the
// accumulated phase. Keeps huge/tiny determinants representable.
inline cplx log_det(Matrix<cplx> a) {
    const std::size_t n = a.size();
    if (n == 0) return cplx(0.0, 0.0);
    int flips = 0;
    lu_decompose(a, flips);
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += std::log(a(k, k));
    if (flips % 2 != 0) acc += cplx(0.0, M_PI);
    return acc;
}

inline cplx det(const Matrix<cplx>& a) { return std::exp(log_det(a)); }

inline double log_abs_det(Matrix<double> a, int& sign) {
    const std::size_t n = a.size();
    sign = 1;
    if (n == 0) return 0.0;
    int flips = 0;
    lu_decompose(a, flips);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += std::log(std::abs(a(k, k)));
        if (a(k, k) < 0.0) sign = -sign;
    }
    if (flips % 2 != 0) sign = -sign;
    return acc;
}

inline double det(const Matrix<double>& a) {
    int sign = 1;
    const double l = log_abs_det(a, sign);
    return sign * std::exp(l);
}

// Factored solver so one factorization can serve many right-hand sides.
template <typename T>
class LuFactors {
  public:
    LuFactors() = default;
    explicit LuFactors(Matrix<T> a) : lu_(std::move(a)) {
        int flips = 0;
        perm_ = lu_decompose(lu_, flips);
    }

    std::vector<T> solve(const std::vector<T>& b) const {
        const std::size_t n = lu_.size();
        std::vector<T> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

    std::size_t size() const { return lu_.size(); }

  private:
    Matrix<T> lu_;
    std::vector<std::size_t> perm_;
};

// Neumaier compensated accumulator; the combinatorial sums in the oracles
// lose digits with naive accumulation.
class KahanSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumC {
  public:
    void add(const cplx& v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    KahanSum re_;
    KahanSum im_;
};

} // namespace nlsff
