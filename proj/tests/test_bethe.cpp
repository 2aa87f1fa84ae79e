#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlsff/bethe.hpp"
#include "nlsff/errors.hpp"

using namespace nlsff;

namespace {
const double kPi = M_PI;
}

TEST_CASE("theta and K closed forms") {
    const ModelGeometry g = ModelGeometry::continuum(2.0, 10.0);
    CHECK(g.theta(0.0) == 0.0);
    CHECK(g.kernel_K(0.0) == doctest::Approx(1.0).epsilon(1e-15)); // 2/c
    CHECK(g.theta(2.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(g.theta(1e9) == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(std::abs(g.kernel_K(1e9)) < 1e-8);
    // odd, and the complex branch agrees on the real line
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int it = 0; it < 200; ++it) {
        const double x = u(rng);
        CHECK(g.theta(-x) == doctest::Approx(-g.theta(x)).epsilon(1e-14));
        CHECK(g.theta(cplx(x, 0.0)).real() == doctest::Approx(g.theta(x)).epsilon(1e-13));
        CHECK(std::abs(g.theta(cplx(x, 0.0)).imag()) < 1e-14);
        CHECK(std::abs(g.theta(x)) < kPi);
    }
}

TEST_CASE("lattice a and d") {
    const ModelGeometry g = ModelGeometry::lattice(2.0, 10.0, 0.1);
    CHECK(g.lattice_data().M == 100);

    SUBCASE("a(0) is the real product (1 - (c Delta/4)^2)^{M/2}") {
        const auto [a0, d0] = g.lattice_ad(cplx(0.0, 0.0));
        CHECK(a0.real() == doctest::Approx(std::pow(1.0 - 0.0025, 50)).epsilon(1e-13));
        CHECK(std::abs(a0.imag()) < 1e-15);
        CHECK(std::abs(d0 - a0) < 1e-15);
    }

    SUBCASE("d = conj(a) on the real line") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-8.0, 8.0);
        for (int it = 0; it < 100; ++it) {
            const auto [a, d] = g.lattice_ad(cplx(u(rng), 0.0));
            CHECK(std::abs(d - std::conj(a)) < 1e-13 * std::abs(a));
        }
    }

    SUBCASE("a -> e^{-i lambda L/2} at first order in Delta") {
        const double lam = 1.3;
        const cplx target = std::exp(cplx(0.0, -0.5 * 10.0 * lam));
        double prev = 0.0;
        for (const double delta : {1e-2, 1e-3, 1e-4}) {
            const ModelGeometry gl = ModelGeometry::lattice(2.0, 10.0, delta);
            const auto [a, d] = gl.lattice_ad(cplx(lam, 0.0));
            const double err = std::abs(a - target);
            if (prev != 0.0) {
                const double ratio = prev / err;
                CHECK(ratio > 6.0);
                CHECK(ratio < 14.0);
            }
            prev = err;
        }
    }

    SUBCASE("nu = -2i/Delta + ic/2") {
        CHECK(g.nu() == cplx(0.0, -19.0));
    }
}

TEST_CASE("solve_bae continuum basics") {
    const ModelGeometry g = ModelGeometry::continuum(2.0, 10.0);

    SUBCASE("one body, ell=1: root at 0") {
        const BetheState st = solve_bae(QuantumNumbers({1}), g);
        CHECK(std::abs(st.roots[0]) < 1e-13);
        CHECK(st.residual < 1e-12);
    }
    SUBCASE("one body, ell=3: root 4 pi / 10") {
        const BetheState st = solve_bae(QuantumNumbers({3}), g);
        CHECK(st.roots[0] == doctest::Approx(4.0 * kPi / 10.0).epsilon(1e-13));
    }
    SUBCASE("two body ground state is symmetric") {
        const BetheState st = solve_bae(QuantumNumbers({1, 2}), g);
        CHECK(st.roots[0] == doctest::Approx(-st.roots[1]).epsilon(1e-12));
        CHECK(st.residual < 1e-12);
        CHECK(bae_defect(g, st.qn.ells(), st.roots) < 1e-12);
    }
    SUBCASE("degenerate quantum numbers rejected") {
        CHECK_THROWS_AS(QuantumNumbers({1, 1}), DegenerateQuantumNumbers);
        CHECK_THROWS_AS(QuantumNumbers({3, 1}), DegenerateQuantumNumbers);
    }
}

TEST_CASE("solve_bae lattice guard and solutions") {
    SUBCASE("DeltaTooLarge for wild quantum numbers") {
        const ModelGeometry g = ModelGeometry::lattice(2.0, 10.0, 0.5);
        CHECK_THROWS_AS(solve_bae(QuantumNumbers({50}), g), DeltaTooLarge);
    }
    SUBCASE("lattice solve satisfies its own defect") {
        const ModelGeometry g = ModelGeometry::lattice(2.0, 10.0, 0.01);
        const BetheState st = solve_bae(QuantumNumbers({1, 3, 4}), g);
        CHECK(st.residual < 1e-12);
        for (std::size_t a = 1; a < st.n(); ++a) CHECK(st.roots[a] > st.roots[a - 1]);
    }
}

TEST_CASE("repulsion and free-fermion limit") {
    SUBCASE("repulsion on random states") {
        std::mt19937 rng(23);
        const ModelGeometry g = ModelGeometry::continuum(1.7, 12.0);
        for (int it = 0; it < 25; ++it) {
            std::vector<long> ells;
            long cur = -6 + static_cast<long>(rng() % 4);
            const int n = 1 + static_cast<int>(rng() % 4);
            for (int a = 0; a < n; ++a) {
                ells.push_back(cur);
                cur += 1 + static_cast<long>(rng() % 3);
            }
            const BetheState st = solve_bae(QuantumNumbers(ells), g);
            for (std::size_t a = 1; a < st.n(); ++a) CHECK(st.roots[a] - st.roots[a - 1] > 0.0);
        }
    }
    SUBCASE("c -> infinity gives free roots") {
        const double L = 10.0;
        const ModelGeometry g = ModelGeometry::continuum(1e6, L);
        const BetheState st = solve_bae(QuantumNumbers({3, 5, 9}), g);
        const std::vector<long> ells = {3, 5, 9};
        for (std::size_t a = 0; a < 3; ++a) {
            const double free_root = 2.0 * kPi * (ells[a] - 2.0) / L;
            CHECK(std::abs(st.roots[a] - free_root) < 1e-4 * std::abs(free_root));
        }
    }
    SUBCASE("parity: flipped quantum numbers negate and reverse roots") {
        const ModelGeometry g = ModelGeometry::continuum(2.4, 9.0);
        const QuantumNumbers qn({-2, 1, 2, 5});
        const BetheState st = solve_bae(qn, g);
        const BetheState flipped = solve_bae(qn.parity_flipped(), g);
        for (std::size_t a = 0; a < 4; ++a)
            CHECK(flipped.roots[a] == doctest::Approx(-st.roots[3 - a]).epsilon(1e-11));
    }
}

TEST_CASE("lattice roots converge to continuum at second order") {
    // The drive -i ln(d/a) = lambda L + O(Delta^2), so root errors quarter
    // under Delta -> Delta/2 (the a,d values themselves are O(Delta)).
    const ModelGeometry gc = ModelGeometry::continuum(2.0, 10.0);
    const QuantumNumbers qn({1, 2, 4});
    const BetheState cont = solve_bae(qn, gc);
    double prev = 0.0;
    for (const double delta : {0.02, 0.01, 0.005}) {
        const ModelGeometry gl = ModelGeometry::lattice(2.0, 10.0, delta);
        const BetheState lat = solve_bae(qn, gl);
        double err = 0.0;
        for (std::size_t a = 0; a < 3; ++a)
            err = std::max(err, std::abs(lat.roots[a] - cont.roots[a]));
        if (prev != 0.0) {
            const double ratio = prev / err;
            CHECK(ratio > 3.2);
            CHECK(ratio < 4.8);
        }
        prev = err;
    }
}

TEST_CASE("counting function") {
    const ModelGeometry g = ModelGeometry::continuum(2.0, 10.0);

    SUBCASE("one-body ground state: xi(0) = 1/L") {
        const BetheState st = solve_bae(QuantumNumbers({1}), g);
        const CountingFunction xi(st);
        CHECK(xi(0.0) == doctest::Approx(0.1).epsilon(1e-13));
    }
    SUBCASE("derivative bounded below by 1/2pi") {
        const BetheState st = solve_bae(QuantumNumbers({1, 2, 3}), g);
        const CountingFunction xi(st);
        for (double w = -20.0; w <= 20.0; w += 0.37) CHECK(xi.deriv(w) > 1.0 / (2.0 * kPi));
    }
    SUBCASE("xi(root_a) = ell_a / L for a lattice state") {
        const ModelGeometry gl = ModelGeometry::lattice(2.0, 10.0, 0.01);
        const BetheState st = solve_bae(QuantumNumbers({-1, 2, 3, 7}), gl);
        const CountingFunction xi(st);
        for (std::size_t a = 0; a < st.n(); ++a)
            CHECK(std::abs(xi(st.roots[a]) - st.qn.ells()[a] / 10.0) < 1e-12);
    }
}

TEST_CASE("finite-size shift function") {
    const ModelGeometry g = ModelGeometry::continuum(2.0, 10.0);

    SUBCASE("counting-difference and product forms agree on a dense grid") {
        for (int n : {1, 2, 3, 4}) {
            std::vector<long> mu_ells, lam_ells;
            for (int a = 1; a <= n; ++a) lam_ells.push_back(a);
            for (int a = 1; a <= n + 1; ++a) mu_ells.push_back(a == n + 1 ? a + 1 : a);
            const BetheState mu = solve_bae(QuantumNumbers(mu_ells), g);
            const BetheState lam = solve_bae(QuantumNumbers(lam_ells), g);
            const ShiftFunctionFinite F(mu, lam);
            for (int k = 0; k < 1000; ++k) {
                const double w = -25.0 + 50.0 * k / 999.0;
                CHECK(std::abs(F.phase(w) - F.phase_product(cplx(w, 0.0))) < 1e-12);
            }
        }
    }
    SUBCASE("phase tends to 1 at infinity") {
        const BetheState mu = solve_bae(QuantumNumbers({1, 2}), g);
        const BetheState lam = solve_bae(QuantumNumbers({1}), g);
        const ShiftFunctionFinite F(mu, lam);
        CHECK(std::abs(F.phase(1e9) - 1.0) < 1e-7);
    }
    SUBCASE("N=0: single rational factor of unit modulus") {
        const BetheState mu = solve_bae(QuantumNumbers({2}), g);
        const BetheState lam = solve_bae(QuantumNumbers(std::vector<long>{}), g);
        const ShiftFunctionFinite F(mu, lam);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        for (int it = 0; it < 50; ++it) {
            const double w = u(rng);
            const double m = mu.roots[0];
            const cplx expected = (m - w + cplx(0.0, 2.0)) / (m - w - cplx(0.0, 2.0));
            CHECK(std::abs(F.phase(w) - expected) < 1e-13);
            CHECK(std::abs(std::abs(F.phase(w)) - 1.0) < 1e-13);
        }
    }
    SUBCASE("geometry mismatch rejected") {
        const BetheState mu = solve_bae(QuantumNumbers({1, 2}), g);
        const ModelGeometry g2 = ModelGeometry::continuum(2.0, 11.0);
        const BetheState lam = solve_bae(QuantumNumbers({1}), g2);
        CHECK_THROWS_AS(ShiftFunctionFinite(mu, lam), GeometryMismatch);
    }
}
