#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlsff/determinant.hpp"
#include "nlsff/errors.hpp"
#include "nlsff/oracles.hpp"

using namespace nlsff;

namespace {

std::vector<cplx> roots_of(const BetheState& st) {
    return std::vector<cplx>(st.roots.begin(), st.roots.end());
}

} // namespace

TEST_CASE("slavnov overlap, continuum") {
    const double c = 2.0, L = 10.0;
    const ModelGeometry g = ModelGeometry::continuum(c, L);

    SUBCASE("N=1 closed form against the one-body integral") {
        const BetheState mu = solve_bae(QuantumNumbers({1}), g); // root 0, e^{i mu L} = 1
        for (double l : {0.37, -1.22, 2.9}) {
            const cplx got = slavnov_overlap(mu, {cplx(l, 0.0)}, g);
            const double m = mu.roots[0];
            const double want = 2.0 * c * std::sin(0.5 * (l - m) * L) / (l - m);
            CHECK(got.real() == doctest::Approx(want).epsilon(1e-10));
            CHECK(std::abs(got.imag()) < 1e-10 * std::abs(want));
        }
    }

    SUBCASE("random on-shell states against the simplex oracle, N <= 2") {
        std::mt19937 rng(101);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int it = 0; it < 20; ++it) {
            const int n = 1 + static_cast<int>(rng() % 2);
            std::vector<long> ells;
            long cur = -2 + static_cast<long>(rng() % 3);
            for (int a = 0; a < n; ++a) {
                ells.push_back(cur);
                cur += 1 + static_cast<long>(rng() % 3);
            }
            const BetheState mu = solve_bae(QuantumNumbers(ells), g);
            std::vector<cplx> lam;
            for (int a = 0; a < n; ++a) lam.push_back(cplx(u(rng) + 3.1 * a, 0.0));
            const cplx det_val = slavnov_overlap(mu, lam, g);
            const cplx oracle = continuum_overlap_oracle(roots_of(mu), lam, c, L);
            CHECK(std::abs(det_val - oracle) < 1e-8 * std::abs(oracle));
        }
    }

    SUBCASE("orthogonality of distinct eigenstates") {
        const BetheState s1 = solve_bae(QuantumNumbers({1, 2}), g);
        const BetheState s2 = solve_bae(QuantumNumbers({-1, 3}), g);
        const cplx ov = slavnov_overlap(s1, roots_of(s2), g);
        const double norms = std::sqrt(gaudin_norm(s1) * gaudin_norm(s2));
        CHECK(std::abs(ov) < 1e-8 * norms);
    }

    SUBCASE("separation guard") {
        const BetheState mu = solve_bae(QuantumNumbers({1}), g);
        CHECK_THROWS_AS(slavnov_overlap(mu, {cplx(mu.roots[0] + 1e-10, 0.0)}, g),
                        SeparationTooSmall);
    }
}

TEST_CASE("slavnov overlap equals the lattice Fock-sum oracle") {
    std::mt19937 rng(211);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int checked = 0;
    for (const long M : {8L, 12L, 16L}) {
        const double delta = 0.5;
        const ModelGeometry g = ModelGeometry::lattice(2.0, delta * M, delta);
        for (int n = 1; n <= 2; ++n) {
            std::vector<long> ells;
            for (int a = 1; a <= n; ++a) ells.push_back(a);
            const BetheState lam_state = solve_bae(QuantumNumbers(ells), g);
            std::vector<cplx> mu;
            for (int a = 0; a < n; ++a) mu.push_back(cplx(u(rng) + 2.2 * a + 0.1, 0.0));
            // The determinant takes the on-shell set as "mu"; the oracle sums
            // over tuples with both sets, conjugating the generic one.
            const cplx oracle = lattice_overlap_oracle(mu, lam_state, g);
            const cplx det_val = std::conj(slavnov_overlap(lam_state, mu, g));
            CHECK(std::abs(det_val - oracle) < 1e-10 * std::abs(oracle));
            ++checked;
        }
    }
    CHECK(checked == 6);
}

TEST_CASE("gaudin norm") {
    const double c = 2.0, L = 10.0;
    const ModelGeometry g = ModelGeometry::continuum(c, L);

    SUBCASE("N=0 is 1, N=1 is cL") {
        CHECK(gaudin_norm(solve_bae(QuantumNumbers(std::vector<long>{}), g)) == 1.0);
        CHECK(gaudin_norm(solve_bae(QuantumNumbers({1}), g)) ==
              doctest::Approx(c * L).epsilon(1e-12));
        CHECK(gaudin_norm(solve_bae(QuantumNumbers({4}), g)) ==
              doctest::Approx(c * L).epsilon(1e-12));
    }

    SUBCASE("N=2 matches the diagonal overlap oracle") {
        const BetheState st = solve_bae(QuantumNumbers({-1, 2}), g);
        const cplx oracle = continuum_overlap_oracle(roots_of(st), roots_of(st), c, L);
        CHECK(gaudin_norm(st) == doctest::Approx(oracle.real()).epsilon(1e-8));
    }

    SUBCASE("norm is the mu -> lambda limit of the scalar product") {
        const BetheState st = solve_bae(QuantumNumbers({1, 3}), g);
        const double norm = gaudin_norm(st);
        // Richardson extrapolation of the Slavnov probe along lambda + eps*r.
        const std::vector<double> dirs = {0.83, -1.41};
        auto probe = [&](double eps) {
            std::vector<cplx> lam;
            for (std::size_t a = 0; a < st.n(); ++a)
                lam.push_back(cplx(st.roots[a] + eps * dirs[a], 0.0));
            return slavnov_overlap(st, lam, g).real();
        };
        const double e1 = 1e-3, e2 = 1e-4, e3 = 1e-5;
        const double p1 = probe(e1), p2 = probe(e2), p3 = probe(e3);
        // quadratic extrapolation to eps = 0
        const double extrap = p3 + (p3 - p2) * (e3 / (e2 - e3)) -
                              ((p2 - p1) / (e1 - e2) - (p3 - p2) / (e2 - e3)) *
                                  (e3 * e2 / (e1 - e3));
        CHECK(std::abs(extrap - norm) < 1e-6 * norm);
    }

    SUBCASE("lattice norms are positive and finite") {
        const ModelGeometry gl = ModelGeometry::lattice(2.0, 10.0, 0.01);
        const BetheState st = solve_bae(QuantumNumbers({1, 2, 5}), gl);
        CHECK(gaudin_norm(st) > 0.0);
    }
}

TEST_CASE("continuum form-factor determinant") {
    const double c = 2.0, L = 10.0;
    const ModelGeometry g = ModelGeometry::continuum(c, L);

    SUBCASE("N=0 closed form") {
        const BetheState mu = solve_bae(QuantumNumbers({2}), g);
        const BetheState vac = solve_bae(QuantumNumbers(std::vector<long>{}), g);
        const cplx got = ff_det_continuum(mu, vac).value;
        const cplx want = cplx(0.0, std::sqrt(c)) * std::exp(cplx(0.0, 0.5 * L * mu.roots[0]));
        CHECK(std::abs(got - want) < 1e-12 * std::abs(want));
    }

    SUBCASE("N=1 and N=2 match the integral oracle") {
        for (int n : {1, 2}) {
            std::vector<long> mu_ells, lam_ells;
            for (int a = 1; a <= n; ++a) lam_ells.push_back(a);
            for (int a = 1; a <= n + 1; ++a) mu_ells.push_back(a == n + 1 ? a + 2 : a);
            const BetheState mu = solve_bae(QuantumNumbers(mu_ells), g);
            const BetheState lam = solve_bae(QuantumNumbers(lam_ells), g);
            const cplx det_val = ff_det_continuum(mu, lam).value;
            const cplx oracle =
                continuum_ff_oracle(roots_of(mu), roots_of(lam), c, L);
            const double tol = (n == 1) ? 1e-8 : 1e-6;
            CHECK(std::abs(det_val - oracle) < tol * std::abs(oracle));
        }
    }

    SUBCASE("modulus invariant under the parity flip") {
        const BetheState mu = solve_bae(QuantumNumbers({1, 2, 4}), g);
        const BetheState lam = solve_bae(QuantumNumbers({1, 2}), g);
        const BetheState mu_f = solve_bae(mu.qn.parity_flipped(), g);
        const BetheState lam_f = solve_bae(lam.qn.parity_flipped(), g);
        const double a = std::abs(ff_det_continuum(mu, lam).value);
        const double b = std::abs(ff_det_continuum(mu_f, lam_f).value);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("lattice form-factor determinant") {
    SUBCASE("N=0, M=8: matches the Fock oracle to O(Delta)") {
        double prev = 0.0;
        for (const double delta : {0.5, 0.25}) {
            const ModelGeometry g = ModelGeometry::lattice(2.0, 8.0 * delta, delta);
            const BetheState mu = solve_bae(QuantumNumbers({1}), g);
            const BetheState vac = solve_bae(QuantumNumbers(std::vector<long>{}), g);
            const cplx det_val = ff_det_lattice(mu, vac, g).value;
            const cplx oracle = lattice_ff_oracle(mu, vac, g);
            const double rel = std::abs(det_val - oracle) / std::abs(oracle);
            CHECK(rel < 2.0 * delta);
            prev = rel;
        }
        (void)prev;
    }

    SUBCASE("N=1: lattice determinant vs Fock oracle shrinks linearly in Delta") {
        OracleLimits lim;
        lim.max_sites = 32; // widen the default guard for the finest point
        double prev = 0.0;
        for (const double delta : {0.5, 0.25, 0.125}) {
            const ModelGeometry g = ModelGeometry::lattice(2.0, 4.0, delta);
            const BetheState mu = solve_bae(QuantumNumbers({1, 2}), g);
            const BetheState lam = solve_bae(QuantumNumbers({1}), g);
            const double rel = std::abs(ff_det_lattice(mu, lam, g).value -
                                        lattice_ff_oracle(mu, lam, g, lim)) /
                               std::abs(lattice_ff_oracle(mu, lam, g, lim));
            if (prev != 0.0) {
                CHECK(prev / rel > 1.4);
                CHECK(prev / rel < 3.0);
            }
            prev = rel;
        }
    }

    SUBCASE("Delta-sweep towards the continuum determinant, N=1 and N=2") {
        const double c = 2.0, L = 10.0;
        const ModelGeometry gc = ModelGeometry::continuum(c, L);
        for (int n : {1, 2}) {
            std::vector<long> mu_ells, lam_ells;
            for (int a = 1; a <= n; ++a) lam_ells.push_back(a);
            for (int a = 1; a <= n + 1; ++a) mu_ells.push_back(a == n + 1 ? a + 1 : a);
            const QuantumNumbers qmu(mu_ells), qlam(lam_ells);
            const cplx target = ff_det_continuum(solve_bae(qmu, gc), solve_bae(qlam, gc)).value;
            double prev = 0.0;
            for (const double delta : {0.02, 0.01, 0.005, 0.0025}) {
                const ModelGeometry gl = ModelGeometry::lattice(c, L, delta);
                const cplx lat =
                    ff_det_lattice(solve_bae(qmu, gl), solve_bae(qlam, gl), gl).value;
                const double err = std::abs(lat - target);
                if (prev != 0.0) {
                    const double ratio = prev / err;
                    CHECK(ratio > 1.6);
                    CHECK(ratio < 2.4);
                }
                prev = err;
            }
        }
    }
}

TEST_CASE("normalized form factor factorization") {
    const double c = 2.0, L = 10.0;
    const ModelGeometry g = ModelGeometry::continuum(c, L);

    SUBCASE("ground -> ground N=1 lies in (0,1]") {
        const BetheState mu = solve_bae(QuantumNumbers({1, 2}), g);
        const BetheState lam = solve_bae(QuantumNumbers({1}), g);
        const NormalizedFFSquared r = normalized_ff_parts(mu, lam);
        CHECK(r.direct > 0.0);
        CHECK(r.direct <= 1.0);
    }

    SUBCASE("direct = smooth x discrete, N <= 3, n <= 1") {
        struct Case {
            std::vector<long> mu_ells;
            std::vector<long> lam_ells;
        };
        const std::vector<Case> cases = {
            {{1, 2}, {1}},            // N=1 ground
            {{1, 3}, {1}},            // N=1, one particle-hole
            {{1, 2, 3}, {1, 2}},      // N=2 ground
            {{1, 2, 5}, {1, 2}},      // N=2, one particle-hole
            {{1, 2, 3, 4}, {1, 2, 3}},// N=3 ground
            {{1, 2, 3, 6}, {1, 2, 3}} // N=3, one particle-hole
        };
        for (const Case& cs : cases) {
            const BetheState mu = solve_bae(QuantumNumbers(cs.mu_ells), g);
            const BetheState lam = solve_bae(QuantumNumbers(cs.lam_ells), g);
            const NormalizedFFSquared r = normalized_ff_parts(mu, lam);
            CHECK(std::abs(r.direct - r.smooth_part * r.discrete_part) < 1e-8 * r.direct);
        }
    }

    SUBCASE("rejects a non-ground lambda state") {
        const BetheState mu = solve_bae(QuantumNumbers({1, 2, 3}), g);
        const BetheState lam = solve_bae(QuantumNumbers({1, 3}), g);
        CHECK_THROWS_AS(normalized_ff_parts(mu, lam), ConfigError);
    }
}
