#include "nlsff/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlsff/errors.hpp"

namespace nlsff {

namespace {

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

void check_distinct(const std::vector<cplx>& v, const char* what) {
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
            if (std::abs(v[a] - v[b]) == 0.0)
                throw CoincidingRapidities(std::string("coinciding rapidities in ") + what);
}

// One exponential-polynomial term coef * x^power * exp(i*freq*x).
struct ExpTerm {
    cplx coef;
    int power;
    cplx freq;
};

// Antiderivative machinery for the ordered-simplex integrals: integrate each
// term from 0 to the next variable, producing terms in that variable.
class TermList {
  public:
    explicit TermList(double upper_bound) : xmax_(upper_bound) {
        terms_.push_back({cplx(1.0, 0.0), 0, cplx(0.0, 0.0)});
    }

    void shift_frequency(cplx k) {
        for (auto& t : terms_) t.freq += k;
    }

    void integrate() {
        std::vector<ExpTerm> out;
        out.reserve(terms_.size() * 2);
        for (const auto& t : terms_) {
            if (std::abs(t.freq) * xmax_ < 2.0)
                integrate_series(t, out);
            else
                integrate_closed(t, out);
        }
        terms_ = std::move(out);
    }

    cplx evaluate(double x) const {
        KahanSumC acc;
        for (const auto& t : terms_)
            acc.add(t.coef * std::pow(x, t.power) * std::exp(cplx(0.0, 1.0) * t.freq * x));
        return acc.value();
    }

  private:
    // int_0^X t^p e^{at} dt with a = i*freq, |a|X >= 2.
    void integrate_closed(const ExpTerm& t, std::vector<ExpTerm>& out) const {
        const cplx a = cplx(0.0, 1.0) * t.freq;
        const int p = t.power;
        double fact = 1.0; // p!/j! built downward from j=p
        cplx apow = a;     // a^{p-j+1}
        double sign = 1.0; // (-1)^{p-j}
        for (int j = p; j >= 0; --j) {
            out.push_back({t.coef * sign * fact / apow, j, t.freq});
            if (j > 0) {
                fact *= j;
                apow *= a;
                sign = -sign;
            }
        }
        // boundary term at 0: -(-1)^p p!/a^{p+1}
        out.push_back({-t.coef * sign * fact / apow, 0, cplx(0.0, 0.0)});
    }

    // Series form for |freq|*X small; removable singularity at freq -> 0.
    void integrate_series(const ExpTerm& t, std::vector<ExpTerm>& out) const {
        const cplx a = cplx(0.0, 1.0) * t.freq;
        cplx num(1.0, 0.0); // a^s / s!
        double tail = 1.0;  // |a X|^s / s!
        for (int s = 0; s < 48; ++s) {
            out.push_back({t.coef * num / static_cast<double>(t.power + s + 1),
                           t.power + s + 1, cplx(0.0, 0.0)});
            num *= a / static_cast<double>(s + 1);
            tail *= std::abs(a) * xmax_ / (s + 1);
            if (tail < 1e-22) break;
        }
    }

    std::vector<ExpTerm> terms_;
    double xmax_;
};

// Ordered-sector amplitude of a permutation: prod_{a<b} of the kinematic
// factors with sgn = -1 (x_a < x_b on the simplex).
cplx ordered_amplitude(const std::vector<cplx>& z, const std::vector<std::size_t>& perm, double c) {
    const cplx ic(0.0, c);
    cplx amp(1.0, 0.0);
    for (std::size_t a = 0; a < z.size(); ++a)
        for (std::size_t b = a + 1; b < z.size(); ++b) {
            const cplx d = z[perm[a]] - z[perm[b]];
            amp *= (d + ic) / d;
        }
    return amp;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

} // namespace

cplx bethe_wavefunction(const WaveFunctionInput& in) {
    const std::size_t n = in.positions.size();
    if (in.rapidities.size() != n)
        throw ConfigError("bethe_wavefunction: positions/rapidities size mismatch");
    check_distinct(in.rapidities, "bethe_wavefunction");
    const cplx ic(0.0, in.c);
    const cplx front = std::pow(cplx(0.0, -std::sqrt(in.c)), static_cast<double>(n));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    KahanSumC acc;
    do {
        cplx term(1.0, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                const cplx d = in.rapidities[perm[a]] - in.rapidities[perm[b]];
                term *= (d - ic * static_cast<double>(sgn(in.positions[a] - in.positions[b]))) / d;
            }
        for (std::size_t a = 0; a < n; ++a)
            term *= std::exp(cplx(0.0, 1.0) * in.rapidities[perm[a]] *
                             (in.positions[a] - 0.5 * in.L));
        acc.add(term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return front * acc.value();
}

cplx continuum_overlap_oracle(const std::vector<cplx>& mu, const std::vector<cplx>& lam,
                              double c, double L, const OracleLimits& lim) {
    const std::size_t n = lam.size();
    if (mu.size() != n) throw ConfigError("overlap oracle: set sizes differ");
    if (n > lim.max_overlap_order)
        throw OrderTooLarge("overlap oracle: N exceeds the cost guard");
    if (n == 0) return cplx(1.0, 0.0);
    check_distinct(mu, "mu");
    check_distinct(lam, "lambda");

    std::vector<cplx> mu_conj(n);
    for (std::size_t a = 0; a < n; ++a) mu_conj[a] = std::conj(mu[a]);

    // x-independent phase: the e^{i z (x - L/2)} tails at -L/2.
    cplx sum_lam(0.0, 0.0), sum_muc(0.0, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        sum_lam += lam[a];
        sum_muc += mu_conj[a];
    }
    const cplx phase0 = std::exp(cplx(0.0, -0.5 * L) * (sum_lam - sum_muc));
    const double cn = std::pow(c, static_cast<double>(n));

    const auto perms = all_permutations(n);
    std::vector<cplx> amp_lam(perms.size()), amp_mu(perms.size());
    for (std::size_t i = 0; i < perms.size(); ++i) {
        amp_lam[i] = ordered_amplitude(lam, perms[i], c);
        amp_mu[i] = std::conj(ordered_amplitude(mu, perms[i], c));
    }

    KahanSumC acc;
    for (std::size_t si = 0; si < perms.size(); ++si) {
        for (std::size_t ti = 0; ti < perms.size(); ++ti) {
            TermList terms(L);
            for (std::size_t a = 0; a < n; ++a) {
                terms.shift_frequency(lam[perms[si][a]] - mu_conj[perms[ti][a]]);
                terms.integrate();
            }
            acc.add(amp_lam[si] * amp_mu[ti] * terms.evaluate(L));
        }
    }
    return cn * phase0 * acc.value();
}

cplx continuum_ff_oracle(const std::vector<cplx>& mu, const std::vector<cplx>& lam,
                         double c, double L, const OracleLimits& lim) {
    const std::size_t n = lam.size();
    if (mu.size() != n + 1) throw ConfigError("ff oracle: mu must have N+1 rapidities");
    if (n > lim.max_ff_order) throw OrderTooLarge("ff oracle: N exceeds the cost guard");
    check_distinct(mu, "mu");
    check_distinct(lam, "lambda");

    std::vector<cplx> mu_conj(n + 1);
    for (std::size_t a = 0; a <= n; ++a) mu_conj[a] = std::conj(mu[a]);

    cplx sum_lam(0.0, 0.0), sum_muc(0.0, 0.0);
    for (std::size_t a = 0; a < n; ++a) sum_lam += lam[a];
    for (std::size_t a = 0; a <= n; ++a) sum_muc += mu_conj[a];
    const cplx phase0 = std::exp(cplx(0.0, -0.5 * L) * (sum_lam - sum_muc));
    // (-i sqrt c)^N conj((-i sqrt c)^{N+1}) = i sqrt(c) c^N
    const cplx front = cplx(0.0, std::sqrt(c)) * std::pow(c, static_cast<double>(n));

    const auto perms_lam = all_permutations(n);
    const auto perms_mu = all_permutations(n + 1);
    std::vector<cplx> amp_lam(perms_lam.size()), amp_mu(perms_mu.size());
    for (std::size_t i = 0; i < perms_lam.size(); ++i)
        amp_lam[i] = ordered_amplitude(lam, perms_lam[i], c);
    for (std::size_t i = 0; i < perms_mu.size(); ++i)
        amp_mu[i] = std::conj(ordered_amplitude(mu, perms_mu[i], c));

    KahanSumC acc;
    for (std::size_t si = 0; si < perms_lam.size(); ++si) {
        for (std::size_t ti = 0; ti < perms_mu.size(); ++ti) {
            // y_1 = 0 carries mu_{tau(1)}; positions x_a pair lam_{sigma(a)}
            // with conj(mu_{tau(a+1)}).
            TermList terms(L);
            for (std::size_t a = 0; a < n; ++a) {
                terms.shift_frequency(lam[perms_lam[si][a]] - mu_conj[perms_mu[ti][a + 1]]);
                terms.integrate();
            }
            acc.add(amp_lam[si] * amp_mu[ti] * (n == 0 ? cplx(1.0, 0.0) : terms.evaluate(L)));
        }
    }
    return front * phase0 * acc.value();
}

namespace {

// Pairwise single-site factors: alpha(lambda) collects one (odd, even) site
// pair below the particle, alphabar one pair above.
cplx alpha_site(cplx lam, double c, double delta) {
    const cplx t = cplx(0.0, 0.5 * delta) * lam;
    const double u = 0.25 * c * delta;
    return (1.0 - u + t) * (1.0 + u + t);
}

} // namespace

cplx lattice_f(const LatticeTuple& t, const std::vector<cplx>& rapidities,
               const ModelGeometry& geometry) {
    const LatticeData& ld = geometry.lattice_data();
    const double c = geometry.c();
    const double delta = ld.delta;
    const std::size_t n = rapidities.size();
    if (t.n.size() != n) throw ConfigError("lattice_f: tuple size mismatch");
    for (std::size_t a = 0; a < n; ++a) {
        if (t.n[a] < 1 || t.n[a] > ld.M) throw ConfigError("lattice_f: site out of range");
        if (a > 0 && t.n[a] < t.n[a - 1]) throw ConfigError("lattice_f: tuple not increasing");
    }
    check_distinct(rapidities, "lattice_f");

    std::vector<cplx> log_alpha(n), log_alphabar(n), site_par(n);
    for (std::size_t j = 0; j < n; ++j) {
        log_alpha[j] = std::log(alpha_site(rapidities[j], c, delta));
        log_alphabar[j] = std::log(alpha_site(-rapidities[j], c, delta));
    }

    const cplx ic(0.0, c);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    KahanSumC acc;
    do {
        cplx log_pow(0.0, 0.0);
        cplx term(1.0, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            const long na = t.n[a];
            const cplx lam = rapidities[perm[a]];
            log_pow += static_cast<double>((na - 1) / 2) * log_alpha[perm[a]];
            log_pow += static_cast<double>((ld.M - na) / 2) * log_alphabar[perm[a]];
            const double par = (na % 2 == 0) ? 1.0 : -1.0;
            term *= 1.0 - par * delta * (0.25 * c - cplx(0.0, 0.5) * lam);
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                const cplx d = rapidities[perm[a]] - rapidities[perm[b]];
                term *= (d + ic * static_cast<double>(sgn(static_cast<double>(t.n[b] - t.n[a])))) / d;
            }
        acc.add(term * std::exp(log_pow));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc.value();
}

namespace {

bool next_weakly_increasing(std::vector<long>& n, long M) {
    const std::size_t k = n.size();
    for (std::size_t i = k; i-- > 0;) {
        if (n[i] < M) {
            ++n[i];
            for (std::size_t j = i + 1; j < k; ++j) n[j] = n[i];
            return true;
        }
    }
    return false;
}

// prod over occupied sites of prod_{p=0}^{mult-1} (Z_site + p c Delta/4)/(p+1).
double tuple_weight(const std::vector<long>& n, double c, double delta) {
    double w = 1.0;
    std::size_t i = 0;
    while (i < n.size()) {
        std::size_t j = i;
        while (j < n.size() && n[j] == n[i]) ++j;
        const double z = 1.0 + ((n[i] % 2 == 0) ? 1.0 : -1.0) * 0.25 * c * delta;
        for (std::size_t p = 0; p < j - i; ++p)
            w *= (z + 0.25 * static_cast<double>(p) * delta * c) / static_cast<double>(p + 1);
        i = j;
    }
    return w;
}

void lattice_cost_guard(const ModelGeometry& g, std::size_t order, const OracleLimits& lim) {
    if (!g.is_lattice()) throw RegimeMismatch("lattice oracle needs a lattice geometry");
    if (g.lattice_data().M > lim.max_sites)
        throw CostGuardExceeded("lattice oracle: M exceeds the cost guard");
    if (order > lim.max_lattice_order)
        throw CostGuardExceeded("lattice oracle: N exceeds the cost guard");
}

} // namespace

cplx lattice_overlap_oracle(const std::vector<cplx>& mu, const BetheState& lam_state,
                            const ModelGeometry& geometry, const OracleLimits& lim) {
    const std::size_t n = lam_state.n();
    if (mu.size() != n) throw ConfigError("lattice overlap oracle: set sizes differ");
    lattice_cost_guard(geometry, n, lim);
    if (n == 0) return cplx(1.0, 0.0);
    check_distinct(mu, "mu");

    const LatticeData& ld = geometry.lattice_data();
    std::vector<cplx> lam(lam_state.roots.begin(), lam_state.roots.end());

    std::vector<long> tup(n, 1);
    KahanSumC acc;
    do {
        const LatticeTuple t{tup};
        const cplx fm = lattice_f(t, mu, geometry);
        const cplx fl = lattice_f(t, lam, geometry);
        acc.add(std::conj(fm) * fl * tuple_weight(tup, geometry.c(), ld.delta));
    } while (next_weakly_increasing(tup, ld.M));
    return std::pow(ld.delta * geometry.c(), static_cast<double>(n)) * acc.value();
}

cplx lattice_ff_oracle(const BetheState& mu_state, const BetheState& lam_state,
                       const ModelGeometry& geometry, const OracleLimits& lim) {
    const std::size_t n = lam_state.n();
    if (mu_state.n() != n + 1)
        throw ConfigError("lattice ff oracle: mu-state must have N+1 roots");
    lattice_cost_guard(geometry, n, lim);

    const LatticeData& ld = geometry.lattice_data();
    const double c = geometry.c();
    std::vector<cplx> mu(mu_state.roots.begin(), mu_state.roots.end());
    std::vector<cplx> lam(lam_state.roots.begin(), lam_state.roots.end());

    std::vector<long> tup(n, 1);
    std::vector<long> ext(n + 1);
    KahanSumC acc;
    bool more = true;
    while (more) {
        std::copy(tup.begin(), tup.end(), ext.begin());
        ext[n] = ld.M; // the conjugated-field insertion occupies the last site
        const cplx fm = lattice_f(LatticeTuple{ext}, mu, geometry);
        const cplx fl = n == 0 ? cplx(1.0, 0.0) : lattice_f(LatticeTuple{tup}, lam, geometry);
        acc.add(std::conj(fm) * fl * tuple_weight(ext, c, ld.delta));
        more = n > 0 && next_weakly_increasing(tup, ld.M);
        if (n == 0) break;
    }
    const cplx core = 0.5 * std::pow(ld.delta * c, static_cast<double>(n + 1)) * acc.value();
    return cplx(0.0, 2.0) / (ld.delta * std::sqrt(c)) * core;
}

} // namespace nlsff
