#include <catch2/catch_amalgamated.hpp>

#include "qmem/anyon_thermo.hpp"
#include "qmem/numerics.hpp"

using namespace qmem;
using Catch::Approx;

TEST_CASE("chemical potential from the coupling matrix") {
    // single-plaquette code: empty sum
    CouplingMatrix one;
    one.positions = {{0.0, 0.0}};
    one.values = {{0.0}};
    CHECK(chemical_potential(one, 0) == 0.0);

    FMParams p;
    p.J = 1.0;
    p.S = 0.5;
    p.h_z = 0.0;  // L_h >> L
    const double A = 0.1;

    // disk approximation mu ~ A^2 L / (4J), within 15% for L >= 16
    for (int L : {16, 24, 32}) {
        auto cm = coupling_matrix(A, L, p);
        const double mu = chemical_potential(cm, central_plaquette(L));
        CHECK(mu == Approx(A * A * L / (4.0 * p.J)).epsilon(0.15));
    }

    // linear growth: fit residual < 3% over L in {8, 16, 24, 32}
    std::vector<double> Ls{8, 16, 24, 32}, mus;
    for (double L : Ls) {
        auto cm = coupling_matrix(A, static_cast<int>(L), p);
        mus.push_back(chemical_potential(cm, central_plaquette(static_cast<int>(L))));
    }
    auto fit = linear_fit(Ls, mus);
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        const double pred = fit.intercept + fit.slope * Ls[i];
        CHECK(std::abs(pred / mus[i] - 1.0) < 0.03);
    }
    CHECK(fit.slope > 0.0);

    CHECK_THROWS_AS(chemical_potential(one, 3), std::out_of_range);
}

TEST_CASE("thermal energy") {
    // high-temperature limit L^2 mu / 2
    CHECK(thermal_energy(8, 1e-9, 1.0) == Approx(64.0 * 1e-9 / 2.0).epsilon(1e-6));
    // beta mu = 10, L = 16, mu = 1
    CHECK(thermal_energy(16, 1.0, 10.0) == Approx(256.0 / (std::exp(10.0) + 1.0)));
    CHECK(thermal_energy(16, 1.0, 10.0) == Approx(1.162e-2).epsilon(1e-3));
    // mu ~ L at fixed beta: vanishes as L -> infinity
    const double a = 0.5, beta = 2.0;
    double prev = thermal_energy(8, a * 8, beta);
    for (int L : {16, 32, 64}) {
        const double cur = thermal_energy(L, a * L, beta);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-20);
    CHECK_THROWS_AS(thermal_energy(4, -1.0, 1.0), std::invalid_argument);

    // non-monotone in L: rises then falls; the maximum moves left as beta grows
    auto argmax_L = [&](double b) {
        int best = 1;
        double bestv = -1;
        for (int L = 1; L <= 200; ++L) {
            const double v = thermal_energy(L, 0.05 * L, b);
            if (v > bestv) {
                bestv = v;
                best = L;
            }
        }
        return best;
    };
    const int m1 = argmax_L(1.0), m2 = argmax_L(2.0), m3 = argmax_L(4.0);
    CHECK(m1 > 1);
    CHECK(m2 < m1);
    CHECK(m3 < m2);
    // three-point rise-then-fall at beta = 1
    const double lo = thermal_energy(std::max(1, m1 / 4), 0.05 * std::max(1, m1 / 4), 1.0);
    const double mid = thermal_energy(m1, 0.05 * m1, 1.0);
    const double hi = thermal_energy(m1 * 4, 0.05 * m1 * 4, 1.0);
    CHECK(mid > lo);
    CHECK(mid > hi);
}

TEST_CASE("spin-boson error rate") {
    NoiseParams np;
    np.kappa_n = 1.0;
    np.n = 1;
    np.beta = 1.0;
    np.omega_c = 10.0;

    // omega -> 0 limit kappa_1 / beta, continuous within 1e-10
    CHECK(error_rate(0.0, np) == Approx(1.0));
    CHECK(std::abs(error_rate(1e-8, np) - 1.0) < 1e-8);
    CHECK(std::abs(error_rate(-1e-8, np) - 1.0) < 1e-8);
    CHECK(std::abs(error_rate(1e-8, np) - error_rate(0.0, np)) < 1e-7);

    NoiseParams np2 = np;
    np2.n = 2;
    CHECK(error_rate(0.0, np2) == 0.0);
    // super-Ohmic small-omega behaviour ~ omega/beta -> 0
    CHECK(error_rate(1e-6, np2) == Approx(1e-6 / np2.beta).epsilon(1e-3));
    CHECK(error_rate(1e-9, np2) < 2e-9);

    // direct evaluation at omega = 1: |1/(1 - e^{-1})| e^{-0.1}
    const double expect = 1.0 / (-std::expm1(-1.0)) * std::exp(-0.1);
    CHECK(error_rate(1.0, np) == Approx(expect).epsilon(1e-12));
    CHECK(expect == Approx(1.43143).epsilon(1e-5));

    // detailed-balance identity rate(w)/rate(-w) = e^{beta w} e^{-2w/omega_c}
    for (double w : {0.1, 0.7, 2.0, 5.0}) {
        const double lhs = error_rate(w, np) / error_rate(-w, np);
        const double rhs = std::exp(np.beta * w) * std::exp(-2.0 * w / np.omega_c);
        CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }

    CHECK_THROWS_AS(error_rate(1.0, NoiseParams{1.0, 0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("adiabaticity margin") {
    NoiseParams np;
    np.kappa_n = 0.0;
    np.n = 1;
    np.beta = 5.0;
    np.omega_c = 10.0;
    auto r0 = adiabaticity_margin(0.2, np);
    CHECK(r0.ratio == 0.0);
    CHECK(r0.satisfied);

    // beta A >> 1 asymptotics: gamma(-A) ~ kappa A e^{-beta A} e^{A/omega_c}
    np.kappa_n = 1.0;
    np.beta = 50.0;
    const double A = 1.0;
    const double asym = np.kappa_n * A * std::exp(-np.beta * A) * std::exp(A / np.omega_c);
    auto r1 = adiabaticity_margin(A, np);
    CHECK(r1.ratio == Approx(asym / A).epsilon(1e-10));
    CHECK(r1.ratio < 1e-20);
    CHECK(r1.satisfied);

    // monotone in kappa
    NoiseParams np2 = np;
    np2.kappa_n = 2.0;
    CHECK(adiabaticity_margin(A, np2).ratio == Approx(2.0 * r1.ratio));
    CHECK_THROWS_AS(adiabaticity_margin(0.0, np), std::invalid_argument);
}

TEST_CASE("longitudinal chemical potential") {
    const double T = 0.2, D = 1.0, A = 0.05;
    LongitudinalMuOptions bare{false, 0.0};

    // mediated part vanishes at T = 0; the optional 2SA constant is separate
    CHECK(longitudinal_mu(16, 0.0, D, A, bare) == 0.0);
    LongitudinalMuOptions with_const;  // default S = 0.5, include
    CHECK(longitudinal_mu(16, 0.0, D, A, with_const) == Approx(2.0 * 0.5 * A));

    // A^2 law on the mediated part
    CHECK(longitudinal_mu(32, T, D, 2 * A, bare) ==
          Approx(4.0 * longitudinal_mu(32, T, D, A, bare)).epsilon(1e-12));

    // log law: mu(2L) - mu(L) constant in L (annulus sum of 1/r^2)
    std::vector<double> diffs;
    for (int L : {16, 32, 64})
        diffs.push_back(longitudinal_mu(2 * L, T, D, A, bare) -
                        longitudinal_mu(L, T, D, A, bare));
    for (double d : diffs) CHECK(d == Approx(diffs[0]).epsilon(0.05));

    // reported lattice-sum constant tends to 1/(4 pi)
    const double c64 = longitudinal_mu_constant(64, T, D, A);
    CHECK(c64 == Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(0.05));

    CHECK_THROWS_AS(longitudinal_mu(2, T, D, A), std::invalid_argument);
}
