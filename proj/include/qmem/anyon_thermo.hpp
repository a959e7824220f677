#pragma once

// Anyon energetics and bath-coupling diagnostics: chemical potential from the
// mediated couplings, code thermal energy, spin-boson error rate, the
// adiabaticity margin, and the logarithmic chemical potential of the
// longitudinal-coupling scenario.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magnon_fields.hpp"

namespace qmem {

struct NoiseParams {
    double kappa_n = 0.0;  // rate prefactor (contains the bath coupling B^2)
    int n = 1;             // bath exponent: 1 Ohmic, >= 2 super-Ohmic
    double beta = 1.0;     // inverse temperature
    double omega_c = 1.0;  // cutoff energy

    void validate() const {
        if (kappa_n < 0.0) throw std::invalid_argument("NoiseParams: kappa_n must be >= 0");
        if (n < 1) throw std::invalid_argument("NoiseParams: n must be >= 1");
        if (!(beta > 0.0)) throw std::invalid_argument("NoiseParams: beta must be > 0");
        if (!(omega_c > 0.0)) throw std::invalid_argument("NoiseParams: omega_c must be > 0");
    }
};

// energy cost of inverting one stabilizer: mu = sum_{p' != p} 2 |J_pp'|
inline double chemical_potential(const CouplingMatrix& cm, std::size_t p_index) {
    if (p_index >= cm.size()) throw std::out_of_range("chemical_potential: bad plaquette index");
    std::vector<double> terms;
    terms.reserve(cm.size());
    for (std::size_t j = 0; j < cm.size(); ++j)
        if (j != p_index) terms.push_back(2.0 * std::abs(cm.values[p_index][j]));
    return pairwise_sum(terms);
}

// index of the central plaquette in coupling_matrix's row-major L x L layout
inline std::size_t central_plaquette(int L) {
    const int cx = (L - 1) / 2, cy = (L - 1) / 2;
    return static_cast<std::size_t>(cx) * L + cy;
}

// code thermal energy L^2 mu / (e^{beta mu} + 1)
inline double thermal_energy(int L, double mu, double beta) {
    if (mu < 0.0) throw std::invalid_argument("thermal_energy: mu must be >= 0");
    const double l2 = static_cast<double>(L) * L;
    const double x = beta * mu;
    if (x > 700.0) return l2 * mu * std::exp(-x);  // avoid overflow in e^x
    return l2 * mu / (std::exp(x) + 1.0);
}

// spin-boson rate kappa_n |omega^n / (1 - e^{-beta omega})| e^{-omega/omega_c};
// the removable singularity at omega = 0 evaluates to kappa_1/beta (n = 1) or
// 0 (n >= 2). omega < 0 means energy absorbed from the code. Evaluated in log
// space so the Boltzmann suppression and the cutoff counter-factor combine
// without intermediate overflow.
inline double error_rate(double omega, const NoiseParams& np) {
    np.validate();
    if (np.kappa_n == 0.0) return 0.0;
    if (omega == 0.0) return (np.n == 1) ? np.kappa_n / np.beta : 0.0;
    const double x = np.beta * omega;
    // |1 - e^{-x}| = |expm1(-x)|; for x << -700 the log is -x exactly enough
    const double log_abs_denom = (-x > 700.0) ? -x : std::log(std::abs(std::expm1(-x)));
    const double log_rate = std::log(np.kappa_n) + np.n * std::log(std::abs(omega)) -
                            log_abs_denom - omega / np.omega_c;
    return std::exp(log_rate);
}

struct AdiabaticityResult {
    double ratio = 0.0;  // gamma(-A)/A
    bool satisfied = false;
};

// gamma(-A) << A test; satisfied when the ratio is below the threshold
inline AdiabaticityResult adiabaticity_margin(double A, const NoiseParams& np,
                                              double threshold = 0.1) {
    if (!(A > 0.0)) throw std::invalid_argument("adiabaticity_margin: A must be > 0");
    AdiabaticityResult r;
    r.ratio = error_rate(-A, np) / A;
    r.satisfied = r.ratio < threshold;
    return r;
}

struct LongitudinalMuOptions {
    bool include_constant = true;  // the +2SA term from -SA sum W_i
    double S = 0.5;
};

// Longitudinal-coupling chemical potential: sum over the L x L grid of the
// chi_zz-mediated 1/r^2 couplings, mu = 2 A^2 sum chi_zz_r + optional 2SA.
// Grows as (A^2 T / 4 pi D^2) ln(L/2); the lattice-sum constant is reported
// by longitudinal_mu_constant and checked for L-independence in tests.
inline double longitudinal_mu(int L, double T, double D, double A,
                              const LongitudinalMuOptions& opt = {}) {
    if (L < 4) throw std::invalid_argument("longitudinal_mu: L must be >= 4");
    if (T < 0.0) throw std::invalid_argument("longitudinal_mu: T must be >= 0");
    const int cx = (L - 1) / 2, cy = (L - 1) / 2;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(L) * L);
    const double pref =
        2.0 * A * A * T / (16.0 * std::numbers::pi * std::numbers::pi * D * D);
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y) {
            if (x == cx && y == cy) continue;
            const double r2 = static_cast<double>(x - cx) * (x - cx) +
                              static_cast<double>(y - cy) * (y - cy);
            terms.push_back(pref / r2);
        }
    double mu = pairwise_sum(terms);
    if (opt.include_constant) mu += 2.0 * opt.S * A;
    return mu;
}

// c(L) := [mu(2L) - mu(L)] D^2 / (A^2 T ln 2); tends to 1/(4 pi)
inline double longitudinal_mu_constant(int L, double T, double D, double A) {
    LongitudinalMuOptions no_const{false, 0.0};
    const double d = longitudinal_mu(2 * L, T, D, A, no_const) -
                     longitudinal_mu(L, T, D, A, no_const);
    return d * D * D / (A * A * T * std::numbers::ln2);
}

}  // namespace qmem
