#pragma once

// Magnon dispersion, static susceptibilities, magnetic length, and the
// mediated plaquette-coupling matrix. Units: k_B = hbar = 1, lattice constant
// a = 1, energies in units of J unless stated. The symmetry-breaking field
// enters as +h_z sum_i S_i^z, so the ordered ground sector has S^z = -S
// (Holstein-Primakoff convention).

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmem {

struct GaplessDivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FMParams {
    double J = 1.0;    // exchange energy, > 0 (ferromagnetic)
    double S = 0.5;    // spin magnitude
    double h_z = 0.0;  // symmetry-breaking field energy, >= 0
    int Lambda = 32;   // linear lattice size (sites), periodic boundaries
    double a = 1.0;    // lattice constant
    double T = 0.0;    // temperature (energy units)

    void validate() const {
        if (!(J > 0.0)) throw std::invalid_argument("FMParams: J must be > 0");
        if (h_z < 0.0) throw std::invalid_argument("FMParams: h_z must be >= 0");
        if (Lambda < 2) throw std::invalid_argument("FMParams: Lambda must be >= 2");
        if (!(S > 0.0)) throw std::invalid_argument("FMParams: S must be > 0");
    }
};

using Vec3 = std::array<double, 3>;

// omega_k = 4JS [3 - cos kx - cos ky - cos kz]
inline double dispersion(const Vec3& k, const FMParams& p) {
    return 4.0 * p.J * p.S * (3.0 - std::cos(k[0]) - std::cos(k[1]) - std::cos(k[2]));
}

// gapped magnon energy eps_k = omega_k + h_z
inline double magnon_energy(const Vec3& k, const FMParams& p) {
    return dispersion(k, p) + p.h_z;
}

// one-magnon transverse susceptibility, small-q form S / (2JS q^2 + h_z)
inline double chi_xx_q(const Vec3& q, const FMParams& p) {
    const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    return p.S / (2.0 * p.J * p.S * q2 + p.h_z);
}

// screening length sqrt(rho / (S h_z)); rho defaults to the one-magnon
// stiffness 2JS^2, overridable for renormalized (M, rho) inputs
inline double magnetic_length(const FMParams& p, double rho = -1.0) {
    if (!(p.h_z > 0.0)) throw std::domain_error("magnetic_length: requires h_z > 0");
    if (rho < 0.0) rho = 2.0 * p.J * p.S * p.S;
    return std::sqrt(rho / (p.S * p.h_z));
}

// continuum transverse susceptibility exp(-r/L_h) / (8 pi J r)
inline double chi_xx_r(double r, const FMParams& p) {
    if (!(r > 0.0)) throw std::domain_error("chi_xx_r: requires r > 0");
    const double lh = (p.h_z > 0.0) ? magnetic_length(p) : std::numeric_limits<double>::infinity();
    return std::exp(-r / lh) / (8.0 * std::numbers::pi * p.J * r);
}

struct BZOptions {
    // Quadrature grid is (refine * Lambda)^3 points, k_i = 2 pi n / (refine *
    // Lambda). refine = 1 is the finite periodic box; larger values estimate
    // the thermodynamic-limit Brillouin-zone integral (refine = 8 puts the
    // grid spacing well inside the 1/L_h peak for the parameter ranges used
    // here, ~1.3e8 terms at Lambda = 64).
    int refine = 1;
    // The k = 0 term S/h_z requires h_z > 0; it is a uniform finite-size
    // background ~ S/(h_z M^3) that vanishes in the thermodynamic limit, and
    // can be excluded to approximate the infinite-volume transform.
    bool include_k0 = true;
};

// (1/M^3) sum_k S/eps_k cos(k.r) over the discrete BZ with the full cosine
// dispersion, M = refine * Lambda. Batch form: one pass over the grid
// evaluates all displacement vectors.
inline std::vector<double> chi_xx_r_lattice_batch(const std::vector<std::array<int, 3>>& rs,
                                                  const FMParams& p, const BZOptions& opt = {}) {
    p.validate();
    if (p.h_z <= 0.0 && opt.include_k0)
        throw GaplessDivergenceError(
            "chi_xx_r_lattice: k = 0 term undefined at h_z = 0; set h_z > 0 or exclude k0");
    const int M = p.Lambda * std::max(1, opt.refine);
    const double step = 2.0 * std::numbers::pi / M;
    const double JS4 = 4.0 * p.J * p.S;

    std::vector<double> cos_base(M);
    for (int n = 0; n < M; ++n) cos_base[n] = std::cos(step * n);

    const std::size_t nr = rs.size();
    // per-kx slice accumulators, combined pairwise in slice order
    std::vector<std::vector<double>> slice(nr, std::vector<double>(M, 0.0));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int nx = 0; nx < M; ++nx) {
        std::vector<double> acc_cos(nr, 0.0), acc_sin(nr, 0.0);
        std::vector<double> cys(nr), sys(nr);
        for (int ny = 0; ny < M; ++ny) {
            const double base_xy = 2.0 - cos_base[nx] - cos_base[ny];
            for (std::size_t ir = 0; ir < nr; ++ir) {
                const double phi = step * (ny * rs[ir][1]);
                cys[ir] = std::cos(phi);
                sys[ir] = std::sin(phi);
            }
            for (int nz = 0; nz < M; ++nz) {
                if (nx == 0 && ny == 0 && nz == 0 && !opt.include_k0) continue;
                const double eps = JS4 * (base_xy + 1.0 - cos_base[nz]) + p.h_z;
                const double w = p.S / eps;
                for (std::size_t ir = 0; ir < nr; ++ir) {
                    const double phi_z = step * (nz * rs[ir][2]);
                    // cos(kx rx + ky ry + kz rz) accumulated via y/z phases
                    const double cyz = cys[ir] * std::cos(phi_z) - sys[ir] * std::sin(phi_z);
                    const double syz = sys[ir] * std::cos(phi_z) + cys[ir] * std::sin(phi_z);
                    acc_cos[ir] += w * cyz;
                    acc_sin[ir] += w * syz;
                }
            }
        }
        for (std::size_t ir = 0; ir < nr; ++ir) {
            const double phi_x = step * (nx * rs[ir][0]);
            slice[ir][nx] = std::cos(phi_x) * acc_cos[ir] - std::sin(phi_x) * acc_sin[ir];
        }
    }

    std::vector<double> out(nr);
    const double vol = static_cast<double>(M) * M * M;
    for (std::size_t ir = 0; ir < nr; ++ir) out[ir] = pairwise_sum(slice[ir]) / vol;
    return out;
}

inline double chi_xx_r_lattice(const std::array<int, 3>& r, const FMParams& p,
                               const BZOptions& opt = {}) {
    return chi_xx_r_lattice_batch({r}, p, opt)[0];
}

// longitudinal susceptibility T / (8 D^2 |q|), D = 2JS; valid for
// h_z << D q^2 << T, violations reported through the warning sink
inline double chi_zz_q(const Vec3& q, const FMParams& p, std::string* warning = nullptr) {
    const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    if (qn == 0.0) throw std::domain_error("chi_zz_q: diverges at q = 0");
    const double D = 2.0 * p.J * p.S;
    if (warning) {
        warning->clear();
        const double dq2 = D * qn * qn;
        if (!(p.h_z * 10.0 <= dq2))
            *warning += "chi_zz_q: outside validity window (h_z not << D q^2); ";
        if (!(dq2 * 10.0 <= p.T)) *warning += "chi_zz_q: outside validity window (D q^2 not << T); ";
    }
    return p.T / (8.0 * D * D * qn);
}

// continuum real-space longitudinal susceptibility T / (16 pi^2 D^2 r^2)
inline double chi_zz_r(double r, const FMParams& p) {
    if (!(r > 0.0)) throw std::domain_error("chi_zz_r: requires r > 0");
    const double D = 2.0 * p.J * p.S;
    return p.T / (16.0 * std::numbers::pi * std::numbers::pi * D * D * r * r);
}

// magnon gap shift from the code's longitudinal backaction: h_z' - h_z = A L^2 / Lambda^3
inline double gap_shift(double A, int L, const FMParams& p) {
    const double ns = static_cast<double>(p.Lambda) * p.Lambda * p.Lambda;
    return A * static_cast<double>(L) * L / ns;
}

// Symmetric matrix of mediated plaquette couplings on an L x L integer grid:
// J_pp' = -(A^2 / 8 pi J) exp(-|R_p - R_p'| / L_h) / |R_p - R_p'|, diagonal 0.
struct CouplingMatrix {
    std::vector<std::array<double, 2>> positions;
    std::vector<std::vector<double>> values;

    std::size_t size() const { return positions.size(); }

    void check_invariants() const {
        for (std::size_t i = 0; i < size(); ++i) {
            if (values[i][i] != 0.0) throw std::logic_error("CouplingMatrix: nonzero diagonal");
            for (std::size_t j = i + 1; j < size(); ++j) {
                if (!(values[i][j] < 0.0))
                    throw std::logic_error("CouplingMatrix: off-diagonal entries must be < 0");
                if (values[i][j] != values[j][i])
                    throw std::logic_error("CouplingMatrix: must be symmetric");
            }
        }
    }
};

inline CouplingMatrix coupling_matrix(double A, int L, const FMParams& p) {
    if (L < 2) throw std::invalid_argument("coupling_matrix: L must be >= 2");
    const double lh = (p.h_z > 0.0) ? magnetic_length(p) : std::numeric_limits<double>::infinity();
    CouplingMatrix cm;
    cm.positions.reserve(static_cast<std::size_t>(L) * L);
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y)
            cm.positions.push_back({static_cast<double>(x), static_cast<double>(y)});
    const std::size_t n = cm.positions.size();
    cm.values.assign(n, std::vector<double>(n, 0.0));
    const double pref = -A * A / (8.0 * std::numbers::pi * p.J);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = cm.positions[i][0] - cm.positions[j][0];
            const double dy = cm.positions[i][1] - cm.positions[j][1];
            const double r = std::sqrt(dx * dx + dy * dy);
            const double v = pref * std::exp(-r / lh) / r;
            cm.values[i][j] = v;
            cm.values[j][i] = v;
        }
    return cm;
}

}  // namespace qmem
