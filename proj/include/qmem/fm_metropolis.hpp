#pragma once

// Classical 3D Heisenberg ferromagnet with the code-plane transverse forcing,
// single-spin Metropolis updates.
//
//   E = -J sum_<ij> S_i.S_j + h_z sum_i S_i^z + A sum_{p in code plane} S_p^x
//
// (all stabilizers at +1; the +h_z convention orders the lattice along -z).
// Updates use a symmetric cone proposal around the current direction whose
// half-angle is auto-tuned toward 50% acceptance during thermalization and
// frozen for measurement. RNG: counter-based splitmix64 streams keyed by
// (seed, sweep, site, draw) — trajectories are bit-identical for a given seed
// regardless of thread count, since checkerboard colors only read
// opposite-color neighbors. Sweep = even-parity pass then odd-parity pass.

#include <cstdint>
#include <optional>

#include "magnon_fields.hpp"
#include "numerics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmem {

struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpinLattice {
    int Lambda = 0;
    std::vector<double> sx, sy, sz;  // unit vectors, struct-of-arrays

    explicit SpinLattice(int lambda) : Lambda(lambda) {
        if (lambda < 2) throw std::invalid_argument("SpinLattice: Lambda must be >= 2");
        const std::size_t n = static_cast<std::size_t>(lambda) * lambda * lambda;
        sx.assign(n, 0.0);
        sy.assign(n, 0.0);
        sz.assign(n, -1.0);  // saturated along the ordering direction
    }

    std::size_t size() const { return sx.size(); }
    std::size_t index(int x, int y, int z) const {
        return (static_cast<std::size_t>(x) * Lambda + y) * Lambda + z;
    }

    void randomize(std::uint64_t seed) {
        for (std::size_t i = 0; i < size(); ++i) {
            CounterRng rng(seed, i);
            const double z = 2.0 * rng.uniform(0) - 1.0;
            const double phi = 2.0 * std::numbers::pi * rng.uniform(1);
            const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
            sx[i] = rxy * std::cos(phi);
            sy[i] = rxy * std::sin(phi);
            sz[i] = z;
        }
    }

    double max_norm_error() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            worst = std::max(worst,
                             std::abs(sx[i] * sx[i] + sy[i] * sy[i] + sz[i] * sz[i] - 1.0));
        return worst;
    }
};

struct CodeCoupling {
    double A = 0.0;  // transverse field strength on the code plane
    int L = 0;       // code patch is L x L sites
    int plane_z = 0;
    int x0 = 0, y0 = 0;  // lower corner of the patch

    bool contains(int x, int y, int z) const {
        return A != 0.0 && z == plane_z && x >= x0 && x < x0 + L && y >= y0 && y < y0 + L;
    }
};

struct MCConfig {
    double temperature = 1.0;
    long sweeps_thermalize = 1000;
    long sweeps_measure = 1000;
    std::uint64_t seed = 1;
    double cone_half_angle = 1.0;  // radians; pi with uniform_sphere = true
    bool uniform_sphere = false;
    bool auto_tune = true;  // tune the cone toward 50% acceptance while thermalizing
    CodeCoupling code;

    void validate(int lambda) const {
        if (!(temperature > 0.0)) throw std::invalid_argument("MCConfig: temperature must be > 0");
        if (sweeps_thermalize < 0 || sweeps_measure < 1)
            throw std::invalid_argument("MCConfig: sweep counts out of range");
        if (code.L > lambda) throw std::invalid_argument("MCConfig: code larger than lattice");
    }
};

// total energy by full recomputation (each bond once)
inline double energy(const SpinLattice& lat, const MCConfig& cfg, const FMParams& p) {
    const int L = lat.Lambda;
    std::vector<double> terms;
    terms.reserve(lat.size());
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y)
            for (int z = 0; z < L; ++z) {
                const std::size_t i = lat.index(x, y, z);
                const std::size_t xp = lat.index((x + 1) % L, y, z);
                const std::size_t yp = lat.index(x, (y + 1) % L, z);
                const std::size_t zp = lat.index(x, y, (z + 1) % L);
                double e = 0.0;
                for (std::size_t j : {xp, yp, zp})
                    e -= p.J * (lat.sx[i] * lat.sx[j] + lat.sy[i] * lat.sy[j] +
                                lat.sz[i] * lat.sz[j]);
                e += p.h_z * lat.sz[i];
                if (cfg.code.contains(x, y, z)) e += cfg.code.A * lat.sx[i];
                terms.push_back(e);
            }
    return pairwise_sum(terms);
}

struct SweepResult {
    double acceptance = 0.0;
    double delta_e = 0.0;  // accumulated energy change of accepted moves
};

namespace detail_mc {

// new direction uniform in the spherical cap of half-angle theta around n.
// The azimuth is drawn by Marsaglia circle rejection instead of sincos; the
// draw index advances deterministically with the rejections.
inline void cone_propose(double nx, double ny, double nz, double cos_theta, const CounterRng& rng,
                         double& ox, double& oy, double& oz) {
    const double c = 1.0 - rng.uniform(0) * (1.0 - cos_theta);  // cos(angle), uniform in cap
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double cphi = 1.0, sphi = 0.0;
    for (std::uint64_t draw = 1;; draw += 2) {
        const double v1 = 2.0 * rng.uniform(draw) - 1.0;
        const double v2 = 2.0 * rng.uniform(draw + 1) - 1.0;
        const double rr = v1 * v1 + v2 * v2;
        if (rr > 0.0 && rr < 1.0) {
            cphi = (v1 * v1 - v2 * v2) / rr;
            sphi = 2.0 * v1 * v2 / rr;
            break;
        }
    }
    // orthonormal frame around n, seeded from its smallest component
    double ax, ay, az;
    if (std::abs(nx) <= std::abs(ny) && std::abs(nx) <= std::abs(nz)) {
        ax = 0.0; ay = -nz; az = ny;
    } else if (std::abs(ny) <= std::abs(nz)) {
        ax = nz; ay = 0.0; az = -nx;
    } else {
        ax = -ny; ay = nx; az = 0.0;
    }
    const double an = 1.0 / std::sqrt(ax * ax + ay * ay + az * az);
    ax *= an; ay *= an; az *= an;
    const double bx = ny * az - nz * ay;
    const double by = nz * ax - nx * az;
    const double bz = nx * ay - ny * ax;
    const double e1 = s * cphi, e2 = s * sphi;
    ox = c * nx + e1 * ax + e2 * bx;
    oy = c * ny + e1 * ay + e2 * by;
    oz = c * nz + e1 * az + e2 * bz;
    const double inv = 1.0 / std::sqrt(ox * ox + oy * oy + oz * oz);
    ox *= inv; oy *= inv; oz *= inv;
}

}  // namespace detail_mc

// One sweep = every site attempted once (even parity, then odd parity).
// Odd lattices cannot be two-colored consistently across the periodic
// boundary, so they take the serial path regardless of OpenMP.
inline SweepResult metropolis_sweep(SpinLattice& lat, const MCConfig& cfg, const FMParams& p,
                                    long sweep_index) {
    const int L = lat.Lambda;
    const double invT = 1.0 / cfg.temperature;
    const double cos_theta =
        cfg.uniform_sphere ? -1.0 : std::cos(cfg.cone_half_angle);
    long accepted = 0;
    double de_total = 0.0;
    const bool parallel_ok = (L % 2 == 0);

    for (int parity = 0; parity < 2; ++parity) {
        long acc_par = 0;
        double de_par = 0.0;
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) reduction(+ : acc_par, de_par) \
    if (parallel_ok)
#endif
        for (int x = 0; x < L; ++x)
            for (int y = 0; y < L; ++y) {
                for (int z = (x + y) % 2 == parity ? 0 : 1; z < L; z += 2) {
                    // (x + y + z) % 2 == parity on this z-stride
                    const std::size_t i = lat.index(x, y, z);
                    const std::size_t nb[6] = {
                        lat.index(x == L - 1 ? 0 : x + 1, y, z),
                        lat.index(x == 0 ? L - 1 : x - 1, y, z),
                        lat.index(x, y == L - 1 ? 0 : y + 1, z),
                        lat.index(x, y == 0 ? L - 1 : y - 1, z),
                        lat.index(x, y, z == L - 1 ? 0 : z + 1),
                        lat.index(x, y, z == 0 ? L - 1 : z - 1)};
                    double hx = 0.0, hy = 0.0, hz_loc = 0.0;
                    for (std::size_t j : nb) {
                        hx += lat.sx[j];
                        hy += lat.sy[j];
                        hz_loc += lat.sz[j];
                    }
                    // local field: E(S_i) = S_i . H_loc
                    hx = -p.J * hx;
                    hy = -p.J * hy;
                    hz_loc = -p.J * hz_loc + p.h_z;
                    if (cfg.code.contains(x, y, z)) hx += cfg.code.A;

                    const CounterRng rng(cfg.seed,
                                         static_cast<std::uint64_t>(sweep_index) * lat.size() + i);
                    double ox, oy, oz;
                    detail_mc::cone_propose(lat.sx[i], lat.sy[i], lat.sz[i], theta, rng.uniform(0),
                                            rng.uniform(1), ox, oy, oz);
                    const double de = (ox - lat.sx[i]) * hx + (oy - lat.sy[i]) * hy +
                                      (oz - lat.sz[i]) * hz_loc;
                    if (de <= 0.0 || rng.uniform(2) < std::exp(-de * invT)) {
                        lat.sx[i] = ox;
                        lat.sy[i] = oy;
                        lat.sz[i] = oz;
                        ++acc_par;
                        de_par += de;
                    }
                }
            }
        accepted += acc_par;
        de_total += de_par;
    }
    return {static_cast<double>(accepted) / static_cast<double>(lat.size()), de_total};
}

// tune the cone half-angle toward ~50% acceptance (thermalization only)
inline void tune_cone(MCConfig& cfg, double acceptance) {
    if (!cfg.auto_tune || cfg.uniform_sphere) return;
    if (acceptance > 0.55)
        cfg.cone_half_angle = std::min(std::numbers::pi, cfg.cone_half_angle * 1.15);
    else if (acceptance < 0.45)
        cfg.cone_half_angle = std::max(0.02, cfg.cone_half_angle / 1.15);
}

struct Fig4Row {
    int L = 0;
    int Lambda = 0;
    double h_z = 0.0;
    double sx_center = 0.0;
    double sx_center_err = 0.0;
    double m_z = 0.0;  // magnetization along the ordering direction (-z)
    double acceptance = 0.0;
    double cone_angle = 0.0;
    std::vector<double> sx_profile;  // center-column <S^x> per |z - plane_z|
};

struct Fig4Options {
    double A_over_J = 0.05;
    double temperature = 0.25;  // units of J
    long sweeps_thermalize = 3000;
    long sweeps_measure = 24000;
    std::uint64_t seed = 20240917;
    std::size_t max_spins = 1'000'000;  // ResourceCap guard
    bool main_text_scaling = false;     // h_z ~ 1/L^4 with Lambda ~ L^3 preset
    bool want_profile = false;
};

// Scaling presets. Default (figure reproduction): L_h = L^2, Lambda = 2 L^2,
// h_z = 2 J S / L_h^2 with classical S = 1. Alternative (main-text):
// h_z = 2 J / L^4 identical, Lambda = L^3 (use with care, it grows fast).
inline std::vector<Fig4Row> run_fig4(const std::vector<int>& L_values, const FMParams& p_in,
                                     const Fig4Options& opt = {}) {
    std::vector<Fig4Row> rows;
    for (int L : L_values) {
        const int lh2 = L * L;
        const int lambda = opt.main_text_scaling ? L * L * L : 2 * lh2;
        const std::size_t nspins =
            static_cast<std::size_t>(lambda) * lambda * lambda;
        if (nspins > opt.max_spins)
            throw ResourceCapError("run_fig4: L = " + std::to_string(L) + " needs " +
                                   std::to_string(nspins) + " spins > budget " +
                                   std::to_string(opt.max_spins));

        FMParams p = p_in;
        p.S = 1.0;  // classical unit spins
        p.Lambda = lambda;
        p.h_z = 2.0 * p.J / (static_cast<double>(lh2) * lh2);

        MCConfig cfg;
        cfg.temperature = opt.temperature * p.J;
        cfg.sweeps_thermalize = opt.sweeps_thermalize;
        cfg.sweeps_measure = opt.sweeps_measure;
        cfg.seed = opt.seed + static_cast<std::uint64_t>(L);
        cfg.code.A = opt.A_over_J * p.J;
        cfg.code.L = L;
        cfg.code.plane_z = lambda / 2;
        cfg.code.x0 = (lambda - L) / 2;
        cfg.code.y0 = (lambda - L) / 2;
        cfg.validate(lambda);

        SpinLattice lat(lambda);  // saturated start (near equilibrium)

        long sweep = 0;
        for (; sweep < cfg.sweeps_thermalize; ++sweep) {
            auto res = metropolis_sweep(lat, cfg, p, sweep);
            if (sweep % 25 == 24) tune_cone(cfg, res.acceptance);
        }

        const int cx = cfg.code.x0 + L / 2, cy = cfg.code.y0 + L / 2;
        const std::size_t center = lat.index(cx, cy, cfg.code.plane_z);
        const long nblocks = 50;
        const long block = std::max<long>(1, cfg.sweeps_measure / nblocks);
        std::vector<double> block_sx;
        double cur_sx = 0.0;
        double sum_mz = 0.0, sum_acc = 0.0;
        std::vector<double> profile(lambda / 2 + 1, 0.0);
        long in_block = 0;

        for (long m = 0; m < cfg.sweeps_measure; ++m, ++sweep) {
            auto res = metropolis_sweep(lat, cfg, p, sweep);
            sum_acc += res.acceptance;
            cur_sx += lat.sx[center];
            if (++in_block == block) {
                block_sx.push_back(cur_sx / block);
                cur_sx = 0.0;
                in_block = 0;
            }
            sum_mz += -pairwise_sum(lat.sz) / static_cast<double>(lat.size());
            if (opt.want_profile)
                for (std::size_t d = 0; d < profile.size(); ++d)
                    profile[d] += lat.sx[lat.index(
                        cx, cy, (cfg.code.plane_z + static_cast<int>(d)) % lambda)];
        }

        Fig4Row row;
        row.L = L;
        row.Lambda = lambda;
        row.h_z = p.h_z;
        row.sx_center = pairwise_sum(block_sx) / static_cast<double>(block_sx.size());
        double var = 0.0;
        for (double b : block_sx) var += (b - row.sx_center) * (b - row.sx_center);
        var /= static_cast<double>(block_sx.size() - 1);
        row.sx_center_err = std::sqrt(var / static_cast<double>(block_sx.size()));
        row.m_z = sum_mz / static_cast<double>(cfg.sweeps_measure);
        row.acceptance = sum_acc / static_cast<double>(cfg.sweeps_measure);
        row.cone_angle = cfg.cone_half_angle;
        if (opt.want_profile) {
            row.sx_profile = profile;
            for (auto& v : row.sx_profile) v /= static_cast<double>(cfg.sweeps_measure);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qmem
