#pragma once

// Brute-force oracle for the gadget. Every code-qubit operator in the gadget
// Hamiltonian is sigma^x, so sigma^x on a,b,c,d are conserved: fixing their
// eigenvalues (s_a..s_d) and treating the FM spin component as a classical
// scalar s reduces the problem to 8x8 mediator blocks (f,g,u). Ground-sector
// energies are fitted to the eight functions {1,u,v,uv} x {1,s} with
// u = s_a s_b, v = s_c s_d, which is complete in (u,v); linearity in s is
// checked separately and the quadratic residual reported.
//
// The smallest fitted signal (c_wsx at couplings 0.01) is ~6e-14 Delta, so
// the sector eigensolves run in long double.

#include <Eigen/Eigenvalues>

#include "dense.hpp"
#include "sw_engine.hpp"

namespace qmem {

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SectorKey {
    int s_a = 1, s_b = 1, s_c = 1, s_d = 1;  // sigma^x eigenvalues, +-1
    double s = 0.0;                          // classical value of the FM spin component

    void validate() const {
        for (int v : {s_a, s_b, s_c, s_d})
            if (v != 1 && v != -1)
                throw std::invalid_argument("SectorKey: sector eigenvalues must be +-1");
    }
};

struct SectorSpectrum {
    SectorKey key;
    double ground_energy = 0.0;
    double gap_to_excited = 0.0;
};

namespace detail {

using Mat8 = Eigen::Matrix<long double, 8, 8>;

// Mediator block over (f,g,u); basis index bit layout f:4 g:2 u:1, bit 0
// meaning sigma^z = +1.
inline Mat8 sector_matrix(const GadgetSpec& sp, const SectorKey& key) {
    key.validate();
    Mat8 H = Mat8::Zero();
    const long double ab = key.s_a + key.s_b, cd = key.s_c + key.s_d;
    const long double uv_diag =
        sp.delta_pair * (key.s_a * key.s_b + key.s_c * key.s_d);
    for (int st = 0; st < 8; ++st) {
        const long double zf = (st & 4) ? -1.0L : 1.0L;
        const long double zg = (st & 2) ? -1.0L : 1.0L;
        const long double zu = (st & 1) ? -1.0L : 1.0L;
        H(st, st) = -(long double)(sp.delta) / 2.0L * (zf + zg + zu) +
                    (long double)(sp.gamma) * key.s * zu +
                    (long double)(sp.tau) * key.s * (zf + zg) +
                    (long double)(sp.beta) * zf * zg + uv_diag;
        H(st ^ 4, st) += (long double)(sp.epsilon) * ab;       // X_f
        H(st ^ 2, st) += (long double)(sp.epsilon) * cd;       // X_g
        H(st ^ 1, st) += (long double)(sp.alpha) * (zf + zg);  // X_u (z_f + z_g)
    }
    return H;
}

inline Eigen::Matrix<long double, 8, 1> sector_eigenvalues(const GadgetSpec& sp,
                                                           const SectorKey& key) {
    Eigen::SelfAdjointEigenSolver<Mat8> es(sector_matrix(sp, key), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace detail

// Spec-facing dense form of the mediator block (site order f,g,u).
inline DenseOperator sector_hamiltonian(const GadgetSpec& sp, const SectorKey& key) {
    const auto H = detail::sector_matrix(sp, key);
    DenseOperator out;
    out.site_order = {sp.f, sp.g, sp.u};
    out.matrix = Eigen::MatrixXcd::Zero(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) out.matrix(r, c) = Complex(static_cast<double>(H(r, c)), 0.0);
    return out;
}

inline SectorSpectrum sector_spectrum(const GadgetSpec& sp, const SectorKey& key) {
    const auto ev = detail::sector_eigenvalues(sp, key);
    SectorSpectrum s;
    s.key = key;
    s.ground_energy = static_cast<double>(ev(0));
    s.gap_to_excited = static_cast<double>(ev(1) - ev(0));
    return s;
}

struct FitResult {
    EffectiveCoefficients coeffs;
    // spread of ground energies among sectors sharing the same (u,v): the
    // (u,v) basis is complete, so this is pure numerical noise
    double max_fit_residual = 0.0;
    // deviation of the per-s coefficients from linearity in s
    double max_quadratic_residual = 0.0;
    // |coeff(u) - coeff(v)| over both the static and the s-linear channel
    double asymmetry = 0.0;
    double min_gap = 0.0;
};

inline const std::vector<double>& default_s_values() {
    static const std::vector<double> v{-1.0, -0.5, 0.0, 0.5, 1.0};
    return v;
}

// Enumerate all 16 sector keys per s value, diagonalize, and fit.
inline FitResult fit_effective(const GadgetSpec& sp,
                               const std::vector<double>& s_values = default_s_values()) {
    sp.validate();
    if (s_values.size() < 2)
        throw std::invalid_argument("fit_effective: need >= 2 distinct s values");

    FitResult res;
    res.min_gap = std::numeric_limits<double>::infinity();

    const std::size_t ns = s_values.size();
    std::vector<long double> c1(ns), cu(ns), cv(ns), cuv(ns);

    for (std::size_t is = 0; is < ns; ++is) {
        // group ground energies by (u,v)
        long double e_sum[2][2] = {};
        long double e_min[2][2], e_max[2][2];
        for (auto& row : e_min) row[0] = row[1] = std::numeric_limits<long double>::infinity();
        for (auto& row : e_max) row[0] = row[1] = -std::numeric_limits<long double>::infinity();

        for (int m = 0; m < 16; ++m) {
            SectorKey key{(m & 8) ? -1 : 1, (m & 4) ? -1 : 1, (m & 2) ? -1 : 1, (m & 1) ? -1 : 1,
                          s_values[is]};
            const auto ev = detail::sector_eigenvalues(sp, key);
            const double gap = static_cast<double>(ev(1) - ev(0));
            if (gap < 1e-10)
                throw DegenerateError("fit_effective: sector ground state degenerate within 1e-10");
            res.min_gap = std::min(res.min_gap, gap);
            const int iu = key.s_a * key.s_b > 0 ? 0 : 1;
            const int iv = key.s_c * key.s_d > 0 ? 0 : 1;
            e_sum[iu][iv] += ev(0);
            e_min[iu][iv] = std::min(e_min[iu][iv], ev(0));
            e_max[iu][iv] = std::max(e_max[iu][iv], ev(0));
        }
        long double E[2][2];
        for (int iu = 0; iu < 2; ++iu)
            for (int iv = 0; iv < 2; ++iv) {
                E[iu][iv] = e_sum[iu][iv] / 4.0L;
                res.max_fit_residual = std::max<double>(
                    res.max_fit_residual, static_cast<double>(e_max[iu][iv] - e_min[iu][iv]));
            }
        c1[is] = (E[0][0] + E[0][1] + E[1][0] + E[1][1]) / 4.0L;
        cu[is] = (E[0][0] + E[0][1] - E[1][0] - E[1][1]) / 4.0L;
        cv[is] = (E[0][0] - E[0][1] + E[1][0] - E[1][1]) / 4.0L;
        cuv[is] = (E[0][0] - E[0][1] - E[1][0] + E[1][1]) / 4.0L;
    }

    // linear fit vs s in long double
    auto fit_line = [&](const std::vector<long double>& y, long double& icpt, long double& slope) {
        long double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ns; ++i) {
            sx += s_values[i];
            sy += y[i];
            sxx += (long double)s_values[i] * s_values[i];
            sxy += s_values[i] * y[i];
        }
        const long double n = static_cast<long double>(ns);
        const long double den = n * sxx - sx * sx;
        slope = (n * sxy - sx * sy) / den;
        icpt = (sy - slope * sx) / n;
        for (std::size_t i = 0; i < ns; ++i) {
            const long double r = y[i] - (icpt + slope * s_values[i]);
            res.max_quadratic_residual =
                std::max<double>(res.max_quadratic_residual, std::abs(static_cast<double>(r)));
        }
    };

    long double i1, s1, iu_, su_, iv_, sv_, iw, sw;
    fit_line(c1, i1, s1);
    fit_line(cu, iu_, su_);
    fit_line(cv, iv_, sv_);
    fit_line(cuv, iw, sw);

    res.coeffs.c_const = static_cast<double>(i1);
    res.coeffs.c_sx = static_cast<double>(s1);
    res.coeffs.c_r = static_cast<double>((iu_ + iv_) / 2.0L);
    res.coeffs.c_rsx = static_cast<double>((su_ + sv_) / 2.0L);
    res.coeffs.c_w = static_cast<double>(iw);
    res.coeffs.c_wsx = static_cast<double>(sw);
    res.asymmetry = std::max(std::abs(static_cast<double>(iu_ - iv_)),
                             std::abs(static_cast<double>(su_ - sv_)));
    return res;
}

// Cross-check mode: the FM spin as a real spin-1/2 qubit. Diagonalizes the
// full 8-site (256x256) gadget with S^x_p -> sigma^x_p / 2, classifies
// eigenvectors by the conserved (X_a X_b, X_c X_d, X_p) and compares each
// sector's lowest energy against the reduced 8x8 route at s = +-1/2.
// Returns the maximum absolute energy mismatch.
inline double quantum_cross_check(const GadgetSpec& sp) {
    sp.validate();
    OperatorSum h = sp.hamiltonian();
    for (auto& t : h.terms) {
        if (t.fm_power == 0) continue;
        t.coeff *= std::pow(0.5, t.fm_power);
        if (t.fm_power % 2 == 1) t.letters.emplace(sp.p, Pauli::X);
        t.fm_power = 0;
    }
    const std::vector<std::string> order{sp.a, sp.b, sp.c, sp.d, sp.f, sp.g, sp.u, sp.p};
    const DenseOperator H = to_dense(h, order);

    const OperatorSum uop = multiply(OperatorSum::single(1.0, sp.a, Pauli::X),
                                     OperatorSum::single(1.0, sp.b, Pauli::X));
    const OperatorSum vop = multiply(OperatorSum::single(1.0, sp.c, Pauli::X),
                                     OperatorSum::single(1.0, sp.d, Pauli::X));
    const OperatorSum pop = OperatorSum::single(1.0, sp.p, Pauli::X);
    const Eigen::MatrixXcd U = to_dense(uop, order).matrix;
    const Eigen::MatrixXcd V = to_dense(vop, order).matrix;
    const Eigen::MatrixXcd P = to_dense(pop, order).matrix;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("quantum_cross_check: eigensolver failed");

    double ground[2][2][2];
    for (auto& x : ground)
        for (auto& y : x) y[0] = y[1] = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Eigen::VectorXcd psi = es.eigenvectors().col(i);
        auto expect = [&](const Eigen::MatrixXcd& O) { return (psi.adjoint() * O * psi)(0).real(); };
        const int iu = expect(U) > 0 ? 0 : 1;
        const int iv = expect(V) > 0 ? 0 : 1;
        const int ip = expect(P) > 0 ? 0 : 1;
        ground[iu][iv][ip] = std::min(ground[iu][iv][ip], es.eigenvalues()(i));
    }

    double max_dev = 0.0;
    for (int iu = 0; iu < 2; ++iu)
        for (int iv = 0; iv < 2; ++iv)
            for (int ip = 0; ip < 2; ++ip) {
                SectorKey key{1, iu == 0 ? 1 : -1, 1, iv == 0 ? 1 : -1, ip == 0 ? 0.5 : -0.5};
                const double reduced = sector_spectrum(sp, key).ground_energy;
                max_dev = std::max(max_dev, std::abs(reduced - ground[iu][iv][ip]));
            }
    return max_dev;
}

}  // namespace qmem
