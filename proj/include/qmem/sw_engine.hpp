#pragma once

// Perturbative Schrieffer-Wolff elimination of gapped mediator qubits.
//
// Each mediator r contributes H0 = -(Delta/2) sigma^z_r; the perturbation is
// split into a block-diagonal part V_d (identity or Z on r) and an
// off-diagonal part V_od (X on r). The ground-sector effective Hamiltonian is
// assembled from the order-by-order commutator formulas
//     H2 = 1/2 [L^-1 V_od, V_od]
//     H3 = 1/2 [L^-1 [L^-1 V_od, V_d], V_od]
// with the Liouvillian inverse acting on the mediator factor as
// X -> -(i/Delta) Y, Y -> (i/Delta) X, followed by projection onto the
// mediator ground sector (Z -> +1, X/Y -> 0). Terms beyond third order per
// mediator are truncated.

#include <array>
#include <functional>
#include <optional>

#include "pauli.hpp"

namespace qmem {

struct NotOffDiagonalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooStrongError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct YTermPresentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BasisLeakError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The seven couplings of the five-body gadget plus its site labels.
// delta_pair is the two-body X X coupling on the code pairs (the gadget's
// "delta" knob, distinct from the gap delta).
struct GadgetSpec {
    double delta = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta_pair = 0.0;
    double epsilon = 0.0;
    double tau = 0.0;

    std::string a = "a", b = "b", c = "c", d = "d";
    std::string f = "f", g = "g", u = "u", p = "p";

    double xi() const { return 2.0 * epsilon / delta; }

    void validate() const {
        if (!(delta > 0.0)) throw std::invalid_argument("GadgetSpec: delta must be > 0");
        const double cap = delta / 2.0;
        for (double v : {alpha, beta, gamma, delta_pair, epsilon, tau})
            if (!(std::abs(v) < cap))
                throw std::invalid_argument(
                    "GadgetSpec: couplings must satisfy |coupling| < delta/2");
    }

    // Full gadget Hamiltonian. The FM spin component enters as the formal
    // commuting symbol S (fm_power = 1).
    OperatorSum hamiltonian() const {
        OperatorSum h;
        for (const auto& m : {f, g, u}) h += OperatorSum::single(-delta / 2.0, m, Pauli::Z);
        h += multiply(OperatorSum::formal(gamma), OperatorSum::single(1.0, u, Pauli::Z));
        h += multiply(OperatorSum::formal(tau),
                      OperatorSum::single(1.0, f, Pauli::Z) + OperatorSum::single(1.0, g, Pauli::Z));
        h += multiply(OperatorSum::single(epsilon, f, Pauli::X),
                      OperatorSum::single(1.0, a, Pauli::X) + OperatorSum::single(1.0, b, Pauli::X));
        h += multiply(OperatorSum::single(epsilon, g, Pauli::X),
                      OperatorSum::single(1.0, c, Pauli::X) + OperatorSum::single(1.0, d, Pauli::X));
        h += multiply(OperatorSum::single(alpha, u, Pauli::X),
                      OperatorSum::single(1.0, f, Pauli::Z) + OperatorSum::single(1.0, g, Pauli::Z));
        h += multiply(OperatorSum::single(beta, f, Pauli::Z), OperatorSum::single(1.0, g, Pauli::Z));
        h += multiply(OperatorSum::single(delta_pair, a, Pauli::X),
                      OperatorSum::single(1.0, b, Pauli::X));
        h += multiply(OperatorSum::single(delta_pair, c, Pauli::X),
                      OperatorSum::single(1.0, d, Pauli::X));
        h.simplify(0.0);
        return h;
    }
};

// Coefficients of {1, S_x, R, R*S_x, W, W*S_x} with R = X_a X_b + X_c X_d and
// W = X_a X_b X_c X_d.
struct EffectiveCoefficients {
    double c_const = 0.0;
    double c_sx = 0.0;
    double c_r = 0.0;
    double c_rsx = 0.0;
    double c_w = 0.0;
    double c_wsx = 0.0;
};

namespace detail {

inline std::optional<Pauli> letter_on(const PauliTerm& t, const std::string& site) {
    auto it = t.letters.find(site);
    if (it == t.letters.end()) return std::nullopt;
    return it->second;
}

}  // namespace detail

// L0^-1 for H0 = -(Delta/2) sigma^z_mediator, defined on operators that are
// block-off-diagonal in the mediator's sigma^z eigenbasis.
inline OperatorSum liouvillian_inverse(const OperatorSum& op, const std::string& mediator,
                                       double delta) {
    OperatorSum r;
    r.terms.reserve(op.terms.size());
    for (const auto& t : op.terms) {
        auto l = detail::letter_on(t, mediator);
        if (!l || *l == Pauli::Z)
            throw NotOffDiagonalError(
                "liouvillian_inverse: term carries Z or identity on mediator '" + mediator + "'");
        PauliTerm nt = t;
        if (*l == Pauli::X) {
            nt.letters[mediator] = Pauli::Y;
            nt.coeff = quarter_turn(nt.coeff / delta, 3);  // -(i/Delta)
        } else {  // Y
            nt.letters[mediator] = Pauli::X;
            nt.coeff = quarter_turn(nt.coeff / delta, 1);  // +(i/Delta)
        }
        r.terms.push_back(std::move(nt));
    }
    return r;
}

// Project onto the mediator ground sector (sigma^z = +1) and drop the site.
inline OperatorSum project_ground(const OperatorSum& op, const std::string& mediator) {
    OperatorSum r;
    for (const auto& t : op.terms) {
        auto l = detail::letter_on(t, mediator);
        if (!l) {
            r.terms.push_back(t);
            continue;
        }
        if (*l == Pauli::Z) {
            PauliTerm nt = t;
            nt.letters.erase(mediator);
            r.terms.push_back(std::move(nt));
        }
        // X or Y on the mediator projects to zero
    }
    r.simplify(0.0);
    return r;
}

// Integrate out one mediator: h = -(Delta/2) sigma^z_m + V, returning
// P H_eff P restricted to the mediator ground sector with the mediator site
// removed. order selects truncation after H2 or H3.
inline OperatorSum integrate_out(const OperatorSum& h, const std::string& mediator, double delta,
                                 int order = 3) {
    if (order != 2 && order != 3)
        throw std::invalid_argument("integrate_out: order must be 2 or 3");

    // V = h - H0
    OperatorSum v = h + OperatorSum::single(delta / 2.0, mediator, Pauli::Z);
    v.simplify(0.0);

    OperatorSum v_d, v_od;
    double coupled_norm = 0.0;  // 1-norm surrogate over mediator-coupled terms
    for (const auto& t : v.terms) {
        auto l = detail::letter_on(t, mediator);
        if (!l) {
            v_d.terms.push_back(t);  // spectator, commutes with H0
            continue;
        }
        coupled_norm += std::abs(t.coeff);
        if (*l == Pauli::Y)
            throw YTermPresentError("integrate_out: sigma^y coupling on mediator '" + mediator +
                                    "' is outside the supported gadget class");
        if (*l == Pauli::Z)
            v_d.terms.push_back(t);
        else
            v_od.terms.push_back(t);
    }
    if (coupled_norm >= delta / 2.0)
        throw TooStrongError("integrate_out: mediator-coupled perturbation 1-norm " +
                             std::to_string(coupled_norm) + " >= delta/2");

    const OperatorSum linv_od = liouvillian_inverse(v_od, mediator, delta);

    OperatorSum h_eff = OperatorSum::single(-delta / 2.0, mediator, Pauli::Z);
    h_eff += v_d;
    OperatorSum h2 = commutator(linv_od, v_od);
    h2 *= 0.5;
    h_eff += h2;
    if (order >= 3) {
        OperatorSum inner = commutator(linv_od, v_d);
        inner.simplify(0.0);
        if (!inner.terms.empty()) {
            OperatorSum h3 = commutator(liouvillian_inverse(inner, mediator, delta), v_od);
            h3 *= 0.5;
            h_eff += h3;
        }
    }
    return project_ground(h_eff, mediator);
}

struct GadgetEffectiveResult {
    EffectiveCoefficients coeffs;
    // coefficient asymmetry between the X_a X_b and X_c X_d channels (exactly
    // degenerate by the a<->c, b<->d symmetry; reported, not assumed)
    double r_asymmetry = 0.0;
    double rsx_asymmetry = 0.0;
    OperatorSum residual;      // terms outside the six-operator basis
    double residual_norm = 0.0;
};

// Sequentially integrate out the mediators and project the remainder onto
// {1, S_x, R, R S_x, W, W S_x}. Residual terms are collected and reported;
// if their 1-norm exceeds xi^6 * delta the operation throws BasisLeakError
// (anything that large signals an algebra bug, not truncation).
inline GadgetEffectiveResult gadget_effective(
    const GadgetSpec& spec, int order = 3,
    std::optional<std::array<std::string, 3>> elimination_order = std::nullopt) {
    spec.validate();
    const std::array<std::string, 3> med =
        elimination_order.value_or(std::array<std::string, 3>{spec.f, spec.g, spec.u});

    OperatorSum h = spec.hamiltonian();
    for (const auto& m : med) h = integrate_out(h, m, spec.delta, order);

    GadgetEffectiveResult res;
    double r_u = 0, r_v = 0, rsx_u = 0, rsx_v = 0;
    const std::map<std::string, Pauli> u_pat{{spec.a, Pauli::X}, {spec.b, Pauli::X}};
    const std::map<std::string, Pauli> v_pat{{spec.c, Pauli::X}, {spec.d, Pauli::X}};
    const std::map<std::string, Pauli> w_pat{
        {spec.a, Pauli::X}, {spec.b, Pauli::X}, {spec.c, Pauli::X}, {spec.d, Pauli::X}};

    h.simplify(0.0);
    for (const auto& t : h.terms) {
        const double re = t.coeff.real();
        const bool real_ok = std::abs(t.coeff.imag()) <= 1e-12 * (1.0 + std::abs(re));
        if (real_ok && t.fm_power <= 1) {
            if (t.letters.empty() && t.fm_power == 0) { res.coeffs.c_const += re; continue; }
            if (t.letters.empty() && t.fm_power == 1) { res.coeffs.c_sx += re; continue; }
            if (t.letters == u_pat) { (t.fm_power ? rsx_u : r_u) += re; continue; }
            if (t.letters == v_pat) { (t.fm_power ? rsx_v : r_v) += re; continue; }
            if (t.letters == w_pat) {
                (t.fm_power ? res.coeffs.c_wsx : res.coeffs.c_w) += re;
                continue;
            }
        }
        res.residual.terms.push_back(t);
    }
    res.coeffs.c_r = 0.5 * (r_u + r_v);
    res.coeffs.c_rsx = 0.5 * (rsx_u + rsx_v);
    res.r_asymmetry = std::abs(r_u - r_v);
    res.rsx_asymmetry = std::abs(rsx_u - rsx_v);
    res.residual_norm = res.residual.one_norm();

    const double xi = spec.xi();
    const double leak_tol = std::pow(xi, 6) * spec.delta;
    if (res.residual_norm > leak_tol)
        throw BasisLeakError("gadget_effective: residual outside the six-operator basis has norm " +
                             std::to_string(res.residual_norm) + " > " + std::to_string(leak_tol) +
                             ":\n" + to_text(res.residual));
    return res;
}

// Leading-order closed forms for the effective coefficients. The S_x
// coefficient carries alpha^2 gamma / Delta^2 and the R bracket reads
// (Delta/2 + beta - 4 alpha^2/Delta); both verified against the exact
// sector-diagonalization oracle (see tests).
inline EffectiveCoefficients closed_form_coefficients(const GadgetSpec& s) {
    const double xi = s.xi(), xi2 = xi * xi, xi4 = xi2 * xi2;
    const double D = s.delta;
    EffectiveCoefficients c;
    c.c_const = -1.5 * D - 4.0 * s.epsilon * s.epsilon / D - 4.0 * s.alpha * s.alpha / D + s.beta;
    c.c_sx = s.gamma + 2.0 * s.tau - 8.0 * s.gamma * s.alpha * s.alpha / (D * D);
    c.c_r = s.delta_pair - xi2 * (D / 2.0 + s.beta - 4.0 * s.alpha * s.alpha / D);
    c.c_rsx = -xi2 * (s.tau - 8.0 * s.alpha * s.alpha * s.gamma / (D * D));
    c.c_w = xi4 * (s.beta - 2.0 * s.alpha * s.alpha / D);
    c.c_wsx = -4.0 * xi4 * s.alpha * s.alpha * s.gamma / (D * D);
    return c;
}

struct TuningValues {
    double delta_star = 0.0;  // zeroes the computed c_r
    double tau_star = 0.0;    // zeroes the computed c_rsx
};

// Two-point linear solve on the engine output (c_r is exactly linear in
// delta_pair and c_rsx exactly linear in tau at the computed order). When the
// tau slope degenerates (epsilon = 0 makes c_rsx identically zero) the
// leading closed form 8 alpha^2 gamma / Delta^2 is returned.
inline TuningValues tuning_values(const GadgetSpec& spec, int order = 3) {
    spec.validate();
    TuningValues tv;
    const double probe = spec.delta / 8.0;

    GadgetSpec s0 = spec, s1 = spec;
    s0.delta_pair = 0.0;
    s1.delta_pair = probe;
    const double cr0 = gadget_effective(s0, order).coeffs.c_r;
    const double cr1 = gadget_effective(s1, order).coeffs.c_r;
    tv.delta_star = -cr0 / ((cr1 - cr0) / probe);

    GadgetSpec t0 = spec, t1 = spec;
    t0.tau = 0.0;
    t1.tau = probe;
    const double cs0 = gadget_effective(t0, order).coeffs.c_rsx;
    const double cs1 = gadget_effective(t1, order).coeffs.c_rsx;
    const double slope = (cs1 - cs0) / probe;
    if (std::abs(slope) < 1e-30)
        tv.tau_star = 8.0 * spec.alpha * spec.alpha * spec.gamma / (spec.delta * spec.delta);
    else
        tv.tau_star = -cs0 / slope;
    return tv;
}

}  // namespace qmem
