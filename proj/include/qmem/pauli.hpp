#pragma once

// Exact algebra of complex-weighted Pauli strings on labelled spin-1/2 sites.
//
// A term is a product of single-site Pauli letters (identity letters are never
// stored) times a complex coefficient, optionally times an integer power of a
// formal commuting symbol "S" (the ferromagnet spin component carried through
// the Schrieffer-Wolff elimination; it commutes with every Pauli letter).
// Pauli phases are tracked as exact quarter turns {1, i, -1, -i}: multiplying
// by i swaps real/imag parts, so pure products never accumulate phase drift.
//
// Text format (one term per line): "coeff_re coeff_im site:letter ...".
// Terms carrying the formal symbol append "S^k"; plain Pauli sums round-trip
// through the format exactly as written above.

#include <algorithm>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmem {

using Complex = std::complex<double>;

enum class Pauli : int { X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        default: return 'Z';
    }
}

struct PauliTerm {
    Complex coeff{1.0, 0.0};
    std::map<std::string, Pauli> letters;  // site label -> letter, no identities
    int fm_power = 0;                      // power of the formal commuting symbol

    bool same_letters(const PauliTerm& o) const {
        return fm_power == o.fm_power && letters == o.letters;
    }
};

// i^q * c, exactly.
inline Complex quarter_turn(Complex c, int q) {
    switch (((q % 4) + 4) % 4) {
        case 0: return c;
        case 1: return {-c.imag(), c.real()};
        case 2: return -c;
        default: return {c.imag(), -c.real()};
    }
}

// Single-site product a*b = i^q * letter (letter absent means identity).
// Cyclic rule XY = iZ and its relabellings.
inline void pauli_product(Pauli a, Pauli b, bool& identity, Pauli& out, int& q) {
    if (a == b) { identity = true; q = 0; return; }
    identity = false;
    const int ia = static_cast<int>(a), ib = static_cast<int>(b);
    out = static_cast<Pauli>(6 - ia - ib);  // the third letter
    // (X,Y),(Y,Z),(Z,X) are the +i orientations
    const bool forward = (ib - ia + 3) % 3 == 1;
    q = forward ? 1 : 3;
}

inline PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    PauliTerm r;
    r.letters = a.letters;
    int q = 0;
    for (const auto& [site, lb] : b.letters) {
        auto it = r.letters.find(site);
        if (it == r.letters.end()) {
            r.letters.emplace(site, lb);
            continue;
        }
        bool identity;
        Pauli out;
        int dq;
        pauli_product(it->second, lb, identity, out, dq);
        q += dq;
        if (identity)
            r.letters.erase(it);
        else
            it->second = out;
    }
    r.coeff = quarter_turn(a.coeff * b.coeff, q);
    r.fm_power = a.fm_power + b.fm_power;
    return r;
}

inline PauliTerm adjoint(const PauliTerm& t) {
    PauliTerm r = t;
    r.coeff = std::conj(t.coeff);  // Pauli letters are Hermitian
    return r;
}

struct OperatorSum {
    std::vector<PauliTerm> terms;

    OperatorSum() = default;
    explicit OperatorSum(std::vector<PauliTerm> ts) : terms(std::move(ts)) {}

    static OperatorSum zero() { return OperatorSum{}; }
    static OperatorSum identity(Complex c = 1.0) {
        PauliTerm t;
        t.coeff = c;
        return OperatorSum{{t}};
    }
    static OperatorSum single(Complex c, const std::string& site, Pauli p) {
        PauliTerm t;
        t.coeff = c;
        t.letters.emplace(site, p);
        return OperatorSum{{t}};
    }
    // c * S^power (formal FM-spin symbol)
    static OperatorSum formal(Complex c, int power = 1) {
        PauliTerm t;
        t.coeff = c;
        t.fm_power = power;
        return OperatorSum{{t}};
    }

    OperatorSum& operator+=(const OperatorSum& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    OperatorSum& operator-=(const OperatorSum& o) {
        for (const auto& t : o.terms) {
            terms.push_back(t);
            terms.back().coeff = -terms.back().coeff;
        }
        return *this;
    }
    OperatorSum& operator*=(Complex c) {
        for (auto& t : terms) t.coeff *= c;
        return *this;
    }

    double one_norm() const {
        double s = 0.0;
        for (const auto& t : terms) s += std::abs(t.coeff);
        return s;
    }

    // Merge equal letter patterns, drop coefficients below threshold_rel times
    // the largest magnitude, sort by canonical site/letter order. Idempotent.
    void simplify(double threshold_rel = 1e-14) {
        std::map<std::string, PauliTerm> merged;
        for (const auto& t : terms) {
            std::string key = letters_key(t);
            auto [it, fresh] = merged.emplace(std::move(key), t);
            if (!fresh) it->second.coeff += t.coeff;
        }
        double maxmag = 0.0;
        for (const auto& [k, t] : merged) maxmag = std::max(maxmag, std::abs(t.coeff));
        terms.clear();
        for (auto& [k, t] : merged)
            if (std::abs(t.coeff) > threshold_rel * maxmag && t.coeff != 0.0)
                terms.push_back(std::move(t));
    }

    static std::string letters_key(const PauliTerm& t) {
        std::string key;
        for (const auto& [site, p] : t.letters) {
            key += site;
            key += ':';
            key += pauli_char(p);
            key += ' ';
        }
        if (t.fm_power > 0) key += "S^" + std::to_string(t.fm_power);
        return key;
    }
};

inline OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
inline OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
inline OperatorSum operator*(Complex c, OperatorSum a) { return a *= c; }

inline OperatorSum multiply(const OperatorSum& a, const OperatorSum& b) {
    OperatorSum r;
    r.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) r.terms.push_back(multiply(ta, tb));
    r.simplify();
    return r;
}

// ab - ba. Antisymmetric by construction.
inline OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
    OperatorSum r = multiply(a, b);
    r -= multiply(b, a);
    r.simplify();
    return r;
}

inline OperatorSum adjoint(const OperatorSum& a) {
    OperatorSum r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) r.terms.push_back(adjoint(t));
    return r;
}

// Term-by-term Hermiticity: sum equals its adjoint after simplification.
inline bool is_hermitian(const OperatorSum& a, double tol = 1e-12) {
    OperatorSum d = a - adjoint(a);
    d.simplify(0.0);
    double scale = std::max(a.one_norm(), 1e-300);
    for (const auto& t : d.terms)
        if (std::abs(t.coeff) > tol * scale) return false;
    return true;
}

// Substitute a numeric value for the formal symbol: coeff *= s^power.
inline OperatorSum substitute_formal(const OperatorSum& a, double s) {
    OperatorSum r = a;
    for (auto& t : r.terms) {
        t.coeff *= std::pow(s, t.fm_power);
        t.fm_power = 0;
    }
    r.simplify();
    return r;
}

// ---- plain-text serialization ----

inline std::string to_text(const OperatorSum& a) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& t : a.terms) {
        os << t.coeff.real() << ' ' << t.coeff.imag();
        for (const auto& [site, p] : t.letters) os << ' ' << site << ':' << pauli_char(p);
        if (t.fm_power > 0) os << " S^" << t.fm_power;
        os << '\n';
    }
    return os.str();
}

inline OperatorSum from_text(const std::string& text) {
    OperatorSum sum;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        PauliTerm t;
        double re, im;
        if (!(ls >> re >> im))
            throw std::runtime_error("OperatorSum parse error at line " + std::to_string(lineno) +
                                     ": expected 'coeff_re coeff_im ...'");
        t.coeff = {re, im};
        std::string tok;
        while (ls >> tok) {
            if (tok.rfind("S^", 0) == 0) {
                t.fm_power = std::stoi(tok.substr(2));
                continue;
            }
            auto colon = tok.find(':');
            if (colon == std::string::npos || colon + 2 != tok.size())
                throw std::runtime_error("OperatorSum parse error at line " + std::to_string(lineno) +
                                         ": bad token '" + tok + "'");
            const char c = tok[colon + 1];
            Pauli p;
            if (c == 'X') p = Pauli::X;
            else if (c == 'Y') p = Pauli::Y;
            else if (c == 'Z') p = Pauli::Z;
            else
                throw std::runtime_error("OperatorSum parse error at line " + std::to_string(lineno) +
                                         ": letter must be X, Y or Z in '" + tok + "'");
            t.letters[tok.substr(0, colon)] = p;
        }
        sum.terms.push_back(std::move(t));
    }
    sum.simplify(0.0);
    return sum;
}

}  // namespace qmem
