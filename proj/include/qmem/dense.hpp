#pragma once

// Dense-matrix view of OperatorSum for the diagonalization oracle.
// Tensor order is always explicit: site_order[0] is the most significant
// qubit (leftmost Kronecker factor). Basis per site: |0> = sigma^z eigenvalue
// +1, |1> = eigenvalue -1, so Z densifies to diag(+1, -1).

#include <Eigen/Dense>

#include "pauli.hpp"

namespace qmem {

struct UnknownSiteError : std::runtime_error {
    explicit UnknownSiteError(const std::string& site)
        : std::runtime_error("to_dense: operator references site '" + site +
                             "' absent from site_order") {}
};

struct DimensionCapError : std::runtime_error {
    explicit DimensionCapError(std::size_t n)
        : std::runtime_error("to_dense: " + std::to_string(n) +
                             " sites exceeds the dense feasibility cap of 14") {}
};

struct DenseOperator {
    std::vector<std::string> site_order;
    Eigen::MatrixXcd matrix;

    Eigen::Index dimension() const { return matrix.rows(); }

    double hermiticity_residual() const {
        const double norm = matrix.norm();
        if (norm == 0.0) return 0.0;
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() / norm;
    }
};

inline constexpr std::size_t kDenseSiteCap = 14;

// Kronecker-product matrix of h in the given tensor order. Terms carrying the
// formal symbol use fm_value^power (default 0 powers only).
inline DenseOperator to_dense(const OperatorSum& h, const std::vector<std::string>& site_order,
                              double fm_value = 0.0) {
    if (site_order.size() > kDenseSiteCap) throw DimensionCapError(site_order.size());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < site_order.size(); ++i)
        index.emplace(site_order[i], static_cast<int>(i));

    const Eigen::Index dim = Eigen::Index(1) << site_order.size();
    DenseOperator out;
    out.site_order = site_order;
    out.matrix = Eigen::MatrixXcd::Zero(dim, dim);

    const int n = static_cast<int>(site_order.size());
    for (const auto& term : h.terms) {
        for (const auto& [site, p] : term.letters)
            if (!index.count(site)) throw UnknownSiteError(site);
        Complex c = term.coeff;
        if (term.fm_power > 0) c *= std::pow(fm_value, term.fm_power);
        if (c == 0.0) continue;

        // Pauli strings are generalized permutations: exactly one nonzero per
        // column, so fill column-by-column instead of building Kroneckers.
        for (Eigen::Index col = 0; col < dim; ++col) {
            Eigen::Index row = col;
            Complex amp = c;
            for (const auto& [site, p] : term.letters) {
                const int bitpos = n - 1 - index[site];  // site_order[0] most significant
                const bool one = (col >> bitpos) & 1;    // |1> = z-eigenvalue -1
                switch (p) {
                    case Pauli::X:
                        row ^= Eigen::Index(1) << bitpos;
                        break;
                    case Pauli::Y:
                        row ^= Eigen::Index(1) << bitpos;
                        amp *= one ? Complex(0, -1) : Complex(0, 1);
                        break;
                    case Pauli::Z:
                        if (one) amp = -amp;
                        break;
                }
            }
            out.matrix(row, col) += amp;
        }
    }
    return out;
}

}  // namespace qmem
