#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nuq/pauli.hpp"

namespace nuq {

/// Largest site count for dense 2^n x 2^n expansion.
inline constexpr int kDenseSiteCap = 14;

/// Kronecker expansion with site 0 as the least significant bit of the
/// basis index. Throws for n_sites above the cap.
Eigen::MatrixXcd to_dense_matrix(const PauliSum& s);

/// Apply the operator to an amplitude vector termwise (no dense matrix,
/// no site cap). Vector length must be 2^n_sites.
Eigen::VectorXcd apply(const PauliSum& s, const Eigen::VectorXcd& v);

/// <v|s|v> without forming the dense matrix.
cplx expectation_value(const PauliSum& s, const Eigen::VectorXcd& v);

/// Basis indices with a fixed number of set bits, ascending. Used to work
/// inside a particle-number block of a number-conserving operator.
std::vector<std::uint64_t> number_sector_basis(int n_sites, int n_particles);

/// Dense block of s on the span of the given basis states. Throws if s
/// maps any basis state outside the list (i.e. s does not preserve it).
Eigen::MatrixXcd sector_matrix(const PauliSum& s,
                               const std::vector<std::uint64_t>& basis);

}  // namespace nuq
