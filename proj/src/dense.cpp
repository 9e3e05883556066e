#include "nuq/dense.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace nuq {

namespace {

cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// P|b> = i^{#Y} (-1)^{popcount(z & b)} |b ^ x> for the literal-Y convention.
inline cplx term_amplitude(std::uint64_t z, std::uint64_t x, std::uint64_t b,
                           cplx coeff) {
  cplx a = coeff * i_power(std::popcount(x & z));
  if (std::popcount(z & b) & 1) a = -a;
  return a;
}

}  // namespace

Eigen::MatrixXcd to_dense_matrix(const PauliSum& s) {
  if (s.n_sites() > kDenseSiteCap) {
    throw std::length_error("to_dense_matrix: n_sites above dense cap");
  }
  const std::uint64_t dim = std::uint64_t{1} << s.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, c] : s.terms()) {
    const auto [x, z] = key;
    for (std::uint64_t b = 0; b < dim; ++b) {
      m(b ^ x, b) += term_amplitude(z, x, b, c);
    }
  }
  return m;
}

Eigen::VectorXcd apply(const PauliSum& s, const Eigen::VectorXcd& v) {
  const std::uint64_t dim = std::uint64_t{1} << s.n_sites();
  if (static_cast<std::uint64_t>(v.size()) != dim) {
    throw std::invalid_argument("apply: vector length != 2^n_sites");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& [key, c] : s.terms()) {
    const auto [x, z] = key;
    for (std::uint64_t b = 0; b < dim; ++b) {
      out(b ^ x) += term_amplitude(z, x, b, c) * v(b);
    }
  }
  return out;
}

cplx expectation_value(const PauliSum& s, const Eigen::VectorXcd& v) {
  return v.dot(apply(s, v));  // Eigen's dot conjugates the left argument
}

std::vector<std::uint64_t> number_sector_basis(int n_sites, int n_particles) {
  std::vector<std::uint64_t> basis;
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (std::popcount(b) == n_particles) basis.push_back(b);
  }
  return basis;
}

Eigen::MatrixXcd sector_matrix(const PauliSum& s,
                               const std::vector<std::uint64_t>& basis) {
  const std::size_t dim = basis.size();
  const std::uint64_t full_dim = std::uint64_t{1} << s.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // individual Pauli terms may scatter outside the sector; only their sum
  // has to come back, so accumulate each column in full space first
  Eigen::VectorXcd column = Eigen::VectorXcd::Zero(full_dim);
  std::vector<std::uint64_t> touched;
  for (std::size_t col = 0; col < dim; ++col) {
    const std::uint64_t b = basis[col];
    touched.clear();
    for (const auto& [key, c] : s.terms()) {
      const auto [x, z] = key;
      const std::uint64_t b2 = b ^ x;
      if (column(b2) == cplx{0.0, 0.0}) touched.push_back(b2);
      column(b2) += term_amplitude(z, x, b, c);
    }
    for (std::uint64_t b2 : touched) {
      if (std::abs(column(b2)) < 1e-9) {
        column(b2) = 0.0;
        continue;
      }
      auto it = std::lower_bound(basis.begin(), basis.end(), b2);
      if (it == basis.end() || *it != b2) {
        throw std::invalid_argument(
            "sector_matrix: operator leaves the sector basis");
      }
      m(it - basis.begin(), col) = column(b2);
      column(b2) = 0.0;
    }
  }
  return m;
}

}  // namespace nuq
