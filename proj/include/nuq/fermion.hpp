#pragma once

#include <vector>

#include "nuq/pauli.hpp"

namespace nuq {

/// One creation (dagger) or annihilation factor acting on a fermionic mode.
struct FermionFactor {
  int mode = 0;
  bool dagger = false;
};

/// coefficient * f_1 f_2 ... f_k in written order (f_k acts first on a ket).
/// No implicit normal ordering.
struct FermionTerm {
  cplx coefficient{1.0, 0.0};
  std::vector<FermionFactor> factors;
};

using FermionOperator = std::vector<FermionTerm>;

FermionTerm fermion_dagger(int mode);
FermionTerm fermion_annihilate(int mode);
FermionTerm fermion_product(const FermionTerm& a, const FermionTerm& b);
FermionTerm fermion_adjoint(const FermionTerm& t);

/// Jordan-Wigner map onto n_modes qubits with |1> at site p meaning mode p
/// occupied and site 0 as the least significant bit:
///   c^dag_p -> (prod_{q<p} Z_q)(X_p - iY_p)/2
///   c_p     -> (prod_{q<p} Z_q)(X_p + iY_p)/2
PauliSum jordan_wigner(const FermionTerm& term, int n_modes);
PauliSum jordan_wigner(const FermionOperator& op, int n_modes);

}  // namespace nuq
