#include "nuq/fermion.hpp"

#include <algorithm>
#include <stdexcept>

namespace nuq {

FermionTerm fermion_dagger(int mode) { return {{1.0, 0.0}, {{mode, true}}}; }

FermionTerm fermion_annihilate(int mode) {
  return {{1.0, 0.0}, {{mode, false}}};
}

FermionTerm fermion_product(const FermionTerm& a, const FermionTerm& b) {
  FermionTerm out;
  out.coefficient = a.coefficient * b.coefficient;
  out.factors = a.factors;
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  return out;
}

FermionTerm fermion_adjoint(const FermionTerm& t) {
  FermionTerm out;
  out.coefficient = std::conj(t.coefficient);
  out.factors.assign(t.factors.rbegin(), t.factors.rend());
  for (auto& f : out.factors) f.dagger = !f.dagger;
  return out;
}

namespace {

// Ladder operator for one mode: Z tail on q < p, then (X_p -/+ iY_p)/2.
PauliSum jw_ladder(int mode, bool dagger, int n_modes) {
  const std::uint64_t tail = (std::uint64_t{1} << mode) - 1;
  const std::uint64_t bit = std::uint64_t{1} << mode;
  PauliSum out(n_modes);
  out.add({bit, tail}, cplx{0.5, 0.0});                        // Ztail X_p / 2
  out.add({bit, tail | bit}, cplx{0.0, dagger ? -0.5 : 0.5});  // -/+ i Ztail Y_p / 2
  return out;
}

}  // namespace

PauliSum jordan_wigner(const FermionTerm& term, int n_modes) {
  for (const auto& f : term.factors) {
    if (f.mode < 0 || f.mode >= n_modes) {
      throw std::out_of_range("jordan_wigner: mode index out of range");
    }
  }
  PauliSum out(n_modes);
  out.add({0, 0}, cplx{1.0, 0.0});  // identity
  for (const auto& f : term.factors) {
    out = multiply(out, jw_ladder(f.mode, f.dagger, n_modes));
  }
  PauliSum scaled(n_modes);
  scaled.add(out, term.coefficient);
  return scaled;
}

PauliSum jordan_wigner(const FermionOperator& op, int n_modes) {
  PauliSum out(n_modes);
  for (const auto& term : op) out.add(jordan_wigner(term, n_modes));
  return out;
}

}  // namespace nuq
