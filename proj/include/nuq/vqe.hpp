#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nuq/dynamics.hpp"
#include "nuq/pauli.hpp"

namespace nuq {

/// Paper-style LMG trial state on 4 sites:
///   cos^2(t)|dddd> + sin^2(t)|uuuu> - sin(2t)/sqrt(12) * (six 2-up states)
StateVector lmg_ansatz(double theta);

/// LMG Hamiltonian in the one-particle-per-column form on n_particles
/// qubits (|0> = lower level): eps*J0 - V/2 [(J+)^2 + (J-)^2] with
/// J+ = sum_k |1><0|_k, J0 = -1/2 sum_k Z_k and V = eps*chi/(n-1).
/// This is the restriction of the monopole-only (g = h = 0) Agassi model
/// to the sector with one fermion in every m column.
PauliSum lmg_hamiltonian(double epsilon, double chi, int n_particles = 4);

/// <psi|H|psi>; rejects a Hermitian-violating residue above 1e-10.
double expectation(const PauliSum& h, const StateVector& psi);

/// Ordered product of generator exponentials applied to a reference:
/// psi = exp(-i theta_n tau_n) ... exp(-i theta_1 tau_1) |ref>.
struct AnsatzStep {
  PauliSum generator;
  double theta = 0.0;
  std::string label;
};

struct AnsatzProgram {
  StateVector reference;
  std::vector<AnsatzStep> steps;

  StateVector apply() const;
};

struct VqeOptions {
  double energy_tol = 1e-10;
  double param_tol = 1e-8;
  int max_iters = 500;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> thetas;
  int iterations = 0;
  std::vector<double> gradient_history;
  bool converged = false;
};

using StateFamily =
    std::function<StateVector(const std::vector<double>&)>;

/// Derivative-free minimization of <psi(theta)|H|psi(theta)>: a coarse
/// scan plus golden-section refinement per coordinate, with a final
/// Nelder-Mead polish for multi-parameter programs.
VqeResult vqe_minimize(const PauliSum& h, const StateFamily& family,
                       std::vector<double> theta0,
                       const VqeOptions& options = {});

/// Golden-section search on [lo, hi]; f must be unimodal there.
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double param_tol, double* fmin = nullptr);

struct PoolOperator {
  PauliSum generator;  // Hermitian: i * (excitation - h.c.), JW-mapped
  std::string label;
};
using OperatorPool = std::vector<PoolOperator>;

enum class PoolSymmetry {
  kNumberConserving,  // all one- and two-body excitations (they conserve N)
  kAgassiPairs,       // additionally restricted to time-reversal pair moves
};

OperatorPool build_pool(int n_modes, PoolSymmetry filter);

/// |<psi|[H, tau_i]|psi>| per pool element.
std::vector<double> adapt_gradient(const PauliSum& h, const OperatorPool& pool,
                                   const StateVector& psi);

struct AdaptOptions {
  int max_iters = 30;
  double grad_tol = 1e-6;
  VqeOptions vqe;
};

struct AdaptIteration {
  int picked = -1;
  std::string label;
  double grad_max = 0.0;
  double energy = 0.0;
};

struct AdaptResult {
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<AdaptIteration> trace;
  AnsatzProgram program;
};

AdaptResult adapt_vqe(const PauliSum& h, const OperatorPool& pool,
                      const StateVector& reference,
                      const AdaptOptions& options = {});

}  // namespace nuq
