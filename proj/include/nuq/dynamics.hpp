#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nuq/pauli.hpp"

namespace nuq {

/// Normalized amplitude vector over the 2^n_sites computational basis.
struct StateVector {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;

  StateVector() = default;
  StateVector(int n, Eigen::VectorXcd amps);

  static StateVector basis_state(int n_sites, std::uint64_t index);

  double norm() const { return amplitudes.norm(); }
  void check_normalized(double tol = 1e-10) const;
};

/// Product probe state: sites 0..n/2-1 down (bit 0), sites n/2..n-1 up
/// (bit 1). For n = 8 this is |dddd uuuu>, basis index 0xF0.
StateVector probe_state(int n_sites);

/// exp(-iHt) via a one-time Hermitian eigendecomposition, reusable
/// across times.
class ExactPropagator {
 public:
  explicit ExactPropagator(const PauliSum& h);

  StateVector evolve(const StateVector& psi0, double t) const;
  /// States at several times as columns (one eigenbasis pass).
  Eigen::MatrixXcd evolve_batch(const StateVector& psi0,
                                const std::vector<double>& times) const;

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  static constexpr double kHermTol = 1e-10;

 private:
  int n_sites_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

StateVector evolve_exact(const PauliSum& h, const StateVector& psi0, double t);

/// Ordered grouping of a Hamiltonian for first-order Trotter splitting.
/// Construction checks that the groups sum exactly to h (canonical
/// PauliSum equality).
struct TrotterPlan {
  std::vector<PauliSum> groups;
  int n_steps = 1;
  double total_time = 0.0;

  static TrotterPlan create(const PauliSum& h, std::vector<PauliSum> groups,
                            int n_steps, double total_time);
};

/// Cached per-group exponential machinery: diagonal groups keep their
/// basis eigenphases, other groups a dense eigendecomposition on their
/// qubit support.
class TrotterStepper {
 public:
  TrotterStepper(const std::vector<PauliSum>& groups, int n_sites);

  /// One first-order step exp(-i G_k dt) applied in group order.
  void apply_step(Eigen::VectorXcd& psi, double dt) const;
  /// Advance every column by one step with its own step size.
  void apply_step_batch(Eigen::MatrixXcd& states,
                        const std::vector<double>& dts) const;

 private:
  struct Group {
    bool diagonal = false;
    Eigen::VectorXd diag_values;     // diagonal case: eigenphase per basis state
    std::vector<int> support;        // dense case: qubits acted on
    Eigen::VectorXd eigenvalues;     // dense case, on the support subspace
    Eigen::MatrixXcd eigenvectors;
    bool full_support = false;
  };

  void apply_group(const Group& g, Eigen::VectorXcd& psi, double dt) const;

  int n_sites_;
  std::vector<Group> groups_;
};

StateVector evolve_trotter(const TrotterPlan& plan, const StateVector& psi0);

/// Connected correlation <Z_i Z_j> - <Z_i><Z_j> with sigma_z |0> = +|0>.
double correlation_cz(const StateVector& psi, int site_i, int site_j);

struct CorrelationSeries {
  std::pair<int, int> pair{0, 1};
  std::vector<double> times;
  std::vector<double> values;
};

struct EvolutionMode {
  enum Kind { kExact, kTrotter } kind = kExact;
  int n_trotter = 6;

  static EvolutionMode exact() { return {kExact, 0}; }
  static EvolutionMode trotter(int n) { return {kTrotter, n}; }
  /// "exact" or "trotter:N"
  static EvolutionMode parse(const std::string& text);
  std::string to_string() const;
};

/// Uniform grid of n_samples points from 0 to t_max inclusive.
std::vector<double> make_time_grid(int n_samples, double t_max);

inline constexpr int kDefaultSeriesSamples = 64;
inline constexpr double kDefaultSeriesHorizon = 10.0;

/// C_z(pair) sampled over the grid. Exact mode reuses one
/// eigendecomposition; Trotter mode needs the plan groups.
CorrelationSeries correlation_series(
    const PauliSum& h, const StateVector& psi0, std::pair<int, int> pair,
    const std::vector<double>& times, const EvolutionMode& mode,
    const std::vector<PauliSum>* trotter_groups = nullptr);

}  // namespace nuq
