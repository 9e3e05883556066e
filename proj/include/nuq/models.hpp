#pragma once

#include <array>
#include <string>
#include <vector>

#include "nuq/dense.hpp"
#include "nuq/fermion.hpp"
#include "nuq/pauli.hpp"

namespace nuq {

/// Control parameters of the extended Agassi Hamiltonian in rescaled form.
/// The bare couplings follow V = eps*chi/(2j-1), g = eps*sigma/(2j-1),
/// h = eps*lambda/(2j-1); each level holds 2j sites (m = -j..-1, 1..j).
struct AgassiParams {
  double epsilon = 1.0;
  double chi = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
  int j = 2;

  double coupling_v() const { return epsilon * chi / (2 * j - 1); }
  double coupling_g() const { return epsilon * sigma / (2 * j - 1); }
  double coupling_h() const { return epsilon * lambda / (2 * j - 1); }
  int n_modes() const { return 4 * j; }

  void validate() const;
};

/// Collective operators of the model, Jordan-Wigner mapped. Lower level
/// (xi=-1) occupies qubits 0..2j-1, upper level qubits 2j..4j-1, with m
/// ascending inside each level. Adjoints give J^-, A_1, A_-1, A_0.
struct CollectiveOps {
  PauliSum j_plus;
  PauliSum j_zero;
  PauliSum a1_dag;
  PauliSum am1_dag;
  PauliSum a0_dag;
};

CollectiveOps build_collective_ops(int j);

/// The five physical term groups of the Hamiltonian, in the fixed order
/// eps*J0 | V | g (same-level) | g (cross-level) | h. Their ordered sum is
/// the full Hamiltonian; the same groups feed the Trotter split.
std::array<PauliSum, 5> agassi_hamiltonian_groups(const AgassiParams& p);

PauliSum build_agassi(const AgassiParams& p);

/// ANNNI chain with periodic wrap: sum_i (X_i X_{i+1} - kappa X_i X_{i+2}
/// + h Z_i), indices mod n_sites.
struct AnnniParams {
  int n_sites = 4;
  double kappa = 0.0;
  double h_field = 0.0;

  void validate() const;
};

PauliSum build_annni(const AnnniParams& p);

enum class PhaseLabel { kSymmetric = 0, kHF = 1, kBCS = 2, kCombinedHFBCS = 3 };

const char* phase_name(PhaseLabel label);
PhaseLabel phase_from_name(const std::string& name);

/// Ground-state order parameters:
///   deformation   <(J+)^2 + (J-)^2>
///   pairing_like  <sum_{xi,xi'} Adag_xi A_xi'>   (driven by g)
///   pairing_cross <Adag_0 A_0>                   (driven by h)
struct OrderParams {
  double deformation = 0.0;
  double pairing_like = 0.0;
  double pairing_cross = 0.0;
};

/// Calibrated thresholds for the three order parameters.
struct PhaseCuts {
  double deformation = 0.0;
  double pairing_like = 0.0;
  double pairing_cross = 0.0;
};

struct GroundInfo {
  double energy = 0.0;
  OrderParams order;
  int degeneracy = 1;  // states within the 1e-10 ground window, averaged
};

/// Exact-diagonalization backend for one shell size. The Hamiltonian
/// conserves particle number, so everything runs blockwise over the
/// number sectors; coupling matrices are cached across parameter points.
class AgassiEngine {
 public:
  explicit AgassiEngine(int j, double epsilon = 1.0);

  int j() const { return j_; }
  double epsilon() const { return epsilon_; }

  GroundInfo ground_info(double chi, double sigma, double lambda) const;
  /// Full-space ground energy (all number sectors).
  double ground_energy(double chi, double sigma, double lambda) const;

  static constexpr double kDegeneracyTol = 1e-10;

 private:
  struct Sector {
    std::vector<std::uint64_t> basis;
    Eigen::MatrixXcd j0, kv, kg, kh;     // Hamiltonian pieces (unit coupling)
    Eigen::MatrixXcd d_op, pg_op, ph_op; // order-parameter observables
  };

  int j_;
  double epsilon_;
  std::vector<Sector> sectors_;
};

/// Scan line through (chi, sigma, lambda) space: one axis varies over
/// [0, 2], the other two stay fixed.
struct ScanLine {
  int axis = 0;  // 0 = chi, 1 = sigma, 2 = lambda
  double fixed_a = 0.5;
  double fixed_b = 0.5;

  std::array<double, 3> point(double s) const;
};

/// The six reference scan lines used for calibration, paired with the
/// order parameter whose transition defines the line (0 = deformation,
/// 1 = pairing_like, 2 = pairing_cross).
const std::vector<std::pair<ScanLine, int>>& calibration_lines();

/// Scan each reference line, locate the steepest-gradient point of the
/// line's order parameter, and take the curve value centered across that
/// point (stable for both smooth crossovers and level-crossing jumps).
/// Cuts are the per-parameter averages over their lines.
PhaseCuts calibrate_phase_cuts(const AgassiEngine& engine,
                               int points_per_line = 101);

PhaseLabel classify(const OrderParams& order, const PhaseCuts& cuts);
PhaseLabel label_phase(const AgassiEngine& engine, const AgassiParams& p,
                       const PhaseCuts& cuts);

}  // namespace nuq
